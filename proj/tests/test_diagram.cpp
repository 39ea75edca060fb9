#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "dgflow/diagram.hpp"

using namespace dgflow;

namespace {

// Central difference of the flow, for checking the analytic derivative.
double fd_flow_derivative(const FundamentalDiagram& d, double rho, double eps = 1e-6) {
  return (equilibrium_flow(d, rho + eps) - equilibrium_flow(d, rho - eps)) / (2.0 * eps);
}

// Argmax of the flow over a dense density grid.
double scan_critical(const FundamentalDiagram& d, int samples = 200000) {
  double best_rho = 0.0, best_q = -1.0;
  for (int i = 1; i < samples; ++i) {
    const double rho = d.params.rho_max * static_cast<double>(i) / samples;
    const double q = equilibrium_flow(d, rho);
    if (q > best_q) {
      best_q = q;
      best_rho = rho;
    }
  }
  return best_rho;
}

}  // namespace

TEST_CASE("greenshields flow and velocity values") {
  const auto d = greenshields(1.0, 1.0);
  CHECK(equilibrium_velocity(d, 0.0) == 1.0);
  CHECK(equilibrium_velocity(d, 1.0) == 0.0);
  CHECK(equilibrium_flow(d, 0.0) == 0.0);
  CHECK(equilibrium_flow(d, 1.0) == 0.0);
  CHECK(equilibrium_flow(d, 0.5) == 0.25);
  CHECK(equilibrium_flow(d, 0.2) == doctest::Approx(0.16).epsilon(1e-15));
  // symmetric around the critical density
  CHECK(equilibrium_flow(d, 0.3) == doctest::Approx(equilibrium_flow(d, 0.7)));

  const auto scaled = greenshields(1.3, 2.0);
  CHECK(equilibrium_flow(scaled, 1.0) == doctest::Approx(1.3 * 1.0 * 0.5));
  CHECK(critical_density(scaled) == 1.0);
  CHECK(max_flow(scaled) == doctest::Approx(1.3 * 2.0 / 4.0));
}

TEST_CASE("greenberg flow values and vacuum handling") {
  const auto d = greenberg(1.0, 1.0);
  CHECK(equilibrium_velocity(d, 1.0) == 0.0);
  CHECK(equilibrium_flow(d, 1.0) == 0.0);
  CHECK(equilibrium_flow(d, 0.0) == 0.0);  // continuous extension
  CHECK(equilibrium_flow(d, 0.5) == doctest::Approx(0.5 * std::log(2.0)));
  CHECK_THROWS_AS(equilibrium_velocity(d, 0.0), std::domain_error);
  CHECK_THROWS_AS(flow_derivative(d, 0.0), std::domain_error);
}

TEST_CASE("densities outside the admissible range are rejected") {
  const auto d = greenshields(1.0, 1.0);
  CHECK_THROWS_AS(equilibrium_flow(d, -0.1), std::domain_error);
  CHECK_THROWS_AS(equilibrium_flow(d, 1.1), std::domain_error);
  CHECK_THROWS_AS(equilibrium_velocity(d, 2.0), std::domain_error);
  const auto g = greenberg(0.8, 1.5);
  CHECK_THROWS_AS(flow_derivative(g, 1.6), std::domain_error);
  CHECK_THROWS_AS(equilibrium_flow(g, std::nan("")), std::domain_error);
}

TEST_CASE("flow derivative matches a central difference") {
  for (const auto& d : {greenshields(1.0, 1.0), greenshields(1.3, 2.0),
                        greenberg(1.0, 1.0), greenberg(0.8, 2.0)}) {
    for (double frac : {0.1, 0.25, 0.5, 0.7, 0.9}) {
      const double rho = frac * d.params.rho_max;
      CHECK(flow_derivative(d, rho) ==
            doctest::Approx(fd_flow_derivative(d, rho)).epsilon(1e-7));
    }
  }
}

TEST_CASE("critical density maximizes the flow") {
  for (const auto& d : {greenshields(1.0, 1.0), greenshields(1.3, 2.0),
                        greenberg(1.0, 1.0), greenberg(0.5, 1.5)}) {
    const double crit = scan_critical(d);
    CHECK(critical_density(d) == doctest::Approx(crit).epsilon(1e-4));
    CHECK(max_flow(d) == doctest::Approx(equilibrium_flow(d, critical_density(d))));
    // the derivative vanishes there
    CHECK(std::abs(flow_derivative(d, critical_density(d))) < 1e-12);
  }
  CHECK(critical_density(greenshields(1.0, 1.0)) == 0.5);
  CHECK(critical_density(greenberg(1.0, 1.0)) == doctest::Approx(std::exp(-1.0)));
  CHECK(max_flow(greenberg(2.0, 1.0)) == doctest::Approx(2.0 * std::exp(-1.0)));
}

TEST_CASE("max wave speed bounds the derivative away from the vacuum floor") {
  const auto gs = greenshields(1.3, 2.0);
  CHECK(max_wave_speed(gs) == doctest::Approx(1.3));
  for (double rho : {0.0, 0.5, 1.0, 2.0})
    CHECK(std::abs(flow_derivative(gs, rho)) <= max_wave_speed(gs) + 1e-15);

  const auto gb = greenberg(1.0, 1.0);
  // sampled at the floor density 1e-3 * rho_max
  CHECK(max_wave_speed(gb) == doctest::Approx(std::log(1e3) - 1.0));
  for (double rho : {1e-3, 0.01, 0.5, 1.0})
    CHECK(std::abs(flow_derivative(gb, rho)) <= max_wave_speed(gb) + 1e-15);
}
