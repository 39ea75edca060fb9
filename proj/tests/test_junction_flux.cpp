#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "dgflow/dg.hpp"
#include "dgflow/junction_flux.hpp"

using namespace dgflow;

namespace {

JunctionState uniform_state(Vector in, Vector out, FundamentalDiagram d) {
  JunctionState s;
  s.incoming = std::move(in);
  s.outgoing = std::move(out);
  s.incoming_diagrams.assign(s.incoming.size(), d);
  s.outgoing_diagrams.assign(s.outgoing.size(), d);
  return s;
}

// Densest flow reachable from the interval the demand/supply split scans.
double scan_max_flow(const FundamentalDiagram& d, double lo, double hi) {
  double best = 0.0;
  const int n = 20000;
  for (int i = 0; i <= n; ++i) {
    const double rho = lo + (hi - lo) * i / n;
    best = std::max(best, equilibrium_flow(d, rho));
  }
  return best;
}

}  // namespace

TEST_CASE("one-to-two weighted fluxes, worked example") {
  const auto d = greenshields(1.0, 1.0);
  Vector in(1), out(2);
  in << 0.5;
  out << 0.2, 0.0;
  const JunctionState state = uniform_state(in, out, d);
  Matrix alpha(2, 1);
  alpha << 0.75, 0.25;

  const Matrix h = pairwise_fluxes(state);
  CHECK(h(0, 0) == doctest::Approx(0.295).epsilon(1e-14));
  CHECK(h(1, 0) == doctest::Approx(0.375).epsilon(1e-14));

  const JunctionFluxes fl = weighted_fluxes(state, alpha);
  CHECK(fl.outgoing[0] == doctest::Approx(0.22125).epsilon(1e-13));
  CHECK(fl.outgoing[1] == doctest::Approx(0.09375).epsilon(1e-13));
  CHECK(fl.incoming[0] == doctest::Approx(0.315).epsilon(1e-13));

  const Vector err = distribution_error(state, alpha);
  CHECK(err[0] == doctest::Approx(-0.015).epsilon(1e-12));
  const double ratio = std::abs(err[0]) / fl.outgoing[0];
  CHECK(ratio > 0.06);
  CHECK(ratio < 0.07);

  // the precomputed-pairwise overload agrees
  const JunctionFluxes fl2 = weighted_fluxes(state, alpha, h);
  CHECK(fl2.incoming == fl.incoming);
  CHECK(fl2.outgoing == fl.outgoing);
}

TEST_CASE("weighted fluxes balance incoming and outgoing totals") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::uniform_int_distribution<int> shape(1, 4);
  for (int rep = 0; rep < 2000; ++rep) {
    const int n = shape(rng), m = shape(rng);
    JunctionState s;
    s.incoming.resize(n);
    s.outgoing.resize(m);
    for (int i = 0; i < n; ++i) {
      const double r = 0.5 + 1.5 * u01(rng);
      s.incoming_diagrams.push_back(greenshields(0.5 + u01(rng), r));
      s.incoming[i] = r * u01(rng);
    }
    for (int j = 0; j < m; ++j) {
      const double r = 0.5 + 1.5 * u01(rng);
      s.outgoing_diagrams.push_back(greenshields(0.5 + u01(rng), r));
      s.outgoing[j] = r * u01(rng);
    }
    Matrix alpha(m, n);
    for (int i = 0; i < n; ++i) {
      double col = 0.0;
      for (int j = 0; j < m; ++j) col += (alpha(j, i) = 0.05 + u01(rng));
      alpha.col(i) /= col;
    }
    const JunctionFluxes fl = weighted_fluxes(s, alpha);
    CHECK(std::abs(fl.incoming.sum() - fl.outgoing.sum()) <= 1e-13);
    // error identity: E = H_out - alpha * H_in
    const Vector err = distribution_error(fl, alpha);
    for (int j = 0; j < m; ++j) {
      double mix = 0.0;
      for (int i = 0; i < n; ++i) mix += alpha(j, i) * fl.incoming[i];
      CHECK(std::abs(err[j] - (fl.outgoing[j] - mix)) <= 1e-13);
    }
  }
}

TEST_CASE("demand and supply split the diagram at the critical density") {
  const auto d = greenshields(1.0, 1.0);
  CHECK(demand(d, 0.2) == doctest::Approx(0.16).epsilon(1e-15));
  CHECK(demand(d, 0.5) == 0.25);
  CHECK(demand(d, 0.8) == 0.25);  // congested branch saturates at capacity
  CHECK(demand(d, 1.0) == 0.25);
  CHECK(supply(d, 0.2) == 0.25);
  CHECK(supply(d, 0.8) == doctest::Approx(0.16).epsilon(1e-15));
  CHECK(supply(d, 1.0) == 0.0);  // a jammed road accepts nothing
}

TEST_CASE("demand and supply maximize the flow over the reachable branch") {
  for (const auto& d : {greenshields(1.0, 1.0), greenshields(1.3, 2.0),
                        greenberg(1.0, 1.0)}) {
    for (double frac : {0.05, 0.3, 0.5, 0.7, 0.95}) {
      const double rho = frac * d.params.rho_max;
      CHECK(demand(d, rho) ==
            doctest::Approx(scan_max_flow(d, 0.0, rho)).epsilon(1e-7));
      CHECK(supply(d, rho) ==
            doctest::Approx(scan_max_flow(d, rho, d.params.rho_max)).epsilon(1e-7));
    }
  }
}

TEST_CASE("maxflux single in single out takes min of demand and supply") {
  const auto d = greenshields(1.0, 1.0);
  Matrix alpha = Matrix::Ones(1, 1);
  auto fluxes = [&](double in, double out) {
    Vector i(1), o(1);
    i << in;
    o << out;
    return max_flux_fluxes(uniform_state(i, o, d), alpha, std::nullopt);
  };
  CHECK(fluxes(0.2, 0.1).incoming[0] == doctest::Approx(0.16));   // demand binds
  CHECK(fluxes(0.7, 0.8).incoming[0] == doctest::Approx(0.16));   // supply binds
  CHECK(fluxes(0.5, 0.5).incoming[0] == doctest::Approx(0.25));   // capacity
  CHECK(fluxes(0.3, 1.0).incoming[0] == 0.0);                     // jam blocks exactly
  CHECK(fluxes(1.0, 0.0).incoming[0] == doctest::Approx(0.25));   // queue discharges
}

TEST_CASE("maxflux one-to-two is throttled by the scarcest outgoing share") {
  const auto d = greenshields(1.0, 1.0);
  Matrix alpha(2, 1);
  alpha << 0.75, 0.25;
  Vector in(1), out(2);
  in << 0.5;          // demand 0.25
  out << 0.8, 0.4;    // supplies 0.16 and 0.25
  const JunctionFluxes fl = max_flux_fluxes(uniform_state(in, out, d), alpha, std::nullopt);
  // gamma = min(0.25, 0.16/0.75, 0.25/0.25)
  CHECK(fl.incoming[0] == doctest::Approx(0.16 / 0.75).epsilon(1e-14));
  CHECK(fl.outgoing[0] == doctest::Approx(0.16).epsilon(1e-14));
  CHECK(fl.outgoing[1] == doctest::Approx(0.25 * 0.16 / 0.75).epsilon(1e-14));
}

TEST_CASE("maxflux two-to-one splits scarce capacity along the right of way") {
  const auto d = greenshields(1.0, 1.0);
  Matrix alpha = Matrix::Ones(1, 2);
  Vector in(2), out(1);

  // both demands exceed the shared supply: split follows (q, 1-q)
  in << 0.25, 0.25;
  out << 0.25;
  JunctionFluxes fl = max_flux_fluxes(uniform_state(in, out, d), alpha, 0.5);
  CHECK(fl.incoming[0] == doctest::Approx(0.125).epsilon(1e-14));
  CHECK(fl.incoming[1] == doctest::Approx(0.125).epsilon(1e-14));

  fl = max_flux_fluxes(uniform_state(in, out, d), alpha, 0.75);
  CHECK(fl.incoming[0] == doctest::Approx(0.1875).epsilon(1e-14));
  CHECK(fl.incoming[1] == doctest::Approx(0.0625).epsilon(1e-14));

  // the ray leaves through a demand face: the binding road takes its demand,
  // the other gets the remaining capacity
  Vector in2(2);
  in2 << 0.0513167019494862, 0.5;  // demand ~0.0486, 0.25
  fl = max_flux_fluxes(uniform_state(in2, out, d), alpha, 0.9);
  const double d0 = equilibrium_flow(d, in2[0]);
  CHECK(fl.incoming[0] == doctest::Approx(d0).epsilon(1e-14));
  CHECK(fl.incoming[1] == doctest::Approx(0.25 - d0).epsilon(1e-13));
  CHECK(fl.incoming.sum() == doctest::Approx(0.25).epsilon(1e-14));

  // free-flowing case: everyone sends their full demand
  Vector in3(2), out3(1);
  in3 << 0.1, 0.1;
  out3 << 0.1;
  fl = max_flux_fluxes(uniform_state(in3, out3, d), alpha, 0.5);
  CHECK(fl.incoming[0] == doctest::Approx(0.09).epsilon(1e-14));
  CHECK(fl.incoming[1] == doctest::Approx(0.09).epsilon(1e-14));
}

TEST_CASE("maxflux outgoing fluxes are the distribution matrix times incoming") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const auto d = greenshields(1.0, 1.0);
  for (int rep = 0; rep < 500; ++rep) {
    const int n = 1 + rep % 2, m = 1 + (rep / 2) % 2;
    JunctionState s;
    s.incoming.resize(n);
    s.outgoing.resize(m);
    s.incoming_diagrams.assign(n, d);
    s.outgoing_diagrams.assign(m, d);
    for (int i = 0; i < n; ++i) s.incoming[i] = u01(rng);
    for (int j = 0; j < m; ++j) s.outgoing[j] = u01(rng);
    Matrix alpha(m, n);
    if (m == 1) {
      alpha.setOnes();
    } else {
      for (int i = 0; i < n; ++i) {
        const double a = 0.05 + 0.9 * u01(rng);
        alpha(0, i) = a;
        alpha(1, i) = 1.0 - a;
      }
    }
    const JunctionFluxes fl =
        max_flux_fluxes(s, alpha, n == 2 ? std::optional<double>(0.3) : std::nullopt);
    const Vector expected = alpha * fl.incoming;
    CHECK(fl.outgoing == expected);
    // feasibility: never more than demand or supply
    const DemandSupply ds = demand_supply(s);
    for (int i = 0; i < n; ++i) CHECK(fl.incoming[i] <= ds.demands[i] + 1e-12);
    for (int j = 0; j < m; ++j) CHECK(fl.outgoing[j] <= ds.supplies[j] + 1e-12);
    CHECK(fl.incoming.minCoeff() >= -1e-15);
  }
}

TEST_CASE("maxflux rejects unsupported or underdetermined configurations") {
  const auto d = greenshields(1.0, 1.0);
  Vector big = Vector::Constant(3, 0.3);
  Vector one = Vector::Constant(1, 0.3);
  CHECK_THROWS_AS(
      max_flux_fluxes(uniform_state(big, one, d), Matrix::Ones(1, 3), std::nullopt),
      std::invalid_argument);

  Vector two = Vector::Constant(2, 0.3);
  // two competing incoming roads need a right of way
  CHECK_THROWS_AS(max_flux_fluxes(uniform_state(two, one, d), Matrix::Ones(1, 2),
                                  std::nullopt),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      max_flux_fluxes(uniform_state(two, one, d), Matrix::Ones(1, 2), 1.0),
      std::invalid_argument);

  Matrix with_zero(2, 1);
  with_zero << 1.0, 0.0;
  CHECK_THROWS_AS(max_flux_fluxes(uniform_state(one, two, d), with_zero, std::nullopt),
                  std::invalid_argument);
}
