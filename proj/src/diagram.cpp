#include "dgflow/diagram.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dgflow {

namespace {

[[noreturn]] void domain_fail(const char* where, double rho) {
  throw std::domain_error(std::string(where) + ": density " + std::to_string(rho) +
                          " outside the admissible interval");
}

void check_density(const DiagramParams& p, double rho, const char* where) {
  if (!(rho >= 0.0 && rho <= p.rho_max)) domain_fail(where, rho);
}

// Greenberg's log law blows up toward vacuum; CFL estimates sample the wave
// speed at this fraction of rho_max instead.
constexpr double kGreenbergCflFloor = 1e-3;

}  // namespace

FundamentalDiagram greenshields(double v_max, double rho_max) {
  return {DiagramKind::Greenshields, {v_max, rho_max}};
}

FundamentalDiagram greenberg(double v_max, double rho_max) {
  return {DiagramKind::Greenberg, {v_max, rho_max}};
}

double equilibrium_velocity(const FundamentalDiagram& d, double rho) {
  check_density(d.params, rho, "equilibrium_velocity");
  switch (d.kind) {
    case DiagramKind::Greenshields:
      return d.params.v_max * (1.0 - rho / d.params.rho_max);
    case DiagramKind::Greenberg:
      if (rho == 0.0) domain_fail("equilibrium_velocity", rho);
      return d.params.v_max * std::log(d.params.rho_max / rho);
  }
  domain_fail("equilibrium_velocity", rho);
}

double equilibrium_flow(const FundamentalDiagram& d, double rho) {
  check_density(d.params, rho, "equilibrium_flow");
  switch (d.kind) {
    case DiagramKind::Greenshields:
      return d.params.v_max * rho * (1.0 - rho / d.params.rho_max);
    case DiagramKind::Greenberg:
      if (rho == 0.0) return 0.0;  // continuous extension of rho*log(rho_max/rho)
      return d.params.v_max * rho * std::log(d.params.rho_max / rho);
  }
  domain_fail("equilibrium_flow", rho);
}

double flow_derivative(const FundamentalDiagram& d, double rho) {
  check_density(d.params, rho, "flow_derivative");
  switch (d.kind) {
    case DiagramKind::Greenshields:
      return d.params.v_max * (1.0 - 2.0 * rho / d.params.rho_max);
    case DiagramKind::Greenberg:
      if (rho == 0.0) domain_fail("flow_derivative", rho);
      return d.params.v_max * (std::log(d.params.rho_max / rho) - 1.0);
  }
  domain_fail("flow_derivative", rho);
}

double critical_density(const FundamentalDiagram& d) {
  switch (d.kind) {
    case DiagramKind::Greenshields:
      return 0.5 * d.params.rho_max;
    case DiagramKind::Greenberg:
      return d.params.rho_max * std::exp(-1.0);
  }
  return 0.0;
}

double max_flow(const FundamentalDiagram& d) {
  return equilibrium_flow(d, critical_density(d));
}

double max_wave_speed(const FundamentalDiagram& d) {
  switch (d.kind) {
    case DiagramKind::Greenshields:
      return d.params.v_max;  // |v_max (1 - 2 rho/rho_max)| peaks at the ends
    case DiagramKind::Greenberg: {
      const double floor = kGreenbergCflFloor * d.params.rho_max;
      return std::max(std::abs(flow_derivative(d, floor)),
                      std::abs(flow_derivative(d, d.params.rho_max)));
    }
  }
  return 0.0;
}

}  // namespace dgflow
