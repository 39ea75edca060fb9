#pragma once

namespace dgflow {

enum class DiagramKind { Greenshields, Greenberg };

struct DiagramParams {
  double v_max = 1.0;
  double rho_max = 1.0;
  bool valid() const { return v_max > 0.0 && rho_max > 0.0; }
  friend bool operator==(const DiagramParams&, const DiagramParams&) = default;
};

/// Equilibrium speed-density law of a road segment.
struct FundamentalDiagram {
  DiagramKind kind = DiagramKind::Greenshields;
  DiagramParams params;
  friend bool operator==(const FundamentalDiagram&, const FundamentalDiagram&) = default;
};

FundamentalDiagram greenshields(double v_max, double rho_max);
FundamentalDiagram greenberg(double v_max, double rho_max);

// All densities must lie in [0, rho_max]; violations throw std::domain_error.
// Greenberg has no finite speed at rho = 0, so equilibrium_velocity and
// flow_derivative reject rho = 0 there, while equilibrium_flow is extended
// continuously by flow(0) = 0.
double equilibrium_velocity(const FundamentalDiagram& d, double rho);
double equilibrium_flow(const FundamentalDiagram& d, double rho);
double flow_derivative(const FundamentalDiagram& d, double rho);

/// Density at which the flow is maximal.
double critical_density(const FundamentalDiagram& d);
/// Flow at the critical density (road capacity).
double max_flow(const FundamentalDiagram& d);

/// Bound for |flow_derivative| used by time-step estimates.  The Greenberg
/// derivative is unbounded toward vacuum, so it is sampled at a small density
/// floor instead of the true (infinite) supremum.
double max_wave_speed(const FundamentalDiagram& d);

}  // namespace dgflow
