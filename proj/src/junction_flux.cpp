#include "dgflow/junction_flux.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dgflow/dg.hpp"

namespace dgflow {

Matrix pairwise_fluxes(const JunctionState& state) {
  const Index n = state.incoming.size();
  const Index m = state.outgoing.size();
  Matrix h(m, n);
  for (Index j = 0; j < m; ++j)
    for (Index i = 0; i < n; ++i)
      h(j, i) = lax_friedrichs_flux(state.incoming_diagrams[static_cast<size_t>(i)],
                                    state.outgoing_diagrams[static_cast<size_t>(j)],
                                    state.incoming[i], state.outgoing[j]);
  return h;
}

JunctionFluxes weighted_fluxes(const JunctionState&, const Matrix& alpha,
                               const Matrix& pairwise) {
  const Matrix w = alpha.cwiseProduct(pairwise);
  return {w.colwise().sum().transpose(), w.rowwise().sum()};
}

JunctionFluxes weighted_fluxes(const JunctionState& state, const Matrix& alpha) {
  return weighted_fluxes(state, alpha, pairwise_fluxes(state));
}

Vector distribution_error(const JunctionFluxes& fluxes, const Matrix& alpha) {
  return fluxes.outgoing - alpha * fluxes.incoming;
}

Vector distribution_error(const JunctionState& state, const Matrix& alpha) {
  return distribution_error(weighted_fluxes(state, alpha), alpha);
}

double demand(const FundamentalDiagram& d, double rho) {
  return rho <= critical_density(d) ? equilibrium_flow(d, rho) : max_flow(d);
}

double supply(const FundamentalDiagram& d, double rho) {
  return rho <= critical_density(d) ? max_flow(d) : equilibrium_flow(d, rho);
}

DemandSupply demand_supply(const JunctionState& state) {
  const Index n = state.incoming.size();
  const Index m = state.outgoing.size();
  DemandSupply ds{Vector(n), Vector(m)};
  for (Index i = 0; i < n; ++i)
    ds.demands[i] = demand(state.incoming_diagrams[static_cast<size_t>(i)], state.incoming[i]);
  for (Index j = 0; j < m; ++j)
    ds.supplies[j] = supply(state.outgoing_diagrams[static_cast<size_t>(j)], state.outgoing[j]);
  return ds;
}

JunctionFluxes max_flux_fluxes(const JunctionState& state, const Matrix& alpha,
                               std::optional<double> right_of_way) {
  const Index n = state.incoming.size();
  const Index m = state.outgoing.size();
  if (n < 1 || n > 2 || m < 1 || m > 2)
    throw std::invalid_argument("max_flux_fluxes: only junctions with at most "
                                "two incoming and two outgoing roads are supported");
  if ((alpha.array() <= 0.0).any())
    throw std::invalid_argument(
        "max_flux_fluxes: distribution matrix must be strictly positive");

  const DemandSupply ds = demand_supply(state);
  Vector in(n);

  if (n == 1) {
    double gamma = ds.demands[0];
    for (Index j = 0; j < m; ++j) gamma = std::min(gamma, ds.supplies[j] / alpha(j, 0));
    in[0] = gamma;
  } else {
    if (!right_of_way || !(*right_of_way > 0.0 && *right_of_way < 1.0))
      throw std::invalid_argument(
          "max_flux_fluxes: two incoming roads require a right-of-way ratio in (0,1)");

    if (((alpha * ds.demands).array() <= ds.supplies.array()).all()) {
      in = ds.demands;
    } else {
      // Push the admitted flux as far as possible along the right-of-way ray
      // d = (q, 1-q) inside the demand box and below every supply plane.
      const double q = *right_of_way;
      Vector dir(2);
      dir << q, 1.0 - q;
      const double s_box = std::min(ds.demands[0] / dir[0], ds.demands[1] / dir[1]);
      double s_sup = std::numeric_limits<double>::infinity();
      for (Index j = 0; j < m; ++j) {
        const double denom = alpha.row(j).dot(dir);
        if (denom > 0.0) s_sup = std::min(s_sup, ds.supplies[j] / denom);
      }
      if (s_sup <= s_box) {
        in = dir * s_sup;
      } else {
        // The ray leaves through a demand face: the binding road takes its
        // full demand, the other takes what the supplies still allow.
        const Index b = (ds.demands[0] / dir[0] <= ds.demands[1] / dir[1]) ? 0 : 1;
        const Index o = 1 - b;
        in[b] = ds.demands[b];
        double rest = ds.demands[o];
        for (Index j = 0; j < m; ++j)
          rest = std::min(rest, (ds.supplies[j] - alpha(j, b) * in[b]) / alpha(j, o));
        in[o] = std::max(rest, 0.0);
      }
    }
  }
  return {in, alpha * in};
}

}  // namespace dgflow
