#pragma once

#include <optional>
#include <vector>

#include "dgflow/diagram.hpp"
#include "dgflow/types.hpp"

namespace dgflow {

/// Boundary traces at one junction: densities of the incoming roads at their
/// downstream ends and of the outgoing roads at their upstream ends, plus the
/// diagram active in each adjacent element.
struct JunctionState {
  Vector incoming;  // n traces
  Vector outgoing;  // m traces
  std::vector<FundamentalDiagram> incoming_diagrams;
  std::vector<FundamentalDiagram> outgoing_diagrams;
};

/// Fluxes assigned to the road ends meeting at a junction: `incoming[i]` is
/// what road i discharges into the junction, `outgoing[j]` what road j
/// receives from it.
struct JunctionFluxes {
  Vector incoming;
  Vector outgoing;
};

/// Pairwise Lax-Friedrichs fluxes h(j,i) between incoming road i and
/// outgoing road j, as an m x n matrix.
Matrix pairwise_fluxes(const JunctionState& state);

/// Distribution-weighted junction fluxes: with W = alpha (Hadamard) h, the
/// outgoing flux j is the j-th row sum and the incoming flux i the i-th
/// column sum.  Column sums of alpha equal to one make the two totals match.
JunctionFluxes weighted_fluxes(const JunctionState& state, const Matrix& alpha);
JunctionFluxes weighted_fluxes(const JunctionState& state, const Matrix& alpha,
                               const Matrix& pairwise);

/// Mismatch between what outgoing road j receives and the alpha-weighted mix
/// of the incoming fluxes, one value per outgoing road.
Vector distribution_error(const JunctionState& state, const Matrix& alpha);
Vector distribution_error(const JunctionFluxes& fluxes, const Matrix& alpha);

/// Godunov demand (max flow the upstream state can send) and supply (max
/// flow the downstream state can absorb).
double demand(const FundamentalDiagram& d, double rho);
double supply(const FundamentalDiagram& d, double rho);

struct DemandSupply {
  Vector demands;   // per incoming road
  Vector supplies;  // per outgoing road
};
DemandSupply demand_supply(const JunctionState& state);

/// Flux-maximizing junction coupling for networks of 1x1, 1x2, 2x1 and 2x2
/// junctions with strictly positive distribution matrices.  Two competing
/// incoming roads additionally need a right-of-way ratio q in (0,1): when the
/// joint demand cannot be served, the admitted flux is pushed as far as
/// possible along the direction (q, 1-q).  Outgoing fluxes are alpha times
/// the incoming ones.
JunctionFluxes max_flux_fluxes(const JunctionState& state, const Matrix& alpha,
                               std::optional<double> right_of_way);

}  // namespace dgflow
