#include "dgflow/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace dgflow {

double InflowSignal::at(double t) const {
  if (kind == Kind::Constant) return value;
  return amplitude * std::sin(2.0 * std::numbers::pi * t / period + phase) + offset;
}

double cfl_advisory(const Network& net, Index degree) {
  double tau = std::numeric_limits<double>::infinity();
  const double factor = 2.0 * static_cast<double>(degree) + 1.0;
  for (const Road& road : net.roads) {
    const Mesh mesh{road.a, road.b, road.n_elements};
    for (Index k = 0; k < road.n_elements; ++k) {
      const double speed = max_wave_speed(element_diagram(road, k));
      if (speed > 0.0) tau = std::min(tau, mesh.h() / (factor * speed));
    }
  }
  return tau;
}

namespace {

constexpr double kStepRoundGuard = 1e-9;

long step_count(double t_end, double tau) {
  return std::max(0L, static_cast<long>(std::ceil(t_end / tau - kStepRoundGuard)));
}

long snapshot_index(double time, double tau, long n_steps) {
  const long idx = static_cast<long>(std::ceil(time / tau - kStepRoundGuard));
  return std::clamp(idx, 0L, n_steps);
}

class Simulator {
 public:
  Simulator(const SimulationSetup& setup, const RunOptions& options)
      : setup_(setup), net_(setup.network), opts_(options) {
    const Index degree = setup.numerics.degree;
    const Index n_roads = static_cast<Index>(net_.roads.size());

    std::unordered_map<int, Index> road_index;
    for (Index i = 0; i < n_roads; ++i) road_index[net_.roads[i].id] = i;

    for (Index i = 0; i < n_roads; ++i) {
      const Road& road = net_.roads[i];
      std::vector<FundamentalDiagram> diags;
      diags.reserve(static_cast<size_t>(road.n_elements));
      for (Index k = 0; k < road.n_elements; ++k) diags.push_back(element_diagram(road, k));
      discs_.push_back(
          make_discretization(Mesh{road.a, road.b, road.n_elements}, degree, std::move(diags)));
    }

    junctions_.resize(net_.junctions.size());
    for (size_t j = 0; j < net_.junctions.size(); ++j) {
      const Junction& junc = net_.junctions[j];
      JunctionContext& jc = junctions_[j];
      for (int id : junc.incoming) {
        const Index r = road_index.at(id);
        jc.in_roads.push_back(r);
        jc.state.incoming_diagrams.push_back(discs_[static_cast<size_t>(r)].diagrams.back());
      }
      for (int id : junc.outgoing) {
        const Index r = road_index.at(id);
        jc.out_roads.push_back(r);
        jc.state.outgoing_diagrams.push_back(discs_[static_cast<size_t>(r)].diagrams.front());
      }
      jc.state.incoming.resize(static_cast<Index>(jc.in_roads.size()));
      jc.state.outgoing.resize(static_cast<Index>(jc.out_roads.size()));
      if (opts_.trace_junction_id && *opts_.trace_junction_id == junc.id)
        trace_junction_ = static_cast<Index>(j);
    }

    left_source_.resize(static_cast<size_t>(n_roads));
    right_source_.resize(static_cast<size_t>(n_roads));
    std::unordered_map<int, Index> junction_index;
    for (size_t j = 0; j < net_.junctions.size(); ++j)
      junction_index[net_.junctions[j].id] = static_cast<Index>(j);
    for (Index i = 0; i < n_roads; ++i) {
      const Road& road = net_.roads[i];
      if (road.left.kind == RoadEnd::Kind::Junction) {
        const Index j = junction_index.at(road.left.ref);
        const auto& out = net_.junctions[static_cast<size_t>(j)].outgoing;
        const Index slot = static_cast<Index>(
            std::find(out.begin(), out.end(), road.id) - out.begin());
        left_source_[static_cast<size_t>(i)] = {road.left.kind, j, slot};
      } else {
        left_source_[static_cast<size_t>(i)] = {road.left.kind, -1, -1};
      }
      if (road.right.kind == RoadEnd::Kind::Junction) {
        const Index j = junction_index.at(road.right.ref);
        const auto& in = net_.junctions[static_cast<size_t>(j)].incoming;
        const Index slot =
            static_cast<Index>(std::find(in.begin(), in.end(), road.id) - in.begin());
        right_source_[static_cast<size_t>(i)] = {road.right.kind, j, slot};
      } else {
        right_source_[static_cast<size_t>(i)] = {road.right.kind, -1, -1};
      }
    }

    left_val_.resize(n_roads);
    right_val_.resize(n_roads);
    left_flux_.resize(n_roads);
    right_flux_.resize(n_roads);
    ghost_left_.resize(static_cast<size_t>(n_roads));
    rhs_.resize(static_cast<size_t>(n_roads));
    ws_.resize(static_cast<size_t>(n_roads));
  }

  RunResult run() {
    RunResult res;
    const double tau = setup_.numerics.tau;
    const long n_steps = step_count(setup_.numerics.t_end, tau);

    initialize(res);

    std::set<long> snap_idx;
    for (double time : setup_.snapshot_times)
      snap_idx.insert(snapshot_index(time, tau, n_steps));
    std::set<long> mass_idx = snap_idx;
    mass_idx.insert(0);
    mass_idx.insert(n_steps);

    res.initial_mass = total_mass();
    res.min_mass = res.max_mass = res.initial_mass;

    for (long step = 0;; ++step) {
      const double t = tau * static_cast<double>(step);
      const double mass = total_mass();
      res.final_mass = mass;
      res.steps_completed = step;
      res.min_mass = std::min(res.min_mass, mass);
      res.max_mass = std::max(res.max_mass, mass);
      res.max_conservation_residual =
          std::max(res.max_conservation_residual,
                   std::abs(mass - (res.initial_mass + boundary_in_ - boundary_out_)));

      if (snap_idx.count(step)) {
        Snapshot snap{t, step, fields_};
        res.snapshots.push_back(std::move(snap));
        compute_fluxes(t);
        SnapshotDiagnostics diag{t, step, {}};
        for (size_t j = 0; j < junctions_.size(); ++j)
          diag.junctions.push_back(make_record(static_cast<Index>(j)));
        res.junction_diag.push_back(std::move(diag));
      }
      if (mass_idx.count(step))
        res.mass_rows.push_back({t, mass, boundary_in_, boundary_out_});

      if (step == n_steps || res.aborted) break;
      advance(step, t, mass, res);
    }
    return res;
  }

 private:
  struct EndSource {
    RoadEnd::Kind kind = RoadEnd::Kind::Outflow;
    Index junction = -1;  // index into net_.junctions
    Index slot = -1;      // position within that junction's road list
  };

  struct JunctionContext {
    std::vector<Index> in_roads;
    std::vector<Index> out_roads;
    JunctionState state;
    JunctionFluxes fluxes;
    Matrix directional;
    Vector dist_err;
  };

  void initialize(RunResult& res) {
    const auto zero = [](double) { return 0.0; };
    for (size_t i = 0; i < net_.roads.size(); ++i) {
      const Road& road = net_.roads[i];
      const auto it = setup_.initial_density.find(road.id);
      const std::function<double(double)>& rho0 =
          (it != setup_.initial_density.end()) ? it->second : zero;
      fields_.push_back(
          project_initial(discs_[i].mesh, setup_.numerics.degree, rho0));
      record_clamp(static_cast<Index>(i), clamp_admissible(discs_[i], fields_[i]), 0.0, res);
    }
  }

  double total_mass() const {
    double m = 0.0;
    for (size_t i = 0; i < fields_.size(); ++i)
      m += discs_[i].mesh.h() * fields_[i].coeffs.col(0).sum();
    return m;
  }

  void compute_fluxes(double t) {
    const Index n_roads = static_cast<Index>(fields_.size());
    for (Index i = 0; i < n_roads; ++i) {
      left_val_[i] = left_end_value(fields_[static_cast<size_t>(i)]);
      right_val_[i] = right_end_value(fields_[static_cast<size_t>(i)]);
    }

    for (size_t j = 0; j < junctions_.size(); ++j) {
      const Junction& junc = net_.junctions[j];
      JunctionContext& jc = junctions_[j];
      for (size_t i = 0; i < jc.in_roads.size(); ++i)
        jc.state.incoming[static_cast<Index>(i)] = right_val_[jc.in_roads[i]];
      for (size_t i = 0; i < jc.out_roads.size(); ++i)
        jc.state.outgoing[static_cast<Index>(i)] = left_val_[jc.out_roads[i]];

      if (junc.strategy == FluxStrategy::MaxFlux) {
        jc.fluxes = max_flux_fluxes(jc.state, junc.matrix, junc.right_of_way);
        jc.directional = junc.matrix * jc.fluxes.incoming.asDiagonal();
        jc.dist_err = jc.fluxes.outgoing - junc.matrix * jc.fluxes.incoming;
      } else {
        const Matrix alpha = effective_matrix(junc, t);
        const Matrix pairwise = pairwise_fluxes(jc.state);
        jc.fluxes = weighted_fluxes(jc.state, alpha, pairwise);
        jc.directional = alpha.cwiseProduct(pairwise);
        jc.dist_err = jc.fluxes.outgoing - alpha * jc.fluxes.incoming;
      }
    }

    for (Index i = 0; i < n_roads; ++i) {
      const EndSource& ls = left_source_[static_cast<size_t>(i)];
      if (ls.kind == RoadEnd::Kind::Inflow) {
        const Road& road = net_.roads[static_cast<size_t>(i)];
        const double datum = setup_.boundary.inflow.at(road.id).at(t);
        const FundamentalDiagram& d = discs_[static_cast<size_t>(i)].diagrams.front();
        left_flux_[i] = lax_friedrichs_flux(d, d, datum, left_val_[i]);
        ghost_left_[static_cast<size_t>(i)] = datum;
      } else {
        left_flux_[i] =
            junctions_[static_cast<size_t>(ls.junction)].fluxes.outgoing[ls.slot];
        ghost_left_[static_cast<size_t>(i)].reset();
      }
      const EndSource& rs = right_source_[static_cast<size_t>(i)];
      if (rs.kind == RoadEnd::Kind::Outflow) {
        const FundamentalDiagram& d = discs_[static_cast<size_t>(i)].diagrams.back();
        right_flux_[i] = equilibrium_flow(d, right_val_[i]);
      } else {
        right_flux_[i] =
            junctions_[static_cast<size_t>(rs.junction)].fluxes.incoming[rs.slot];
      }
    }
  }

  JunctionRecord make_record(Index j) const {
    const JunctionContext& jc = junctions_[static_cast<size_t>(j)];
    return {net_.junctions[static_cast<size_t>(j)].id,
            jc.fluxes.incoming,
            jc.fluxes.outgoing,
            jc.directional,
            jc.state.incoming,
            jc.state.outgoing,
            jc.dist_err};
  }

  void record_clamp(Index road, const std::vector<ClampEvent>& evs, double t,
                    RunResult& res) {
    for (const ClampEvent& e : evs)
      res.events.push_back(
          {net_.roads[static_cast<size_t>(road)].id, e.element, e.mean, e.lo, e.hi, t});
    if (static_cast<long>(res.events.size()) > setup_.numerics.max_mass_violations &&
        !res.aborted) {
      res.aborted = true;
      res.abort_reason =
          "element mean left the admissible density range (mass no longer conserved)";
    }
  }

  void advance(long step, double t, double mass, RunResult& res) {
    const double tau = setup_.numerics.tau;
    compute_fluxes(t);

    if (trace_junction_ >= 0)
      res.step_traces.push_back({t, step, mass, make_record(trace_junction_)});

    const double t_next = tau * static_cast<double>(step + 1);
    for (size_t i = 0; i < fields_.size(); ++i) {
      road_rhs(discs_[i], fields_[i], left_flux_[static_cast<Index>(i)],
               right_flux_[static_cast<Index>(i)], rhs_[i], ws_[i]);
      fields_[i].coeffs += tau * rhs_[i];
      GhostMeans ghosts;
      ghosts.left = ghost_left_[i];
      minmod_limit(discs_[i], fields_[i], ghosts, setup_.numerics.tvb_m);
      record_clamp(static_cast<Index>(i), clamp_admissible(discs_[i], fields_[i]), t_next,
                   res);
    }

    for (size_t i = 0; i < fields_.size(); ++i) {
      if (left_source_[i].kind == RoadEnd::Kind::Inflow)
        boundary_in_ += tau * left_flux_[static_cast<Index>(i)];
      if (right_source_[i].kind == RoadEnd::Kind::Outflow)
        boundary_out_ += tau * right_flux_[static_cast<Index>(i)];
    }
  }

  const SimulationSetup& setup_;
  const Network& net_;
  RunOptions opts_;

  std::vector<RoadDiscretization> discs_;
  std::vector<DGField> fields_;
  std::vector<JunctionContext> junctions_;
  std::vector<EndSource> left_source_, right_source_;
  Index trace_junction_ = -1;

  Vector left_val_, right_val_, left_flux_, right_flux_;
  std::vector<std::optional<double>> ghost_left_;
  std::vector<Matrix> rhs_;
  std::vector<RoadWorkspace> ws_;
  double boundary_in_ = 0.0, boundary_out_ = 0.0;
};

}  // namespace

RunResult run(const SimulationSetup& setup, const RunOptions& options) {
  const ValidationReport report = validate(setup.network);
  if (!report.ok()) {
    std::string msg = "invalid network:";
    for (const std::string& p : report.problems) msg += "\n  " + p;
    throw std::invalid_argument(msg);
  }
  for (const Road& road : setup.network.roads)
    if (road.left.kind == RoadEnd::Kind::Inflow &&
        !setup.boundary.inflow.count(road.id))
      throw std::invalid_argument("no inflow signal for road " + std::to_string(road.id));
  if (!(setup.numerics.tau > 0.0))
    throw std::invalid_argument("time step must be positive");
  if (setup.numerics.degree < 0)
    throw std::invalid_argument("polynomial degree must be nonnegative");

  Simulator sim(setup, options);
  return sim.run();
}

}  // namespace dgflow
