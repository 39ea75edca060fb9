#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dgflow/dg.hpp"
#include "dgflow/junction_flux.hpp"
#include "dgflow/network.hpp"
#include "dgflow/types.hpp"

namespace dgflow {

/// Dirichlet density prescribed at an inflow end.
struct InflowSignal {
  enum class Kind { Constant, Sinusoid };
  Kind kind = Kind::Constant;
  double value = 0.0;  // constant level
  // amplitude * sin(2 pi t / period + phase) + offset
  double amplitude = 0.0;
  double period = 1.0;
  double phase = 0.0;
  double offset = 0.0;
  double at(double t) const;
};

/// Inflow signals keyed by road id (one per road with an inflow end).
struct BoundaryData {
  std::map<int, InflowSignal> inflow;
};

struct NumericsConfig {
  double tau = 1e-4;
  double t_end = 1.0;
  Index degree = 1;
  double tvb_m = 0.0;
  // Number of tolerated element-mean admissibility violations before the run
  // is aborted (each violation flattens the element and loses mass).
  long max_mass_violations = 0;
};

struct SimulationSetup {
  Network network;
  BoundaryData boundary;
  NumericsConfig numerics;
  std::map<int, std::function<double(double)>> initial_density;  // by road id
  std::vector<double> snapshot_times;
};

struct RunOptions {
  // Record per-step fluxes and traces of this junction.
  std::optional<int> trace_junction_id;
};

struct Snapshot {
  double t = 0.0;
  long step_index = 0;
  std::vector<DGField> fields;  // aligned with network.roads
};

/// Cumulative bookkeeping row: total mass over the network plus the density
/// admitted / discharged through the domain boundary up to time t.
struct MassRow {
  double t = 0.0;
  double total_mass = 0.0;
  double boundary_in = 0.0;
  double boundary_out = 0.0;
};

/// Fluxes and traces of one junction at one instant.  `directional(j, i)` is
/// the flux routed from incoming road i to outgoing road j; its row sums are
/// the outgoing fluxes.
struct JunctionRecord {
  int junction_id = 0;
  Vector incoming_flux;
  Vector outgoing_flux;
  Matrix directional;
  Vector incoming_traces;
  Vector outgoing_traces;
  Vector distribution_err;
};

struct SnapshotDiagnostics {
  double t = 0.0;
  long step_index = 0;
  std::vector<JunctionRecord> junctions;
};

struct StepTrace {
  double t = 0.0;
  long step_index = 0;
  double total_mass = 0.0;
  JunctionRecord junction;
};

struct ClampEventRecord {
  int road_id = 0;
  Index element = 0;
  double mean = 0.0;
  double lo = 0.0, hi = 0.0;
  double t = 0.0;
};

struct RunResult {
  std::vector<Snapshot> snapshots;
  std::vector<SnapshotDiagnostics> junction_diag;  // aligned with snapshots
  std::vector<MassRow> mass_rows;
  std::vector<StepTrace> step_traces;  // only when a junction is traced
  std::vector<ClampEventRecord> events;
  bool aborted = false;
  std::string abort_reason;
  long steps_completed = 0;
  double initial_mass = 0.0;
  double final_mass = 0.0;
  double min_mass = 0.0;
  double max_mass = 0.0;
  // Largest |mass(t) - (mass(0) + boundary_in - boundary_out)| seen.
  double max_conservation_residual = 0.0;
};

/// Largest time step for which the forward-Euler DG update is expected to be
/// stable: min over elements of h / ((2 degree + 1) max |flow'|).
double cfl_advisory(const Network& net, Index degree);

RunResult run(const SimulationSetup& setup, const RunOptions& options = {});

}  // namespace dgflow
