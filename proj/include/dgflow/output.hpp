#pragma once

#include <string>

#include "dgflow/simulation.hpp"

namespace dgflow {

struct OutputPlan {
  std::string directory = "out";
};

/// Write the run's artifacts into plan.directory (created if missing):
///   snapshots.csv      time,road,x,rho  (7 samples per element)
///   mass.csv           time,total_mass,boundary_in,boundary_out
///   junction_diag.csv  time,junction,series,value
///   road<id>_t<time>.dat  two space-separated columns (x, density)
/// With no snapshots only mass.csv and junction_diag.csv are produced.
/// I/O failures raise std::runtime_error naming the file.
void write_outputs(const RunResult& result, const SimulationSetup& setup,
                   const OutputPlan& plan);

}  // namespace dgflow
