#include "dgflow/output.hpp"

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace dgflow {

namespace {

constexpr std::array<double, 7> kSampleXi = {-1.0,      -2.0 / 3.0, -1.0 / 3.0, 0.0,
                                             1.0 / 3.0, 2.0 / 3.0,  1.0};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_file(const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return f;
}

void finish(std::ofstream& f, const std::filesystem::path& path) {
  f.flush();
  if (!f) throw std::runtime_error("failed to write " + path.string());
}

std::string snapshot_tag(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", t);
  return buf;
}

}  // namespace

void write_outputs(const RunResult& result, const SimulationSetup& setup,
                   const OutputPlan& plan) {
  namespace fs = std::filesystem;
  const fs::path dir(plan.directory);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create directory " + dir.string());

  {
    const fs::path path = dir / "mass.csv";
    std::ofstream f = open_file(path);
    f << "time,total_mass,boundary_in,boundary_out\n";
    for (const MassRow& row : result.mass_rows)
      f << num(row.t) << ',' << num(row.total_mass) << ',' << num(row.boundary_in) << ','
        << num(row.boundary_out) << '\n';
    finish(f, path);
  }

  {
    const fs::path path = dir / "junction_diag.csv";
    std::ofstream f = open_file(path);
    f << "time,junction,series,value\n";
    for (const SnapshotDiagnostics& diag : result.junction_diag) {
      for (const JunctionRecord& rec : diag.junctions) {
        const Junction* junc = setup.network.junction_by_id(rec.junction_id);
        for (Index i = 0; i < rec.incoming_flux.size(); ++i)
          f << num(diag.t) << ',' << rec.junction_id << ",H_in_"
            << junc->incoming[static_cast<size_t>(i)] << ',' << num(rec.incoming_flux[i])
            << '\n';
        for (Index j = 0; j < rec.outgoing_flux.size(); ++j)
          f << num(diag.t) << ',' << rec.junction_id << ",H_out_"
            << junc->outgoing[static_cast<size_t>(j)] << ',' << num(rec.outgoing_flux[j])
            << '\n';
        for (Index j = 0; j < rec.distribution_err.size(); ++j)
          f << num(diag.t) << ',' << rec.junction_id << ",E_"
            << junc->outgoing[static_cast<size_t>(j)] << ','
            << num(rec.distribution_err[j]) << '\n';
      }
    }
    finish(f, path);
  }

  if (result.snapshots.empty()) return;

  {
    const fs::path path = dir / "snapshots.csv";
    std::ofstream f = open_file(path);
    f << "time,road,x,rho\n";
    for (const Snapshot& snap : result.snapshots) {
      for (size_t r = 0; r < setup.network.roads.size(); ++r) {
        const Road& road = setup.network.roads[r];
        const Mesh mesh{road.a, road.b, road.n_elements};
        const DGField& field = snap.fields[r];
        for (Index k = 0; k < mesh.n; ++k)
          for (double xi : kSampleXi)
            f << num(snap.t) << ',' << road.id << ',' << num(mesh.x_of(k, xi)) << ','
              << num(evaluate(field, k, xi)) << '\n';
      }
    }
    finish(f, path);
  }

  for (const Snapshot& snap : result.snapshots) {
    for (size_t r = 0; r < setup.network.roads.size(); ++r) {
      const Road& road = setup.network.roads[r];
      const Mesh mesh{road.a, road.b, road.n_elements};
      const DGField& field = snap.fields[r];
      const fs::path path =
          dir / ("road" + std::to_string(road.id) + "_t" + snapshot_tag(snap.t) + ".dat");
      std::ofstream f = open_file(path);
      for (Index k = 0; k < mesh.n; ++k)
        for (double xi : kSampleXi)
          f << num(mesh.x_of(k, xi)) << ' ' << num(evaluate(field, k, xi)) << '\n';
      finish(f, path);
    }
  }
}

}  // namespace dgflow
