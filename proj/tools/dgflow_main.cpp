#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dgflow/output.hpp"
#include "dgflow/scenario.hpp"
#include "dgflow/simulation.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read scenario file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// A scenario argument is either a built-in name or a path to a file.
dgflow::Scenario load_scenario(const std::string& ref) {
  if (dgflow::is_builtin_scenario(ref)) return dgflow::builtin_scenario(ref);
  return dgflow::parse_scenario(read_file(ref));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Traffic flow on road networks (LWR model, discontinuous Galerkin)"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "Simulate a scenario and write its outputs");
  std::string run_ref;
  run_cmd->add_option("scenario", run_ref, "built-in scenario name or scenario file path")
      ->required();
  double tau = 0, t_end = 0, tvb_m = 0, right_of_way = 0, elements_per_unit = 0;
  std::string flux, out_dir;
  std::vector<double> snapshots;
  auto* tau_opt = run_cmd->add_option("--tau", tau, "time step");
  auto* t_end_opt = run_cmd->add_option("--t-end", t_end, "final time");
  auto* tvb_opt = run_cmd->add_option("--tvb-m", tvb_m, "TVB limiter constant M");
  auto* row_opt = run_cmd->add_option("--right-of-way", right_of_way,
                                      "priority ratio for junctions with two incoming roads");
  auto* epu_opt = run_cmd->add_option("--elements-per-unit", elements_per_unit,
                                      "elements per unit road length (recomputes all roads)");
  auto* flux_opt = run_cmd->add_option("--flux", flux, "junction coupling for all junctions")
                       ->check(CLI::IsMember({"weighted", "maxflux"}));
  auto* out_opt = run_cmd->add_option("--out", out_dir, "output directory");
  auto* snap_opt = run_cmd->add_option("--snapshots", snapshots, "snapshot times")
                       ->delimiter(',');

  auto* validate_cmd =
      app.add_subcommand("validate", "Parse and validate a scenario, run nothing");
  std::string validate_ref;
  validate_cmd
      ->add_option("scenario", validate_ref, "built-in scenario name or scenario file path")
      ->required();

  auto* list_cmd = app.add_subcommand("list-scenarios", "Print the built-in scenario names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 64;
  }

  try {
    if (list_cmd->parsed()) {
      for (const std::string& name : dgflow::builtin_scenario_names())
        std::cout << name << '\n';
      return 0;
    }

    if (validate_cmd->parsed()) {
      const dgflow::Scenario s = load_scenario(validate_ref);
      std::cout << "scenario '" << s.name << "' is valid\n";
      return 0;
    }

    dgflow::Scenario s = load_scenario(run_ref);
    dgflow::ScenarioOverrides overrides;
    if (tau_opt->count()) overrides.tau = tau;
    if (t_end_opt->count()) overrides.t_end = t_end;
    if (tvb_opt->count()) overrides.tvb_m = tvb_m;
    if (row_opt->count()) overrides.right_of_way = right_of_way;
    if (epu_opt->count()) overrides.elements_per_unit = elements_per_unit;
    if (flux_opt->count())
      overrides.flux = flux == "maxflux" ? dgflow::FluxStrategy::MaxFlux
                                         : dgflow::FluxStrategy::Weighted;
    if (out_opt->count()) overrides.out_dir = out_dir;
    if (snap_opt->count()) overrides.snapshots = snapshots;
    dgflow::apply_overrides(s, overrides);

    const dgflow::SimulationSetup setup = dgflow::make_setup(s);
    const dgflow::RunResult result = dgflow::run(setup);
    dgflow::write_outputs(result, setup, {s.output.directory});

    if (result.aborted) {
      std::cerr << "run aborted after " << result.steps_completed
                << " steps: " << result.abort_reason << '\n';
      for (const dgflow::ClampEventRecord& e : result.events)
        std::cerr << "  t=" << e.t << " road " << e.road_id << " element " << e.element
                  << " mean " << e.mean << " outside [" << e.lo << ", " << e.hi << "]\n";
      return 2;
    }

    std::cout << "completed " << result.steps_completed << " steps, final mass "
              << result.final_mass << ", outputs in '" << s.output.directory << "'\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
