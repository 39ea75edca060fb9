#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dgflow/network.hpp"
#include "dgflow/simulation.hpp"
#include "dgflow/types.hpp"

namespace dgflow {

/// Error raised while reading a scenario file; `line` is 1-based (0 when the
/// problem is not tied to a specific line).
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(int line, const std::string& message)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                    : message),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Single-element diagram override, e.g. a blended maximal density on the
/// element next to a junction.
struct ElementOverride {
  enum class Position { First, Last, Indexed };
  Position position = Position::First;
  Index index = 0;  // used when position == Indexed
  std::optional<double> v_max;
  std::optional<double> rho_max;
};

/// Initial density profile: a constant or a piecewise-linear breakpoint list
/// in road coordinates.  A repeated x makes a jump; values are taken
/// right-continuous there.
struct InitialConditionSpec {
  enum class Kind { Constant, Piecewise };
  Kind kind = Kind::Constant;
  double value = 0.0;
  std::vector<std::pair<double, double>> breakpoints;  // (x, density), x nondecreasing
  double at(double x) const;
};

struct RoadEndSpec {
  enum class Kind { Junction, Inflow, Outflow };
  Kind kind = Kind::Outflow;
  int junction = -1;  // used when kind == Junction
};

struct RoadSpec {
  int id = 0;
  double from = 0.0, to = 1.0;
  Index elements = 1;
  DiagramKind model = DiagramKind::Greenshields;
  double v_max = 1.0, rho_max = 1.0;
  std::vector<ElementOverride> overrides;
  RoadEndSpec left, right;
  InitialConditionSpec ic;
  std::optional<InflowSignal> inflow;  // required when left end is an inflow
};

struct JunctionSpec {
  int id = 0;
  std::vector<int> incoming, outgoing;  // road ids
  Matrix matrix;                        // rows = outgoing, columns = incoming
  FluxStrategy flux = FluxStrategy::Weighted;
  std::optional<double> right_of_way;
  double all_red_gap = 0.0;  // used when the junction has light phases
};

/// One traffic-light phase; phases of a junction run in file order and the
/// whole sequence repeats periodically.
struct PhaseSpec {
  int junction = 0;
  double duration = 0.0;
  std::vector<std::pair<int, int>> green;  // (incoming road id, outgoing road id)
};

struct NumericsSpec {
  double tau = 1e-4;
  double t_end = 1.0;
  Index degree = 1;
  double tvb_m = 0.0;
};

struct OutputSpec {
  std::vector<double> snapshots;
  std::string directory = "out";
};

struct Scenario {
  int format = 1;
  std::string name;
  std::vector<RoadSpec> roads;
  std::vector<JunctionSpec> junctions;
  std::vector<PhaseSpec> phases;
  NumericsSpec numerics;
  OutputSpec output;
};

/// Parse and fully validate a scenario file.  Throws ScenarioError with a
/// line number on syntax problems and with the violated invariant on
/// semantic ones.
Scenario parse_scenario(const std::string& text);

/// Deterministic text form; parsing it again reproduces the scenario.
std::string canonical_text(const Scenario& s);

/// All semantic problems of a scenario (empty means valid).  Includes the
/// network-level validation of the assembled road graph.
std::vector<std::string> validate_scenario(const Scenario& s);

/// Assemble the network described by the scenario.  References must resolve
/// (run validate_scenario first).
Network build_network(const Scenario& s);

/// Everything the solver needs.  Throws std::invalid_argument when the
/// scenario does not validate.
SimulationSetup make_setup(const Scenario& s);

/// Command-line adjustments applied on top of a parsed scenario.
struct ScenarioOverrides {
  std::optional<double> tau;
  std::optional<double> t_end;
  std::optional<double> tvb_m;
  std::optional<double> right_of_way;      // junctions with two incoming roads
  std::optional<double> elements_per_unit; // rescale every road's element count
  std::optional<FluxStrategy> flux;        // switch every junction
  std::optional<std::string> out_dir;
  std::optional<std::vector<double>> snapshots;
};
void apply_overrides(Scenario& s, const ScenarioOverrides& o);

std::vector<std::string> builtin_scenario_names();
bool is_builtin_scenario(const std::string& name);
Scenario builtin_scenario(const std::string& name);  // throws std::invalid_argument
std::string builtin_scenario_text(const std::string& name);

}  // namespace dgflow
