#include "doctest.h"

#include <stdexcept>
#include <string>
#include <vector>

#include "dgflow/scenario.hpp"

using namespace dgflow;

namespace {

const char* kTwoRoadText = R"(# one junction, one inflow, one outflow
format = 1
name = two_road_chain

[road]
id = 1
from = 0
to = 1
elements = 20
model = greenshields
v_max = 1
rho_max = 1
left = inflow
right = junction 1
ic = constant 0.3
inflow = sin 0.1 2 0 0.3

[road]
id = 2
from = 1
to = 3
elements = 40
model = greenberg
v_max = 0.8
rho_max = 2
element = first rho_max 1.5
element = 3 v_max 0.9
left = junction 1
right = outflow
ic = (1,0.2) (2,0.2) (2,0.8) (3,0.8)

[junction]
id = 1
incoming = 1
outgoing = 2
matrix = 1

[numerics]
tau = 0.001
t_end = 0.5
degree = 1
tvb_m = 2

[output]
directory = demo_out
snapshots = 0 0.25 0.5
)";

}  // namespace

TEST_CASE("a scenario file parses into the expected structures") {
  const Scenario s = parse_scenario(kTwoRoadText);
  CHECK(s.format == 1);
  CHECK(s.name == "two_road_chain");
  REQUIRE(s.roads.size() == 2);
  REQUIRE(s.junctions.size() == 1);

  const RoadSpec& r1 = s.roads[0];
  CHECK(r1.id == 1);
  CHECK(r1.elements == 20);
  CHECK(r1.model == DiagramKind::Greenshields);
  CHECK(r1.left.kind == RoadEndSpec::Kind::Inflow);
  CHECK(r1.right.kind == RoadEndSpec::Kind::Junction);
  CHECK(r1.right.junction == 1);
  CHECK(r1.ic.kind == InitialConditionSpec::Kind::Constant);
  CHECK(r1.ic.value == 0.3);
  REQUIRE(r1.inflow.has_value());
  CHECK(r1.inflow->kind == InflowSignal::Kind::Sinusoid);
  CHECK(r1.inflow->amplitude == 0.1);
  CHECK(r1.inflow->period == 2.0);
  CHECK(r1.inflow->offset == 0.3);

  const RoadSpec& r2 = s.roads[1];
  CHECK(r2.model == DiagramKind::Greenberg);
  REQUIRE(r2.overrides.size() == 2);
  CHECK(r2.overrides[0].position == ElementOverride::Position::First);
  CHECK(r2.overrides[0].rho_max == 1.5);
  CHECK(!r2.overrides[0].v_max.has_value());
  CHECK(r2.overrides[1].position == ElementOverride::Position::Indexed);
  CHECK(r2.overrides[1].index == 3);
  CHECK(r2.overrides[1].v_max == 0.9);
  CHECK(r2.ic.kind == InitialConditionSpec::Kind::Piecewise);

  CHECK(s.junctions[0].incoming == std::vector<int>{1});
  CHECK(s.junctions[0].matrix(0, 0) == 1.0);
  CHECK(s.junctions[0].flux == FluxStrategy::Weighted);
  CHECK(s.numerics.tau == 0.001);
  CHECK(s.numerics.tvb_m == 2.0);
  CHECK(s.output.directory == "demo_out");
  CHECK(s.output.snapshots == std::vector<double>{0.0, 0.25, 0.5});

  CHECK(validate_scenario(s).empty());
}

TEST_CASE("piecewise initial conditions interpolate and jump right-continuously") {
  const Scenario s = parse_scenario(kTwoRoadText);
  const InitialConditionSpec& ic = s.roads[1].ic;
  CHECK(ic.at(1.0) == 0.2);
  CHECK(ic.at(1.7) == 0.2);
  CHECK(ic.at(2.0) == 0.8);  // value jumps at the repeated breakpoint
  CHECK(ic.at(2.5) == 0.8);
  CHECK(ic.at(3.0) == 0.8);

  InitialConditionSpec ramp;
  ramp.kind = InitialConditionSpec::Kind::Piecewise;
  ramp.breakpoints = {{0.0, 0.0}, {0.5, 1.0}, {1.0, 0.0}};
  CHECK(ramp.at(0.25) == doctest::Approx(0.5));
  CHECK(ramp.at(0.5) == 1.0);
  CHECK(ramp.at(0.75) == doctest::Approx(0.5));
}

TEST_CASE("canonical text round-trips every built-in scenario") {
  for (const std::string& name : builtin_scenario_names()) {
    CHECK(is_builtin_scenario(name));
    const Scenario s = builtin_scenario(name);
    CHECK(validate_scenario(s).empty());
    const std::string text = canonical_text(s);
    const Scenario reparsed = parse_scenario(text);
    CHECK(canonical_text(reparsed) == text);
    CHECK(builtin_scenario_text(name) == text);
  }
  CHECK(builtin_scenario_names().size() == 4);
  CHECK(!is_builtin_scenario("no_such_scenario"));
  CHECK_THROWS_AS(builtin_scenario("no_such_scenario"), std::invalid_argument);
}

TEST_CASE("a hand-written scenario round-trips through its canonical text") {
  const Scenario s = parse_scenario(kTwoRoadText);
  const std::string text = canonical_text(s);
  const Scenario again = parse_scenario(text);
  CHECK(canonical_text(again) == text);
}

TEST_CASE("parse errors carry 1-based line numbers") {
  auto line_of = [](const std::string& text) {
    try {
      parse_scenario(text);
    } catch (const ScenarioError& e) {
      return e.line();
    }
    return -1;
  };

  CHECK(line_of("") == 1);                          // missing format
  CHECK(line_of("format = 2\n") == 1);              // unsupported version
  CHECK(line_of("format = 1\nname = x\nbogus\n") == 3);
  CHECK(line_of("format = 1\nname = x\n[road]\nid = 1\nfrom = zero\n") == 5);
  CHECK(line_of("format = 1\nname = x\n[granary]\n") == 3);
  // snapshot lists are whitespace separated; a stray comma is a syntax error
  CHECK(line_of("format = 1\nname = x\n[output]\nsnapshots = 3, 19\n") == 4);

  try {
    parse_scenario("format = 1\nname = x\n[road]\nid = 1\nfrom = zero\n");
    CHECK(false);
  } catch (const ScenarioError& e) {
    CHECK(std::string(e.what()).find("line 5") != std::string::npos);
  }
}

TEST_CASE("semantic problems fail validation with a description") {
  // junction references a road that is not declared
  Scenario s = parse_scenario(kTwoRoadText);
  s.junctions[0].outgoing = {9};
  CHECK(!validate_scenario(s).empty());
  CHECK_THROWS_AS(make_setup(s), std::invalid_argument);

  // element override past the end of the road
  Scenario s2 = parse_scenario(kTwoRoadText);
  s2.roads[1].overrides[1].index = 40;
  CHECK(!validate_scenario(s2).empty());

  // an inflow end without a signal
  Scenario s3 = parse_scenario(kTwoRoadText);
  s3.roads[0].inflow.reset();
  CHECK(!validate_scenario(s3).empty());
}

TEST_CASE("overrides adjust numerics, flux strategy and resolution") {
  Scenario s = builtin_scenario("simple_network");
  ScenarioOverrides o;
  o.tau = 5e-4;
  o.t_end = 0.2;
  o.elements_per_unit = 25;
  o.out_dir = "elsewhere";
  o.snapshots = std::vector<double>{0.0, 0.2};
  apply_overrides(s, o);
  CHECK(s.numerics.tau == 5e-4);
  CHECK(s.numerics.t_end == 0.2);
  for (const RoadSpec& r : s.roads) CHECK(r.elements == 25);
  CHECK(s.output.directory == "elsewhere");
  CHECK(s.output.snapshots == std::vector<double>{0.0, 0.2});
  CHECK(validate_scenario(s).empty());

  // switching every junction to maxflux leaves the two-incoming junction
  // underdetermined: no right of way is configured anywhere
  ScenarioOverrides flux_only;
  flux_only.flux = FluxStrategy::MaxFlux;
  Scenario m = builtin_scenario("simple_network");
  apply_overrides(m, flux_only);
  CHECK(!validate_scenario(m).empty());
  CHECK_THROWS_AS(make_setup(m), std::invalid_argument);

  // supplying one fixes it
  Scenario m2 = builtin_scenario("simple_network");
  ScenarioOverrides both = flux_only;
  both.right_of_way = 0.5;
  apply_overrides(m2, both);
  CHECK(validate_scenario(m2).empty());
}

TEST_CASE("build_network maps specs onto the runtime network") {
  const Scenario s = parse_scenario(kTwoRoadText);
  const Network net = build_network(s);
  REQUIRE(net.roads.size() == 2);
  CHECK(net.roads[0].diagram.kind == DiagramKind::Greenshields);
  CHECK(net.roads[1].diagram.kind == DiagramKind::Greenberg);
  // overrides expand into a full per-element parameter list
  REQUIRE(net.roads[1].per_element.size() == 40);
  CHECK(net.roads[1].per_element[0].rho_max == 1.5);
  CHECK(net.roads[1].per_element[0].v_max == 0.8);
  CHECK(net.roads[1].per_element[3].v_max == 0.9);
  CHECK(net.roads[1].per_element[3].rho_max == 2.0);
  CHECK(net.roads[1].per_element[10].rho_max == 2.0);
  CHECK(validate(net).ok());

  const SimulationSetup setup = make_setup(s);
  CHECK(setup.numerics.tau == 0.001);
  CHECK(setup.boundary.inflow.count(1) == 1);
  CHECK(setup.initial_density.count(2) == 1);
  // the initial-density callback samples the piecewise profile
  CHECK(setup.initial_density.at(2)(2.5) == 0.8);
  CHECK(setup.snapshot_times == std::vector<double>{0.0, 0.25, 0.5});
}
