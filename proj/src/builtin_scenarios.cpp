#include <numbers>
#include <stdexcept>

#include "dgflow/scenario.hpp"

namespace dgflow {

namespace {

RoadEndSpec junction_end(int id) {
  return {RoadEndSpec::Kind::Junction, id};
}

InitialConditionSpec constant_ic(double v) {
  InitialConditionSpec ic;
  ic.kind = InitialConditionSpec::Kind::Constant;
  ic.value = v;
  return ic;
}

InitialConditionSpec piecewise_ic(std::vector<std::pair<double, double>> bps) {
  InitialConditionSpec ic;
  ic.kind = InitialConditionSpec::Kind::Piecewise;
  ic.breakpoints = std::move(bps);
  return ic;
}

RoadSpec road(int id, double from, double to, Index elements, double v_max, double rho_max,
              RoadEndSpec left, RoadEndSpec right, InitialConditionSpec ic) {
  RoadSpec r;
  r.id = id;
  r.from = from;
  r.to = to;
  r.elements = elements;
  r.v_max = v_max;
  r.rho_max = rho_max;
  r.left = left;
  r.right = right;
  r.ic = std::move(ic);
  return r;
}

// Highway with a lane drop: four sectors of decreasing capacity joined by
// pass-through junctions, fed by a slowly oscillating inflow.
Scenario make_bottleneck() {
  Scenario s;
  s.name = "bottleneck";
  RoadSpec r1 = road(1, 0.0, 2.0, 300, 1.3, 2.0, {RoadEndSpec::Kind::Inflow, -1},
                     junction_end(1), constant_ic(0.0));
  InflowSignal sig;
  sig.kind = InflowSignal::Kind::Sinusoid;
  sig.amplitude = 0.05;
  sig.period = 7.0;
  sig.phase = -std::numbers::pi / 2.0;
  sig.offset = 0.18;
  r1.inflow = sig;
  s.roads.push_back(std::move(r1));
  RoadSpec r2 = road(2, 2.0, 2.5, 75, 1.0, 2.0, junction_end(1), junction_end(2),
                     constant_ic(0.0));
  // Step the maximal density down over the last two elements before the lane
  // drop.  A bare 2 -> 1 jump lets the interface flux overfeed the narrow
  // sector at jam (dissipation pumps up to rho_max/2 per unit jump, above the
  // 0.2 capacity), so the jump is split into thirds, which caps the worst-case
  // interface flux at 1/6.
  ElementOverride step1;
  step1.position = ElementOverride::Position::Indexed;
  step1.index = 73;
  step1.rho_max = 5.0 / 3.0;
  ElementOverride step2;
  step2.position = ElementOverride::Position::Last;
  step2.rho_max = 4.0 / 3.0;
  r2.overrides = {step1, step2};
  s.roads.push_back(std::move(r2));
  s.roads.push_back(road(3, 2.5, 4.5, 300, 0.8, 1.0, junction_end(2), junction_end(3),
                         constant_ic(0.0)));
  s.roads.push_back(road(4, 4.5, 5.5, 150, 1.3, 2.0, junction_end(3),
                         {RoadEndSpec::Kind::Outflow, -1}, constant_ic(0.0)));
  for (int j = 1; j <= 3; ++j) {
    JunctionSpec junc;
    junc.id = j;
    junc.incoming = {j};
    junc.outgoing = {j + 1};
    junc.matrix = Matrix::Ones(1, 1);
    s.junctions.push_back(std::move(junc));
  }
  s.numerics = {1e-4, 20.0, 1, 0.0};
  s.output.snapshots = {3, 5, 7, 9, 11, 13, 15, 17, 19};
  return s;
}

// Closed triangle: road 1 splits 3:1 onto roads 2 and 3, which both return
// into road 1.  A density bump on road 1 travels through the junctions.
Scenario make_simple_network() {
  Scenario s;
  s.name = "simple_network";
  s.roads.push_back(road(1, 0.0, 1.0, 100, 1.0, 1.0, junction_end(2), junction_end(1),
                         piecewise_ic({{0.0, 0.0}, {0.3, 0.0}, {0.5, 1.0}, {0.7, 0.0}, {1.0, 0.0}})));
  s.roads.push_back(road(2, 1.0, 2.0, 100, 1.0, 1.0, junction_end(1), junction_end(2),
                         constant_ic(0.4)));
  s.roads.push_back(road(3, 1.0, 2.0, 100, 1.0, 1.0, junction_end(1), junction_end(2),
                         constant_ic(0.4)));
  JunctionSpec j1;
  j1.id = 1;
  j1.incoming = {1};
  j1.outgoing = {2, 3};
  j1.matrix = Matrix(2, 1);
  j1.matrix << 0.75, 0.25;
  s.junctions.push_back(std::move(j1));
  JunctionSpec j2;
  j2.id = 2;
  j2.incoming = {2, 3};
  j2.outgoing = {1};
  j2.matrix = Matrix(1, 2);
  j2.matrix << 1.0, 1.0;
  s.junctions.push_back(std::move(j2));
  s.numerics = {1e-4, 3.0, 1, 0.0};
  s.output.snapshots = {0, 0.2, 0.4, 0.6, 0.8, 1, 1.5, 2, 3};
  return s;
}

// The same triangle with shock initial data, set up so the two junction
// couplings (weighted vs. flux-maximizing) behave visibly differently.
Scenario make_comparison() {
  Scenario s = make_simple_network();
  s.name = "comparison";
  s.roads[0].ic = piecewise_ic({{0.0, 0.0}, {0.5, 0.0}, {0.5, 1.0}, {1.0, 1.0}});
  s.roads[1].ic = piecewise_ic({{1.0, 0.0}, {1.3, 0.0}, {1.5, 1.0}, {1.7, 0.0}, {2.0, 0.0}});
  s.roads[2].ic = piecewise_ic({{1.0, 1.0}, {1.5, 1.0}, {1.5, 0.0}, {2.0, 0.0}});
  s.junctions[1].right_of_way = 0.5;
  s.numerics.t_end = 20.0;
  s.output.snapshots = {0, 0.25, 0.5, 0.75, 1, 20};
  return s;
}

// Crossroads of two congested main roads and two light side roads, all
// looping back into the junction, run under a three-phase light cycle.
Scenario make_traffic_lights() {
  Scenario s;
  s.name = "traffic_lights";
  for (int id : {1, 2})
    s.roads.push_back(road(id, 0.0, 0.5, 75, 0.5, 2.0, junction_end(1), junction_end(1),
                           constant_ic(1.3)));
  for (int id : {3, 4}) {
    RoadSpec r = road(id, 0.0, 0.4, 60, 0.5, 1.0, junction_end(1), junction_end(1),
                      constant_ic(0.2));
    // Blend toward the junction's maximal density 2 on the end elements.
    ElementOverride first;
    first.position = ElementOverride::Position::First;
    first.rho_max = 1.5;
    ElementOverride last;
    last.position = ElementOverride::Position::Last;
    last.rho_max = 1.5;
    r.overrides = {first, last};
    s.roads.push_back(std::move(r));
  }
  JunctionSpec j;
  j.id = 1;
  j.incoming = {1, 2, 3, 4};
  j.outgoing = {1, 2, 3, 4};
  j.matrix = Matrix(4, 4);
  j.matrix << 0.0, 0.75, 0.4, 0.45,
              0.8, 0.0, 0.5, 0.4,
              0.1, 0.15, 0.0, 0.15,
              0.1, 0.1, 0.1, 0.0;
  j.all_red_gap = 0.05;
  s.junctions.push_back(std::move(j));

  PhaseSpec p1;
  p1.junction = 1;
  p1.duration = 1.0;
  p1.green = {{1, 2}, {1, 3}, {2, 1}, {2, 4}};
  PhaseSpec p2;
  p2.junction = 1;
  p2.duration = 0.5;
  p2.green = {{1, 4}, {2, 3}, {3, 2}, {4, 1}};
  PhaseSpec p3;
  p3.junction = 1;
  p3.duration = 0.5;
  p3.green = {{3, 1}, {3, 2}, {3, 4}, {4, 1}, {4, 2}, {4, 3}};
  s.phases = {p1, p2, p3};

  s.numerics = {1e-4, 4.3, 1, 0.0};
  s.output.snapshots = {0, 0.4, 0.8, 1.2, 1.6, 2};
  return s;
}

}  // namespace

std::vector<std::string> builtin_scenario_names() {
  return {"bottleneck", "simple_network", "comparison", "traffic_lights"};
}

bool is_builtin_scenario(const std::string& name) {
  const auto names = builtin_scenario_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

Scenario builtin_scenario(const std::string& name) {
  if (name == "bottleneck") return make_bottleneck();
  if (name == "simple_network") return make_simple_network();
  if (name == "comparison") return make_comparison();
  if (name == "traffic_lights") return make_traffic_lights();
  throw std::invalid_argument("unknown built-in scenario '" + name + "'");
}

std::string builtin_scenario_text(const std::string& name) {
  return canonical_text(builtin_scenario(name));
}

}  // namespace dgflow
