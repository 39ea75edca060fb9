#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dgflow/diagram.hpp"
#include "dgflow/types.hpp"

namespace dgflow {

struct RoadEnd {
  enum class Kind { Junction, Inflow, Outflow };
  Kind kind = Kind::Outflow;
  int ref = -1;  // junction id or inflow-signal id; unused for Outflow
  friend bool operator==(const RoadEnd&, const RoadEnd&) = default;
};

/// Directed road segment on the interval [a, b], traffic moving from a to b.
struct Road {
  int id = 0;
  double a = 0.0, b = 1.0;
  Index n_elements = 1;
  FundamentalDiagram diagram;
  // Optional per-element overrides (empty or exactly n_elements entries);
  // used e.g. to blend differing maximal densities next to a junction.
  std::vector<DiagramParams> per_element;
  RoadEnd left;   // Junction or Inflow
  RoadEnd right;  // Junction or Outflow
};

FundamentalDiagram element_diagram(const Road& road, Index element);

struct LightPhase {
  Matrix mask;  // m x n, entries 0 or 1
  double duration = 0.0;
};

struct LightSchedule {
  std::vector<LightPhase> phases;
  double all_red_gap = 0.0;  // inserted after every phase
  double period() const;
};

enum class FluxStrategy { Weighted, MaxFlux };

struct Junction {
  int id = 0;
  std::vector<int> incoming;  // road ids ending here
  std::vector<int> outgoing;  // road ids starting here
  // Distribution matrix, rows = outgoing, columns = incoming; column sums 1.
  Matrix matrix;
  std::optional<LightSchedule> lights;
  FluxStrategy strategy = FluxStrategy::Weighted;
  std::optional<double> right_of_way;  // priority of incoming road 1, in (0,1)
};

struct Network {
  std::vector<Road> roads;
  std::vector<Junction> junctions;

  const Road* road_by_id(int id) const;
  const Junction* junction_by_id(int id) const;
};

struct ValidationReport {
  std::vector<std::string> problems;
  bool ok() const { return problems.empty(); }
};

ValidationReport validate(const Network& net);

/// Classification of a point in time against a light schedule.
struct ScheduleSegment {
  bool all_red = false;
  Index phase = 0;  // valid when !all_red
};

ScheduleSegment schedule_segment(const LightSchedule& schedule, double t);

/// Distribution matrix in effect at time t: the static matrix without lights,
/// otherwise the phase mask applied entrywise (no renormalization), or the
/// zero matrix during an all-red gap.
Matrix effective_matrix(const Junction& junction, double t);

}  // namespace dgflow
