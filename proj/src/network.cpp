#include "dgflow/network.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace dgflow {

FundamentalDiagram element_diagram(const Road& road, Index element) {
  if (road.per_element.empty()) return road.diagram;
  return {road.diagram.kind, road.per_element[static_cast<size_t>(element)]};
}

double LightSchedule::period() const {
  double p = 0.0;
  for (const auto& ph : phases) p += ph.duration + all_red_gap;
  return p;
}

const Road* Network::road_by_id(int id) const {
  for (const auto& r : roads)
    if (r.id == id) return &r;
  return nullptr;
}

const Junction* Network::junction_by_id(int id) const {
  for (const auto& j : junctions)
    if (j.id == id) return &j;
  return nullptr;
}

ScheduleSegment schedule_segment(const LightSchedule& schedule, double t) {
  double s = std::fmod(t, schedule.period());
  if (s < 0.0) s += schedule.period();
  for (Index k = 0; k < static_cast<Index>(schedule.phases.size()); ++k) {
    const auto& ph = schedule.phases[static_cast<size_t>(k)];
    if (s < ph.duration) return {false, k};
    s -= ph.duration;
    if (s < schedule.all_red_gap) return {true, k};
    s -= schedule.all_red_gap;
  }
  // Rounding fell just past the last gap; treat as that gap (or the first
  // phase when the schedule has no gaps).
  if (schedule.all_red_gap > 0.0)
    return {true, static_cast<Index>(schedule.phases.size()) - 1};
  return {false, 0};
}

Matrix effective_matrix(const Junction& junction, double t) {
  if (!junction.lights || junction.lights->phases.empty()) return junction.matrix;
  const ScheduleSegment seg = schedule_segment(*junction.lights, t);
  if (seg.all_red) return Matrix::Zero(junction.matrix.rows(), junction.matrix.cols());
  return junction.lights->phases[static_cast<size_t>(seg.phase)].mask.cwiseProduct(
      junction.matrix);
}

namespace {

constexpr double kColumnSumTol = 1e-12;

std::string road_label(const Road& r) { return "road " + std::to_string(r.id); }
std::string junction_label(const Junction& j) { return "junction " + std::to_string(j.id); }

std::string matrix_oneline(const Matrix& m) {
  std::ostringstream os;
  os << "[";
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      os << m(r, c);
      if (c + 1 < m.cols()) os << " ";
    }
    if (r + 1 < m.rows()) os << "; ";
  }
  os << "]";
  return os.str();
}

}  // namespace

ValidationReport validate(const Network& net) {
  ValidationReport rep;
  auto bad = [&rep](const std::string& msg) { rep.problems.push_back(msg); };

  std::set<int> road_ids;
  for (const auto& r : net.roads) {
    if (!road_ids.insert(r.id).second) bad(road_label(r) + ": duplicate road id");
    if (!(r.a < r.b)) bad(road_label(r) + ": interval must satisfy a < b");
    if (r.n_elements < 1) bad(road_label(r) + ": needs at least one element");
    if (!r.diagram.params.valid()) bad(road_label(r) + ": v_max and rho_max must be positive");
    if (!r.per_element.empty() &&
        static_cast<Index>(r.per_element.size()) != r.n_elements)
      bad(road_label(r) + ": per-element parameter list must match the element count");
    for (const auto& p : r.per_element)
      if (!p.valid()) {
        bad(road_label(r) + ": per-element v_max and rho_max must be positive");
        break;
      }
    if (r.left.kind == RoadEnd::Kind::Outflow)
      bad(road_label(r) + ": left end cannot be an outflow");
    if (r.right.kind == RoadEnd::Kind::Inflow)
      bad(road_label(r) + ": right end cannot be an inflow");
  }

  // How many junctions claim each road end.
  std::map<int, int> incoming_claims, outgoing_claims;

  std::set<int> junction_ids;
  for (const auto& j : net.junctions) {
    if (!junction_ids.insert(j.id).second) bad(junction_label(j) + ": duplicate junction id");
    if (j.incoming.empty() || j.outgoing.empty()) {
      bad(junction_label(j) + ": needs at least one incoming and one outgoing road");
      continue;
    }
    const Index n = static_cast<Index>(j.incoming.size());
    const Index m = static_cast<Index>(j.outgoing.size());
    if (j.matrix.rows() != m || j.matrix.cols() != n) {
      bad(junction_label(j) + ": distribution matrix must be " + std::to_string(m) + "x" +
          std::to_string(n));
      continue;
    }
    for (Index c = 0; c < n; ++c) {
      double sum = 0.0;
      for (Index r = 0; r < m; ++r) {
        const double v = j.matrix(r, c);
        if (!(v >= 0.0 && v <= 1.0))
          bad(junction_label(j) + ": matrix entries must lie in [0,1]");
        sum += v;
      }
      if (std::abs(sum - 1.0) > kColumnSumTol)
        bad(junction_label(j) + ": column " + std::to_string(c + 1) + " sums to " +
            std::to_string(sum) + ", expected 1");
    }

    for (int id : j.incoming) {
      incoming_claims[id]++;
      const Road* r = net.road_by_id(id);
      if (!r) {
        bad(junction_label(j) + ": incoming road " + std::to_string(id) + " does not exist");
      } else if (r->right.kind != RoadEnd::Kind::Junction || r->right.ref != j.id) {
        bad(junction_label(j) + ": incoming road " + std::to_string(id) +
            " does not end at this junction");
      }
    }
    for (int id : j.outgoing) {
      outgoing_claims[id]++;
      const Road* r = net.road_by_id(id);
      if (!r) {
        bad(junction_label(j) + ": outgoing road " + std::to_string(id) + " does not exist");
      } else if (r->left.kind != RoadEnd::Kind::Junction || r->left.ref != j.id) {
        bad(junction_label(j) + ": outgoing road " + std::to_string(id) +
            " does not start at this junction");
      }
    }

    if (j.lights) {
      if (j.lights->all_red_gap < 0.0) bad(junction_label(j) + ": all-red gap must be >= 0");
      if (j.lights->phases.empty()) bad(junction_label(j) + ": light schedule has no phases");
      for (const auto& ph : j.lights->phases) {
        if (!(ph.duration > 0.0)) bad(junction_label(j) + ": phase durations must be positive");
        if (ph.mask.rows() != m || ph.mask.cols() != n) {
          bad(junction_label(j) + ": phase mask must match the distribution matrix shape");
          continue;
        }
        for (Index r = 0; r < m; ++r)
          for (Index c = 0; c < n; ++c)
            if (ph.mask(r, c) != 0.0 && ph.mask(r, c) != 1.0) {
              bad(junction_label(j) + ": phase mask entries must be 0 or 1");
              r = m;
              break;
            }
      }
    }

    if (j.strategy == FluxStrategy::MaxFlux) {
      if (n > 2 || m > 2)
        bad(junction_label(j) + ": maxflux supports at most two incoming and two outgoing "
            "roads (general junctions need a linear program)");
      if (j.lights)
        bad(junction_label(j) + ": traffic lights are not supported under maxflux");
      bool positive = true;
      for (Index r = 0; r < j.matrix.rows(); ++r)
        for (Index c = 0; c < j.matrix.cols(); ++c)
          if (!(j.matrix(r, c) > 0.0)) positive = false;
      if (!positive)
        bad(junction_label(j) + ": maxflux needs strictly positive distribution entries");
      if (n == 2) {
        if (!j.right_of_way) {
          bad(junction_label(j) + ": distribution matrix " + matrix_oneline(j.matrix) +
              " does not determine maxflux fluxes for two competing incoming roads "
              "(condition (C) fails); a right-of-way parameter is required");
        } else if (!(*j.right_of_way > 0.0 && *j.right_of_way < 1.0)) {
          bad(junction_label(j) + ": right-of-way must lie strictly between 0 and 1");
        }
      }
    }
  }

  for (const auto& [id, count] : incoming_claims)
    if (count > 1) bad("road " + std::to_string(id) + " is incoming for more than one junction");
  for (const auto& [id, count] : outgoing_claims)
    if (count > 1) bad("road " + std::to_string(id) + " is outgoing for more than one junction");

  // Every road must be attached consistently: a junction end has to be claimed
  // by that junction, and a road with no junction at all needs boundary roles
  // on both ends (which its end kinds already guarantee).
  for (const auto& r : net.roads) {
    if (r.left.kind == RoadEnd::Kind::Junction) {
      const Junction* j = net.junction_by_id(r.left.ref);
      if (!j || std::count(j->outgoing.begin(), j->outgoing.end(), r.id) == 0)
        bad(road_label(r) + ": left end names junction " + std::to_string(r.left.ref) +
            " which does not list it as outgoing");
    }
    if (r.right.kind == RoadEnd::Kind::Junction) {
      const Junction* j = net.junction_by_id(r.right.ref);
      if (!j || std::count(j->incoming.begin(), j->incoming.end(), r.id) == 0)
        bad(road_label(r) + ": right end names junction " + std::to_string(r.right.ref) +
            " which does not list it as incoming");
    }
  }

  return rep;
}

}  // namespace dgflow
