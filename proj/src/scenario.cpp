#include "dgflow/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace dgflow {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> tokens(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

double to_double(const std::string& tok, int line) {
  try {
    size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ScenarioError(line, "expected a number, got '" + tok + "'");
  }
}

long to_long(const std::string& tok, int line) {
  try {
    size_t pos = 0;
    const long v = std::stol(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ScenarioError(line, "expected an integer, got '" + tok + "'");
  }
}

int to_int(const std::string& tok, int line) { return static_cast<int>(to_long(tok, line)); }

Matrix parse_matrix(const std::string& value, int line) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(value);
  std::string row;
  while (std::getline(in, row, ';')) {
    std::vector<double> r;
    for (const std::string& t : tokens(row)) r.push_back(to_double(t, line));
    if (r.empty()) throw ScenarioError(line, "empty matrix row");
    rows.push_back(std::move(r));
  }
  if (rows.empty()) throw ScenarioError(line, "empty matrix");
  const size_t cols = rows.front().size();
  for (const auto& r : rows)
    if (r.size() != cols) throw ScenarioError(line, "matrix rows differ in length");
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(cols));
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < cols; ++j)
      m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  return m;
}

std::vector<std::pair<double, double>> parse_breakpoints(const std::string& v, int line) {
  std::vector<std::pair<double, double>> bps;
  size_t i = 0;
  const auto skip_ws = [&] {
    while (i < v.size() && std::isspace(static_cast<unsigned char>(v[i]))) ++i;
  };
  skip_ws();
  while (i < v.size()) {
    if (v[i] != '(') throw ScenarioError(line, "expected '(' in breakpoint list");
    const size_t comma = v.find(',', i + 1);
    const size_t close = v.find(')', i + 1);
    if (comma == std::string::npos || close == std::string::npos || comma > close)
      throw ScenarioError(line, "malformed breakpoint, expected '(x,density)'");
    const double x = to_double(trim(v.substr(i + 1, comma - i - 1)), line);
    const double val = to_double(trim(v.substr(comma + 1, close - comma - 1)), line);
    bps.emplace_back(x, val);
    i = close + 1;
    skip_ws();
  }
  if (bps.size() < 2)
    throw ScenarioError(line, "breakpoint list needs at least two points");
  return bps;
}

InitialConditionSpec parse_ic(const std::string& value, int line) {
  const auto toks = tokens(value);
  InitialConditionSpec ic;
  if (!toks.empty() && toks[0] == "constant") {
    if (toks.size() != 2)
      throw ScenarioError(line, "expected 'constant <density>'");
    ic.kind = InitialConditionSpec::Kind::Constant;
    ic.value = to_double(toks[1], line);
  } else {
    ic.kind = InitialConditionSpec::Kind::Piecewise;
    ic.breakpoints = parse_breakpoints(value, line);
  }
  return ic;
}

InflowSignal parse_inflow(const std::string& value, int line) {
  const auto toks = tokens(value);
  InflowSignal sig;
  if (!toks.empty() && toks[0] == "constant" && toks.size() == 2) {
    sig.kind = InflowSignal::Kind::Constant;
    sig.value = to_double(toks[1], line);
  } else if (!toks.empty() && toks[0] == "sin" && toks.size() == 5) {
    sig.kind = InflowSignal::Kind::Sinusoid;
    sig.amplitude = to_double(toks[1], line);
    sig.period = to_double(toks[2], line);
    sig.phase = to_double(toks[3], line);
    sig.offset = to_double(toks[4], line);
  } else {
    throw ScenarioError(
        line, "expected 'constant <density>' or 'sin <amplitude> <period> <phase> <offset>'");
  }
  return sig;
}

RoadEndSpec parse_end(const std::string& value, bool is_left, int line) {
  const auto toks = tokens(value);
  RoadEndSpec end;
  if (toks.size() == 2 && toks[0] == "junction") {
    end.kind = RoadEndSpec::Kind::Junction;
    end.junction = to_int(toks[1], line);
  } else if (toks.size() == 1 && is_left && toks[0] == "inflow") {
    end.kind = RoadEndSpec::Kind::Inflow;
  } else if (toks.size() == 1 && !is_left && toks[0] == "outflow") {
    end.kind = RoadEndSpec::Kind::Outflow;
  } else {
    throw ScenarioError(line, is_left
                                  ? "left end must be 'inflow' or 'junction <id>'"
                                  : "right end must be 'outflow' or 'junction <id>'");
  }
  return end;
}

ElementOverride parse_override(const std::string& value, int line) {
  const auto toks = tokens(value);
  if (toks.size() != 3)
    throw ScenarioError(line, "expected 'element = <first|last|index> <v_max|rho_max> <value>'");
  ElementOverride o;
  if (toks[0] == "first") {
    o.position = ElementOverride::Position::First;
  } else if (toks[0] == "last") {
    o.position = ElementOverride::Position::Last;
  } else {
    o.position = ElementOverride::Position::Indexed;
    o.index = to_long(toks[0], line);
  }
  const double v = to_double(toks[2], line);
  if (toks[1] == "v_max") {
    o.v_max = v;
  } else if (toks[1] == "rho_max") {
    o.rho_max = v;
  } else {
    throw ScenarioError(line, "element override field must be 'v_max' or 'rho_max'");
  }
  return o;
}

std::vector<std::pair<int, int>> parse_green(const std::string& value, int line) {
  std::vector<std::pair<int, int>> green;
  for (const std::string& t : tokens(value)) {
    const size_t gt = t.find('>');
    if (gt == std::string::npos || gt == 0 || gt + 1 == t.size())
      throw ScenarioError(line, "green direction must look like '<in-road>><out-road>'");
    green.emplace_back(to_int(t.substr(0, gt), line), to_int(t.substr(gt + 1), line));
  }
  if (green.empty()) throw ScenarioError(line, "empty green-direction list");
  return green;
}

enum class Section { Top, Road, Junction, Phase, Numerics, Output };

struct Parser {
  Scenario s;
  Section section = Section::Top;
  int section_line = 0;
  std::set<std::string> seen;
  bool have_numerics = false, have_output = false;

  void require(const char* key, int line) const {
    if (!seen.count(key))
      throw ScenarioError(section_line > 0 ? section_line : line,
                          std::string("section is missing '") + key + "'");
  }

  void finish_section(int line) {
    switch (section) {
      case Section::Road:
        for (const char* k : {"id", "from", "to", "elements", "v_max", "rho_max",
                              "left", "right", "ic"})
          require(k, line);
        break;
      case Section::Junction:
        for (const char* k : {"id", "incoming", "outgoing", "matrix"}) require(k, line);
        break;
      case Section::Phase:
        for (const char* k : {"junction", "duration", "green"}) require(k, line);
        break;
      case Section::Numerics:
        for (const char* k : {"tau", "t_end"}) require(k, line);
        break;
      default:
        break;
    }
    seen.clear();
  }

  void open_section(const std::string& name, int line) {
    finish_section(line);
    section_line = line;
    if (name == "road") {
      section = Section::Road;
      s.roads.emplace_back();
    } else if (name == "junction") {
      section = Section::Junction;
      s.junctions.emplace_back();
    } else if (name == "phase") {
      section = Section::Phase;
      s.phases.emplace_back();
    } else if (name == "numerics") {
      if (have_numerics) throw ScenarioError(line, "duplicate [numerics] section");
      have_numerics = true;
      section = Section::Numerics;
    } else if (name == "output") {
      if (have_output) throw ScenarioError(line, "duplicate [output] section");
      have_output = true;
      section = Section::Output;
    } else {
      throw ScenarioError(line, "unknown section [" + name + "]");
    }
  }

  void handle(const std::string& key, const std::string& value, int line) {
    if (key.empty()) throw ScenarioError(line, "missing key before '='");
    if (!seen.insert(key).second && key != "element")
      throw ScenarioError(line, "duplicate key '" + key + "'");
    switch (section) {
      case Section::Top: top(key, value, line); break;
      case Section::Road: road(key, value, line); break;
      case Section::Junction: junction(key, value, line); break;
      case Section::Phase: phase(key, value, line); break;
      case Section::Numerics: numerics(key, value, line); break;
      case Section::Output: output(key, value, line); break;
    }
  }

  void top(const std::string& key, const std::string& value, int line) {
    if (key == "format") {
      s.format = to_int(value, line);
      if (s.format != 1) throw ScenarioError(line, "unsupported format " + value);
    } else if (key == "name") {
      s.name = value;
    } else {
      throw ScenarioError(line, "key '" + key + "' must appear inside a section");
    }
  }

  void road(const std::string& key, const std::string& value, int line) {
    RoadSpec& r = s.roads.back();
    if (key == "id") r.id = to_int(value, line);
    else if (key == "from") r.from = to_double(value, line);
    else if (key == "to") r.to = to_double(value, line);
    else if (key == "elements") r.elements = to_long(value, line);
    else if (key == "model") {
      if (value == "greenshields") r.model = DiagramKind::Greenshields;
      else if (value == "greenberg") r.model = DiagramKind::Greenberg;
      else throw ScenarioError(line, "model must be 'greenshields' or 'greenberg'");
    }
    else if (key == "v_max") r.v_max = to_double(value, line);
    else if (key == "rho_max") r.rho_max = to_double(value, line);
    else if (key == "element") r.overrides.push_back(parse_override(value, line));
    else if (key == "left") r.left = parse_end(value, true, line);
    else if (key == "right") r.right = parse_end(value, false, line);
    else if (key == "ic") r.ic = parse_ic(value, line);
    else if (key == "inflow") r.inflow = parse_inflow(value, line);
    else throw ScenarioError(line, "unknown key '" + key + "' in [road]");
  }

  void junction(const std::string& key, const std::string& value, int line) {
    JunctionSpec& j = s.junctions.back();
    if (key == "id") j.id = to_int(value, line);
    else if (key == "incoming" || key == "outgoing") {
      std::vector<int> ids;
      for (const std::string& t : tokens(value)) ids.push_back(to_int(t, line));
      if (ids.empty()) throw ScenarioError(line, "empty road list for '" + key + "'");
      (key == "incoming" ? j.incoming : j.outgoing) = std::move(ids);
    }
    else if (key == "matrix") j.matrix = parse_matrix(value, line);
    else if (key == "flux") {
      if (value == "weighted") j.flux = FluxStrategy::Weighted;
      else if (value == "maxflux") j.flux = FluxStrategy::MaxFlux;
      else throw ScenarioError(line, "flux must be 'weighted' or 'maxflux'");
    }
    else if (key == "right_of_way") j.right_of_way = to_double(value, line);
    else if (key == "all_red_gap") j.all_red_gap = to_double(value, line);
    else throw ScenarioError(line, "unknown key '" + key + "' in [junction]");
  }

  void phase(const std::string& key, const std::string& value, int line) {
    PhaseSpec& p = s.phases.back();
    if (key == "junction") p.junction = to_int(value, line);
    else if (key == "duration") p.duration = to_double(value, line);
    else if (key == "green") p.green = parse_green(value, line);
    else throw ScenarioError(line, "unknown key '" + key + "' in [phase]");
  }

  void numerics(const std::string& key, const std::string& value, int line) {
    NumericsSpec& n = s.numerics;
    if (key == "tau") n.tau = to_double(value, line);
    else if (key == "t_end") n.t_end = to_double(value, line);
    else if (key == "degree") n.degree = to_long(value, line);
    else if (key == "tvb_m") n.tvb_m = to_double(value, line);
    else throw ScenarioError(line, "unknown key '" + key + "' in [numerics]");
  }

  void output(const std::string& key, const std::string& value, int line) {
    OutputSpec& o = s.output;
    if (key == "directory") {
      if (value.empty()) throw ScenarioError(line, "empty output directory");
      o.directory = value;
    } else if (key == "snapshots") {
      o.snapshots.clear();
      for (const std::string& t : tokens(value)) o.snapshots.push_back(to_double(t, line));
    } else {
      throw ScenarioError(line, "unknown key '" + key + "' in [output]");
    }
  }
};

}  // namespace

double InitialConditionSpec::at(double x) const {
  if (kind == Kind::Constant) return value;
  const auto& b = breakpoints;
  if (b.empty()) return 0.0;
  if (x <= b.front().first) return b.front().second;
  if (x >= b.back().first) return b.back().second;
  // Last breakpoint at or left of x; ties pick the latest entry, which makes
  // the profile right-continuous across jumps (repeated x).
  size_t i = 0;
  for (size_t k = 1; k < b.size(); ++k)
    if (b[k].first <= x) i = k;
  const double x0 = b[i].first, y0 = b[i].second;
  const double x1 = b[i + 1].first, y1 = b[i + 1].second;
  return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
}

Scenario parse_scenario(const std::string& text) {
  Parser p;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  bool any_content = false;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string ln = raw;
    const auto hash = ln.find('#');
    if (hash != std::string::npos) ln.erase(hash);
    ln = trim(ln);
    if (ln.empty()) continue;
    any_content = true;
    if (ln.front() == '[') {
      if (ln.back() != ']')
        throw ScenarioError(line_no, "unterminated section header");
      p.open_section(trim(ln.substr(1, ln.size() - 2)), line_no);
      continue;
    }
    const auto eq = ln.find('=');
    if (eq == std::string::npos)
      throw ScenarioError(line_no, "expected 'key = value' or a [section] header");
    p.handle(trim(ln.substr(0, eq)), trim(ln.substr(eq + 1)), line_no);
  }
  if (!any_content) throw ScenarioError(1, "empty scenario file");
  p.finish_section(line_no);

  const auto problems = validate_scenario(p.s);
  if (!problems.empty()) {
    std::string msg = problems.front();
    for (size_t k = 1; k < problems.size(); ++k) msg += "; " + problems[k];
    throw ScenarioError(0, msg);
  }
  return p.s;
}

namespace {

std::string end_str(const RoadEndSpec& e) {
  switch (e.kind) {
    case RoadEndSpec::Kind::Junction: return "junction " + std::to_string(e.junction);
    case RoadEndSpec::Kind::Inflow: return "inflow";
    default: return "outflow";
  }
}

std::string ic_str(const InitialConditionSpec& ic) {
  if (ic.kind == InitialConditionSpec::Kind::Constant) return "constant " + num(ic.value);
  std::string out;
  for (size_t i = 0; i < ic.breakpoints.size(); ++i) {
    if (i) out += ' ';
    out += '(' + num(ic.breakpoints[i].first) + ',' + num(ic.breakpoints[i].second) + ')';
  }
  return out;
}

std::string inflow_str(const InflowSignal& sig) {
  if (sig.kind == InflowSignal::Kind::Constant) return "constant " + num(sig.value);
  return "sin " + num(sig.amplitude) + ' ' + num(sig.period) + ' ' + num(sig.phase) + ' ' +
         num(sig.offset);
}

std::string matrix_str(const Matrix& m) {
  std::string out;
  for (Index i = 0; i < m.rows(); ++i) {
    if (i) out += " ; ";
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out += ' ';
      out += num(m(i, j));
    }
  }
  return out;
}

}  // namespace

std::string canonical_text(const Scenario& s) {
  std::string out;
  const auto line = [&out](const std::string& l) {
    out += l;
    out += '\n';
  };
  line("format = " + std::to_string(s.format));
  line("name = " + s.name);
  for (const RoadSpec& r : s.roads) {
    line("");
    line("[road]");
    line("id = " + std::to_string(r.id));
    line("from = " + num(r.from));
    line("to = " + num(r.to));
    line("elements = " + std::to_string(r.elements));
    line(std::string("model = ") +
         (r.model == DiagramKind::Greenberg ? "greenberg" : "greenshields"));
    line("v_max = " + num(r.v_max));
    line("rho_max = " + num(r.rho_max));
    for (const ElementOverride& o : r.overrides) {
      const std::string pos = o.position == ElementOverride::Position::First ? "first"
                              : o.position == ElementOverride::Position::Last
                                  ? "last"
                                  : std::to_string(o.index);
      if (o.v_max) line("element = " + pos + " v_max " + num(*o.v_max));
      if (o.rho_max) line("element = " + pos + " rho_max " + num(*o.rho_max));
    }
    line("left = " + end_str(r.left));
    line("right = " + end_str(r.right));
    line("ic = " + ic_str(r.ic));
    if (r.inflow) line("inflow = " + inflow_str(*r.inflow));
  }
  for (const JunctionSpec& j : s.junctions) {
    line("");
    line("[junction]");
    line("id = " + std::to_string(j.id));
    std::string in, outg;
    for (int id : j.incoming) in += (in.empty() ? "" : " ") + std::to_string(id);
    for (int id : j.outgoing) outg += (outg.empty() ? "" : " ") + std::to_string(id);
    line("incoming = " + in);
    line("outgoing = " + outg);
    line("matrix = " + matrix_str(j.matrix));
    line(std::string("flux = ") +
         (j.flux == FluxStrategy::MaxFlux ? "maxflux" : "weighted"));
    if (j.right_of_way) line("right_of_way = " + num(*j.right_of_way));
    line("all_red_gap = " + num(j.all_red_gap));
  }
  for (const PhaseSpec& p : s.phases) {
    line("");
    line("[phase]");
    line("junction = " + std::to_string(p.junction));
    line("duration = " + num(p.duration));
    std::string green;
    for (const auto& [a, b] : p.green)
      green += (green.empty() ? "" : " ") + std::to_string(a) + '>' + std::to_string(b);
    line("green = " + green);
  }
  line("");
  line("[numerics]");
  line("tau = " + num(s.numerics.tau));
  line("t_end = " + num(s.numerics.t_end));
  line("degree = " + std::to_string(s.numerics.degree));
  line("tvb_m = " + num(s.numerics.tvb_m));
  line("");
  line("[output]");
  line("directory = " + s.output.directory);
  std::string snaps;
  for (double t : s.output.snapshots) snaps += (snaps.empty() ? "" : " ") + num(t);
  line("snapshots = " + snaps);
  return out;
}

Network build_network(const Scenario& s) {
  Network net;
  for (const RoadSpec& r : s.roads) {
    Road road;
    road.id = r.id;
    road.a = r.from;
    road.b = r.to;
    road.n_elements = r.elements;
    road.diagram = FundamentalDiagram{r.model, DiagramParams{r.v_max, r.rho_max}};
    if (!r.overrides.empty()) {
      road.per_element.assign(static_cast<size_t>(r.elements), road.diagram.params);
      for (const ElementOverride& o : r.overrides) {
        const Index k = o.position == ElementOverride::Position::First ? 0
                        : o.position == ElementOverride::Position::Last ? r.elements - 1
                                                                        : o.index;
        if (o.v_max) road.per_element[static_cast<size_t>(k)].v_max = *o.v_max;
        if (o.rho_max) road.per_element[static_cast<size_t>(k)].rho_max = *o.rho_max;
      }
    }
    road.left = r.left.kind == RoadEndSpec::Kind::Junction
                    ? RoadEnd{RoadEnd::Kind::Junction, r.left.junction}
                    : RoadEnd{RoadEnd::Kind::Inflow, r.id};
    road.right = r.right.kind == RoadEndSpec::Kind::Junction
                     ? RoadEnd{RoadEnd::Kind::Junction, r.right.junction}
                     : RoadEnd{RoadEnd::Kind::Outflow, -1};
    net.roads.push_back(std::move(road));
  }
  for (const JunctionSpec& j : s.junctions) {
    Junction junc;
    junc.id = j.id;
    junc.incoming = j.incoming;
    junc.outgoing = j.outgoing;
    junc.matrix = j.matrix;
    junc.strategy = j.flux;
    junc.right_of_way = j.right_of_way;
    std::vector<LightPhase> phases;
    for (const PhaseSpec& p : s.phases) {
      if (p.junction != j.id) continue;
      Matrix mask = Matrix::Zero(static_cast<Index>(j.outgoing.size()),
                                 static_cast<Index>(j.incoming.size()));
      for (const auto& [in_id, out_id] : p.green) {
        const Index col = static_cast<Index>(
            std::find(j.incoming.begin(), j.incoming.end(), in_id) - j.incoming.begin());
        const Index row = static_cast<Index>(
            std::find(j.outgoing.begin(), j.outgoing.end(), out_id) - j.outgoing.begin());
        mask(row, col) = 1.0;
      }
      phases.push_back({std::move(mask), p.duration});
    }
    if (!phases.empty()) junc.lights = LightSchedule{std::move(phases), j.all_red_gap};
    net.junctions.push_back(std::move(junc));
  }
  return net;
}

std::vector<std::string> validate_scenario(const Scenario& s) {
  std::vector<std::string> out;
  const auto bad = [&out](const std::string& m) { out.push_back(m); };

  if (s.format != 1) bad("unsupported format " + std::to_string(s.format));
  if (s.roads.empty()) bad("scenario defines no roads");

  std::map<int, const RoadSpec*> roads;
  for (const RoadSpec& r : s.roads)
    if (!roads.emplace(r.id, &r).second)
      bad("duplicate road id " + std::to_string(r.id));
  std::map<int, const JunctionSpec*> juncs;
  for (const JunctionSpec& j : s.junctions)
    if (!juncs.emplace(j.id, &j).second)
      bad("duplicate junction id " + std::to_string(j.id));

  for (const RoadSpec& r : s.roads) {
    const std::string tag = "road " + std::to_string(r.id) + ": ";
    if (r.elements < 1) bad(tag + "needs at least one element");
    for (const ElementOverride& o : r.overrides)
      if (o.position == ElementOverride::Position::Indexed &&
          (o.index < 0 || o.index >= r.elements))
        bad(tag + "element override index " + std::to_string(o.index) + " out of range");
    if (r.left.kind == RoadEndSpec::Kind::Junction && !juncs.count(r.left.junction))
      bad(tag + "left end references unknown junction " + std::to_string(r.left.junction));
    if (r.right.kind == RoadEndSpec::Kind::Junction && !juncs.count(r.right.junction))
      bad(tag + "right end references unknown junction " + std::to_string(r.right.junction));
    if (r.left.kind == RoadEndSpec::Kind::Inflow && !r.inflow)
      bad(tag + "left end is an inflow but no inflow signal is given");
    if (r.left.kind != RoadEndSpec::Kind::Inflow && r.inflow)
      bad(tag + "has an inflow signal but its left end is not an inflow");
    if (r.ic.kind == InitialConditionSpec::Kind::Piecewise) {
      if (r.ic.breakpoints.size() < 2) bad(tag + "breakpoint list needs at least two points");
      for (size_t k = 1; k < r.ic.breakpoints.size(); ++k)
        if (r.ic.breakpoints[k].first < r.ic.breakpoints[k - 1].first) {
          bad(tag + "breakpoint positions must be nondecreasing");
          break;
        }
    }
  }

  for (const JunctionSpec& j : s.junctions) {
    const std::string tag = "junction " + std::to_string(j.id) + ": ";
    for (int id : j.incoming)
      if (!roads.count(id)) bad(tag + "unknown incoming road " + std::to_string(id));
    for (int id : j.outgoing)
      if (!roads.count(id)) bad(tag + "unknown outgoing road " + std::to_string(id));
    if (j.matrix.rows() != static_cast<Index>(j.outgoing.size()) ||
        j.matrix.cols() != static_cast<Index>(j.incoming.size()))
      bad(tag + "matrix must be (outgoing x incoming) = " +
          std::to_string(j.outgoing.size()) + "x" + std::to_string(j.incoming.size()));
  }

  for (const PhaseSpec& p : s.phases) {
    const std::string tag = "phase for junction " + std::to_string(p.junction) + ": ";
    const auto it = juncs.find(p.junction);
    if (it == juncs.end()) {
      bad(tag + "unknown junction");
      continue;
    }
    for (const auto& [in_id, out_id] : p.green) {
      const auto& in = it->second->incoming;
      const auto& outg = it->second->outgoing;
      if (std::find(in.begin(), in.end(), in_id) == in.end())
        bad(tag + "green direction from road " + std::to_string(in_id) +
            " which is not incoming");
      if (std::find(outg.begin(), outg.end(), out_id) == outg.end())
        bad(tag + "green direction to road " + std::to_string(out_id) +
            " which is not outgoing");
    }
  }

  if (!(s.numerics.tau > 0.0)) bad("numerics: tau must be positive");
  if (!(s.numerics.t_end > 0.0)) bad("numerics: t_end must be positive");
  if (s.numerics.degree < 0 || s.numerics.degree > 10)
    bad("numerics: degree must be between 0 and 10");
  if (s.numerics.tvb_m < 0.0) bad("numerics: tvb_m must be nonnegative");
  for (double t : s.output.snapshots)
    if (t < 0.0) bad("output: snapshot times must be nonnegative");
  if (s.output.directory.empty()) bad("output: directory must not be empty");

  if (!out.empty()) return out;

  const Network net = build_network(s);
  const ValidationReport report = validate(net);
  out.insert(out.end(), report.problems.begin(), report.problems.end());

  for (const RoadSpec& r : s.roads) {
    const std::string tag = "road " + std::to_string(r.id) + ": ";
    const Road* road = net.road_by_id(r.id);
    double cap = road->diagram.params.rho_max;
    for (Index k = 0; k < road->n_elements; ++k)
      cap = std::min(cap, element_diagram(*road, k).params.rho_max);

    std::vector<double> values;
    if (r.ic.kind == InitialConditionSpec::Kind::Constant) {
      values.push_back(r.ic.value);
    } else {
      for (const auto& [x, v] : r.ic.breakpoints) values.push_back(v);
    }
    for (double v : values)
      if (v < 0.0 || v > cap)
        bad(tag + "initial density " + num(v) + " outside [0, " + num(cap) + "]");

    if (r.inflow) {
      const double rho_cap = element_diagram(*road, 0).params.rho_max;
      if (r.inflow->kind == InflowSignal::Kind::Constant) {
        if (r.inflow->value < 0.0 || r.inflow->value > rho_cap)
          bad(tag + "inflow density outside [0, " + num(rho_cap) + "]");
      } else {
        if (!(r.inflow->period > 0.0)) bad(tag + "inflow period must be positive");
        const double lo = r.inflow->offset - std::abs(r.inflow->amplitude);
        const double hi = r.inflow->offset + std::abs(r.inflow->amplitude);
        if (lo < 0.0 || hi > rho_cap)
          bad(tag + "inflow density range [" + num(lo) + ", " + num(hi) +
              "] outside [0, " + num(rho_cap) + "]");
      }
    }
  }
  return out;
}

SimulationSetup make_setup(const Scenario& s) {
  const auto problems = validate_scenario(s);
  if (!problems.empty()) {
    std::string msg = "invalid scenario";
    if (!s.name.empty()) msg += " '" + s.name + "'";
    msg += ':';
    for (const std::string& p : problems) msg += "\n  " + p;
    throw std::invalid_argument(msg);
  }
  SimulationSetup setup;
  setup.network = build_network(s);
  for (const RoadSpec& r : s.roads) {
    if (r.inflow) setup.boundary.inflow[r.id] = *r.inflow;
    setup.initial_density[r.id] = [ic = r.ic](double x) { return ic.at(x); };
  }
  setup.numerics = NumericsConfig{s.numerics.tau, s.numerics.t_end, s.numerics.degree,
                                  s.numerics.tvb_m, 0};
  setup.snapshot_times = s.output.snapshots;
  return setup;
}

void apply_overrides(Scenario& s, const ScenarioOverrides& o) {
  if (o.tau) s.numerics.tau = *o.tau;
  if (o.t_end) s.numerics.t_end = *o.t_end;
  if (o.tvb_m) s.numerics.tvb_m = *o.tvb_m;
  if (o.flux)
    for (JunctionSpec& j : s.junctions) j.flux = *o.flux;
  if (o.right_of_way)
    for (JunctionSpec& j : s.junctions)
      if (j.incoming.size() == 2) j.right_of_way = *o.right_of_way;
  if (o.elements_per_unit)
    for (RoadSpec& r : s.roads)
      r.elements = std::max<Index>(
          1, static_cast<Index>(std::llround((r.to - r.from) * *o.elements_per_unit)));
  if (o.out_dir) s.output.directory = *o.out_dir;
  if (o.snapshots) s.output.snapshots = *o.snapshots;
}

}  // namespace dgflow
