#include "dirichlet/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "dirichlet/error.hpp"
#include "dirichlet/inner_analytic.hpp"
#include "dirichlet/schwarz_christoffel.hpp"
#include "dirichlet/solver.hpp"
#include "dirichlet/verify.hpp"

namespace dirichlet {

using cplx = std::complex<double>;

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::ScenarioError, what); }

void only_keys(const YAML::Node& node, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!node.IsMap()) fail(where + " must be a mapping");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!ok.count(key)) fail("unknown key '" + key + "' in " + where);
  }
}

template <class T>
T scalar(const YAML::Node& node, const std::string& what) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    fail("bad value for " + what);
  }
}

cplx point(const YAML::Node& node, const std::string& what) {
  if (!node.IsSequence() || node.size() != 2) fail(what + " must be a pair [x, y]");
  return {scalar<double>(node[0], what), scalar<double>(node[1], what)};
}

std::vector<cplx> points(const YAML::Node& node, const std::string& what) {
  if (!node.IsSequence()) fail(what + " must be a list of [x, y] pairs");
  std::vector<cplx> out;
  for (const auto& p : node) out.push_back(point(p, what));
  return out;
}

template <class T>
std::vector<T> list(const YAML::Node& node, const std::string& what) {
  if (!node.IsSequence()) fail(what + " must be a list");
  std::vector<T> out;
  for (const auto& v : node) out.push_back(scalar<T>(v, what));
  return out;
}

SingularityAnnotation annotation(const YAML::Node& node) {
  only_keys(node, "annotation", {"position", "kind", "degree", "diverges"});
  if (!node["position"] || !node["kind"]) fail("annotation needs position and kind");
  const double position = scalar<double>(node["position"], "annotation position");
  const auto kind = scalar<std::string>(node["kind"], "annotation kind");
  std::optional<int> degree;
  if (node["degree"] && !(node["degree"].IsScalar() && node["degree"].Scalar() == "infinite"))
    degree = scalar<int>(node["degree"], "annotation degree");
  const bool diverges = node["diverges"] ? scalar<bool>(node["diverges"], "annotation diverges") : true;
  if (kind == "jump") return SingularityAnnotation::jump(position);
  if (kind == "soft") return SingularityAnnotation::soft(position);
  if (kind == "borderline") return SingularityAnnotation::borderline(position, diverges);
  if (kind == "hard") {
    if (!node["degree"]) fail("hard annotation needs a degree (an integer or 'infinite')");
    return SingularityAnnotation::hard(position, degree, diverges);
  }
  fail("unknown annotation kind '" + kind + "'");
}

DomainSpec domain(const YAML::Node& node) {
  DomainSpec d;
  if (node.IsScalar()) {
    const auto name = node.as<std::string>();
    if (name == "disk") return d;
    if (name != "identity" && name != "cardioid") fail("unknown domain '" + name + "'");
    d.kind = DomainSpec::Kind::Map;
    d.map = name;
    return d;
  }
  if (!node.IsMap()) fail("domain must be a name or a mapping");
  if (node["polygon"]) {
    only_keys(node, "domain", {"polygon"});
    d.kind = DomainSpec::Kind::Polygon;
    d.vertices = points(node["polygon"], "polygon");
    return d;
  }
  if (!node["map"]) fail("domain mapping needs 'map' or 'polygon'");
  d.kind = DomainSpec::Kind::Map;
  d.map = scalar<std::string>(node["map"], "map");
  if (d.map == "mobius") {
    only_keys(node, "domain", {"map", "a", "phi"});
    if (node["a"]) d.mobius_a = point(node["a"], "mobius a");
    if (node["phi"]) d.mobius_phi = scalar<double>(node["phi"], "mobius phi");
  } else if (d.map == "perturbed") {
    only_keys(node, "domain", {"map", "eps"});
    if (!node["eps"]) fail("perturbed map needs eps");
    d.perturbed_eps = scalar<double>(node["eps"], "perturbed eps");
  } else if (d.map == "identity" || d.map == "cardioid") {
    only_keys(node, "domain", {"map"});
  } else {
    fail("unknown map '" + d.map + "'");
  }
  return d;
}

BoundarySpec boundary(const YAML::Node& node) {
  only_keys(node, "boundary", {"builtin", "params", "expression", "period", "annotations"});
  BoundarySpec b;
  if (node["builtin"].IsDefined() == node["expression"].IsDefined())
    fail("boundary needs exactly one of 'builtin' and 'expression'");
  if (node["builtin"]) b.builtin = scalar<std::string>(node["builtin"], "builtin");
  if (node["expression"]) b.expression = scalar<std::string>(node["expression"], "expression");
  if (node["params"]) b.params = list<double>(node["params"], "params");
  if (node["period"]) b.period = scalar<double>(node["period"], "period");
  if (node["annotations"]) {
    if (!node["annotations"].IsSequence()) fail("annotations must be a list");
    for (const auto& a : node["annotations"]) b.annotations.push_back(annotation(a));
  }
  return b;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string DomainSpec::describe() const {
  switch (kind) {
    case Kind::Disk:
      return "disk";
    case Kind::Polygon: {
      std::string out = "polygon";
      for (const cplx& v : vertices) out += " (" + fmt(v.real()) + ", " + fmt(v.imag()) + ")";
      return out;
    }
    case Kind::Map:
      if (map == "mobius")
        return "mobius(a=(" + fmt(mobius_a.real()) + ", " + fmt(mobius_a.imag()) + "), phi=" + fmt(mobius_phi) + ")";
      if (map == "perturbed") return "perturbed(eps=" + fmt(perturbed_eps) + ")";
      return map;
  }
  return map;
}

Scenario parse_scenario(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    fail(std::string("YAML: ") + e.what());
  }
  only_keys(root, "scenario", {"name", "problem", "solver", "outputs", "verify", "classify", "chain"});
  Scenario s;
  if (root["name"]) s.name = scalar<std::string>(root["name"], "name");

  const YAML::Node problem = root["problem"];
  if (!problem) fail("scenario needs a 'problem' block");
  only_keys(problem, "problem", {"domain", "boundary"});
  if (problem["domain"]) s.domain = domain(problem["domain"]);
  if (!problem["boundary"]) fail("problem needs a 'boundary' block");
  s.boundary = boundary(problem["boundary"]);

  if (const YAML::Node n = root["solver"]) {
    only_keys(n, "solver", {"K", "rel_tol", "max_depth", "correspondence_grid", "polygon_tol"});
    if (n["K"]) s.harmonics = scalar<int>(n["K"], "K");
    if (n["rel_tol"]) s.quadrature.rel_tol = scalar<double>(n["rel_tol"], "rel_tol");
    if (n["max_depth"]) s.quadrature.max_depth = scalar<int>(n["max_depth"], "max_depth");
    if (n["correspondence_grid"]) s.correspondence_grid = scalar<int>(n["correspondence_grid"], "correspondence_grid");
    if (n["polygon_tol"]) s.polygon_tol = scalar<double>(n["polygon_tol"], "polygon_tol");
  }
  if (const YAML::Node n = root["outputs"]) {
    only_keys(n, "outputs", {"grid", "format", "grid_path", "report_path", "probes"});
    if (n["grid"]) s.grid = scalar<int>(n["grid"], "grid");
    if (n["format"]) {
      const auto f = scalar<std::string>(n["format"], "format");
      if (f != "text" && f != "key-values") fail("format must be 'text' or 'key-values'");
      s.key_values = f == "key-values";
    }
    if (n["grid_path"]) s.grid_path = scalar<std::string>(n["grid_path"], "grid_path");
    if (n["report_path"]) s.report_path = scalar<std::string>(n["report_path"], "report_path");
    if (n["probes"]) s.probes = points(n["probes"], "probes");
  }
  if (const YAML::Node n = root["verify"]) {
    only_keys(n, "verify", {"seed"});
    if (n["seed"]) s.seed = scalar<std::uint64_t>(n["seed"], "seed");
  }
  if (const YAML::Node n = root["classify"]) {
    only_keys(n, "classify", {"K", "positions"});
    if (n["K"]) s.classify_harmonics = scalar<int>(n["K"], "classify K");
    if (n["positions"]) s.classify_positions = list<double>(n["positions"], "classify positions");
  }
  if (const YAML::Node n = root["chain"]) {
    only_keys(n, "chain", {"levels", "count"});
    if (n["levels"]) s.chain_levels = list<int>(n["levels"], "chain levels");
    if (n["count"]) s.chain_count = scalar<int>(n["count"], "chain count");
  }

  if (s.grid < 2) fail("grid resolution must be at least 2");
  if (s.harmonics < 1 || s.classify_harmonics < 1) fail("K must be positive");
  if (s.chain_count < 1) fail("chain count must be positive");
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

ConformalMap build_map(const Scenario& s) {
  const DomainSpec& d = s.domain;
  if (d.kind == DomainSpec::Kind::Polygon) return schwarz_christoffel(Polygon::from_vertices(d.vertices), s.polygon_tol);
  if (d.kind == DomainSpec::Kind::Disk || d.map == "identity") return map_identity();
  if (d.map == "cardioid") return map_cardioid();
  if (d.map == "mobius") return map_mobius(d.mobius_a, d.mobius_phi);
  if (d.map == "perturbed") return map_perturbed(d.perturbed_eps);
  fail("unknown map '" + d.map + "'");
}

BoundaryFunction build_boundary(const BoundarySpec& spec, double period) {
  if (!spec.expression.empty()) {
    const double p = spec.period.value_or(period);
    if (std::abs(p - period) > 1e-9 * period)
      fail("expression period " + fmt(p) + " does not match the boundary length " + fmt(period));
    return expression(spec.expression, period, spec.annotations);
  }
  BoundaryFunction f = builtin(spec.builtin, spec.params);
  if (!spec.annotations.empty()) f = f.with_annotations(spec.annotations, f.description());
  return std::abs(period - kTwoPi) > 1e-12 * kTwoPi ? rescale_period(f, period) : f;
}

int exit_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::ScenarioError:
    case ErrorCode::UnknownBuiltin:
    case ErrorCode::BadParams:
    case ErrorCode::BadParameter:
    case ErrorCode::ExpressionSyntax:
    case ErrorCode::InvalidPolygon:
      return 1;
    case ErrorCode::ValidationFailed:
      return 2;
    default:
      return 3;
  }
}

namespace {

struct Solved {
  std::optional<DiskSolution> disk;
  std::optional<CurveSolution> curve;

  const DiskSolution& on_disk() const { return curve ? curve->disk : *disk; }
};

SolverOptions options(const Scenario& s, int harmonics) {
  SolverOptions o;
  o.harmonics = harmonics;
  o.quadrature = s.quadrature;
  o.correspondence_grid = s.correspondence_grid;
  return o;
}

Solved solve(const Scenario& s, int harmonics) {
  Solved out;
  if (s.domain.kind == DomainSpec::Kind::Disk) {
    out.disk = solve_disk(build_boundary(s.boundary, kTwoPi), options(s, harmonics));
    return out;
  }
  const ConformalMap map = build_map(s);
  const double length = correspondence(map, s.correspondence_grid).total_length();
  out.curve = solve_curve(build_boundary(s.boundary, length), map, options(s, harmonics));
  return out;
}

void metadata(std::ostream& o, const Scenario& s, const Solved& sol) {
  const DiskSolution& d = sol.on_disk();
  o << "# scenario: " << s.name << "\n";
  o << "# domain: " << s.domain.describe() << "\n";
  o << "# boundary: " << (sol.curve ? sol.curve->boundary.description() : d.boundary.description()) << "\n";
  o << "# theorem: " << d.meta.theorem << "\n";
  o << "# harmonics: " << d.meta.harmonics << "\n";
  o << "# rel_tol: " << fmt(d.meta.rel_tol) << "\n";
  o << "# pipeline_depth: " << d.meta.pipeline_depth << "\n";
  if (sol.curve) {
    const auto& c = sol.curve->correspondence;
    o << "# map: " << sol.curve->map.label() << "\n";
    o << "# total_length: " << fmt(c.total_length()) << "\n";
    o << "# corner_prevertices:";
    for (double t : c.corner_angles()) o << " " << fmt(t);
    o << "\n";
  }
}

std::ostream& target(const std::string& path, std::ofstream& file, std::ostream& fallback) {
  if (path.empty()) return fallback;
  file.open(path);
  if (!file) throw Error(ErrorCode::ScenarioError, "cannot write " + path);
  return file;
}

int cmd_solve(const Scenario& s, std::ostream& out) {
  const Solved sol = solve(s, s.harmonics);
  std::ofstream file;
  std::ostream& o = target(s.grid_path, file, out);
  o << "# dirichlet solve\n";
  metadata(o, s, sol);
  o << "# grid: " << s.grid << "x" << s.grid << "\n";

  double x0 = -1, x1 = 1, y0 = -1, y1 = 1;
  if (sol.curve) {
    x0 = y0 = std::numeric_limits<double>::infinity();
    x1 = y1 = -x0;
    for (const cplx& p : sol.curve->outline) {
      x0 = std::min(x0, p.real());
      x1 = std::max(x1, p.real());
      y0 = std::min(y0, p.imag());
      y1 = std::max(y1, p.imag());
    }
  }
  auto inside = [&](cplx p) { return sol.curve ? sol.curve->inside(p) : std::abs(p) < 1.0; };
  auto value = [&](cplx p) { return sol.curve ? evaluate_solution(*sol.curve, p) : evaluate_solution(*sol.disk, p); };
  auto row = [&](cplx p) {
    o << fmt(p.real()) << "," << fmt(p.imag()) << ",";
    if (inside(p)) {
      try {
        o << fmt(value(p));
      } catch (const Error& e) {
        // Outline points count as inside the polygonal approximation.
        if (e.code() != ErrorCode::OutsideDomain) throw;
      }
    }
    o << "\n";
  };
  o << "x,y,u\n";
  for (int i = 0; i < s.grid; ++i) {
    const double y = y0 + (y1 - y0) * i / (s.grid - 1);
    for (int j = 0; j < s.grid; ++j) row({x0 + (x1 - x0) * j / (s.grid - 1), y});
  }
  if (!s.probes.empty()) {
    o << "# probes\n";
    for (const cplx& p : s.probes) row(p);
  }
  return 0;
}

int cmd_verify(const Scenario& s, std::ostream& out) {
  const Solved sol = solve(s, s.harmonics);
  ReportOptions ro;
  ro.seed = s.seed;
  const VerificationReport r = sol.curve ? full_report(*sol.curve, ro) : full_report(*sol.disk, ro);
  std::ofstream file;
  std::ostream& o = target(s.report_path, file, out);
  if (s.key_values) {
    std::ostringstream meta;
    metadata(meta, s, sol);
    std::istringstream lines(meta.str());
    for (std::string line; std::getline(lines, line);) {
      const auto colon = line.find(": ");
      o << "meta." << line.substr(2, colon - 2) << "=" << line.substr(colon + 2) << "\n";
    }
    o << render_key_values(r);
  } else {
    metadata(o, s, sol);
    o << render_text(r);
  }
  return r.passed() ? 0 : 3;
}

int cmd_classify(const Scenario& s, std::ostream& out) {
  const Solved sol = solve(s, s.classify_harmonics);
  const DiskSolution& d = sol.on_disk();
  std::vector<double> positions = s.classify_positions;
  if (positions.empty())
    for (const auto& a : d.boundary.singularities()) positions.push_back(a.position);
  std::ofstream file;
  std::ostream& o = target(s.report_path, file, out);
  metadata(o, s, sol);
  if (positions.empty()) o << "no annotated points\n";
  int status = 0;
  for (double theta : positions) {
    o << "theta=" << fmt(theta);
    try {
      const SingularityVerdict v = classify(d.w, theta);
      o << " verdict=" << to_string(v.verdict) << " degree=" << (v.degree ? std::to_string(*v.degree) : "none")
        << " confidence=" << to_string(v.confidence) << "\n";
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Inconclusive) throw;
      o << " verdict=inconclusive (" << e.what() << ")\n";
      status = 3;
    }
  }
  return status;
}

int cmd_chain(const Scenario& s, std::ostream& out) {
  const Solved sol = solve(s, s.harmonics);
  const InnerAnalyticFunction& w = sol.on_disk().w;
  std::ofstream file;
  std::ostream& o = target(s.report_path, file, out);
  metadata(o, s, sol);
  o << "level,k,re,im\n";
  for (int level : s.chain_levels) {
    const InnerAnalyticFunction m = chain_member(w, ChainIndex{level});
    const int n = std::min<int>(s.chain_count, static_cast<int>(m.c().size()));
    for (int k = 0; k < n; ++k)
      o << level << "," << k << "," << fmt(m.c()(k).real()) << "," << fmt(m.c()(k).imag()) << "\n";
  }
  return 0;
}

int cmd_map_info(const Scenario& s, std::ostream& out) {
  std::ofstream file;
  std::ostream& o = target(s.report_path, file, out);
  o << "domain: " << s.domain.describe() << "\n";
  const ConformalMap map = build_map(s);
  const BoundaryCorrespondence c = correspondence(map, s.correspondence_grid);
  o << "map: " << map.label() << "\n";
  o << "anchor: " << c.anchor() << "\n";
  o << "total_length: " << fmt(c.total_length()) << "\n";
  o << "image_of_center: " << fmt(map.forward(0.0).real()) << "," << fmt(map.forward(0.0).imag()) << "\n";
  if (!map.has_corners()) o << "corners: none\n";
  for (double t : c.corner_angles()) {
    const cplx p = map.forward(std::polar(1.0, t));
    o << "corner: theta=" << fmt(t) << " lambda=" << fmt(c.g(t)) << " point=" << fmt(p.real()) << ","
      << fmt(p.imag()) << "\n";
  }
  return 0;
}

}  // namespace

int run(const std::string& command, const Scenario& s, std::ostream& out, std::ostream& err) {
  try {
    if (command == "solve") return cmd_solve(s, out);
    if (command == "verify") return cmd_verify(s, out);
    if (command == "classify") return cmd_classify(s, out);
    if (command == "chain") return cmd_chain(s, out);
    if (command == "map-info") return cmd_map_info(s, out);
    err << "unknown command '" << command << "'\n";
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_status(e.code());
  }
}

}  // namespace dirichlet
