#include "fpoly/service.hpp"

#include "fpoly/covolume.hpp"
#include "fpoly/errors.hpp"
#include "fpoly/solver.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <map>
#include <set>
#include <sstream>

namespace fpoly {

Json metadata_block() {
  Json tol_block{
      {"light", tol::kLight},
      {"geometric", tol::kGeometric},
      {"unit", tol::kUnit},
      {"arccosh_clamp", tol::kArccoshClamp},
      {"isometry", tol::kIsometry},
      {"matrix_dedup", tol::kMatrixDedup},
      {"orbit_dedup", tol::kOrbitDedup},
      {"renormalize_word_length", tol::kRenormalizeWordLength},
      {"vertex_active", tol::kVertexActive},
      {"clip", tol::kClip},
      {"short_edge", tol::kShortEdge},
      {"inequality", tol::kInequality},
  };
  return Json{{"tool", "fpoly"}, {"version", kToolVersion}, {"tolerances", tol_block}};
}

Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    // Byte offset -> line and column.
    std::size_t line = 1, col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t k = 0; k < end; ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string msg = e.what();
    const auto pos = msg.find("syntax error");
    if (pos != std::string::npos) msg = msg.substr(pos);
    throw ValidationError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON: " + msg);
  }
}

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw ValidationError(path + ": " + what);
}

void check_keys(const Json& obj, const std::string& path, const std::vector<std::string>& required,
                const std::vector<std::string>& optional) {
  if (!obj.is_object()) schema_error(path, "expected an object");
  for (const auto& k : required)
    if (!obj.contains(k)) schema_error(path, "missing key \"" + k + "\"");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const auto& k = it.key();
    if (std::find(required.begin(), required.end(), k) == required.end() &&
        std::find(optional.begin(), optional.end(), k) == optional.end())
      schema_error(path, "unknown key \"" + k + "\"");
  }
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) schema_error(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) schema_error(path, "expected a finite number");
  return v;
}

long long integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) schema_error(path, "expected an integer");
  return j.get<long long>();
}

std::vector<double> numbers(const Json& j, const std::string& path, std::size_t expected = 0) {
  if (!j.is_array()) schema_error(path, "expected an array of numbers");
  if (expected && j.size() != expected)
    schema_error(path, "expected " + std::to_string(expected) + " numbers, got " + std::to_string(j.size()));
  std::vector<double> v;
  for (std::size_t k = 0; k < j.size(); ++k) v.push_back(number(j[k], path + "[" + std::to_string(k) + "]"));
  return v;
}

SquareMatrix parse_matrix(const Json& j, int n, const std::string& path) {
  SquareMatrix m(n, n);
  if (!j.is_array()) schema_error(path, "expected a row-major matrix");
  if (j.size() == static_cast<std::size_t>(n * n) && (j.empty() || j[0].is_number())) {
    const auto v = numbers(j, path);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) m(r, c) = v[static_cast<std::size_t>(r * n + c)];
    return m;
  }
  if (j.size() != static_cast<std::size_t>(n))
    schema_error(path, "expected " + std::to_string(n) + " rows or " + std::to_string(n * n) + " entries");
  for (int r = 0; r < n; ++r) {
    const auto row = numbers(j[static_cast<std::size_t>(r)], path + "[" + std::to_string(r) + "]",
                             static_cast<std::size_t>(n));
    for (int c = 0; c < n; ++c) m(r, c) = row[static_cast<std::size_t>(c)];
  }
  return m;
}

}  // namespace

std::shared_ptr<const FuchsianGroup> parse_group(const Json& spec, const std::string& path) {
  if (spec.is_string()) {
    const auto name = spec.get<std::string>();
    if (name == "octagon") {
      static const auto g = std::make_shared<const FuchsianGroup>(octagon_group());
      return g;
    }
    if (name.rfind("boost:", 0) == 0) {
      std::size_t used = 0;
      double ell = 0.0;
      try {
        ell = std::stod(name.substr(6), &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != name.size() - 6) schema_error(path, "bad boost length in \"" + name + "\"");
      return std::make_shared<const FuchsianGroup>(boost_group(ell));
    }
    schema_error(path, "unknown group \"" + name + "\" (expected \"octagon\" or \"boost:<length>\")");
  }
  check_keys(spec, path, {"dim", "generators"}, {"label", "quotient_volume"});
  const long long dim = integer(spec["dim"], path + ".dim");
  if (dim < 1 || dim + 1 > kMaxCoords) schema_error(path + ".dim", "dimension out of range");
  const auto& gens = spec["generators"];
  if (!gens.is_array() || gens.empty()) schema_error(path + ".generators", "expected a non-empty array");
  std::vector<SquareMatrix> mats;
  for (std::size_t k = 0; k < gens.size(); ++k)
    mats.push_back(parse_matrix(gens[k], static_cast<int>(dim) + 1, path + ".generators[" + std::to_string(k) + "]"));
  std::string label = "custom";
  if (spec.contains("label")) {
    if (!spec["label"].is_string()) schema_error(path + ".label", "expected a string");
    label = spec["label"].get<std::string>();
  }
  std::optional<double> vol;
  if (spec.contains("quotient_volume")) vol = number(spec["quotient_volume"], path + ".quotient_volume");
  return std::make_shared<const FuchsianGroup>(static_cast<int>(dim), std::move(mats), label, vol);
}

NormalFamily parse_family(const Json& spec, const std::string& path, const std::vector<std::string>& allowed) {
  check_keys(spec, path, {"group", "normals"}, allowed);
  auto g = parse_group(spec["group"], path + ".group");
  const auto& ns = spec["normals"];
  if (!ns.is_array() || ns.empty()) schema_error(path + ".normals", "expected a non-empty array");
  std::vector<LorentzVector> reps;
  for (std::size_t k = 0; k < ns.size(); ++k) {
    const auto v = numbers(ns[k], path + ".normals[" + std::to_string(k) + "]", static_cast<std::size_t>(g->dim() + 1));
    reps.emplace_back(std::span<const double>(v));
  }
  return NormalFamily(std::move(g), std::move(reps));
}

SupportVector parse_support(const Json& spec, std::size_t n, const std::string& path) {
  SupportVector h{numbers(spec, path)};
  h.validate(n);
  return h;
}

Json polyhedron_json(const FuchsianPolyhedron& p) {
  Json facets = Json::array();
  for (const auto& f : p.facets()) {
    Json poly = Json::array(), verts = Json::array(), edges = Json::array();
    for (auto u : f.polygon) poly.push_back(p.dim() == 1 ? Json::array({u.x}) : Json::array({u.x, u.y}));
    for (const auto& v : f.ambient_vertices()) verts.push_back(v.to_vector());
    for (const auto& e : f.edges) {
      Json dir = p.dim() == 1 ? Json::array({e.direction.x}) : Json::array({e.direction.x, e.direction.y});
      edges.push_back(Json{{"neighbor", e.neighbor},
                           {"word", e.word},
                           {"phi", e.phi},
                           {"support", e.support},
                           {"length", e.length},
                           {"direction", dir}});
    }
    facets.push_back(Json{{"rep_index", f.rep_index},
                          {"normal", f.plane.normal.to_vector()},
                          {"support", f.plane.offset},
                          {"foot", f.plane.foot.to_vector()},
                          {"area", f.area},
                          {"false_face", f.false_face()},
                          {"cutoff", f.cutoff},
                          {"polygon", poly},
                          {"vertices", verts},
                          {"edges", edges}});
  }
  return Json{{"group", p.family().group().label()},
              {"dim", p.dim()},
              {"support", p.support().values},
              {"fan_signature", p.fan_signature()},
              {"simple", is_simple(p)},
              {"min_edge_length", p.min_edge_length()},
              {"facets", facets}};
}

namespace {

struct PolyInput {
  NormalFamily family;
  SupportVector support;
  BuildOptions options;
};

PolyInput parse_polyhedron_spec(const Json& spec) {
  auto family = parse_family(spec, "$", {"support", "options"});
  if (!spec.contains("support")) schema_error("$", "missing key \"support\"");
  auto h = parse_support(spec["support"], family.size(), "$.support");
  BuildOptions opt;
  if (spec.contains("options")) {
    const auto& o = spec["options"];
    check_keys(o, "$.options", {}, {"allow_false_faces", "max_cutoff"});
    if (o.contains("allow_false_faces")) {
      if (!o["allow_false_faces"].is_boolean()) schema_error("$.options.allow_false_faces", "expected a boolean");
      opt.allow_false_faces = o["allow_false_faces"].get<bool>();
    }
    if (o.contains("max_cutoff")) opt.max_cutoff = number(o["max_cutoff"], "$.options.max_cutoff");
  }
  return {std::move(family), std::move(h), opt};
}

const Json& need_input(const std::optional<Json>& input, const std::string& command) {
  if (!input) throw ValidationError(command + ": an input JSON document is required");
  return *input;
}

Json with_metadata(Json body) {
  body["metadata"] = metadata_block();
  return body;
}

std::string finish(const Json& body) { return dump_json(with_metadata(body)) + "\n"; }

double opt_number(const Json& options, const char* key, double fallback) {
  if (!options.contains(key) || options[key].is_null()) return fallback;
  return number(options[key], std::string("--") + key);
}

long long opt_integer(const Json& options, const char* key, long long fallback) {
  if (!options.contains(key) || options[key].is_null()) return fallback;
  return integer(options[key], std::string("--") + key);
}

Json certificate_json(const JacobianCertificate& c) {
  return Json{{"symmetry_error", c.symmetry_error},   {"dominance_margin", c.dominance_margin},
              {"positive_diagonal", c.positive_diagonal}, {"nonpositive_offdiagonal", c.nonpositive_offdiagonal},
              {"cholesky_ok", c.cholesky_ok},         {"min_eigenvalue", c.min_eigenvalue},
              {"spd", c.cholesky_ok && c.positive_diagonal && c.dominance_margin > 0.0}};
}

Json solver_report_json(const SolverReport& r) {
  return Json{{"solution", r.solution.values},
              {"residual_history", r.residual_history},
              {"iterations", r.iterations},
              {"converged", r.converged},
              {"combinatorics_changes", r.combinatorics_changes},
              {"properness_bound", r.properness_bound},
              {"step_lengths", r.step_lengths}};
}

// --- commands ---------------------------------------------------------------

std::string cmd_group_info(const std::optional<Json>& input, const Json& options) {
  Json spec;
  if (options.contains("group")) spec = options["group"];
  else spec = need_input(input, "group-info");
  const auto g = parse_group(spec, "$");
  Json gens = Json::array();
  for (std::size_t k = 0; k < g->generators().size(); ++k) {
    const auto& m = g->generators()[k].matrix;
    Json rows = Json::array();
    for (int r = 0; r < m.rows(); ++r) {
      Json row = Json::array();
      for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
      rows.push_back(row);
    }
    gens.push_back(Json{{"index", k},
                        {"inverse", g->inverse_of(static_cast<int>(k))},
                        {"matrix", rows},
                        {"translation_length", translation_length(m)},
                        {"form_residual", form_residual(m)}});
  }
  const auto cell = dirichlet_cell(*g, LorentzVector::origin(g->dim()));
  Json verts = Json::array();
  for (const auto& v : cell.vertices) verts.push_back(v.to_vector());
  Json body{{"label", g->label()},
            {"dim", g->dim()},
            {"generators", gens},
            {"quotient_volume", g->quotient_volume()},
            {"dirichlet_cell",
             Json{{"vertices", verts}, {"circumradius", cell.circumradius}, {"volume", cell.volume}}}};
  return finish(body);
}

std::string cmd_orbit(const std::optional<Json>& input, const Json& options) {
  const Json& spec = need_input(input, "orbit");
  check_keys(spec, "$", {"group", "radius"}, {"point"});
  const auto g = parse_group(spec["group"], "$.group");
  const double radius = opt_number(options, "radius", number(spec["radius"], "$.radius"));
  if (!(radius >= 0.0)) schema_error("$.radius", "must be non-negative");
  LorentzVector x = LorentzVector::origin(g->dim());
  if (spec.contains("point")) {
    const auto v = numbers(spec["point"], "$.point", static_cast<std::size_t>(g->dim() + 1));
    x = LorentzVector(std::span<const double>(v));
  }
  const auto ball = orbit(*g, x, radius);
  Json elems = Json::array();
  for (const auto& e : ball.elements)
    elems.push_back(Json{{"word", e.element.word}, {"distance", e.distance}, {"point", e.point.to_vector()}});
  return finish(Json{{"base", ball.base.to_vector()},
                     {"radius", ball.radius},
                     {"word_length", ball.word_length},
                     {"count", ball.elements.size()},
                     {"elements", elems}});
}

std::string cmd_build(const std::optional<Json>& input, const Json&) {
  const auto in = parse_polyhedron_spec(need_input(input, "build"));
  return finish(Json{{"polyhedron", polyhedron_json(build(in.family, in.support, in.options))}});
}

std::string cmd_covol(const std::optional<Json>& input, const Json&) {
  const auto in = parse_polyhedron_spec(need_input(input, "covol"));
  const auto p = build(in.family, in.support, in.options);
  const auto r = covol(p);
  double weighted = 0.0;
  for (std::size_t i = 0; i < r.areas.size(); ++i) weighted += r.support[i] * r.areas[i];
  return finish(Json{{"covol", r.covol},
                     {"areas", r.areas},
                     {"support", r.support.values},
                     {"minkowski_area", minkowski_area(p)},
                     {"invariant_residual", std::abs(r.covol - weighted / (p.dim() + 1))}});
}

std::string cmd_jacobian(const std::optional<Json>& input, const Json&) {
  const auto in = parse_polyhedron_spec(need_input(input, "jacobian"));
  const auto p = build(in.family, in.support, in.options);
  const auto j = area_jacobian(p);
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < j.matrix.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < j.matrix.cols(); ++c) row.push_back(j.matrix(r, c));
    rows.push_back(row);
  }
  return finish(Json{{"matrix", rows},
                     {"min_edge_length", j.min_edge_length},
                     {"warnings", j.warnings},
                     {"certificate", certificate_json(j.certificate())}});
}

std::string cmd_solve(const std::optional<Json>& input, const Json&, std::string* failure) {
  const Json& spec = need_input(input, "solve");
  check_keys(spec, "$", {"family", "target_areas"}, {"config"});
  const auto family = parse_family(spec["family"], "$.family");
  const auto f = numbers(spec["target_areas"], "$.target_areas", family.size());
  SolverConfig cfg;
  if (spec.contains("config")) {
    const auto& c = spec["config"];
    check_keys(c, "$.config", {}, {"tol", "max_iter", "shrink", "min_step", "seed"});
    if (c.contains("tol")) cfg.tol = number(c["tol"], "$.config.tol");
    if (c.contains("max_iter")) cfg.max_iter = static_cast<int>(integer(c["max_iter"], "$.config.max_iter"));
    if (c.contains("shrink")) cfg.shrink = number(c["shrink"], "$.config.shrink");
    if (c.contains("min_step")) cfg.min_step = number(c["min_step"], "$.config.min_step");
    if (c.contains("seed")) cfg.seed = static_cast<std::uint64_t>(integer(c["seed"], "$.config.seed"));
  }
  try {
    return finish(Json{{"report", solver_report_json(solve_minkowski(family, f, cfg))}});
  } catch (const SolverError& e) {
    *failure = finish(Json{{"report", solver_report_json(e.report())}, {"error", e.what()}});
    throw;
  }
}

std::string cmd_mixed(const std::optional<Json>& input, const Json&) {
  const Json& spec = need_input(input, "mixed");
  const auto family = parse_family(spec, "$", {"supports"});
  if (!spec.contains("supports")) schema_error("$", "missing key \"supports\"");
  const auto& ss = spec["supports"];
  const auto d = static_cast<std::size_t>(family.dim());
  if (!ss.is_array() || ss.size() != d + 1)
    schema_error("$.supports", "expected " + std::to_string(d + 1) + " support vectors");
  std::vector<SupportVector> args;
  for (std::size_t k = 0; k < ss.size(); ++k)
    args.push_back(parse_support(ss[k], family.size(), "$.supports[" + std::to_string(k) + "]"));
  const FanClass cls(build(family, args[0]));
  const auto m = mixed_covol(cls, args);
  Json faces = Json::array();
  const std::vector<SupportVector> rest(args.begin() + 1, args.end());
  for (std::size_t i = 0; i < family.size(); ++i) faces.push_back(mixed_face_area(cls, rest, i));
  return finish(Json{{"value", m.value},
                     {"polarization_value", m.polarization_value},
                     {"discrepancy", m.discrepancy},
                     {"mixed_face_areas", faces},
                     {"fan_signature", cls.signature()}});
}

std::string cmd_check(const std::optional<Json>& input, const Json& options, std::string* failure) {
  const auto in = parse_polyhedron_spec(need_input(input, "check"));
  const auto seed = static_cast<std::uint64_t>(opt_integer(options, "seed", 0));
  const long long trials = opt_integer(options, "trials", 100);
  const double spread = opt_number(options, "spread", 0.02);
  if (trials < 1) schema_error("--trials", "must be at least 1");
  if (!(spread > 0.0)) schema_error("--spread", "must be positive");
  const auto ref = build(in.family, in.support, in.options);
  const FanClass cls(ref);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-spread, spread), scale(0.5, 2.0);
  auto draw = [&] {
    for (int attempt = 0; attempt < 1000; ++attempt) {
      SupportVector h = ref.support();
      const double s = scale(rng);
      for (auto& v : h.values) v = s * v * (1.0 + jitter(rng));
      if (cls.contains(h)) return h;
    }
    throw NumericError("could not draw a support vector in the class; reduce --spread");
  };

  struct Tally {
    long long evaluated = 0, passed = 0;
    double worst = std::numeric_limits<double>::infinity();
  };
  std::map<std::string, Tally> tally;
  Json counterexamples = Json::array();
  for (long long trial = 0; trial < trials; ++trial) {
    const auto k1 = draw(), k2 = draw();
    for (double t : {0.25, 0.5, 0.75}) {
      const auto reports = verify_inequalities(cls, k1, k2, t, seed * 1000003u + static_cast<std::uint64_t>(trial));
      for (const auto& r : reports) {
        auto& tl = tally[to_string(r.name)];
        ++tl.evaluated;
        tl.passed += r.pass;
        tl.worst = std::min(tl.worst, r.slack / std::max({std::abs(r.lhs), std::abs(r.rhs), 1.0}));
        if (!r.pass)
          counterexamples.push_back(Json{{"trial", trial}, {"name", to_string(r.name)}, {"t", t},
                                         {"k1", k1.values}, {"k2", k2.values}, {"lhs", r.lhs}, {"rhs", r.rhs},
                                         {"slack", r.slack}});
      }
    }
  }
  Json summary = Json::array();
  bool all = true;
  for (const auto& [name, tl] : tally) {
    summary.push_back(Json{{"name", name}, {"evaluated", tl.evaluated}, {"passed", tl.passed},
                           {"min_relative_slack", tl.worst}});
    all = all && tl.passed == tl.evaluated;
  }
  Json body{{"seed", seed},       {"trials", trials},   {"spread", spread},
            {"t_values", {0.25, 0.5, 0.75}}, {"fan_signature", cls.signature()},
            {"summary", summary}, {"counterexamples", counterexamples}, {"all_pass", all}};
  if (!all) {
    *failure = finish(body);
    throw NumericError("inequality harness found " + std::to_string(counterexamples.size()) + " violations");
  }
  return finish(body);
}

std::string cmd_approx_ball(const std::optional<Json>& input, const Json& options) {
  Json spec = options.contains("group") ? options["group"] : (input ? *input : Json("octagon"));
  if (spec.is_object() && spec.contains("group")) spec = spec["group"];
  const auto g = parse_group(spec, "$.group");
  long long max_level = opt_integer(options, "level", 4);
  if (options.contains("radius") && !options["radius"].is_null()) {
    BallApproximation info;
    const double r = number(options["radius"], "--radius");
    if (!(r > 0.0)) schema_error("--radius", "must be positive");
    int level = 0;
    while (level < kMaxBallLevel && cell_sample_spacing(*g, level) > r) ++level;
    max_level = level;
  }
  if (max_level < 0 || max_level > kMaxBallLevel)
    schema_error("--level", "must lie in [0, " + std::to_string(kMaxBallLevel) + "]");
  const double cb = ball_covol(*g);
  Json levels = Json::array();
  bool monotone = true;
  double prev = -1.0;
  for (int level = 0; level <= max_level; ++level) {
    const auto p = approximate_ball_level(g, level);
    const double c = covol(p).covol;
    monotone = monotone && c > prev;
    prev = c;
    levels.push_back(Json{{"level", level},
                          {"spacing", cell_sample_spacing(*g, level)},
                          {"normals", p.family().size()},
                          {"covol", c},
                          {"minkowski_area", minkowski_area(p)},
                          {"relative_gap", (cb - c) / cb}});
  }
  return finish(Json{{"group", g->label()}, {"ball_covol", cb}, {"ball_minkowski_area", ball_minkowski_area(*g)},
                     {"levels", levels}, {"monotone", monotone}});
}

std::string cmd_export(const std::optional<Json>& input, const Json& options) {
  const auto in = parse_polyhedron_spec(need_input(input, "export"));
  const auto words = opt_integer(options, "words", 0);
  if (words < 0) schema_error("--words", "must be non-negative");
  std::string format = "obj";
  if (options.contains("format")) format = options["format"].get<std::string>();
  const auto p = build(in.family, in.support, in.options);
  if (format == "obj") return export_mesh(p, static_cast<int>(words), MeshFormat::Obj);
  if (format == "json") {
    Json doc = Json::parse(export_mesh(p, static_cast<int>(words), MeshFormat::Json));
    return finish(doc);
  }
  schema_error("--format", "expected obj or json");
}

}  // namespace

std::string paper_repro(Json* table) {
  const auto t0 = std::chrono::steady_clock::now();
  const double s2 = std::numbers::sqrt2;
  const double pi = std::numbers::pi;
  const auto g = parse_group(Json("octagon"));
  NormalFamily fam(g, {LorentzVector::origin(2)});
  const auto p = build(fam, {{1.0}});

  struct Row {
    std::string quantity;
    double paper;
    double computed;
    double tolerance;  // relative
  };
  std::vector<Row> rows;
  double worst_len = 0.0;
  for (const auto& gen : g->generators()) worst_len = std::max(worst_len, translation_length(gen.matrix));
  rows.push_back({"generator translation length", std::acosh(2.0 + 2.0 * s2), worst_len, 1e-12});
  const double sk = minkowski_area(p);
  rows.push_back({"S(K), h = 1", 8.0 * (13.0 - 9.0 * s2), sk, 1e-9});
  const double sb = dirichlet_cell(*g, LorentzVector::origin(2)).volume;
  rows.push_back({"S(B) (Dirichlet cell area)", 4.0 * pi, sb, 1e-9});
  rows.push_back({"covol(K) = S(K)/3", 8.0 * (13.0 - 9.0 * s2) / 3.0, covol(p).covol, 1e-9});

  // Isoperimetric inequality with h = 1: (S/S_B)^3 <= (covol/covol_B)^2 reduces to S(K)/8 <= S(B)/8.
  const double lhs_paper = 13.0 - 9.0 * s2, rhs_paper = pi / 2.0;
  const double lhs = sk / 8.0, rhs = sb / 8.0;
  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

  std::ostringstream os;
  char buf[256];
  os << "Closing octagon example: genus-2 group, one orbit of normals at (0,0,1), support h = 1\n";
  std::snprintf(buf, sizeof buf, "%-32s %-20s %-20s %-10s %s\n", "quantity", "paper", "computed", "rel.err",
                "status");
  os << buf;
  Json jrows = Json::array();
  for (const auto& r : rows) {
    const double err = std::abs(r.computed - r.paper) / std::abs(r.paper);
    const bool ok = err <= r.tolerance;
    std::snprintf(buf, sizeof buf, "%-32s %-20.12f %-20.12f %-10.2e %s\n", r.quantity.c_str(), r.paper, r.computed,
                  err, ok ? "match" : "MISMATCH");
    os << buf;
    jrows.push_back(Json{{"quantity", r.quantity}, {"paper", r.paper}, {"computed", r.computed},
                         {"relative_error", err}, {"tolerance", r.tolerance}, {"match", ok}});
  }
  std::snprintf(buf, sizeof buf, "closed form of the computed S(K): 16(3-2*sqrt2) = %.12f\n", 16.0 * (3.0 - 2.0 * s2));
  os << buf;
  std::snprintf(buf, sizeof buf, "isoperimetric (paper):    13-9*sqrt2 = %.6f <= pi/2 = %.6f   %s\n", lhs_paper,
                rhs_paper, lhs_paper <= rhs_paper ? "holds" : "FAILS");
  os << buf;
  std::snprintf(buf, sizeof buf, "isoperimetric (computed): S(K)/8 = %.6f <= S(B)/8 = %.6f   %s\n", lhs, rhs,
                lhs <= rhs ? "holds" : "FAILS");
  os << buf;
  std::snprintf(buf, sizeof buf, "runtime: %.1f ms\n", ms);
  os << buf;
  if (table) {
    *table = Json{{"rows", jrows},
                  {"closed_form_S_K", 16.0 * (3.0 - 2.0 * s2)},
                  {"isoperimetric_paper", Json{{"lhs", lhs_paper}, {"rhs", rhs_paper}, {"holds", lhs_paper <= rhs_paper}}},
                  {"isoperimetric_computed", Json{{"lhs", lhs}, {"rhs", rhs}, {"holds", lhs <= rhs}}},
                  {"runtime_ms", ms}};
  }
  return os.str();
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"group-info", "orbit", "build",      "covol",  "jacobian",   "solve",
                                              "mixed",      "check", "approx-ball", "export", "paper-repro"};
  return names;
}

CommandResult run_command(const std::string& command, const std::optional<Json>& input, const Json& options) {
  CommandResult res;
  std::string failure;
  try {
    if (!options.is_object()) throw ValidationError("options must be a JSON object");
    if (command == "group-info") res.output = cmd_group_info(input, options);
    else if (command == "orbit") res.output = cmd_orbit(input, options);
    else if (command == "build") res.output = cmd_build(input, options);
    else if (command == "covol") res.output = cmd_covol(input, options);
    else if (command == "jacobian") res.output = cmd_jacobian(input, options);
    else if (command == "solve") res.output = cmd_solve(input, options, &failure);
    else if (command == "mixed") res.output = cmd_mixed(input, options);
    else if (command == "check") res.output = cmd_check(input, options, &failure);
    else if (command == "approx-ball") res.output = cmd_approx_ball(input, options);
    else if (command == "export") res.output = cmd_export(input, options);
    else if (command == "paper-repro") {
      if (options.contains("json") && options["json"].is_boolean() && options["json"].get<bool>()) {
        Json table;
        paper_repro(&table);
        res.output = finish(table);
      } else {
        res.output = paper_repro();
      }
    } else {
      throw ValidationError("unknown command \"" + command + "\"");
    }
  } catch (const ValidationError& e) {
    res.status = 1;
    res.error = e.what();
  } catch (const NumericError& e) {
    res.status = 2;
    res.error = e.what();
    res.output = failure;
  } catch (const Json::exception& e) {
    res.status = 1;
    res.error = std::string("invalid input: ") + e.what();
  }
  return res;
}

}  // namespace fpoly
