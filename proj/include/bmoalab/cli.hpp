#pragma once

// Batch front end: JSON experiment configs in, JSON reports and CSV profiles
// out. Config parsing is strict (unknown fields rejected, required fields
// enforced, expressions validated); every resolved default is written back
// into the report's config echo so a report alone reproduces its run.
//
// Exit codes: 0 success, 2 config/schema error (no report written),
// 3 computation error or suite member failure (error embedded in the report).

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bmoalab/core.hpp"
#include "bmoalab/expr.hpp"
#include "bmoalab/report.hpp"
#include "bmoalab/suites.hpp"

namespace bmoalab::cli {

/// Structural problems with the config file; mapped to exit code 2.
struct ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace clidetail {

[[nodiscard]] inline Json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path.string());
  try {
    return Json::parse(in);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
}

inline void check_keys(const Json& obj, const std::string& ctx,
                       const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError(ctx + " must be a JSON object");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (allowed.find(key) == allowed.end()) {
      throw ConfigError("unknown field \"" + key + "\" in " + ctx);
    }
  }
}

[[nodiscard]] inline double get_num(const Json& obj, const std::string& key,
                                    double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_number()) {
    throw ConfigError("field \"" + key + "\" must be a number");
  }
  return obj.at(key).get<double>();
}

[[nodiscard]] inline double require_num(const Json& obj,
                                        const std::string& key) {
  if (!obj.contains(key) || !obj.at(key).is_number()) {
    throw ConfigError("missing required numeric field \"" + key + "\"");
  }
  return obj.at(key).get<double>();
}

[[nodiscard]] inline int get_int(const Json& obj, const std::string& key,
                                 int fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_number_integer()) {
    throw ConfigError("field \"" + key + "\" must be an integer");
  }
  return obj.at(key).get<int>();
}

[[nodiscard]] inline std::string get_str(const Json& obj,
                                         const std::string& key,
                                         const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_string()) {
    throw ConfigError("field \"" + key + "\" must be a string");
  }
  return obj.at(key).get<std::string>();
}

[[nodiscard]] inline std::string require_str(const Json& obj,
                                             const std::string& key) {
  if (!obj.contains(key) || !obj.at(key).is_string()) {
    throw ConfigError("missing required string field \"" + key + "\"");
  }
  return obj.at(key).get<std::string>();
}

[[nodiscard]] inline Complex get_complex(const Json& obj,
                                         const std::string& key) {
  const Json& v = obj.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() ||
      !v[1].is_number()) {
    throw ConfigError("field \"" + key + "\" must be [re, im]");
  }
  return Complex(v[0].get<double>(), v[1].get<double>());
}

/// Expression field; parser/range failures count as schema errors.
[[nodiscard]] inline AnalyticFn get_expression(const Json& obj,
                                               const std::string& key) {
  const std::string src = require_str(obj, key);
  try {
    return parse_expression(src);
  } catch (const std::exception& e) {
    throw ConfigError("field \"" + key + "\": " + e.what());
  }
}

[[nodiscard]] inline GridSpec parse_grid(const Json& cfg, Json& echo) {
  GridSpec grid;
  if (cfg.contains("grid")) {
    const Json& g = cfg.at("grid");
    check_keys(g, "\"grid\"", {"radial", "angular", "grading", "cap_radius"});
    grid.radial_count = get_int(g, "radial", grid.radial_count);
    grid.angular_count = get_int(g, "angular", grid.angular_count);
    grid.grading = get_num(g, "grading", grid.grading);
    grid.cap_radius = get_num(g, "cap_radius", grid.cap_radius);
  }
  try {
    grid.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  echo["grid"] = Json{{"radial", grid.radial_count},
                      {"angular", grid.angular_count},
                      {"grading", grid.grading},
                      {"cap_radius", grid.cap_radius}};
  return grid;
}

[[nodiscard]] inline SupSearchSpec parse_search(const Json& cfg, Json& echo) {
  SupSearchSpec search;
  if (cfg.contains("search")) {
    const Json& s = cfg.at("search");
    check_keys(s, "\"search\"",
               {"rays", "k_min", "k_max", "radius_cap", "refine_top",
                "simplex_iters", "extra_angles"});
    search.rays = get_int(s, "rays", search.rays);
    search.k_min = get_int(s, "k_min", search.k_min);
    search.k_max = get_int(s, "k_max", search.k_max);
    search.radius_cap = get_num(s, "radius_cap", search.radius_cap);
    search.refine_top = get_int(s, "refine_top", search.refine_top);
    search.simplex_iters = get_int(s, "simplex_iters", search.simplex_iters);
    if (s.contains("extra_angles")) {
      if (!s.at("extra_angles").is_array()) {
        throw ConfigError("\"extra_angles\" must be an array of numbers");
      }
      for (const Json& a : s.at("extra_angles")) {
        if (!a.is_number()) {
          throw ConfigError("\"extra_angles\" must be an array of numbers");
        }
        search.extra_angles.push_back(a.get<double>());
      }
    }
  }
  try {
    search.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  echo["search"] = Json{{"rays", search.rays},
                        {"k_min", search.k_min},
                        {"k_max", search.k_max},
                        {"radius_cap", search.radius_cap},
                        {"refine_top", search.refine_top},
                        {"simplex_iters", search.simplex_iters},
                        {"extra_angles", search.extra_angles}};
  return search;
}

struct BoxSweepSpec {
  std::vector<double> centers;
  int k_min = 1;
  int k_max = 14;
};

[[nodiscard]] inline BoxSweepSpec parse_boxes(
    const Json& cfg, Json& echo, const std::vector<double>& default_centers) {
  BoxSweepSpec spec;
  spec.centers = default_centers;
  if (cfg.contains("boxes")) {
    const Json& b = cfg.at("boxes");
    check_keys(b, "\"boxes\"", {"centers", "k_min", "k_max"});
    if (b.contains("centers")) {
      if (!b.at("centers").is_array() || b.at("centers").empty()) {
        throw ConfigError("\"centers\" must be a nonempty array of angles");
      }
      spec.centers.clear();
      for (const Json& a : b.at("centers")) {
        if (!a.is_number()) {
          throw ConfigError("\"centers\" must be a nonempty array of angles");
        }
        spec.centers.push_back(a.get<double>());
      }
    }
    spec.k_min = get_int(b, "k_min", spec.k_min);
    spec.k_max = get_int(b, "k_max", spec.k_max);
  }
  echo["boxes"] = Json{{"centers", spec.centers},
                       {"k_min", spec.k_min},
                       {"k_max", spec.k_max}};
  return spec;
}

[[nodiscard]] inline std::vector<double> uniform_centers(int n) {
  std::vector<double> centers(n);
  for (int i = 0; i < n; ++i) centers[i] = i * kTwoPi / n;
  return centers;
}

/// Semigroup spec {"generator", "dw_point", "closed_form"?}. The expression
/// and the flow id are schema-level; Berkson-Porta admissibility is checked
/// at execution time (make_semigroup) and therefore reports as exit 3.
struct SemigroupSpec {
  AnalyticFn generator;
  Complex dw_point{0.0, 0.0};
  ClosedFlow closed_flow = ClosedFlow::None;
  std::string closed_form_id;
};

[[nodiscard]] inline SemigroupSpec parse_semigroup_fields(const Json& cfg,
                                                          Json& echo) {
  SemigroupSpec spec;
  spec.generator = get_expression(cfg, "generator");
  if (!cfg.contains("dw_point")) {
    throw ConfigError("missing required field \"dw_point\" ([re, im])");
  }
  spec.dw_point = get_complex(cfg, "dw_point");
  spec.closed_form_id = get_str(cfg, "closed_form", "");
  if (spec.closed_form_id == "dilation") {
    spec.closed_flow = ClosedFlow::Dilation;
  } else if (spec.closed_form_id == "dilation_to_1") {
    spec.closed_flow = ClosedFlow::DilationToOne;
  } else if (spec.closed_form_id == "rotation") {
    spec.closed_flow = ClosedFlow::Rotation;
  } else if (!spec.closed_form_id.empty()) {
    throw ConfigError(
        "\"closed_form\" must be one of dilation, dilation_to_1, rotation");
  }
  echo["generator"] = cfg.at("generator").get<std::string>();
  echo["dw_point"] = to_json(spec.dw_point);
  echo["closed_form"] =
      spec.closed_form_id.empty() ? Json(nullptr) : Json(spec.closed_form_id);
  return spec;
}

[[nodiscard]] inline Semigroup build_semigroup(const SemigroupSpec& spec) {
  Semigroup sg = make_semigroup(spec.generator, spec.dw_point,
                                spec.closed_flow, spec.closed_form_id);
  if (sg.closed_flow != ClosedFlow::None) {
    // Guard against a closed-form id that does not match the generator.
    const Complex z0(0.3, 0.1);
    const double t = 0.7;
    const Complex ode = flow(sg, z0, t).final_point;
    const Complex closed = *closed_flow_value(sg, z0, t);
    if (std::abs(ode - closed) > 1e-6) {
      throw ParameterError(
          "closed_form \"" + spec.closed_form_id +
          "\" disagrees with the generator's integrated flow");
    }
  }
  return sg;
}

inline unsigned parse_seed(const Json& cfg, Json& echo) {
  const int seed = get_int(cfg, "rng_seed", 0);
  if (seed < 0) throw ConfigError("\"rng_seed\" must be >= 0");
  echo["rng_seed"] = seed;
  return static_cast<unsigned>(seed);
}

inline void require_command_field(const Json& cfg, const std::string& cmd) {
  if (require_str(cfg, "command") != cmd) {
    throw ConfigError("config \"command\" is \"" +
                      cfg.at("command").get<std::string>() +
                      "\" but the invoked command is \"" + cmd + "\"");
  }
}

}  // namespace clidetail

// ---------------------------------------------------------------------------
// Command runners
// ---------------------------------------------------------------------------

/// Everything a command produces; the caller decides where files land.
struct RunOutput {
  Report report;
  /// (file name, rows); files are only written when rows exist.
  std::vector<std::pair<std::string, std::vector<ProfileCsvRow>>> csvs;
  int exit_code = 0;
};

namespace clidetail {

inline void run_norm(const Json& cfg, RunOutput& out) {
  check_keys(cfg, "config",
             {"command", "function", "p", "kind", "grid", "search",
              "rng_seed"});
  Json& echo = out.report.config;
  const AnalyticFn f = get_expression(cfg, "function");
  echo["function"] = cfg.at("function").get<std::string>();
  const SpaceParam sp{require_num(cfg, "p")};
  echo["p"] = sp.p;
  const std::string kind = get_str(cfg, "kind", "bmoa-norm");
  echo["kind"] = kind;
  const GridSpec grid = parse_grid(cfg, echo);
  const SupSearchSpec search = parse_search(cfg, echo);
  parse_seed(cfg, echo);

  NormEstimate est;
  if (kind == "bmoa-norm") {
    est = bmoa_norm(f, sp, grid, search);
  } else if (kind == "bmoa-seminorm") {
    est = bmoa_seminorm(f, sp, grid, search);
  } else if (kind == "dirichlet") {
    est = dirichlet_norm(f, sp, grid);
  } else if (kind == "garsia") {
    est = garsia_norm(f, search);
  } else if (kind == "bloch") {
    est = bloch_seminorm(f, search);
  } else {
    throw ConfigError("\"kind\" must be one of bmoa-norm, bmoa-seminorm, "
                      "dirichlet, garsia, bloch");
  }
  out.report.results = to_json(est);
  for (const std::string& w : est.warnings) out.report.warnings.push_back(w);
}

inline void run_vmoa(const Json& cfg, RunOutput& out) {
  check_keys(cfg, "config",
             {"command", "function", "p", "grid", "rays", "k_min", "k_max",
              "rng_seed"});
  Json& echo = out.report.config;
  const AnalyticFn f = get_expression(cfg, "function");
  echo["function"] = cfg.at("function").get<std::string>();
  const SpaceParam sp{require_num(cfg, "p")};
  echo["p"] = sp.p;
  const GridSpec grid = parse_grid(cfg, echo);
  const int rays = get_int(cfg, "rays", 8);
  const int k_min = get_int(cfg, "k_min", 2);
  const int k_max = get_int(cfg, "k_max", 14);
  echo["rays"] = rays;
  echo["k_min"] = k_min;
  echo["k_max"] = k_max;
  parse_seed(cfg, echo);

  const VanishingProfile prof = vmoa_profile(f, sp, grid, rays, k_min, k_max);
  out.report.results = Json{{"profile", to_json(prof)}};
  for (const std::string& n : prof.notes) out.report.warnings.push_back(n);

  std::vector<ProfileCsvRow> rows;
  append_profile_rows(rows, 0.0, k_min, prof);
  out.csvs.emplace_back("profile.csv", std::move(rows));
}

inline void run_semigroup_flow(const Json& cfg, RunOutput& out) {
  check_keys(cfg, "config",
             {"command", "generator", "dw_point", "closed_form", "z0",
              "t_values", "tol", "rng_seed"});
  Json& echo = out.report.config;
  const SemigroupSpec spec = parse_semigroup_fields(cfg, echo);
  if (!cfg.contains("z0")) {
    throw ConfigError("missing required field \"z0\" ([re, im])");
  }
  const Complex z0 = get_complex(cfg, "z0");
  echo["z0"] = to_json(z0);
  std::vector<double> t_values{1.0};
  if (cfg.contains("t_values")) {
    if (!cfg.at("t_values").is_array() || cfg.at("t_values").empty()) {
      throw ConfigError("\"t_values\" must be a nonempty array of times");
    }
    t_values.clear();
    for (const Json& t : cfg.at("t_values")) {
      if (!t.is_number() || t.get<double>() < 0.0) {
        throw ConfigError("\"t_values\" must contain nonnegative numbers");
      }
      t_values.push_back(t.get<double>());
    }
  }
  echo["t_values"] = t_values;
  const double tol = get_num(cfg, "tol", 1e-9);
  echo["tol"] = tol;
  parse_seed(cfg, echo);

  const Semigroup sg = build_semigroup(spec);
  Json flows = Json::array();
  for (const double t : t_values) {
    const FlowResult fr = flow(sg, z0, t, tol);
    Json entry = to_json(fr);
    entry["t"] = t;
    if (const auto closed = closed_flow_value(sg, z0, t)) {
      entry["closed_form_point"] = to_json(*closed);
      entry["closed_form_error"] = std::abs(*closed - fr.final_point);
    }
    flows.push_back(std::move(entry));
  }
  double law_residual = 0.0;
  if (t_values.size() >= 2) {
    law_residual = semigroup_law_residual(sg, z0, t_values[0], t_values[1],
                                          tol);
  } else {
    law_residual = semigroup_law_residual(sg, z0, t_values[0] / 2,
                                          t_values[0] / 2, tol);
  }
  out.report.results =
      Json{{"flows", std::move(flows)}, {"law_residual", law_residual}};
}

inline void run_continuity(const Json& cfg, RunOutput& out) {
  check_keys(cfg, "config",
             {"command", "function", "p", "generator", "dw_point",
              "closed_form", "grid", "search", "k_min", "k_max", "rng_seed"});
  Json& echo = out.report.config;
  const AnalyticFn f = get_expression(cfg, "function");
  echo["function"] = cfg.at("function").get<std::string>();
  const SpaceParam sp{require_num(cfg, "p")};
  echo["p"] = sp.p;
  const SemigroupSpec spec = parse_semigroup_fields(cfg, echo);
  const GridSpec grid = parse_grid(cfg, echo);
  const SupSearchSpec search = parse_search(cfg, echo);
  const int k_min = get_int(cfg, "k_min", 1);
  const int k_max = get_int(cfg, "k_max", 10);
  echo["k_min"] = k_min;
  echo["k_max"] = k_max;
  parse_seed(cfg, echo);

  const Semigroup sg = build_semigroup(spec);
  const ContinuityResult cont =
      continuity_probe(f, sg, sp, grid, search, k_min, k_max);
  out.report.results = to_json(cont);
  for (const std::string& n : cont.profile.notes) {
    out.report.warnings.push_back(n);
  }
  if (cont.excluded_nodes > 0) {
    out.report.warnings.push_back(
        std::to_string(cont.excluded_nodes) +
        " quadrature nodes excluded near zeros of the generator");
  }

  std::vector<ProfileCsvRow> rows;
  append_profile_rows(rows, 0.0, k_min, cont.profile);
  out.csvs.emplace_back("profile.csv", std::move(rows));
}

inline void append_carleson_rows(std::vector<ProfileCsvRow>& rows,
                                 const CarlesonResult& car, int k_min) {
  for (const auto& [angle, profile] : car.per_center) {
    append_profile_rows(rows, angle, k_min, profile);
  }
}

inline void run_condition(const Json& cfg, RunOutput& out) {
  check_keys(cfg, "config",
             {"command", "generator", "dw_point", "p", "cond2_exponent",
              "boxes", "grid", "rng_seed"});
  Json& echo = out.report.config;
  const AnalyticFn G = get_expression(cfg, "generator");
  echo["generator"] = cfg.at("generator").get<std::string>();
  Complex dw(0.0, 0.0);
  bool have_dw = cfg.contains("dw_point");
  if (have_dw) dw = get_complex(cfg, "dw_point");
  echo["dw_point"] = have_dw ? to_json(dw) : Json(nullptr);
  const SpaceParam sp{require_num(cfg, "p")};
  echo["p"] = sp.p;
  const double a_exp = get_num(cfg, "cond2_exponent", 0.5);
  echo["cond2_exponent"] = a_exp;

  std::vector<double> default_centers = uniform_centers(8);
  if (have_dw && std::abs(std::abs(dw) - 1.0) < 1e-9) {
    const double th = std::fmod(std::arg(dw) + kTwoPi, kTwoPi);
    bool dup = false;
    for (double c : default_centers) {
      if (std::abs(c - th) < 1e-12) dup = true;
    }
    if (!dup) default_centers.push_back(th);
  }
  const BoxSweepSpec boxes = parse_boxes(cfg, echo, default_centers);
  const GridSpec grid = [&] {
    if (cfg.contains("grid")) return parse_grid(cfg, echo);
    const GridSpec g = box_sweep_grid();
    echo["grid"] = Json{{"radial", g.radial_count},
                        {"angular", g.angular_count},
                        {"grading", g.grading},
                        {"cap_radius", g.cap_radius}};
    return g;
  }();
  parse_seed(cfg, echo);

  const CarlesonResult plog =
      check_pLog(G, sp.p, boxes.centers, boxes.k_min, boxes.k_max, grid);
  const CarlesonResult c3 =
      check_cond3(G, sp.p, boxes.centers, boxes.k_min, boxes.k_max, grid);
  const Cond2Result c2 = check_cond2(G, a_exp, boxes.k_min,
                                     std::max(boxes.k_max, boxes.k_min + 3));

  // pLog vanishing is sufficient for the composition semigroup to act on
  // the small space; cond3 vanishing is necessary. In the gap between the
  // two the theory leaves the question open.
  const bool plog_vanishes = plog.worst.verdict == Verdict::Vanishes;
  const bool cond3_vanishes = c3.worst.verdict == Verdict::Vanishes;
  std::string verdict;
  if (plog_vanishes) {
    verdict = "equal";
  } else if (!cond3_vanishes) {
    verdict = "not-equal";
  } else {
    verdict = "theory-undetermined";
    out.report.warnings.push_back(
        "pLog and cond3 disagree: equality of the invariant subspace with "
        "the little space is theory-undetermined for this generator");
  }

  out.report.results = Json{{"plog", to_json(plog)},
                            {"cond3", to_json(c3)},
                            {"cond2", to_json(c2)},
                            {"equality_verdict", verdict}};

  std::vector<ProfileCsvRow> plog_rows;
  append_carleson_rows(plog_rows, plog, boxes.k_min);
  out.csvs.emplace_back("profile.csv", std::move(plog_rows));
  std::vector<ProfileCsvRow> c3_rows;
  append_carleson_rows(c3_rows, c3, boxes.k_min);
  out.csvs.emplace_back("cond3_profile.csv", std::move(c3_rows));
  std::vector<ProfileCsvRow> c2_rows;
  append_profile_rows(c2_rows, 0.0, boxes.k_min, c2.profile);
  out.csvs.emplace_back("cond2_profile.csv", std::move(c2_rows));
}

inline void run_volterra(const Json& cfg, RunOutput& out) {
  check_keys(cfg, "config",
             {"command", "symbol", "p_from", "p_to", "boxes", "grid",
              "search", "witness_angle", "witness_k_max", "rng_seed"});
  Json& echo = out.report.config;
  const AnalyticFn g = get_expression(cfg, "symbol");
  echo["symbol"] = cfg.at("symbol").get<std::string>();
  const double p_from = require_num(cfg, "p_from");
  const double p_to = require_num(cfg, "p_to");
  echo["p_from"] = p_from;
  echo["p_to"] = p_to;
  const BoxSweepSpec boxes = parse_boxes(cfg, echo, uniform_centers(8));
  const GridSpec grid = [&] {
    if (cfg.contains("grid")) return parse_grid(cfg, echo);
    const GridSpec gd = box_sweep_grid();
    echo["grid"] = Json{{"radial", gd.radial_count},
                        {"angular", gd.angular_count},
                        {"grading", gd.grading},
                        {"cap_radius", gd.cap_radius}};
    return gd;
  }();
  const SupSearchSpec search = parse_search(cfg, echo);
  const int witness_k_max = get_int(cfg, "witness_k_max", 8);
  echo["witness_k_max"] = witness_k_max;
  parse_seed(cfg, echo);
  if (witness_k_max < 4 || witness_k_max > 20) {
    throw ConfigError("\"witness_k_max\" must lie in [4, 20]");
  }

  const CarlesonResult car = logcar_profile(g, p_to, boxes.centers,
                                            boxes.k_min, boxes.k_max, grid);
  const double witness_angle =
      get_num(cfg, "witness_angle", car.worst_center);
  echo["witness_angle"] = witness_angle;

  std::vector<Complex> schedule;
  const Complex dir(std::cos(witness_angle), std::sin(witness_angle));
  for (int k = 1; k <= witness_k_max; ++k) {
    schedule.push_back((1.0 - std::pow(2.0, -k)) * dir);
  }
  const VolterraOp op = make_volterra(g);
  const TgLowerBound lb =
      tg_lower_bound(op, p_from, p_to, schedule, grid, search);
  for (const std::string& w : lb.warnings) out.report.warnings.push_back(w);

  out.report.results = Json{{"log_carleson", to_json(car)},
                            {"bounded", logcar_bounded(car)},
                            {"compact", logcar_compact(car)},
                            {"lower_bound", to_json(lb)}};

  std::vector<ProfileCsvRow> rows;
  append_carleson_rows(rows, car, boxes.k_min);
  out.csvs.emplace_back("profile.csv", std::move(rows));
  std::vector<ProfileCsvRow> wit_rows;
  append_profile_rows(wit_rows, witness_angle, 1, lb.profile);
  out.csvs.emplace_back("witness_profile.csv", std::move(wit_rows));
}

inline void run_gamma(const Json& cfg, RunOutput& out) {
  check_keys(cfg, "config",
             {"command", "generator", "dw_point", "closed_form", "p", "boxes",
              "grid", "rng_seed"});
  Json& echo = out.report.config;
  const SemigroupSpec spec = parse_semigroup_fields(cfg, echo);
  const SpaceParam sp{get_num(cfg, "p", 2.0)};
  echo["p"] = sp.p;
  const BoxSweepSpec boxes = parse_boxes(cfg, echo, uniform_centers(8));
  const GridSpec grid = [&] {
    if (cfg.contains("grid")) return parse_grid(cfg, echo);
    const GridSpec gd = box_sweep_grid();
    echo["grid"] = Json{{"radial", gd.radial_count},
                        {"angular", gd.angular_count},
                        {"grading", gd.grading},
                        {"cap_radius", gd.cap_radius}};
    return gd;
  }();
  parse_seed(cfg, echo);

  const Semigroup sg = build_semigroup(spec);
  const GammaSymbol gamma = gamma_symbol(sg);
  const CarlesonResult gamma_car = logcar_profile(
      gamma.gamma, sp.p, boxes.centers, boxes.k_min, boxes.k_max, grid);
  const CarlesonResult plog = check_pLog(sg.generator, sp.p, boxes.centers,
                                         boxes.k_min, boxes.k_max, grid);

  out.report.results =
      Json{{"case",
            gamma.tag == GammaCase::Interior ? "interior" : "boundary"},
           {"dw_point", to_json(gamma.dw_point)},
           {"gamma_log_carleson", to_json(gamma_car)},
           {"gamma_compact", logcar_compact(gamma_car)},
           {"plog", to_json(plog)},
           {"plog_vanishes", plog.worst.verdict == Verdict::Vanishes}};

  std::vector<ProfileCsvRow> rows;
  append_carleson_rows(rows, gamma_car, boxes.k_min);
  out.csvs.emplace_back("profile.csv", std::move(rows));
}

inline void run_suite_cmd(const Json& cfg, RunOutput& out) {
  check_keys(cfg, "config", {"command", "suite", "generator", "rng_seed"});
  Json& echo = out.report.config;
  const std::string id = require_str(cfg, "suite");
  bool known = false;
  for (const std::string& s : suite_ids()) {
    if (s == id) known = true;
  }
  if (!known) throw ConfigError("unknown suite id: " + id);
  echo["suite"] = id;

  SuiteOptions opts;
  opts.rng_seed = parse_seed(cfg, echo);
  AnalyticFn custom;
  if (cfg.contains("generator")) {
    custom = get_expression(cfg, "generator");
    echo["generator"] = cfg.at("generator").get<std::string>();
    opts.generator = &custom;
  } else {
    echo["generator"] = Json(nullptr);
  }

  const SuiteResult result = run_suite(id, opts);
  out.report.results = Json{{"suite", id},
                            {"all_pass", result.all_pass},
                            {"had_error", result.had_error},
                            {"table", suite_table(result)}};
  for (const SuiteCheck& c : result.checks) {
    if (!c.pass) {
      out.report.warnings.push_back("suite member failed: " + c.name);
    }
  }
  if (!result.all_pass) out.exit_code = 3;
}

}  // namespace clidetail

// ---------------------------------------------------------------------------
// Drivers
// ---------------------------------------------------------------------------

[[nodiscard]] inline std::vector<std::string> command_ids() {
  return {"norm",      "vmoa",     "semigroup-flow", "continuity",
          "condition", "volterra", "gamma",          "suite"};
}

/// Run one command against an in-memory config. Throws ConfigError for
/// schema problems (exit 2); computation errors are caught and embedded
/// (exit 3). On success exit_code is 0, or 3 for a failed suite.
[[nodiscard]] inline RunOutput run_config(const std::string& command,
                                          const Json& cfg) {
  RunOutput out;
  out.report.command = command;
  out.report.config["command"] = command;
  clidetail::require_command_field(cfg, command);

  const auto started = std::chrono::steady_clock::now();
  try {
    if (command == "norm") {
      clidetail::run_norm(cfg, out);
    } else if (command == "vmoa") {
      clidetail::run_vmoa(cfg, out);
    } else if (command == "semigroup-flow") {
      clidetail::run_semigroup_flow(cfg, out);
    } else if (command == "continuity") {
      clidetail::run_continuity(cfg, out);
    } else if (command == "condition") {
      clidetail::run_condition(cfg, out);
    } else if (command == "volterra") {
      clidetail::run_volterra(cfg, out);
    } else if (command == "gamma") {
      clidetail::run_gamma(cfg, out);
    } else if (command == "suite") {
      clidetail::run_suite_cmd(cfg, out);
    } else {
      throw ConfigError("unknown command: " + command);
    }
  } catch (const ConfigError&) {
    throw;  // schema problems abort the run with no report
  } catch (const std::exception& e) {
    out.report.results = Json{{"error", e.what()}};
    out.report.warnings.push_back(std::string("computation error: ") +
                                  e.what());
    out.exit_code = 3;
  }
  out.report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                    started)
          .count();
  return out;
}

/// File-level wrapper: load config, run, write report.json and CSVs into
/// out_dir. Returns the process exit code (0, 2, or 3).
inline int run_to_files(const std::string& command,
                        const std::filesystem::path& config_path,
                        const std::filesystem::path& out_dir,
                        std::string* error_message = nullptr) {
  try {
    const Json cfg = clidetail::load_json_file(config_path);
    RunOutput out = run_config(command, cfg);
    std::filesystem::create_directories(out_dir);
    write_report(out_dir / "report.json", out.report);
    for (const auto& [name, rows] : out.csvs) {
      if (!rows.empty()) write_profile_csv(out_dir / name, rows);
    }
    return out.exit_code;
  } catch (const ConfigError& e) {
    if (error_message != nullptr) *error_message = e.what();
    return 2;
  } catch (const std::exception& e) {
    // I/O failures while writing the report surface like schema errors:
    // there is no report to embed them in.
    if (error_message != nullptr) *error_message = e.what();
    return 2;
  }
}

}  // namespace bmoalab::cli
