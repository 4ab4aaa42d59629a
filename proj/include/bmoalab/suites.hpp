#pragma once

// Canned verification bundles runnable from the batch front end:
//   paper-examples        — signature values across all modules (fast)
//   conditions            — boundary condition checkers on worked generators
//   volterra-equivalences — log-Carleson boundedness/compactness coherence
//
// Each member records pass/fail, a short detail line, and the numbers it
// checked; a thrown computation error fails the member and flags the run.

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "bmoalab/analytic.hpp"
#include "bmoalab/core.hpp"
#include "bmoalab/quadrature.hpp"
#include "bmoalab/report.hpp"
#include "bmoalab/semigroup.hpp"
#include "bmoalab/spaces.hpp"
#include "bmoalab/volterra.hpp"

namespace bmoalab {

struct SuiteCheck {
  std::string name;
  bool pass = false;
  std::string detail;
  Json data = Json::object();
};

struct SuiteResult {
  std::string suite_id;
  std::vector<SuiteCheck> checks;
  bool all_pass = false;
  bool had_error = false;  ///< some member threw a computation error
};

struct SuiteOptions {
  unsigned rng_seed = 0;
  /// Optional extra generator for the "conditions" suite; checked first.
  const AnalyticFn* generator = nullptr;
};

namespace suitedetail {

inline void run_member(SuiteResult& out, const std::string& name,
                       const std::function<void(SuiteCheck&)>& body) {
  SuiteCheck check;
  check.name = name;
  try {
    body(check);
  } catch (const std::exception& e) {
    check.pass = false;
    check.detail = std::string("error: ") + e.what();
    out.had_error = true;
  }
  out.checks.push_back(std::move(check));
}

inline bool close(double a, double b, double tol) {
  return std::abs(a - b) <= tol;
}

inline GridSpec lean_grid() { return GridSpec{96, 192, 3.0, 1.0 - 0x1p-20}; }

inline SupSearchSpec lean_search() {
  SupSearchSpec s;
  s.rays = 8;
  s.k_max = 10;
  s.refine_top = 2;
  s.simplex_iters = 20;
  return s;
}

// ---------------------------------------------------------------------------

inline void suite_paper_examples(SuiteResult& out, const SuiteOptions& opts) {
  run_member(out, "disc-measure-normalization", [](SuiteCheck& c) {
    GridSpec grid;
    grid.cap_radius = 1.0;  // closed-form comparison: no boundary truncation
    const double one =
        disc_integrate([](Complex) { return 1.0; }, grid).value;
    const double w1 =
        disc_integrate([](Complex z) { return 1.0 - abs2(z); }, grid).value;
    const double m2 =
        disc_integrate([](Complex z) { return abs2(z); }, grid).value;
    c.data = Json{{"int_1", one}, {"int_1_minus_r2", w1}, {"int_r2", m2}};
    c.pass = close(one, 1.0, 1e-8) && close(w1, 0.5, 1e-8) &&
             close(m2, 0.5, 1e-8);
    c.detail = "normalized area measure moments";
  });

  run_member(out, "box-measure", [](SuiteCheck& c) {
    const double len = 0.5;
    GridSpec grid;
    grid.cap_radius = 1.0;
    const double area = box_integrate([](Complex) { return 1.0; },
                                      CarlesonBox{0.0, len}, grid)
                            .value;
    const double expect = box_area(len);
    c.data = Json{{"area", area}, {"expected", expect}};
    c.pass = close(area, expect, 1e-8);
    c.detail = "Carleson box area closed form at |I| = 0.5";
  });

  run_member(out, "dirichlet-identity", [](SuiteCheck& c) {
    const NormEstimate est = dirichlet_norm(make_identity(), SpaceParam{2.0});
    c.data = to_json(est);
    c.pass = close(est.value, std::sqrt(0.5), 1e-6);
    c.detail = "||z||_{D^2_1} = sqrt(1/2)";
  });

  run_member(out, "bmoa-identity", [](SuiteCheck& c) {
    const NormEstimate est = bmoa_seminorm(make_identity(), SpaceParam{2.0},
                                           lean_grid(), lean_search());
    c.data = to_json(est);
    c.pass = close(est.value, 0.5, 2e-3) && std::abs(est.witness) < 0.05;
    c.detail = "sup_a I(z, 2, a) = 1/2 at a = 0";
  });

  run_member(out, "bloch-log", [](SuiteCheck& c) {
    const NormEstimate est =
        bloch_seminorm(make_log_recip_one_minus(Complex(1.0, 0.0)));
    c.data = to_json(est);
    c.pass = close(est.value, 2.0, 1e-3);
    c.detail = "Bloch seminorm of log(1/(1-z))";
  });

  run_member(out, "flow-closed-vs-ode", [](SuiteCheck& c) {
    const Semigroup dil = semigroup_dilation();
    const Semigroup half = semigroup_dilation_to_one();
    double worst = 0.0;
    for (const Complex z0 : {Complex(0.5, 0.0), Complex(-0.3, 0.4)}) {
      for (const double t : {0.25, 1.0, 3.0}) {
        for (const Semigroup* sg : {&dil, &half}) {
          const Complex ode = flow(*sg, z0, t).final_point;
          const Complex closed = *closed_flow_value(*sg, z0, t);
          worst = std::max(worst, std::abs(ode - closed));
        }
      }
    }
    c.data = Json{{"max_error", worst}};
    c.pass = worst <= 1e-7;
    c.detail = "adaptive integration against closed-form flows";
  });

  run_member(out, "semigroup-law", [&opts](SuiteCheck& c) {
    std::mt19937 rng(opts.rng_seed);
    std::uniform_real_distribution<double> u(-0.7, 0.7);
    std::uniform_real_distribution<double> ts(0.05, 1.0);
    const Semigroup sg = semigroup_sqrt_petal();
    double worst = 0.0;
    for (int i = 0; i < 6; ++i) {
      const Complex z0(u(rng), u(rng) * 0.5);
      worst = std::max(worst,
                       semigroup_law_residual(sg, z0, ts(rng), ts(rng)));
    }
    c.data = Json{{"max_residual", worst}};
    c.pass = worst <= 1e-7;
    c.detail = "phi_s o phi_t = phi_{s+t} on random cases";
  });

  run_member(out, "koenigs-dilation", [](SuiteCheck& c) {
    const GammaSymbol gamma = gamma_symbol(semigroup_dilation());
    double worst = 0.0;
    for (int j = 0; j < 24; ++j) {
      const double th = j * kTwoPi / 24;
      const Complex z = 0.7 * Complex(std::cos(th), std::sin(th));
      worst = std::max(worst, std::abs(gamma.gamma.deriv(z) + 1.0));
    }
    c.data = Json{{"max_deriv_error", worst},
                  {"case", gamma.tag == GammaCase::Interior ? "interior"
                                                            : "boundary"}};
    c.pass = worst <= 1e-8 && gamma.tag == GammaCase::Interior;
    c.detail = "gamma' = -1 for G = -z";
  });

  run_member(out, "volterra-path-oracles", [](SuiteCheck& c) {
    const VolterraOp id_op = make_volterra(make_identity());
    const Complex v1 = apply_Tg(id_op, make_identity(), Complex(0.5, 0.0));
    const Complex v2 =
        apply_Tg(id_op, make_log_recip_one_minus(Complex(1.0, 0.0)),
                 Complex(0.5, 0.0));
    const double expect2 = 0.5 - std::log(2.0) / 2.0;  // z + (1-z)log(1-z) |_{0.5}
    c.data = Json{{"tg_identity", to_json(v1)}, {"tg_log", to_json(v2)}};
    c.pass = std::abs(v1 - 0.125) <= 1e-10 &&
             std::abs(v2 - expect2) <= 1e-8;
    c.detail = "T_g closed forms at z = 1/2";
  });

  run_member(out, "logcar-identity-compact", [](SuiteCheck& c) {
    const CarlesonResult car =
        logcar_profile(make_identity(), 1.5, {0.0, kPi}, 1, 8, lean_grid());
    c.data = to_json(car);
    c.pass = logcar_compact(car);
    c.detail = "log-Carleson profile of g = z vanishes";
  });

  run_member(out, "vmoa-monomial", [](SuiteCheck& c) {
    const VanishingProfile prof =
        vmoa_profile(make_monomial(2), SpaceParam{2.0}, lean_grid(), 4, 2, 8);
    c.data = to_json(prof);
    c.pass = prof.verdict == Verdict::Vanishes;
    c.detail = "polynomials lie in VMOA_p";
  });

  run_member(out, "continuity-log-halfplane", [](SuiteCheck& c) {
    const ContinuityResult cont = continuity_probe(
        make_log_recip_one_minus(Complex(1.0, 0.0)),
        semigroup_dilation_to_one(), SpaceParam{1.5},
        GridSpec{64, 128, 3.0, 1.0 - 0x1p-20}, lean_search(), 1, 4);
    bool values_ok = true;
    for (std::size_t i = 0; i < cont.profile.points.size(); ++i) {
      const ProfilePoint& pt = cont.profile.points[i];
      const double err = cont.error_estimates[i];
      if (std::abs(pt.value - pt.param) > 2.0 * err + 1e-9) values_ok = false;
    }
    c.data = to_json(cont);
    c.pass = values_ok && cont.profile.verdict == Verdict::Vanishes;
    c.detail = "||f o phi_t - f|| = t for f = log(1/(1-z)), G = 1-z";
  });

  run_member(out, "test-family-decay", [](SuiteCheck& c) {
    std::vector<double> norms;
    for (int n = 2; n <= 5; ++n) {
      const double wn = 1.0 - std::pow(2.0, -n);
      const AnalyticFn hn =
          subtract(make_log_recip_one_minus(Complex(wn, 0.0)),
                   make_log_recip_one_minus(Complex(1.0, 0.0)));
      norms.push_back(dirichlet_norm(hn, SpaceParam{1.5}).value);
    }
    bool decreasing = true;
    for (std::size_t i = 1; i < norms.size(); ++i) {
      if (norms[i] >= norms[i - 1]) decreasing = false;
    }
    c.data = Json{{"norms", norms}};
    c.pass = decreasing;
    c.detail = "||log((1-z)/(1-w_n z))||_{D^{1.5}_{0.5}} decreases";
  });
}

// ---------------------------------------------------------------------------

inline void suite_conditions(SuiteResult& out, const SuiteOptions& opts) {
  const GridSpec grid{128, 256, 3.0, 1.0 - 0x1p-20};
  const std::vector<double> centers{0.0, kPi / 2, kPi, 3 * kPi / 2};

  if (opts.generator != nullptr) {
    const AnalyticFn G = *opts.generator;
    run_member(out, "custom-generator", [&](SuiteCheck& c) {
      const CarlesonResult plog = check_pLog(G, 1.5, centers, 1, 10, grid);
      const CarlesonResult c3 = check_cond3(G, 1.5, centers, 1, 10, grid);
      c.data = Json{{"plog", to_json(plog)}, {"cond3", to_json(c3)}};
      c.pass = true;  // informational unless a sweep throws
      c.detail = std::string("pLog ") + to_string(plog.worst.verdict) +
                 ", cond3 " + to_string(c3.worst.verdict);
    });
  }

  run_member(out, "plog-dilation-vanishes", [&](SuiteCheck& c) {
    const CarlesonResult r = check_pLog(
        scale(Complex(-1.0, 0.0), make_identity()), 1.5, centers, 1, 10, grid);
    c.data = to_json(r);
    c.pass = r.worst.verdict == Verdict::Vanishes;
    c.detail = "G = -z";
  });

  run_member(out, "plog-halfplane-diverges", [&](SuiteCheck& c) {
    const CarlesonResult r =
        check_pLog(make_polynomial({Complex(1.0, 0.0), Complex(-1.0, 0.0)}),
                   1.5, {0.0}, 1, 10, grid);
    c.data = to_json(r);
    c.pass = r.worst.verdict == Verdict::Diverges;
    c.detail = "G = 1-z at the singular direction";
  });

  run_member(out, "cond3-dilation-vanishes", [&](SuiteCheck& c) {
    const CarlesonResult r = check_cond3(
        scale(Complex(-1.0, 0.0), make_identity()), 1.5, centers, 1, 10, grid);
    c.data = to_json(r);
    c.pass = r.worst.verdict == Verdict::Vanishes;
    c.detail = "G = -z";
  });

  run_member(out, "cond3-halfplane-bounded", [&](SuiteCheck& c) {
    const CarlesonResult r =
        check_cond3(make_polynomial({Complex(1.0, 0.0), Complex(-1.0, 0.0)}),
                    1.5, {0.0}, 1, 10, grid);
    c.data = to_json(r);
    c.pass = r.worst.verdict == Verdict::BoundedNonvanishing;
    c.detail = "G = 1-z stays bounded without vanishing";
  });

  run_member(out, "cond2-dilation-bounded", [](SuiteCheck& c) {
    const Cond2Result r =
        check_cond2(scale(Complex(-1.0, 0.0), make_identity()), 0.5, 1, 12);
    c.data = to_json(r);
    c.pass = r.bounded;
    c.detail = "(1-|z|)^{1/2}/|G| bounded for G = -z";
  });

  run_member(out, "cond2-halfplane-unbounded", [](SuiteCheck& c) {
    const Cond2Result r = check_cond2(
        make_polynomial({Complex(1.0, 0.0), Complex(-1.0, 0.0)}), 0.5, 1, 12);
    c.data = to_json(r);
    c.pass = !r.bounded;
    c.detail = "(1-|z|)^{1/2}/|G| grows for G = 1-z";
  });
}

// ---------------------------------------------------------------------------

inline void suite_volterra_equivalences(SuiteResult& out,
                                        const SuiteOptions&) {
  const GridSpec grid = lean_grid();
  const std::vector<double> centers{0.0,          kPi / 4, kPi / 2,
                                    3 * kPi / 4,  kPi,     5 * kPi / 4,
                                    3 * kPi / 2,  7 * kPi / 4};

  run_member(out, "logcar-verdicts", [&](SuiteCheck& c) {
    const CarlesonResult id_car =
        logcar_profile(make_identity(), 1.5, centers, 1, 10, grid);
    const CarlesonResult log_car = logcar_profile(
        make_log_recip_one_minus(Complex(1.0, 0.0)), 1.5, {0.0}, 1, 10, grid);
    c.data = Json{{"identity", to_json(id_car)}, {"log", to_json(log_car)}};
    c.pass = logcar_compact(id_car) && !logcar_bounded(log_car);
    c.detail = "g = z compact, g = log(1/(1-z)) unbounded at p = 3/2";
  });

  run_member(out, "compactness-equivalence", [&](SuiteCheck& c) {
    // (ii) <=> (iii): the log-Carleson measure vanishes iff T_g maps a
    // spanning family into VMOA_p. Reduced family; both verdict classes.
    const std::vector<AnalyticFn> symbols{
        make_const(Complex(2.0, 0.0)), make_identity(),
        make_log_recip_one_minus(Complex(1.0, 0.0))};
    const std::vector<AnalyticFn> family{
        make_const(Complex(2.0, 0.0)), make_identity(),
        make_log_recip_one_minus(Complex(1.0, 0.0)),
        make_log_recip_one_minus(Complex(0.0, 0.5))};
    const SpaceParam sp{1.0};
    Json rows = Json::array();
    bool coherent = true;
    for (const AnalyticFn& g : symbols) {
      const CarlesonResult car =
          logcar_profile(g, sp.p, centers, 1, 10, grid);
      const bool compact = logcar_compact(car);
      const VolterraOp op = make_volterra(g);
      bool images_vanish = true;
      for (const AnalyticFn& f : family) {
        const VanishingProfile prof =
            tg_image_vmoa_check(op, f, sp, grid, 4, 2, 10);
        if (prof.verdict != Verdict::Vanishes) images_vanish = false;
      }
      rows.push_back(Json{{"symbol", g.describe()},
                          {"log_carleson_compact", compact},
                          {"images_vanish", images_vanish}});
      if (compact != images_vanish) coherent = false;
    }
    c.data = Json{{"cases", std::move(rows)}};
    c.pass = coherent;
    c.detail = "vanishing log-Carleson measure tracks VMOA images";
  });

  run_member(out, "koenigs-log-carleson", [&](SuiteCheck& c) {
    const GammaSymbol interior = gamma_symbol(semigroup_dilation());
    const CarlesonResult car_in =
        logcar_profile(interior.gamma, 1.5, {0.0, kPi}, 1, 10, grid);
    const GammaSymbol boundary = gamma_symbol(semigroup_dilation_to_one());
    const CarlesonResult car_bd =
        logcar_profile(boundary.gamma, 1.5, {0.0}, 1, 10, grid);
    c.data = Json{{"interior", to_json(car_in)}, {"boundary", to_json(car_bd)}};
    c.pass = logcar_compact(car_in) && !logcar_bounded(car_bd);
    c.detail = "dilation symbol compact; half-plane symbol unbounded";
  });

  run_member(out, "lower-bound-witnesses", [&](SuiteCheck& c) {
    std::vector<Complex> schedule;
    for (int k = 1; k <= 8; ++k) {
      schedule.emplace_back(1.0 - std::pow(2.0, -k), 0.0);
    }
    const TgLowerBound unbounded = tg_lower_bound(
        make_volterra(make_log_recip_one_minus(Complex(1.0, 0.0))), 1.5, 1.5,
        schedule, grid, lean_search());
    const TgLowerBound tame =
        tg_lower_bound(make_volterra(make_identity()), 1.5, 1.5,
                       {Complex(0.5, 0.0), Complex(0.75, 0.0),
                        Complex(0.875, 0.0), Complex(0.9375, 0.0)},
                       grid, lean_search());
    c.data = Json{{"log_symbol", to_json(unbounded)},
                  {"identity_symbol", to_json(tame)}};
    c.pass = unbounded.unbounded && !tame.unbounded && tame.value > 0.0;
    c.detail = "norm ratios blow up exactly for the unbounded symbol";
  });
}

}  // namespace suitedetail

[[nodiscard]] inline std::vector<std::string> suite_ids() {
  return {"paper-examples", "conditions", "volterra-equivalences"};
}

/// Run one verification bundle; unknown ids raise ParameterError.
inline SuiteResult run_suite(const std::string& id,
                             const SuiteOptions& opts = SuiteOptions{}) {
  SuiteResult out;
  out.suite_id = id;
  if (id == "paper-examples") {
    suitedetail::suite_paper_examples(out, opts);
  } else if (id == "conditions") {
    suitedetail::suite_conditions(out, opts);
  } else if (id == "volterra-equivalences") {
    suitedetail::suite_volterra_equivalences(out, opts);
  } else {
    throw ParameterError("unknown suite id: " + id);
  }
  out.all_pass = true;
  for (const SuiteCheck& c : out.checks) {
    if (!c.pass) out.all_pass = false;
  }
  return out;
}

/// Pass/fail table as a JSON array (one row per member).
[[nodiscard]] inline Json suite_table(const SuiteResult& result) {
  Json rows = Json::array();
  for (const SuiteCheck& c : result.checks) {
    rows.push_back(Json{{"name", c.name},
                        {"pass", c.pass},
                        {"detail", c.detail},
                        {"data", c.data}});
  }
  return rows;
}

}  // namespace bmoalab
