#pragma once

// ---------------------------------------------------------------------------
// Holomorphic semigroups of self-maps of the disc.
//
// A semigroup is specified by its infinitesimal generator G (dphi_t/dt =
// G(phi_t), phi_0 = id) together with its Denjoy-Wolff point b. Generators
// admit the product form G(z) = (conj(b) z - 1)(z - b) P(z) with Re P >= 0;
// construction validates this numerically. Flows integrate the ODE with an
// embedded 4(5) Runge-Kutta pair; the canned semigroups also carry closed
// forms used by cross-checks and by the strong-continuity probe.
//
// The boundary condition checkers sweep Carleson boxes of the quantity
// (1-|z|^2)^{p-1}/|G|^p, with or without the logarithmic factor, and the
// radial sup (1-|z|)^a/|G|; their dyadic profiles decide the verdicts.
// ---------------------------------------------------------------------------

#include <bmoalab/analytic.hpp>
#include <bmoalab/core.hpp>
#include <bmoalab/profile.hpp>
#include <bmoalab/quadrature.hpp>
#include <bmoalab/spaces.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bmoalab {

/// Closed-form flow families available for cross-checks.
enum class ClosedFlow { None, Identity, Dilation, DilationToOne, Rotation };

struct Semigroup {
  AnalyticFn generator;
  Complex dw_point{0.0, 0.0};
  ClosedFlow closed_flow = ClosedFlow::None;
  std::string label;
};

/// Berkson-Porta quotient P with its sampled admissibility report.
struct DwDecomposition {
  AnalyticFn P;
  double min_re_p = 0.0;
  Complex argmin{0.0, 0.0};
};

struct FlowResult {
  std::vector<std::pair<double, Complex>> samples;  ///< accepted (t_i, w_i)
  Complex final_point{0.0, 0.0};
  int steps = 0;
  double max_abs = 0.0;
};

namespace sgdetail {

inline bool is_boundary_point(Complex b) {
  return std::abs(std::abs(b) - 1.0) <= 1e-9;
}

}  // namespace sgdetail

// ---------------------------------------------------------------------------
// Denjoy-Wolff decomposition
// ---------------------------------------------------------------------------

/// P(z) = G(z) / ((conj(b) z - 1)(z - b)), with the removable singularity at
/// an interior b evaluated through the midpoint derivative of G. Samples
/// Re P over rays x geometric radii and reports the minimum.
inline DwDecomposition dw_decompose(const AnalyticFn& G, Complex b) {
  const double babs = std::abs(b);
  if (babs > 1.0 + 1e-9) {
    throw ParameterError("Denjoy-Wolff point must lie in the closed disc");
  }
  const bool boundary = sgdetail::is_boundary_point(b);
  if (boundary) b /= babs;
  if (!boundary && std::abs(G.eval(b)) > 1e-10) {
    throw GeneratorError("generator does not vanish at the interior "
                         "Denjoy-Wolff point");
  }

  const auto value = [G, b, boundary](Complex z) -> Complex {
    const Complex lead = std::conj(b) * z - Complex(1.0, 0.0);
    if (!boundary && std::abs(z - b) < 1e-6) {
      // G(z) = G(z) - G(b) ~ G'((b+z)/2)(z-b) to second order.
      return G.raw_deriv(0.5 * (b + z)) / lead;
    }
    return G.raw(z) / (lead * (z - b));
  };
  const AnalyticFn P = make_custom(
      value,
      [value](Complex z) { return richardson_derivative(value, z); },
      "dw-quotient");

  DwDecomposition out;
  out.P = P;
  out.min_re_p = value(Complex(0.0, 0.0)).real();
  out.argmin = Complex(0.0, 0.0);
  constexpr int kRays = 64;
  for (int j = 0; j < kRays; ++j) {
    const double th = j * kTwoPi / kRays;
    for (int k = 1; k <= 20; ++k) {
      const double r = 1.0 - std::pow(2.0, -k);
      const Complex z(r * std::cos(th), r * std::sin(th));
      const double re = value(z).real();
      if (re < out.min_re_p ||
          (re == out.min_re_p &&
           (z.real() < out.argmin.real() ||
            (z.real() == out.argmin.real() &&
             z.imag() < out.argmin.imag())))) {
        out.min_re_p = re;
        out.argmin = z;
      }
    }
  }
  return out;
}

/// Validated semigroup constructor: interior fixed point must be a zero of
/// G, and the Berkson-Porta quotient must have nonnegative real part on the
/// sample set.
inline Semigroup make_semigroup(AnalyticFn generator, Complex dw_point,
                                ClosedFlow closed_flow = ClosedFlow::None,
                                std::string label = "") {
  const DwDecomposition dec = dw_decompose(generator, dw_point);
  if (dec.min_re_p < -1e-8) {
    throw GeneratorError("Berkson-Porta admissibility fails: min Re P = " +
                         std::to_string(dec.min_re_p));
  }
  Semigroup sg;
  sg.generator = std::move(generator);
  sg.dw_point = sgdetail::is_boundary_point(dw_point)
                    ? dw_point / std::abs(dw_point)
                    : dw_point;
  sg.closed_flow = closed_flow;
  sg.label = std::move(label);
  return sg;
}

// Canned semigroups used throughout the tests and example configs.
inline Semigroup semigroup_dilation() {
  return make_semigroup(scale(Complex(-1.0, 0.0), make_identity()),
                        Complex(0.0, 0.0), ClosedFlow::Dilation, "dilation");
}
inline Semigroup semigroup_dilation_to_one() {
  return make_semigroup(
      make_polynomial({Complex(1.0, 0.0), Complex(-1.0, 0.0)}),
      Complex(1.0, 0.0), ClosedFlow::DilationToOne, "dilation-to-1");
}
inline Semigroup semigroup_rotation() {
  return make_semigroup(scale(Complex(0.0, 1.0), make_identity()),
                        Complex(0.0, 0.0), ClosedFlow::Rotation, "rotation");
}
/// G = -z (1-z)^{1/2}: interior fixed point, no closed-form flow.
inline Semigroup semigroup_sqrt_petal() {
  return make_semigroup(
      scale(Complex(-1.0, 0.0),
            make_identity() * make_power_one_minus(0.5)),
      Complex(0.0, 0.0), ClosedFlow::None, "sqrt-petal");
}
inline Semigroup semigroup_trivial() {
  return make_semigroup(make_const(Complex(0.0, 0.0)), Complex(0.0, 0.0),
                        ClosedFlow::Identity, "trivial");
}

// ---------------------------------------------------------------------------
// Flow
// ---------------------------------------------------------------------------

/// Closed-form flow value when the family has one.
inline std::optional<Complex> closed_flow_value(const Semigroup& sg,
                                                Complex z0, double t) {
  switch (sg.closed_flow) {
    case ClosedFlow::Identity:
      return z0;
    case ClosedFlow::Dilation:
      return std::exp(-t) * z0;
    case ClosedFlow::DilationToOne: {
      const double e = std::exp(-t);
      return e * z0 + Complex(1.0 - e, 0.0);
    }
    case ClosedFlow::Rotation:
      return Complex(std::cos(t), std::sin(t)) * z0;
    case ClosedFlow::None:
      return std::nullopt;
  }
  return std::nullopt;
}

/// Integrate dw/ds = G(w) from z0 over [0, t] with a Dormand-Prince 5(4)
/// pair; local error is held below tol per unit time. Trajectories must stay
/// inside the disc.
inline FlowResult flow(const Semigroup& sg, Complex z0, double t,
                       double tol = 1e-9) {
  if (!(std::abs(z0) < 1.0)) {
    throw ParameterError("flow start must lie in the open disc");
  }
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw ParameterError("flow time must be finite and nonnegative");
  }
  if (!(tol > 0.0)) throw ParameterError("flow tolerance must be positive");

  FlowResult out;
  out.samples.emplace_back(0.0, z0);
  out.max_abs = std::abs(z0);
  Complex w = z0;
  if (t == 0.0 || sg.closed_flow == ClosedFlow::Identity) {
    out.final_point = w;
    if (t > 0.0) out.samples.emplace_back(t, w);
    return out;
  }

  const AnalyticFn& G = sg.generator;
  const auto rhs = [&](Complex z) { return G.raw(z); };

  double s = 0.0;
  double h = std::min(0.1, t);
  Complex k1 = rhs(w);
  int rejected_in_row = 0;
  while (s < t) {
    h = std::min(h, t - s);

    // Dormand-Prince stages.
    bool stage_ok = true;
    Complex k2, k3, k4, k5, k6, w5;
    const auto stage = [&](Complex y) -> Complex {
      if (!(std::abs(y) < 1.0 - 1e-13)) {
        stage_ok = false;
        return Complex(0.0, 0.0);
      }
      return rhs(y);
    };
    k2 = stage(w + h * (0.2 * k1));
    if (stage_ok) k3 = stage(w + h * (3.0 / 40.0 * k1 + 9.0 / 40.0 * k2));
    if (stage_ok) {
      k4 = stage(w + h * (44.0 / 45.0 * k1 - 56.0 / 15.0 * k2 +
                          32.0 / 9.0 * k3));
    }
    if (stage_ok) {
      k5 = stage(w + h * (19372.0 / 6561.0 * k1 - 25360.0 / 2187.0 * k2 +
                          64448.0 / 6561.0 * k3 - 212.0 / 729.0 * k4));
    }
    if (stage_ok) {
      k6 = stage(w + h * (9017.0 / 3168.0 * k1 - 355.0 / 33.0 * k2 +
                          46732.0 / 5247.0 * k3 + 49.0 / 176.0 * k4 -
                          5103.0 / 18656.0 * k5));
    }
    Complex err{0.0, 0.0};
    if (stage_ok) {
      w5 = w + h * (35.0 / 384.0 * k1 + 500.0 / 1113.0 * k3 +
                    125.0 / 192.0 * k4 - 2187.0 / 6784.0 * k5 +
                    11.0 / 84.0 * k6);
      if (!(std::abs(w5) < 1.0 - 1e-13)) {
        stage_ok = false;
      } else {
        const Complex k7 = rhs(w5);  // FSAL stage
        const Complex w4 =
            w + h * (5179.0 / 57600.0 * k1 + 7571.0 / 16695.0 * k3 +
                     393.0 / 640.0 * k4 - 92097.0 / 339200.0 * k5 +
                     187.0 / 2100.0 * k6 + 1.0 / 40.0 * k7);
        err = w5 - w4;
        if (std::abs(err) <= tol * h) {
          // Accept.
          s += h;
          w = w5;
          k1 = k7;
          ++out.steps;
          out.samples.emplace_back(s, w);
          out.max_abs = std::max(out.max_abs, std::abs(w));
          if (std::abs(w) >= 1.0 - 1e-12) {
            throw ContainmentError(
                "flow trajectory reached the unit circle at t=" +
                std::to_string(s));
          }
          const double target = tol * h;
          const double scale =
              0.9 * std::pow(target / std::max(std::abs(err), 1e-300), 0.2);
          h *= std::clamp(scale, 0.5, 2.0);
          rejected_in_row = 0;
          continue;
        }
      }
    }
    // Reject: shrink.
    h *= 0.5;
    if (++rejected_in_row > 60 || h < 1e-14) {
      throw ContainmentError(
          "flow step size collapsed near the boundary at t=" +
          std::to_string(s));
    }
  }
  out.final_point = w;
  return out;
}

/// Richardson-extrapolated difference quotient (phi_t(z) - z)/t over
/// t in {1e-3, 5e-4, 2.5e-4}; requires a closed-form flow.
inline Complex generator_estimate(const Semigroup& sg, Complex z) {
  if (sg.closed_flow == ClosedFlow::None) {
    throw ParameterError("generator_estimate needs a closed-form flow");
  }
  if (!(std::abs(z) <= 0.95)) {
    throw ParameterError("generator_estimate expects |z| <= 0.95");
  }
  const auto quotient = [&](double t) {
    return (*closed_flow_value(sg, z, t) - z) / t;
  };
  const Complex d0 = quotient(1e-3);
  const Complex d1 = quotient(5e-4);
  const Complex d2 = quotient(2.5e-4);
  const Complex r01 = 2.0 * d1 - d0;
  const Complex r12 = 2.0 * d2 - d1;
  return (4.0 * r12 - r01) / 3.0;
}

/// |phi_t(phi_s(z0)) - phi_{s+t}(z0)| via the ODE integrator.
inline double semigroup_law_residual(const Semigroup& sg, Complex z0,
                                     double s, double t, double tol = 1e-9) {
  const Complex via = flow(sg, flow(sg, z0, s, tol).final_point, t, tol)
                          .final_point;
  const Complex direct = flow(sg, z0, s + t, tol).final_point;
  return std::abs(via - direct);
}

/// phi_t as a first-class analytic function. Closed-form families produce
/// exact degree-1 polynomials; otherwise values come from the ODE and the
/// derivative from phi_t'(z) = G(phi_t(z))/G(z) (valid off zeros of G).
inline AnalyticFn flow_map(const Semigroup& sg, double t, double tol = 1e-9) {
  const double e = std::exp(-t);
  switch (sg.closed_flow) {
    case ClosedFlow::Identity:
      return make_identity();
    case ClosedFlow::Dilation:
      return make_polynomial({Complex(0.0, 0.0), Complex(e, 0.0)});
    case ClosedFlow::DilationToOne:
      return make_polynomial({Complex(1.0 - e, 0.0), Complex(e, 0.0)});
    case ClosedFlow::Rotation:
      return make_polynomial(
          {Complex(0.0, 0.0), Complex(std::cos(t), std::sin(t))});
    case ClosedFlow::None:
      break;
  }
  const Semigroup copy = sg;
  const auto value = [copy, t, tol](Complex z) {
    return flow(copy, z, t, tol).final_point;
  };
  const auto deriv = [copy, t, tol](Complex z) -> Complex {
    const Complex gz = copy.generator.raw(z);
    if (std::abs(gz) < 1e-12) {
      throw IntegrandError("flow derivative undefined near a generator zero");
    }
    const Complex w = flow(copy, z, t, tol).final_point;
    return copy.generator.raw(w) / gz;
  };
  return make_custom(value, deriv, "flow[" + sg.label + "]");
}

// ---------------------------------------------------------------------------
// Strong continuity probe
// ---------------------------------------------------------------------------

struct ContinuityResult {
  VanishingProfile profile;             ///< param t = 2^{-k}, value = norm
  std::vector<double> error_estimates;  ///< per profile point
  long excluded_nodes = 0;  ///< ODE path: nodes skipped near zeros of G
};

/// Profile of ||f o phi_t - f||_{BMOA_p} over t = 2^{-k}. Uses the closed
/// flow when available; otherwise flows each node and uses phi_t'(z) =
/// G(phi_t(z))/G(z), excluding (and counting) nodes where |G(z)| < 1e-12.
inline ContinuityResult continuity_probe(const AnalyticFn& f,
                                         const Semigroup& sg, SpaceParam sp,
                                         const GridSpec& grid = GridSpec{},
                                         SupSearchSpec search = SupSearchSpec{},
                                         int k_min = 1, int k_max = 10) {
  sp.validate();
  grid.validate();
  search.validate();
  if (k_min < 1 || k_max < k_min + 3 || k_max > 20) {
    throw ParameterError("invalid continuity schedule");
  }
  const double p = sp.p;

  ContinuityResult out;
  std::atomic<long> excluded{0};
  std::vector<ProfilePoint> pts;

  for (int k = k_min; k <= k_max; ++k) {
    const double t = std::pow(2.0, -k);
    const AnalyticFn phi = flow_map(sg, t);
    const bool ode_backed = sg.closed_flow == ClosedFlow::None;

    // Difference derivative (f o phi_t)' - f' as a raw callable with the
    // generator-zero exclusion policy.
    const auto diff_deriv = [&](Complex z) -> Complex {
      if (ode_backed) {
        const Complex gz = sg.generator.raw(z);
        if (std::abs(gz) < 1e-12) {
          excluded.fetch_add(1);
          return Complex(0.0, 0.0);
        }
        const Complex w = flow(sg, z, t).final_point;
        return f.raw_deriv(w) * (sg.generator.raw(w) / gz) - f.raw_deriv(z);
      }
      return f.raw_deriv(phi.raw(z)) * phi.raw_deriv(z) - f.raw_deriv(z);
    };
    const auto density = [&](Complex z) {
      const double d2 = abs2(diff_deriv(z));
      return std::pow(d2, 0.5 * p) * std::pow(1.0 - abs2(z), p - 1.0);
    };

    const std::vector<double> windows = detect_spike_angles(
        [&](Complex z) { return std::abs(diff_deriv(z)); });
    SupSearchSpec sk = search;
    for (double w : windows) sk.extra_angles.push_back(w);

    const auto full =
        spacedetail::cache_integrand(density, build_disc_mesh(grid, windows));
    const auto half = spacedetail::cache_integrand(
        density, build_disc_mesh(grid.halved(), windows));
    const auto quarter = spacedetail::cache_integrand(
        density, build_disc_mesh(grid.halved().halved(), windows));

    const SupResult sup = maximize_over_disc(
        [&](Complex a) {
          return spacedetail::mobius_weighted_sum(quarter, a);
        },
        [&](Complex a) { return spacedetail::mobius_weighted_sum(full, a); },
        sk);
    const double at_half = spacedetail::mobius_weighted_sum(half, sup.arg);
    const double tail = spacedetail::tail_from_ring(
        spacedetail::mobius_ring_sum(full, sup.arg), p);
    const double err_I = std::abs(sup.value - at_half) + tail;

    const Complex phi0 = ode_backed ? flow(sg, Complex(0.0, 0.0), t).final_point
                                    : phi.raw(Complex(0.0, 0.0));
    const double head = std::pow(std::abs(f.raw(phi0) - f.raw(Complex(0.0, 0.0))), p);
    const double s = head + std::max(sup.value, 0.0);
    const double norm = std::pow(s, 1.0 / p);
    const double err =
        s > 0.0 ? norm / (p * s) * err_I : std::pow(err_I, 1.0 / p);

    if (!std::isfinite(norm) || norm > kOverflowGuard) {
      throw DivergenceError("continuity norm exceeds the overflow guard");
    }
    pts.push_back({t, norm});
    out.error_estimates.push_back(err);
  }

  out.profile = classify_profile(std::move(pts));
  out.excluded_nodes = excluded.load();
  if (out.excluded_nodes > 0) {
    out.profile.notes.push_back(
        std::to_string(out.excluded_nodes) +
        " nodes excluded near zeros of the generator");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Boundary condition checkers
// ---------------------------------------------------------------------------

namespace sgdetail {

/// Accumulated argument change of G along the segment of a parameterized
/// path between s0 and s1, bisecting until each accepted step turns by less
/// than pi/2 (so no winding is aliased away).
template <class PathFn>
double arg_sweep(const AnalyticFn& G, PathFn&& path, double s0, double s1,
                 Complex g0, Complex g1, int depth, const char* what) {
  if (std::abs(g0) < 1e-13 || std::abs(g1) < 1e-13) {
    throw RegionError(std::string("generator vanishes on ") + what);
  }
  const double d = std::arg(g1 / g0);
  if (std::abs(d) <= kPi / 2.0) return d;
  if (depth >= 48) {
    throw RegionError(std::string("generator winding unresolved on ") + what);
  }
  const double sm = 0.5 * (s0 + s1);
  const Complex gm = G.raw(path(sm));
  return arg_sweep(G, path, s0, sm, g0, gm, depth + 1, what) +
         arg_sweep(G, path, sm, s1, gm, g1, depth + 1, what);
}

/// Guard against zeros of G inside a swept box: the winding number of G
/// around the (slightly shrunk) box contour must be zero.
inline void require_no_zero_in_box(const AnalyticFn& G, const CarlesonBox& box,
                                   double cap) {
  const double depth = std::min(box.length, 1.0);
  // Shrink radially so zeros sitting exactly on the box edge (e.g. the
  // Denjoy-Wolff point at the inner rim of the largest box) do not abort.
  const double r_lo = (1.0 - depth) + 0.02 * depth;
  const double r_hi = cap;
  const double th_lo = box.center_angle - 0.5 * box.length;
  const double th_hi = box.center_angle + 0.5 * box.length;
  const std::string where = "box at center angle " +
                            std::to_string(box.center_angle) +
                            ", |I|=" + std::to_string(box.length);

  // Piecewise contour: outer arc, inward radial side, inner arc (reversed),
  // outward radial side. Each side is sampled at a base resolution and
  // refined adaptively inside arg_sweep.
  double winding = 0.0;
  const auto walk = [&](auto&& path) {
    constexpr int kBase = 64;
    Complex prev = G.raw(path(0.0));
    for (int i = 0; i < kBase; ++i) {
      const double s0 = static_cast<double>(i) / kBase;
      const double s1 = static_cast<double>(i + 1) / kBase;
      const Complex next = G.raw(path(s1));
      winding += arg_sweep(G, path, s0, s1, prev, next, 0, where.c_str());
      prev = next;
    }
  };
  walk([&](double s) {
    const double th = th_lo + s * (th_hi - th_lo);
    return Complex(r_hi * std::cos(th), r_hi * std::sin(th));
  });
  walk([&](double s) {
    const double r = r_hi + s * (r_lo - r_hi);
    return Complex(r * std::cos(th_hi), r * std::sin(th_hi));
  });
  walk([&](double s) {
    const double th = th_hi + s * (th_lo - th_hi);
    return Complex(r_lo * std::cos(th), r_lo * std::sin(th));
  });
  walk([&](double s) {
    const double r = r_lo + s * (r_hi - r_lo);
    return Complex(r * std::cos(th_lo), r * std::sin(th_lo));
  });

  if (std::abs(winding) > kPi) {  // |winding| >= 2 pi means >= 1 zero
    throw RegionError("generator has a zero inside the " + where);
  }
}

/// Shared dyadic box sweep of weight(k) * mu(S(I))/|I| with
/// mu-density (1-|z|^2)^{p-1}/|G|^p.
template <class WeightFn>
CarlesonResult condition_sweep(const AnalyticFn& G, double p,
                               const std::vector<double>& centers, int k_min,
                               int k_max, const GridSpec& grid,
                               WeightFn&& weight) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw ParameterError("condition checker needs 1 <= p < inf");
  }
  grid.validate();
  if (centers.empty()) throw ParameterError("no box centers given");
  if (k_min < 0 || k_max < k_min + 3 || k_max > 26) {
    throw ParameterError("invalid dyadic box schedule");
  }
  const auto density = [&](Complex z) {
    const double g2 = abs2(G.raw(z));
    return std::pow(1.0 - abs2(z), p - 1.0) / std::pow(g2, 0.5 * p);
  };

  CarlesonResult out;
  bool first = true;
  for (double th : centers) {
    std::vector<ProfilePoint> pts;
    for (int k = k_min; k <= k_max; ++k) {
      const double len = std::pow(2.0, -k);
      CarlesonBox box;
      box.center_angle = th;
      box.length = len;
      require_no_zero_in_box(G, box, grid.cap_radius);
      const IntegralResult r = box_integrate(density, box, grid);
      const double q = weight(len) * r.value / len;
      if (!std::isfinite(q) || std::abs(q) > kOverflowGuard) {
        throw DivergenceError("condition quantity exceeds the overflow "
                              "guard at |I|=" + std::to_string(len));
      }
      pts.push_back({len, std::max(q, 0.0)});
      out.sup_constant = std::max(out.sup_constant, q);
    }
    VanishingProfile prof = classify_profile(std::move(pts));
    if (first || severity(prof.verdict) > severity(out.worst.verdict)) {
      out.worst = prof;
      out.worst_center = th;
      first = false;
    }
    out.per_center.emplace_back(th, std::move(prof));
  }
  return out;
}

}  // namespace sgdetail

/// Default sweep centers: 8 uniform angles plus, for a boundary Denjoy-Wolff
/// point, its (singular) direction.
inline std::vector<double> default_condition_centers(const Semigroup& sg) {
  std::vector<double> centers;
  for (int j = 0; j < 8; ++j) centers.push_back(j * kTwoPi / 8);
  if (sgdetail::is_boundary_point(sg.dw_point)) {
    const double th =
        std::fmod(std::arg(sg.dw_point) + kTwoPi, kTwoPi);
    bool duplicate = false;
    for (double c : centers) {
      if (std::abs(c - th) < 1e-12) duplicate = true;
    }
    if (!duplicate) centers.push_back(th);
  }
  return centers;
}

/// (log(2/|I|))^p/|I| * integral_{S(I)} (1-|z|^2)^{p-1}/|G|^p dm.
inline CarlesonResult check_pLog(const AnalyticFn& G, double p,
                                 const std::vector<double>& centers,
                                 int k_min = 1, int k_max = 14,
                                 const GridSpec& grid = box_sweep_grid()) {
  return sgdetail::condition_sweep(
      G, p, centers, k_min, k_max, grid,
      [p](double len) { return std::pow(std::log(2.0 / len), p); });
}

/// (1/|I|) * integral_{S(I)} (1-|z|^2)^{p-1}/|G|^p dm.
inline CarlesonResult check_cond3(const AnalyticFn& G, double p,
                                  const std::vector<double>& centers,
                                  int k_min = 1, int k_max = 14,
                                  const GridSpec& grid = box_sweep_grid()) {
  return sgdetail::condition_sweep(G, p, centers, k_min, k_max, grid,
                                   [](double) { return 1.0; });
}

struct Cond2Result {
  VanishingProfile profile;  ///< param 1-|z| = 2^{-k}, value = angular sup
  bool bounded = false;
};

/// sup over angles of (1-|z|)^a/|G(z)| on circles |z| = 1-2^{-k}. Bounded
/// when the profile stabilizes or decays; unbounded when it keeps growing.
inline Cond2Result check_cond2(const AnalyticFn& G, double a_exponent,
                               int k_min = 1, int k_max = 14,
                               int n_angles = 512) {
  if (!(a_exponent > 0.0) || !(a_exponent < 1.0)) {
    throw ParameterError("cond2 exponent must lie in (0,1)");
  }
  if (k_min < 1 || k_max < k_min + 3 || k_max > 26 || n_angles < 16) {
    throw ParameterError("invalid cond2 schedule");
  }
  std::vector<ProfilePoint> pts;
  for (int k = k_min; k <= k_max; ++k) {
    const double r = 1.0 - std::pow(2.0, -k);
    const double w = std::pow(1.0 - r, a_exponent);
    double sup = 0.0;
    for (int j = 0; j < n_angles; ++j) {
      const double th = j * kTwoPi / n_angles;
      const Complex z(r * std::cos(th), r * std::sin(th));
      const double g = std::abs(G.raw(z));
      if (g < 1e-13) {
        throw RegionError("generator vanishes on the sampled circle");
      }
      sup = std::max(sup, w / g);
    }
    if (sup > kOverflowGuard) {
      throw DivergenceError("cond2 quantity exceeds the overflow guard");
    }
    pts.push_back({std::pow(2.0, -k), sup});
  }

  Cond2Result out;
  out.profile = classify_profile(std::move(pts));
  const auto& v = out.profile.points;
  const std::size_t n = v.size();
  const double v1 = v[n - 3].value, v2 = v[n - 2].value, v3 = v[n - 1].value;
  const double mx = std::max({v1, v2, v3});
  const double mn = std::min({v1, v2, v3});
  const bool stable = mn > 0.0 && mx <= kStableRatio * mn &&
                      v2 <= 1.05 * v1 && v3 <= 1.05 * v2;
  const bool decaying = v1 >= v2 && v2 >= v3;
  out.bounded = stable || decaying || mx == 0.0;
  return out;
}

}  // namespace bmoalab
