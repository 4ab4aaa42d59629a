#pragma once

// Volterra-type integral operators T_g(f)(z) = int_0^z f g' dzeta, the
// logarithmic Carleson sweep that governs their boundedness and compactness
// on BMOA_p, the gamma-symbol attached to a semigroup (interior-base and
// Koenigs boundary cases), and operator-norm lower bounds obtained from the
// standard logarithmic test functions.

#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "bmoalab/analytic.hpp"
#include "bmoalab/core.hpp"
#include "bmoalab/optimize.hpp"
#include "bmoalab/profile.hpp"
#include "bmoalab/quadrature.hpp"
#include "bmoalab/semigroup.hpp"
#include "bmoalab/spaces.hpp"

namespace bmoalab {

// ---------------------------------------------------------------------------
// The operator
// ---------------------------------------------------------------------------

/// f -> int_0^z f g'. The symbol's derivative view is cached so repeated
/// products with test functions do not re-wrap it.
struct VolterraOp {
  AnalyticFn symbol;        ///< g
  AnalyticFn symbol_deriv;  ///< g' as a function
};

[[nodiscard]] inline VolterraOp make_volterra(const AnalyticFn& g) {
  return VolterraOp{g, derivative_view(g)};
}

/// T_g(f)(z) by composite 8-point Gauss-Legendre quadrature along the
/// straight segment from 0 to z (inside the disc by convexity). The rule is
/// evaluated once more at doubled resolution and the refined value returned.
[[nodiscard]] inline Complex apply_Tg(const VolterraOp& op, const AnalyticFn& f,
                                      Complex z, int n_path_nodes = 64) {
  if (!in_open_disc(z)) {
    throw DomainError("T_g evaluation point must lie in the open disc");
  }
  if (n_path_nodes < 8 || n_path_nodes > (1 << 20)) {
    throw ParameterError("path node count out of range");
  }
  const auto segment = [&](int nodes) {
    const int panels = (nodes + 7) / 8;
    Complex acc(0.0, 0.0);
    for (int j = 0; j < panels; ++j) {
      const double lo = static_cast<double>(j) / panels;
      const double hi = static_cast<double>(j + 1) / panels;
      const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
      for (int k = 0; k < 8; ++k) {
        const double t = mid + half * kGl8X[k];
        const Complex zeta = t * z;
        acc += (half * kGl8W[k]) * f.raw(zeta) * op.symbol_deriv.raw(zeta);
      }
    }
    return acc * z;
  };
  const Complex coarse = segment(n_path_nodes);
  const Complex fine = segment(2 * n_path_nodes);
  if (!std::isfinite(fine.real()) || !std::isfinite(fine.imag())) {
    throw IntegrandError("non-finite integrand on the T_g path");
  }
  if (std::abs(fine - coarse) > 1e-3 * (1.0 + std::abs(fine))) {
    throw IntegrandError("T_g path quadrature failed to converge");
  }
  return fine;
}

/// T_g(f) as an AnalyticFn; its derivative is the product f g' exactly.
[[nodiscard]] inline AnalyticFn tg_as_fn(const VolterraOp& op,
                                         const AnalyticFn& f,
                                         int n_path_nodes = 64) {
  return primitive(multiply(f, op.symbol_deriv), Complex(0.0, 0.0),
                   n_path_nodes);
}

// ---------------------------------------------------------------------------
// Logarithmic Carleson sweep
// ---------------------------------------------------------------------------

/// Dyadic sweep of (log(2/|I|))^p/|I| * int_{S(I)} |g'|^p (1-|z|^2)^{p-1} dm
/// per center. "Vanishes" at every center is the compactness case; a diverging
/// profile means T_g is not bounded on BMOA_p.
inline CarlesonResult logcar_profile(const AnalyticFn& g, double p,
                                     const std::vector<double>& centers,
                                     int k_min = 1, int k_max = 14,
                                     const GridSpec& grid = box_sweep_grid()) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw ParameterError("log-Carleson sweep needs 1 <= p < inf");
  }
  grid.validate();
  if (centers.empty()) throw ParameterError("no box centers given");
  if (k_min < 0 || k_max < k_min + 3 || k_max > 26) {
    throw ParameterError("invalid dyadic box schedule");
  }
  const auto density = [&](Complex z) {
    const double d2 = abs2(g.raw_deriv(z));
    return std::pow(d2, 0.5 * p) * std::pow(1.0 - abs2(z), p - 1.0);
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
      const IntegralResult r = box_integrate(density, box, grid);
      const double q = std::pow(std::log(2.0 / len), p) * r.value / len;
      if (!std::isfinite(q) || std::abs(q) > kOverflowGuard) {
        throw DivergenceError(
            "log-Carleson quantity exceeds the overflow guard at |I|=" +
            std::to_string(len));
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

/// Boundedness reading of a log-Carleson sweep.
[[nodiscard]] inline bool logcar_bounded(const CarlesonResult& r) {
  return r.worst.verdict == Verdict::Vanishes ||
         r.worst.verdict == Verdict::BoundedNonvanishing;
}

/// Compactness reading of a log-Carleson sweep.
[[nodiscard]] inline bool logcar_compact(const CarlesonResult& r) {
  return r.worst.verdict == Verdict::Vanishes;
}

// ---------------------------------------------------------------------------
// Gamma-symbol of a semigroup
// ---------------------------------------------------------------------------

enum class GammaCase { Interior, Boundary };

[[nodiscard]] constexpr const char* to_string(GammaCase c) {
  return c == GammaCase::Interior ? "interior" : "boundary";
}

struct GammaSymbol {
  AnalyticFn gamma;  ///< the symbol as a primitive over segment paths
  GammaCase tag = GammaCase::Interior;
  Complex dw_point{};  ///< b
  std::string source;  ///< label of the generating semigroup
};

namespace voldetail {

/// Sample the magnitude of the path integrand along a deterministic family
/// of segments from `base` and fail when it spikes far above its median —
/// the signature of a generator zero sitting on (or near) a path. Samples
/// inside the excluded disc around `skip` are ignored: near an interior
/// Denjoy-Wolff point the integrand is patched, near a boundary one it blows
/// up legitimately.
template <typename M>
void require_zero_free_paths(M&& integrand_magnitude, Complex base,
                             Complex skip, double skip_radius) {
  std::vector<double> vals;
  vals.reserve(24 * 3 * 65);
  for (int j = 0; j < 24; ++j) {
    const double th = j * kTwoPi / 24;
    for (double r : {0.3, 0.6, 0.85}) {
      const Complex end(r * std::cos(th), r * std::sin(th));
      for (int s = 0; s <= 64; ++s) {
        const Complex zeta =
            base + (static_cast<double>(s) / 64.0) * (end - base);
        if (std::abs(zeta) > 0.9) continue;
        if (std::abs(zeta - skip) < skip_radius) continue;
        const double m = integrand_magnitude(zeta);
        if (!std::isfinite(m)) {
          throw PathError("generator vanishes on an integration path");
        }
        vals.push_back(m);
      }
    }
  }
  if (vals.size() < 16) return;
  std::vector<double> sorted = vals;
  std::sort(sorted.begin(), sorted.end());
  const double median = sorted[sorted.size() / 2];
  const double cutoff = 50.0 * std::max(median, 1e-300);
  for (double m : vals) {
    if (m > cutoff) {
      throw PathError("generator vanishes on an integration path");
    }
  }
}

}  // namespace voldetail

/// gamma(z) = int_b^z (zeta-b)/G dzeta for an interior Denjoy-Wolff point b
/// (the removable singularity at b is patched by the limit 1/G'(b)), and the
/// Koenigs-type primitive int_0^z dzeta/G for a boundary one.
[[nodiscard]] inline GammaSymbol gamma_symbol(const Semigroup& sg,
                                              int n_path_nodes = 64) {
  const Complex b = sg.dw_point;
  const AnalyticFn G = sg.generator;
  GammaSymbol out;
  out.dw_point = b;
  out.source = sg.label;

  if (sgdetail::is_boundary_point(b)) {
    out.tag = GammaCase::Boundary;
    voldetail::require_zero_free_paths(
        [&](Complex z) { return 1.0 / std::abs(G.raw(z)); },
        Complex(0.0, 0.0), b, 0.3);
    const AnalyticFn recip = make_custom(
        [G](Complex z) -> Complex {
          const Complex g = G.raw(z);
          if (std::abs(g) < 1e-300) {
            throw PathError("generator vanishes on the integration path");
          }
          return Complex(1.0, 0.0) / g;
        },
        [G](Complex z) -> Complex {
          const Complex g = G.raw(z);
          return -G.raw_deriv(z) / (g * g);
        },
        "1/generator");
    out.gamma = primitive(recip, Complex(0.0, 0.0), n_path_nodes);
    return out;
  }

  out.tag = GammaCase::Interior;
  const Complex gpb = G.raw_deriv(b);
  if (!(std::abs(gpb) > 1e-10)) {
    throw GeneratorError(
        "interior fixed point is a higher-order zero of the generator");
  }
  voldetail::require_zero_free_paths(
      [&](Complex z) { return std::abs(z - b) / std::abs(G.raw(z)); }, b, b,
      1e-3);
  const AnalyticFn patched = make_custom(
      [G, b, gpb](Complex z) -> Complex {
        if (std::abs(z - b) < 1e-6) return Complex(1.0, 0.0) / gpb;
        const Complex g = G.raw(z);
        if (std::abs(g) < 1e-300) {
          throw PathError("generator vanishes on the integration path");
        }
        return (z - b) / g;
      },
      [G, b, gpb](Complex z) -> Complex {
        if (std::abs(z - b) < 1e-6) return Complex(0.0, 0.0);
        const Complex g = G.raw(z);
        return (g - (z - b) * G.raw_deriv(z)) / (g * g);
      },
      "(z-b)/generator");
  out.gamma = primitive(patched, b, n_path_nodes);
  return out;
}

// ---------------------------------------------------------------------------
// Operator-norm lower bounds
// ---------------------------------------------------------------------------

struct TgLowerBound {
  double value = 0.0;        ///< max norm ratio over the schedule
  Complex witness{};         ///< schedule point attaining it
  VanishingProfile profile;  ///< ratio vs 1-|a|
  bool unbounded = false;    ///< ratios keep growing toward the boundary
  std::vector<std::string> warnings;
};

/// max over the schedule of ||T_g(f_a)||_{BMOA_{p_to}} / ||f_a||_{BMOA_{p_from}}
/// with f_a(z) = log(1/(1 - conj(a) z)) — a certified lower bound for the
/// operator norm. A diverging ratio profile raises the unbounded flag.
inline TgLowerBound tg_lower_bound(const VolterraOp& op, double p_from,
                                   double p_to,
                                   const std::vector<Complex>& a_schedule,
                                   const GridSpec& grid = GridSpec{},
                                   const SupSearchSpec& search = SupSearchSpec{}) {
  SpaceParam{p_from}.validate();
  SpaceParam{p_to}.validate();
  if (a_schedule.size() < 2) {
    throw ParameterError("schedule needs at least two points");
  }
  for (std::size_t i = 0; i < a_schedule.size(); ++i) {
    if (!in_open_disc(a_schedule[i])) {
      throw ParameterError("schedule points must lie in the open disc");
    }
    if (i > 0 && !(std::abs(a_schedule[i]) > std::abs(a_schedule[i - 1]))) {
      throw ParameterError("schedule must approach the boundary strictly");
    }
  }

  TgLowerBound out;
  std::vector<ProfilePoint> pts;
  for (Complex a : a_schedule) {
    const AnalyticFn fa = make_log_recip_one_minus(std::conj(a));
    double ratio = 0.0;
    try {
      const NormEstimate den = bmoa_norm(fa, SpaceParam{p_from}, grid, search);
      const NormEstimate num =
          bmoa_norm(tg_as_fn(op, fa), SpaceParam{p_to}, grid, search);
      ratio = den.value > 0.0 ? num.value / den.value : 0.0;
    } catch (const DivergenceError& e) {
      out.unbounded = true;
      out.warnings.push_back(std::string("schedule stopped: ") + e.what());
      break;
    }
    pts.push_back({1.0 - std::abs(a), ratio});
    if (ratio > out.value) {
      out.value = ratio;
      out.witness = a;
    }
  }
  if (pts.size() >= 2) {
    out.profile = classify_profile(std::move(pts));
    // "Increasing without stabilization": a diverging verdict, or sustained
    // growth toward the boundary that is too fast to read as flat.
    const auto& q = out.profile.points;
    const std::size_t n = q.size();
    const bool rising = n >= 3 && q[n - 1].value > q[n - 2].value &&
                        q[n - 2].value > q[n - 3].value;
    if (out.profile.verdict == Verdict::Diverges ||
        (rising && out.profile.slope < -kFlatSlope &&
         q[n - 1].value > 2.0 * q[0].value)) {
      out.unbounded = true;
    }
  }
  return out;
}

/// VMOA_p profile of the image T_g(f) (delegates to the spaces sweep).
inline VanishingProfile tg_image_vmoa_check(const VolterraOp& op,
                                            const AnalyticFn& f, SpaceParam sp,
                                            const GridSpec& grid = GridSpec{},
                                            int rays = 8, int k_min = 2,
                                            int k_max = 14) {
  return vmoa_profile(tg_as_fn(op, f), sp, grid, rays, k_min, k_max);
}

}  // namespace bmoalab
