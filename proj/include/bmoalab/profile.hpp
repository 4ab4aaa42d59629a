#pragma once

// ---------------------------------------------------------------------------
// Dyadic limit profiles and their verdicts.
//
// Boundary limits (vanishing seminorms, Carleson ratios, strong-continuity
// norms) are probed on geometric parameter schedules; a profile records the
// sampled values and classifies the tail with explicit, reported thresholds.
// ---------------------------------------------------------------------------

#include <bmoalab/core.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace bmoalab {

enum class Verdict { Vanishes, BoundedNonvanishing, Diverges, Inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Vanishes: return "vanishes";
    case Verdict::BoundedNonvanishing: return "bounded-nonvanishing";
    case Verdict::Diverges: return "diverges";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

/// Severity order used when several profiles must be reduced to one verdict.
inline int severity(Verdict v) {
  switch (v) {
    case Verdict::Diverges: return 3;
    case Verdict::BoundedNonvanishing: return 2;
    case Verdict::Inconclusive: return 1;
    case Verdict::Vanishes: return 0;
  }
  return 1;
}

struct ProfilePoint {
  double param = 0.0;  ///< schedule parameter (|I|, 1-|a|, t, ...), decreasing
  double value = 0.0;  ///< probed quantity, >= 0
};

/// Sampled boundary-limit profile with a fitted log-log slope and a verdict.
struct VanishingProfile {
  std::vector<ProfilePoint> points;
  double slope = 0.0;  ///< d(log value)/d(log param) fitted on the tail
  Verdict verdict = Verdict::Inconclusive;
  std::vector<std::string> notes;

  [[nodiscard]] double max_value() const {
    double m = 0.0;
    for (const ProfilePoint& p : points) m = std::max(m, p.value);
    return m;
  }
  [[nodiscard]] double last_value() const {
    return points.empty() ? 0.0 : points.back().value;
  }
};

// Classification thresholds. A finite scheme cannot certify a limit; these
// cutoffs are policy, fixed here once and echoed in every report.
inline constexpr double kVanishFraction = 1e-3;  // tail below this x max
inline constexpr double kVanishSlope = 0.2;      // minimal decay exponent
inline constexpr double kFlatSlope = 0.05;       // |slope| bound for "bounded"
inline constexpr double kStableRatio = 1.2;      // max/min over the tail
inline constexpr double kDivergeFactor = 10.0;   // last vs first growth
inline constexpr int kExtrapolationOctaves = 40; // power-law look-ahead

namespace profiledetail {

/// Least-squares slope of log2(value) against log2(param) over the last
/// (up to) four points; values are clamped away from zero for the fit.
inline double tail_slope(const std::vector<ProfilePoint>& pts, double vmax) {
  const std::size_t n = pts.size();
  const std::size_t m = std::min<std::size_t>(n, 4);
  const double floor_v = vmax * 1e-15 + 1e-300;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = n - m; i < n; ++i) {
    const double x = std::log2(pts[i].param);
    const double y = std::log2(std::max(pts[i].value, floor_v));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = m * sxx - sx * sx;
  if (std::abs(denom) < 1e-30) return 0.0;
  return (m * sxy - sx * sy) / denom;
}

}  // namespace profiledetail

/// Classify a sampled profile. The schedule must be strictly decreasing and
/// positive; values must be nonnegative and finite.
inline VanishingProfile classify_profile(std::vector<ProfilePoint> pts) {
  if (pts.size() < 2) {
    throw ParameterError("profile needs at least two points");
  }
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!(pts[i].param > 0.0) || !std::isfinite(pts[i].param)) {
      throw ParameterError("profile parameters must be positive and finite");
    }
    if (i > 0 && !(pts[i].param < pts[i - 1].param)) {
      throw ParameterError("profile schedule must be strictly decreasing");
    }
    if (!std::isfinite(pts[i].value) || pts[i].value < 0.0) {
      throw ParameterError("profile values must be finite and nonnegative");
    }
  }

  VanishingProfile out;
  out.points = std::move(pts);
  const std::vector<ProfilePoint>& p = out.points;
  const std::size_t n = p.size();
  const double vmax = out.max_value();

  if (vmax < 1e-300) {
    out.slope = 0.0;
    out.verdict = Verdict::Vanishes;
    return out;
  }

  out.slope = profiledetail::tail_slope(p, vmax);
  const double last = p[n - 1].value;
  const double first = p[0].value;

  const bool decreasing3 =
      n >= 3 && p[n - 3].value > p[n - 2].value && p[n - 2].value > last;
  const bool increasing3 =
      n >= 3 && p[n - 3].value < p[n - 2].value && p[n - 2].value < last;

  double tail_min = last, tail_max = last;
  const std::size_t span = std::min<std::size_t>(n, 4);
  for (std::size_t i = n - span; i < n; ++i) {
    tail_min = std::min(tail_min, p[i].value);
    tail_max = std::max(tail_max, p[i].value);
  }
  const bool stable =
      tail_min > 0.0 && tail_max <= kStableRatio * tail_min;

  if (increasing3 && last > kDivergeFactor * first) {
    out.verdict = Verdict::Diverges;
    return out;
  }
  if (decreasing3 && out.slope > kVanishSlope) {
    // Direct smallness, or a power-law extrapolation of the fitted slope
    // over a fixed number of further octaves (slowly vanishing quantities
    // such as |I|^s log^p(2/|I|) need the look-ahead).
    const double extrapolated =
        last * std::pow(2.0, -kExtrapolationOctaves * out.slope);
    if (last < kVanishFraction * vmax || extrapolated < kVanishFraction * vmax) {
      out.verdict = Verdict::Vanishes;
      return out;
    }
  }
  if (std::abs(out.slope) <= kFlatSlope && stable) {
    out.verdict = Verdict::BoundedNonvanishing;
    return out;
  }
  out.verdict = Verdict::Inconclusive;
  return out;
}

}  // namespace bmoalab
