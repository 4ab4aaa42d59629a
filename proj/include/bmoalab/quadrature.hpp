#pragma once

// Quadrature over the unit disc, Carleson boxes and interior circles.
//
// The disc and box rules are tensor products of a graded radial rule
// (two-point Gauss cells on a boundary-clustered partition, exact for the
// area densities the oracles use) and an angular rule (uniform midpoint
// cells, optionally refined by dyadic Gauss panels around a set of marked
// angles so that boundary-singular integrands stay resolved at every scale).

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "bmoalab/core.hpp"

namespace bmoalab {

struct GridSpec {
  int radial_count = 512;    ///< graded radial cells (2 Gauss nodes each)
  int angular_count = 1024;  ///< uniform angular cells before refinement
  double grading = 3.0;      ///< clustering exponent toward the boundary
  double cap_radius = 1.0 - 0x1p-20;  ///< integration truncated at |z| <= cap

  void validate() const {
    if (radial_count < 16) throw ParameterError("grid: radial_count must be >= 16");
    if (angular_count < 32) throw ParameterError("grid: angular_count must be >= 32");
    if (!(grading >= 1.0)) throw ParameterError("grid: grading must be >= 1");
    if (!(cap_radius > 0.0) || cap_radius > 1.0)
      throw ParameterError("grid: cap_radius must lie in (0, 1]");
  }

  [[nodiscard]] GridSpec doubled() const {
    GridSpec g = *this;
    g.radial_count *= 2;
    g.angular_count *= 2;
    return g;
  }
  [[nodiscard]] GridSpec halved() const {
    GridSpec g = *this;
    g.radial_count = std::max(16, g.radial_count / 2);
    g.angular_count = std::max(32, g.angular_count / 2);
    return g;
  }
};

/// Carleson box S(I) = { r e^{it} : |t - center| <= length/2, 1-length < r < 1 }.
struct CarlesonBox {
  double center_angle = 0.0;
  double length = 1.0;  ///< arc length |I|, in (0, 2*pi]

  void validate() const {
    if (!(length > 0.0) || length > kTwoPi)
      throw ParameterError("box: length must lie in (0, 2*pi]");
  }
};

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t nodes_used = 0;
};

// ---------------------------------------------------------------------------
// Rule construction
// ---------------------------------------------------------------------------

struct SeparableMesh {
  std::vector<double> r, wr;      ///< radial nodes / weights (weight has r dr)
  std::vector<double> th, wth;    ///< angular nodes / weights (plain d-theta)
  double measure_scale = 1.0 / kPi;  ///< dm = r dr dtheta / pi
  [[nodiscard]] std::size_t nodes() const { return r.size() * th.size(); }
};

namespace quaddetail {

inline constexpr double kInvSqrt3 = 0.5773502691896257;

/// Graded partition of [lo, hi] clustering at hi; two Gauss nodes per cell,
/// weights carrying the r dr factor.
inline void radial_rule(int cells, double grading, double lo, double hi,
                        std::vector<double>& r, std::vector<double>& w) {
  r.clear();
  w.clear();
  if (!(hi > lo)) return;
  r.reserve(2 * static_cast<std::size_t>(cells));
  w.reserve(2 * static_cast<std::size_t>(cells));
  double b_prev = lo;
  for (int j = 1; j <= cells; ++j) {
    const double frac = 1.0 - std::pow(1.0 - static_cast<double>(j) / cells,
                                       grading);
    const double b = (j == cells) ? hi : lo + (hi - lo) * frac;
    const double mid = 0.5 * (b_prev + b);
    const double half = 0.5 * (b - b_prev);
    for (int k = 0; k < 2; ++k) {
      const double x = mid + (k == 0 ? -1.0 : 1.0) * half * kInvSqrt3;
      r.push_back(x);
      w.push_back(half * x);  // GL2 weight 1.0 times the r factor
    }
    b_prev = b;
  }
}

struct Window {
  std::int64_t center_cell;  ///< cell-edge index the window is centred on
  std::int64_t half_cells;   ///< halfwidth in whole cells
};

/// Snap refinement centres to cell edges and merge overlapping windows
/// (cell arithmetic modulo the cell count keeps this deterministic).
inline std::vector<Window> snap_windows(const std::vector<double>& centers,
                                        double cell, std::int64_t n_cells,
                                        std::int64_t min_half_cells,
                                        double origin) {
  std::vector<Window> ws;
  for (double c : centers) {
    std::int64_t m = static_cast<std::int64_t>(
        std::llround((c - origin) / cell));
    m = ((m % n_cells) + n_cells) % n_cells;
    ws.push_back({m, min_half_cells});
  }
  std::sort(ws.begin(), ws.end(), [](const Window& a, const Window& b) {
    return a.center_cell < b.center_cell;
  });
  // Merge overlaps (including the circular seam) until stable.
  bool merged = true;
  while (merged && ws.size() > 1) {
    merged = false;
    for (std::size_t i = 0; i < ws.size() && ws.size() > 1; ++i) {
      const std::size_t j = (i + 1) % ws.size();
      std::int64_t ci = ws[i].center_cell, cj = ws[j].center_cell;
      std::int64_t gap = cj - ci;
      if (j == 0) gap += n_cells;
      if (gap <= ws[i].half_cells + ws[j].half_cells) {
        const std::int64_t span_lo = ci - ws[i].half_cells;
        const std::int64_t span_hi = ci + gap + ws[j].half_cells;
        Window w;
        w.center_cell = ((span_lo + span_hi) / 2 % n_cells + n_cells) % n_cells;
        w.half_cells = (span_hi - span_lo + 1) / 2;
        ws[i] = w;
        ws.erase(ws.begin() + static_cast<std::ptrdiff_t>(j));
        merged = true;
        break;
      }
    }
  }
  for (auto& w : ws)
    w.half_cells = std::min<std::int64_t>(w.half_cells, n_cells / 2);
  return ws;
}

/// 8-point Gauss nodes on [center + sgn*lo, center + sgn*hi].
inline void append_half_panel(std::vector<double>& th,
                              std::vector<double>& wth, double center,
                              double sgn, double lo, double hi) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  for (int k = 0; k < 8; ++k) {
    th.push_back(center + sgn * (mid + half * kGl8X[k]));
    wth.push_back(half * kGl8W[k]);
  }
}

/// One-sided dyadic ladder from `center` out to distance `width`: panels
/// [d/2, d] shrinking toward the center down to min_scale, then one
/// innermost panel closing the gap.
inline void append_ladder(std::vector<double>& th, std::vector<double>& wth,
                          double center, double sgn, double width,
                          double min_scale) {
  if (!(width > 0.0)) return;
  double d = width;
  while (d > min_scale * 2.0) {
    const double lo = 0.5 * d;
    append_half_panel(th, wth, center, sgn, lo, d);
    d = lo;
  }
  append_half_panel(th, wth, center, sgn, 0.0, d);
}

/// Uniform midpoint cells over an arc of width `span` starting at `start`,
/// with dyadic 8-point Gauss panels replacing the cells inside each window.
/// Window extents are snapped to whole cells, but the panel ladders aim at
/// the exact marked angles (several marked angles sharing one merged window
/// split it at their midpoints), so singularities sit at ladder centres.
inline void angular_rule(double start, double span, int n_cells,
                         const std::vector<double>& window_centers,
                         double min_scale, std::vector<double>& th,
                         std::vector<double>& wth) {
  th.clear();
  wth.clear();
  const double cell = span / n_cells;
  const std::int64_t n = n_cells;
  const std::vector<Window> ws =
      snap_windows(window_centers, cell, n, 16, start);

  std::vector<char> dropped(static_cast<std::size_t>(n), 0);
  for (const Window& w : ws) {
    for (std::int64_t d = -w.half_cells; d < w.half_cells; ++d) {
      std::int64_t c = ((w.center_cell + d) % n + n) % n;
      dropped[static_cast<std::size_t>(c)] = 1;
    }
  }
  for (std::int64_t j = 0; j < n; ++j) {
    if (dropped[static_cast<std::size_t>(j)]) continue;
    th.push_back(start + (static_cast<double>(j) + 0.5) * cell);
    wth.push_back(cell);
  }
  for (const Window& w : ws) {
    const double c0 = start + static_cast<double>(w.center_cell) * cell;
    const double w0 = static_cast<double>(w.half_cells) * cell;
    const double lo = c0 - w0, hi = c0 + w0;
    // Lift the marked angles into this window's (unwrapped) extent.
    std::vector<double> centers;
    for (double c : window_centers) {
      for (double s : {c - span, c, c + span}) {
        if (s > lo && s < hi) {
          centers.push_back(s);
          break;
        }
      }
    }
    std::sort(centers.begin(), centers.end());
    centers.erase(std::unique(centers.begin(), centers.end(),
                              [&](double a, double b) {
                                return std::abs(a - b) <= min_scale;
                              }),
                  centers.end());
    if (centers.empty()) centers.push_back(c0);
    double seg_lo = lo;
    for (std::size_t i = 0; i < centers.size(); ++i) {
      const double seg_hi = (i + 1 < centers.size())
                                ? 0.5 * (centers[i] + centers[i + 1])
                                : hi;
      append_ladder(th, wth, centers[i], -1.0, centers[i] - seg_lo, min_scale);
      append_ladder(th, wth, centers[i], +1.0, seg_hi - centers[i], min_scale);
      seg_lo = seg_hi;
    }
  }
}

}  // namespace quaddetail

/// Disc mesh for |z| <= cap with optional angular refinement windows.
[[nodiscard]] inline SeparableMesh build_disc_mesh(
    const GridSpec& grid, const std::vector<double>& window_centers = {}) {
  grid.validate();
  SeparableMesh m;
  quaddetail::radial_rule(grid.radial_count, grid.grading, 0.0,
                          grid.cap_radius, m.r, m.wr);
  quaddetail::angular_rule(0.0, kTwoPi, grid.angular_count, window_centers,
                           0x1p-26, m.th, m.wth);
  return m;
}

/// Box mesh for S(I); the radial partition clusters at r = 1 and stops at
/// relative depth (1 - cap) * |I|; a refinement window sits at the arc centre.
[[nodiscard]] inline SeparableMesh build_box_mesh(const CarlesonBox& box,
                                                  const GridSpec& grid) {
  grid.validate();
  box.validate();
  SeparableMesh m;
  const double len = box.length;
  const double depth = std::min(len, 1.0);
  const double r_lo = 1.0 - depth;
  const double r_hi = 1.0 - (1.0 - grid.cap_radius) * depth;
  quaddetail::radial_rule(grid.radial_count, grid.grading, r_lo, r_hi, m.r,
                          m.wr);
  quaddetail::angular_rule(box.center_angle - 0.5 * len, len,
                           grid.angular_count, {box.center_angle},
                           len * 0x1p-22, m.th, m.wth);
  return m;
}

// ---------------------------------------------------------------------------
// Mesh integration
// ---------------------------------------------------------------------------

/// Sum of F(z) over the mesh against dm = r dr dtheta / pi.  Non-finite
/// integrand values (or exceptions raised by F) surface as IntegrandError.
template <typename F>
double integrate_mesh(const SeparableMesh& m, F&& f) {
  const std::size_t nr = m.r.size(), nth = m.th.size();
  std::atomic<bool> bad{false};
  std::atomic<std::size_t> bad_index{0};
  const double total = parallel::reduce(nr * nth, [&](std::size_t i) {
    const std::size_t ti = i / nr, ri = i % nr;
    double v;
    try {
      const double th = m.th[ti];
      v = f(Complex(m.r[ri] * std::cos(th), m.r[ri] * std::sin(th)));
    } catch (...) {
      v = std::numeric_limits<double>::quiet_NaN();
    }
    if (!std::isfinite(v)) {
      if (!bad.exchange(true)) bad_index.store(i);
      return 0.0;
    }
    return v * m.wr[ri] * m.wth[ti] * m.measure_scale;
  });
  if (bad.load()) {
    const std::size_t i = bad_index.load();
    const std::size_t ti = i / nr, ri = i % nr;
    throw IntegrandError("non-finite integrand at node r=" +
                         std::to_string(m.r[ri]) + " theta=" +
                         std::to_string(m.th[ti]));
  }
  return total;
}

/// Integral of F over {|z| <= cap} against dm, with a one-doubling error
/// estimate.
template <typename F>
IntegralResult disc_integrate(F&& f, const GridSpec& grid,
                              const std::vector<double>& windows = {}) {
  const SeparableMesh base = build_disc_mesh(grid, windows);
  const SeparableMesh fine = build_disc_mesh(grid.doubled(), windows);
  IntegralResult out;
  out.value = integrate_mesh(base, f);
  out.error_estimate = std::abs(out.value - integrate_mesh(fine, f));
  out.nodes_used = base.nodes();
  if (std::abs(out.value) > kOverflowGuard)
    throw DivergenceError("disc integral exceeds overflow guard");
  return out;
}

/// Integral of F over the Carleson box S(I) against dm.
template <typename F>
IntegralResult box_integrate(F&& f, const CarlesonBox& box,
                             const GridSpec& grid) {
  const SeparableMesh base = build_box_mesh(box, grid);
  const SeparableMesh fine = build_box_mesh(box, grid.doubled());
  IntegralResult out;
  out.value = integrate_mesh(base, f);
  out.error_estimate = std::abs(out.value - integrate_mesh(fine, f));
  out.nodes_used = base.nodes();
  if (std::abs(out.value) > kOverflowGuard)
    throw DivergenceError("box integral exceeds overflow guard");
  return out;
}

/// Normalised circle mean (1/2pi) * int F(rho e^{i t}) dt by the periodic
/// trapezoid rule.
template <typename F>
IntegralResult circle_integrate(F&& f, double rho, int n_nodes = 4096) {
  if (!(rho > 0.0) || rho >= 1.0)
    throw ParameterError("circle: radius must lie in (0, 1)");
  if (n_nodes < 16) throw ParameterError("circle: need at least 16 nodes");
  auto mean = [&](int n) {
    std::atomic<bool> bad{false};
    const double s = parallel::reduce(static_cast<std::size_t>(n),
                                      [&](std::size_t j) {
      const double t = kTwoPi * (static_cast<double>(j) + 0.5) / n;
      double v;
      try {
        v = f(Complex(rho * std::cos(t), rho * std::sin(t)));
      } catch (...) {
        v = std::numeric_limits<double>::quiet_NaN();
      }
      if (!std::isfinite(v)) {
        bad.store(true);
        return 0.0;
      }
      return v / n;
    });
    if (bad.load())
      throw IntegrandError("non-finite integrand on circle of radius " +
                           std::to_string(rho));
    return s;
  };
  IntegralResult out;
  out.value = mean(n_nodes);
  out.error_estimate = std::abs(out.value - mean(2 * n_nodes));
  out.nodes_used = static_cast<std::size_t>(n_nodes);
  return out;
}

/// Closed-form normalised area of S(I) for |I| <= 1 (oracle helper).
[[nodiscard]] inline double box_area(double length) {
  return length * length * (1.0 - 0.5 * length) / kPi;
}

// ---------------------------------------------------------------------------
// Boundary spike detection
// ---------------------------------------------------------------------------

/// Angles where `magnitude` (sampled on probe circles near the boundary)
/// spikes two orders of magnitude above its median.  Consecutive flagged
/// probes are merged into one spike cluster and each cluster is refined by a
/// golden-section search to the actual peak angle, so downstream refinement
/// windows centre on the singularity rather than on the nearest probe node.
/// `magnitude` takes a point of the disc.
template <typename M>
[[nodiscard]] std::vector<double> detect_spike_angles(M&& magnitude,
                                                      int n_probe = 1024) {
  const std::array<double, 3> depths = {0x1p-8, 0x1p-12, 0x1p-16};
  const auto probe = [&](double th, double depth) {
    const double r = 1.0 - depth;
    const double m = magnitude(Complex(r * std::cos(th), r * std::sin(th)));
    if (std::isnan(m)) return 0.0;
    return std::isfinite(m) ? m : std::numeric_limits<double>::max();
  };
  std::vector<double> v(static_cast<std::size_t>(n_probe), 0.0);
  for (int j = 0; j < n_probe; ++j) {
    const double th = kTwoPi * (static_cast<double>(j) + 0.5) / n_probe;
    double worst = 0.0;
    for (double d : depths) worst = std::max(worst, probe(th, d));
    v[static_cast<std::size_t>(j)] = worst;
  }
  std::vector<double> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  const double median = sorted[sorted.size() / 2];
  if (!(median > 0.0)) return {};
  const double cutoff = 100.0 * median;
  std::vector<bool> hot(static_cast<std::size_t>(n_probe), false);
  bool any = false;
  for (int j = 0; j < n_probe; ++j) {
    if (v[static_cast<std::size_t>(j)] > cutoff) {
      hot[static_cast<std::size_t>(j)] = true;
      any = true;
    }
  }
  if (!any) return {};

  // Circular clustering of hot probes: start each run at a probe whose left
  // neighbour is cold, extend rightward.  All-hot degenerates to one run.
  const auto wrap = [n_probe](int j) { return (j % n_probe + n_probe) % n_probe; };
  std::vector<std::pair<int, int>> runs;
  bool all_hot = true;
  for (int j = 0; j < n_probe && all_hot; ++j) all_hot = hot[static_cast<std::size_t>(j)];
  if (all_hot) {
    runs.emplace_back(0, n_probe - 1);
  } else {
    for (int j = 0; j < n_probe; ++j) {
      if (!hot[static_cast<std::size_t>(j)] ||
          hot[static_cast<std::size_t>(wrap(j - 1))]) {
        continue;
      }
      int end = j;
      while (hot[static_cast<std::size_t>(wrap(end + 1))]) ++end;
      runs.emplace_back(j, end);
    }
  }

  // Peak refinement at the sharpest probe depth.
  const double spacing = kTwoPi / n_probe;
  const double deep = depths.back();
  const auto golden_peak = [&](double lo, double hi) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = probe(x1, deep), f2 = probe(x2, deep);
    for (int it = 0; it < 48; ++it) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + gr * (hi - lo);
        f2 = probe(x2, deep);
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - gr * (hi - lo);
        f1 = probe(x1, deep);
      }
    }
    return 0.5 * (lo + hi);
  };
  const auto normalise = [](double th) {
    th = std::fmod(th, kTwoPi);
    return th < 0.0 ? th + kTwoPi : th;
  };

  std::vector<std::pair<double, double>> peaks;  // (-strength, angle)
  for (const auto& [j0, j1] : runs) {
    const double lo = (static_cast<double>(j0) - 0.5) * spacing;
    const double hi = (static_cast<double>(j1) + 1.5) * spacing;
    const double peak = golden_peak(lo, hi);
    peaks.emplace_back(-probe(peak, deep), normalise(peak));
    // A difference of two nearby singular factors shows up as a spike pair
    // inside one run; look for a secondary peak on each side of the first.
    for (const auto& [slo, shi] :
         {std::pair{lo, peak - 0x1p-30}, std::pair{peak + 0x1p-30, hi}}) {
      if (!(shi > slo)) continue;
      const double side = golden_peak(slo, shi);
      const double ms = probe(side, deep);
      if (std::abs(side - peak) > 16.0 * 0x1p-30 && ms > cutoff &&
          ms > probe(side - 0x1p-20, deep) && ms > probe(side + 0x1p-20, deep)) {
        peaks.emplace_back(-ms, normalise(side));
      }
    }
  }
  std::sort(peaks.begin(), peaks.end());
  if (peaks.size() > 64) peaks.resize(64);
  std::vector<double> out;
  out.reserve(peaks.size());
  for (const auto& pr : peaks) out.push_back(pr.second);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double a, double b) { return std::abs(a - b) < 1e-9; }),
            out.end());
  return out;
}

}  // namespace bmoalab
