#pragma once

// ---------------------------------------------------------------------------
// Supremum search over the unit disc.
//
// Norm-type quantities sup_{a} Q(a) are located in two stages: a coarse sweep
// over rays x geometric radii 1-2^{-k} (matching the boundary-limit structure
// of the integrands), then a derivative-free simplex refinement seeded from
// the best sweep candidates. A cheap low-fidelity evaluator prunes the sweep;
// the refinement and all reported values use the full-fidelity evaluator.
// All tie-breaks are lexicographic so results are scheduling-independent.
// ---------------------------------------------------------------------------

#include <bmoalab/core.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace bmoalab {

/// Parameters of the sup-over-a search.
struct SupSearchSpec {
  int rays = 32;                        ///< uniform angle count
  int k_min = 0;                        ///< radii 1-2^{-k}, k = k_min..k_max
  int k_max = 14;
  double radius_cap = 1.0 - 0x1p-16;    ///< candidates projected inside this
  int refine_top = 8;                   ///< coarse survivors re-evaluated
  int simplex_iters = 60;               ///< refinement iterations
  std::vector<double> extra_angles;     ///< e.g. detected singular directions

  void validate() const {
    if (rays < 1 || rays > 4096) throw ParameterError("rays out of range");
    if (k_min < 0 || k_max < k_min || k_max > 40) {
      throw ParameterError("radius schedule out of range");
    }
    if (!(radius_cap > 0.0) || !(radius_cap < 1.0)) {
      throw ParameterError("radius_cap must lie in (0,1)");
    }
    if (refine_top < 1 || simplex_iters < 0) {
      throw ParameterError("invalid refinement parameters");
    }
  }
};

struct SearchSample {
  Complex arg{0.0, 0.0};
  double value = 0.0;
};

struct SupResult {
  Complex arg{0.0, 0.0};
  double value = 0.0;
  std::vector<SearchSample> trace;  ///< refined candidates, best first
  bool hit_radius_cap = false;      ///< still increasing at the deepest radius
};

namespace optdetail {

/// Strict deterministic "better" order: larger value wins, ties broken by
/// real part then imaginary part of the argument.
inline bool better(double v1, Complex a1, double v0, Complex a0) {
  if (v1 != v0) return v1 > v0;
  if (a1.real() != a0.real()) return a1.real() < a0.real();
  return a1.imag() < a0.imag();
}

inline Complex project_to_disc(Complex a, double cap) {
  const double r = std::abs(a);
  return r > cap ? a * (cap / r) : a;
}

/// Nelder-Mead on the plane, minimizing `negQ`, vertices projected into the
/// cap disc before every evaluation. Fixed iteration count, no stochastic
/// element, deterministic vertex ordering.
template <class F>
SearchSample simplex_maximize(F&& Q, std::array<Complex, 3> init, double cap,
                              int iters) {
  struct Vertex {
    Complex a;
    double q;
  };
  std::array<Vertex, 3> v;
  for (int i = 0; i < 3; ++i) {
    const Complex a = project_to_disc(init[i], cap);
    v[i] = {a, Q(a)};
  }
  const auto order = [](const Vertex& x, const Vertex& y) {
    return better(x.q, x.a, y.q, y.a);
  };
  for (int it = 0; it < iters; ++it) {
    std::sort(v.begin(), v.end(), order);  // v[0] best, v[2] worst
    const Complex centroid = 0.5 * (v[0].a + v[1].a);
    const auto eval_at = [&](Complex a) -> Vertex {
      a = project_to_disc(a, cap);
      return {a, Q(a)};
    };
    const Vertex refl = eval_at(centroid + (centroid - v[2].a));
    if (better(refl.q, refl.a, v[0].q, v[0].a)) {
      const Vertex expd = eval_at(centroid + 2.0 * (centroid - v[2].a));
      v[2] = better(expd.q, expd.a, refl.q, refl.a) ? expd : refl;
      continue;
    }
    if (better(refl.q, refl.a, v[1].q, v[1].a)) {
      v[2] = refl;
      continue;
    }
    const Vertex ctr = eval_at(centroid + 0.5 * (v[2].a - centroid));
    if (better(ctr.q, ctr.a, v[2].q, v[2].a)) {
      v[2] = ctr;
      continue;
    }
    // Shrink toward the best vertex.
    v[1] = eval_at(v[0].a + 0.5 * (v[1].a - v[0].a));
    v[2] = eval_at(v[0].a + 0.5 * (v[2].a - v[0].a));
  }
  std::sort(v.begin(), v.end(), order);
  return {v[0].a, v[0].q};
}

}  // namespace optdetail

/// Maximize Q over the closed disc |a| <= radius_cap with a two-fidelity
/// sweep-then-refine strategy. `coarse` must approximate `full` well enough
/// to rank candidates; every reported value comes from `full`.
template <class CoarseF, class FullF>
SupResult maximize_over_disc(CoarseF&& coarse, FullF&& full,
                             const SupSearchSpec& spec) {
  spec.validate();

  // Candidate lattice: origin once, then every angle at each schedule radius.
  std::vector<double> angles;
  angles.reserve(spec.rays + spec.extra_angles.size());
  for (int j = 0; j < spec.rays; ++j) angles.push_back(j * kTwoPi / spec.rays);
  for (double e : spec.extra_angles) {
    angles.push_back(std::fmod(std::fmod(e, kTwoPi) + kTwoPi, kTwoPi));
  }
  std::vector<double> radii;
  for (int k = std::max(spec.k_min, 1); k <= spec.k_max; ++k) {
    radii.push_back(std::min(1.0 - std::pow(2.0, -k), spec.radius_cap));
  }
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());

  std::vector<Complex> cand;
  cand.push_back(Complex(0.0, 0.0));
  for (double th : angles) {
    for (double r : radii) {
      cand.push_back(Complex(r * std::cos(th), r * std::sin(th)));
    }
  }

  std::vector<double> cval(cand.size());
  for (std::size_t i = 0; i < cand.size(); ++i) cval[i] = coarse(cand[i]);

  // Rank candidates; stable order keeps the selection deterministic.
  std::vector<std::size_t> idx(cand.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
    if (cval[i] != cval[j]) return cval[i] > cval[j];
    return i < j;
  });

  // Detect a sweep that is still climbing at the deepest radius: compare the
  // best value on the deepest radius ring with the ring one octave above.
  bool hit_cap = false;
  if (radii.size() >= 2) {
    const double r_deep = radii.back();
    const double r_prev = radii[radii.size() - 2];
    double best_deep = 0.0, best_prev = 0.0;
    for (std::size_t i = 1; i < cand.size(); ++i) {
      const double r = std::abs(cand[i]);
      if (std::abs(r - r_deep) < 1e-15) best_deep = std::max(best_deep, cval[i]);
      if (std::abs(r - r_prev) < 1e-15) best_prev = std::max(best_prev, cval[i]);
    }
    const double scale = std::max({std::abs(best_deep), std::abs(best_prev), 1e-300});
    hit_cap = best_deep > best_prev && best_deep - best_prev > 1e-14 * scale &&
              best_deep >= cval[idx[0]] - 1e-14 * scale;
  }

  const std::size_t top_n =
      std::min<std::size_t>(spec.refine_top, cand.size());
  std::vector<SearchSample> refined;
  refined.reserve(top_n);
  for (std::size_t t = 0; t < top_n; ++t) {
    const Complex a = cand[idx[t]];
    refined.push_back({a, full(a)});
  }
  std::stable_sort(refined.begin(), refined.end(),
                   [](const SearchSample& x, const SearchSample& y) {
                     return optdetail::better(x.value, x.arg, y.value, y.arg);
                   });

  SearchSample best = refined.front();

  if (spec.simplex_iters > 0) {
    std::array<Complex, 3> init;
    for (int i = 0; i < 3; ++i) {
      if (static_cast<std::size_t>(i) < refined.size()) {
        init[i] = refined[i].arg;
      } else {
        // Degenerate seed: offset the best point by a small fixed step.
        const double h = 0.05 * (1.0 - std::abs(best.arg)) + 1e-4;
        init[i] = best.arg + (i == 1 ? Complex(h, 0.0) : Complex(0.0, h));
      }
    }
    // Collapsed seeds (all coarse winners on one point) also get offsets.
    if (std::abs(init[1] - init[0]) < 1e-14) {
      const double h = 0.05 * (1.0 - std::abs(init[0])) + 1e-4;
      init[1] = init[0] + Complex(h, 0.0);
    }
    if (std::abs(init[2] - init[0]) < 1e-14 ||
        std::abs(init[2] - init[1]) < 1e-14) {
      const double h = 0.05 * (1.0 - std::abs(init[0])) + 1e-4;
      init[2] = init[0] + Complex(0.0, h);
    }
    const SearchSample polished = optdetail::simplex_maximize(
        full, init, spec.radius_cap, spec.simplex_iters);
    if (optdetail::better(polished.value, polished.arg, best.value, best.arg)) {
      best = polished;
    }
  }

  SupResult out;
  out.arg = best.arg;
  out.value = best.value;
  out.trace = std::move(refined);
  out.hit_radius_cap = hit_cap;
  return out;
}

}  // namespace bmoalab
