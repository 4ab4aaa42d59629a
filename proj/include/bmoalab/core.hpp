#pragma once

// Shared scalar types, error taxonomy, compensated summation and the
// deterministic parallel reduction used by every integrator in the library.

#include <atomic>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace bmoalab {

inline constexpr const char* kToolVersion = "0.1.0";

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Values above this are treated as numerically divergent.
inline constexpr double kOverflowGuard = 1e12;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Bad parameter for a catalog symbol, grid, space or search spec.
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Evaluation requested outside the open unit disc.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// compose(f, g) where g fails the self-map check.
struct SelfMapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Non-finite integrand value at a quadrature node.
struct IntegrandError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Integral or norm exceeding the overflow guard across refinements.
struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Generator fails a semigroup admissibility requirement.
struct GeneratorError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// ODE trajectory left the closed unit disc (modulo guard band).
struct ContainmentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A swept Carleson box contains a zero of the generator.
struct RegionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Integration path for a primitive crosses a zero or singularity.
struct PathError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Compensated summation
// ---------------------------------------------------------------------------

/// Neumaier-compensated accumulator; error stays within a couple of ulp
/// per addition regardless of term ordering inside one accumulator.
class KahanSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  [[nodiscard]] double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// ---------------------------------------------------------------------------
// Deterministic parallel reduction
// ---------------------------------------------------------------------------

namespace parallel {

inline std::atomic<int>& thread_count_slot() {
  static std::atomic<int> n{static_cast<int>(
      std::max(1u, std::thread::hardware_concurrency()))};
  return n;
}

inline void set_threads(int n) { thread_count_slot().store(n < 1 ? 1 : n); }
inline int threads() { return thread_count_slot().load(); }

/// Number of fixed reduction chunks.  Independent of the worker count, so
/// the partial sums (and therefore the result bit pattern) never depend on
/// how many threads execute them.
inline constexpr std::size_t kChunks = 64;

/// Deterministic sum of term(i) for i in [0, n).  Each fixed chunk is
/// accumulated sequentially with compensation; chunk partials are combined
/// in index order on the calling thread.
template <typename Term>
double reduce(std::size_t n, Term&& term) {
  if (n == 0) return 0.0;
  const std::size_t chunks = std::min(kChunks, n);
  std::vector<double> partial(chunks, 0.0);
  auto run_chunk = [&](std::size_t c) {
    const std::size_t lo = n * c / chunks;
    const std::size_t hi = n * (c + 1) / chunks;
    KahanSum acc;
    for (std::size_t i = lo; i < hi; ++i) acc.add(term(i));
    partial[c] = acc.value();
  };

  const int workers = std::min<int>(threads(), static_cast<int>(chunks));
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          std::size_t c = next.fetch_add(1);
          if (c >= chunks) return;
          run_chunk(c);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  KahanSum total;
  for (double p : partial) total.add(p);
  return total.value();
}

/// Deterministic parallel for: body(i) writes only to slot i of caller-owned
/// storage, so scheduling order cannot affect results. Indices are handed
/// out in blocks to keep the dispatch overhead negligible on large meshes.
template <typename Body>
void for_each(std::size_t n, Body&& body) {
  if (n == 0) return;
  const int workers = std::min<int>(threads(), static_cast<int>(n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  constexpr std::size_t kBlock = 1024;
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t lo = next.fetch_add(kBlock);
        if (lo >= n) return;
        const std::size_t hi = std::min(n, lo + kBlock);
        for (std::size_t i = lo; i < hi; ++i) body(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace parallel

// ---------------------------------------------------------------------------
// Small helpers
// ---------------------------------------------------------------------------

/// 8-point Gauss-Legendre abscissae/weights on [-1, 1].
inline constexpr double kGl8X[8] = {
    -0.9602898564975362, -0.7966664774136267, -0.5255324099163290,
    -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
    0.7966664774136267,  0.9602898564975362};
inline constexpr double kGl8W[8] = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
    0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
    0.2223810344533745, 0.1012285362903763};

[[nodiscard]] inline double abs2(Complex z) {
  return z.real() * z.real() + z.imag() * z.imag();
}

[[nodiscard]] inline bool in_open_disc(Complex z, double slack = 0.0) {
  return std::abs(z) < 1.0 + slack;
}

}  // namespace bmoalab
