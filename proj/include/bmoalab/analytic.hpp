#pragma once

// Analytic functions on the open unit disc as immutable expression trees.
// Leaves come from a small catalog of classical symbols; internal nodes are
// pointwise combinators, composition and segment-path primitives.  Every
// node knows its exact complex derivative; a Richardson finite-difference
// check is provided to validate derivative rules numerically.

#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "bmoalab/core.hpp"

namespace bmoalab {

class FnNode {
 public:
  virtual ~FnNode() = default;
  [[nodiscard]] virtual Complex value(Complex z) const = 0;
  [[nodiscard]] virtual Complex derivative(Complex z) const = 0;
  [[nodiscard]] virtual std::string describe() const = 0;
};

using FnPtr = std::shared_ptr<const FnNode>;

// ---------------------------------------------------------------------------
// Gauss-Legendre segment rule (shared by primitives and the Volterra module)
// ---------------------------------------------------------------------------

/// Integrates `f` along the straight segment from `a` to `b` with a
/// composite 8-point Gauss-Legendre rule over `panels` panels.
template <typename F>
Complex segment_integral(F&& f, Complex a, Complex b, int panels) {
  if (panels < 1) panels = 1;
  const Complex d = b - a;
  KahanSum re, im;
  for (int p = 0; p < panels; ++p) {
    const double lo = static_cast<double>(p) / panels;
    const double hi = static_cast<double>(p + 1) / panels;
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    for (int k = 0; k < 8; ++k) {
      const double s = mid + half * kGl8X[k];
      const Complex v = f(a + s * d);
      const double w = half * kGl8W[k];
      re.add(w * v.real());
      im.add(w * v.imag());
    }
  }
  return d * Complex(re.value(), im.value());
}

// ---------------------------------------------------------------------------
// Catalog leaves
// ---------------------------------------------------------------------------

namespace detail {

class ConstNode final : public FnNode {
 public:
  explicit ConstNode(Complex c) : c_(c) {}
  Complex value(Complex) const override { return c_; }
  Complex derivative(Complex) const override { return {0.0, 0.0}; }
  std::string describe() const override {
    return "const(" + std::to_string(c_.real()) + (c_.imag() >= 0 ? "+" : "") +
           std::to_string(c_.imag()) + "i)";
  }
  Complex c_;
};

class IdentityNode final : public FnNode {
 public:
  Complex value(Complex z) const override { return z; }
  Complex derivative(Complex) const override { return {1.0, 0.0}; }
  std::string describe() const override { return "z"; }
};

class MonomialNode final : public FnNode {
 public:
  explicit MonomialNode(int n) : n_(n) {
    if (n < 0) throw ParameterError("monomial: exponent must be >= 0");
  }
  Complex value(Complex z) const override { return ipow(z, n_); }
  Complex derivative(Complex z) const override {
    if (n_ == 0) return {0.0, 0.0};
    return static_cast<double>(n_) * ipow(z, n_ - 1);
  }
  std::string describe() const override {
    return "monomial(" + std::to_string(n_) + ")";
  }

 private:
  static Complex ipow(Complex z, int n) {
    Complex r{1.0, 0.0};
    while (n > 0) {
      if (n & 1) r *= z;
      z *= z;
      n >>= 1;
    }
    return r;
  }
  int n_;
};

class MobiusNode final : public FnNode {
 public:
  explicit MobiusNode(Complex a) : a_(a) {
    if (std::abs(a) >= 1.0)
      throw ParameterError("mobius: parameter must satisfy |a| < 1");
  }
  Complex value(Complex z) const override {
    return (a_ - z) / (1.0 - std::conj(a_) * z);
  }
  Complex derivative(Complex z) const override {
    const Complex d = 1.0 - std::conj(a_) * z;
    return (abs2(a_) - 1.0) / (d * d);
  }
  std::string describe() const override { return "mobius(a)"; }
  Complex a_;
};

class LogRecipOneMinusNode final : public FnNode {
 public:
  explicit LogRecipOneMinusNode(Complex a) : a_(a) {
    if (std::abs(a) > 1.0 + 1e-12)
      throw ParameterError("logrecip: parameter must satisfy |a| <= 1");
  }
  Complex value(Complex z) const override {
    return -std::log(1.0 - std::conj(a_) * z);
  }
  Complex derivative(Complex z) const override {
    return std::conj(a_) / (1.0 - std::conj(a_) * z);
  }
  std::string describe() const override { return "logrecip(a)"; }
  Complex a_;
};

class InnerSingularNode final : public FnNode {
 public:
  InnerSingularNode(double gamma, Complex w) : gamma_(gamma), w_(w) {
    if (!(gamma > 0.0)) throw ParameterError("inner: gamma must be > 0");
    const double aw = std::abs(w);
    if (std::abs(aw - 1.0) > 1e-9)
      throw ParameterError("inner: w must lie on the unit circle");
    w_ /= aw;  // renormalise exactly onto the circle
  }
  Complex value(Complex z) const override {
    return std::exp(gamma_ * (z + w_) / (z - w_));
  }
  Complex derivative(Complex z) const override {
    const Complex d = z - w_;
    return value(z) * gamma_ * (-2.0 * w_) / (d * d);
  }
  std::string describe() const override { return "inner(gamma,w)"; }
  double gamma_;
  Complex w_;
};

class PowerOneMinusNode final : public FnNode {
 public:
  explicit PowerOneMinusNode(double alpha) : alpha_(alpha) {
    if (!std::isfinite(alpha)) throw ParameterError("pow1m: bad exponent");
  }
  Complex value(Complex z) const override {
    return std::exp(alpha_ * std::log(1.0 - z));
  }
  Complex derivative(Complex z) const override {
    return -alpha_ * std::exp((alpha_ - 1.0) * std::log(1.0 - z));
  }
  std::string describe() const override {
    return "pow1m(" + std::to_string(alpha_) + ")";
  }
  double alpha_;
};

class PolynomialNode final : public FnNode {
 public:
  explicit PolynomialNode(std::vector<Complex> coeffs)
      : c_(std::move(coeffs)) {
    if (c_.empty()) throw ParameterError("poly: needs at least one coefficient");
  }
  Complex value(Complex z) const override {
    Complex r{0.0, 0.0};
    for (std::size_t i = c_.size(); i-- > 0;) r = r * z + c_[i];
    return r;
  }
  Complex derivative(Complex z) const override {
    Complex r{0.0, 0.0};
    for (std::size_t i = c_.size(); i-- > 1;)
      r = r * z + static_cast<double>(i) * c_[i];
    return r;
  }
  std::string describe() const override { return "poly(...)"; }
  std::vector<Complex> c_;
};

// ---------------------------------------------------------------------------
// Combinators
// ---------------------------------------------------------------------------

class AddNode final : public FnNode {
 public:
  AddNode(FnPtr f, FnPtr g) : f_(std::move(f)), g_(std::move(g)) {}
  Complex value(Complex z) const override {
    return f_->value(z) + g_->value(z);
  }
  Complex derivative(Complex z) const override {
    return f_->derivative(z) + g_->derivative(z);
  }
  std::string describe() const override {
    return "(" + f_->describe() + " + " + g_->describe() + ")";
  }
  FnPtr f_, g_;
};

class SubNode final : public FnNode {
 public:
  SubNode(FnPtr f, FnPtr g) : f_(std::move(f)), g_(std::move(g)) {}
  Complex value(Complex z) const override {
    return f_->value(z) - g_->value(z);
  }
  Complex derivative(Complex z) const override {
    return f_->derivative(z) - g_->derivative(z);
  }
  std::string describe() const override {
    return "(" + f_->describe() + " - " + g_->describe() + ")";
  }
  FnPtr f_, g_;
};

class ScaleNode final : public FnNode {
 public:
  ScaleNode(Complex c, FnPtr f) : c_(c), f_(std::move(f)) {}
  Complex value(Complex z) const override { return c_ * f_->value(z); }
  Complex derivative(Complex z) const override {
    return c_ * f_->derivative(z);
  }
  std::string describe() const override {
    return "scale(" + f_->describe() + ")";
  }
  Complex c_;
  FnPtr f_;
};

class MulNode final : public FnNode {
 public:
  MulNode(FnPtr f, FnPtr g) : f_(std::move(f)), g_(std::move(g)) {}
  Complex value(Complex z) const override {
    return f_->value(z) * g_->value(z);
  }
  Complex derivative(Complex z) const override {
    return f_->derivative(z) * g_->value(z) + f_->value(z) * g_->derivative(z);
  }
  std::string describe() const override {
    return "(" + f_->describe() + " * " + g_->describe() + ")";
  }
  FnPtr f_, g_;
};

class ComposeNode final : public FnNode {
 public:
  ComposeNode(FnPtr f, FnPtr g) : f_(std::move(f)), g_(std::move(g)) {}
  Complex value(Complex z) const override {
    return f_->value(g_->value(z));
  }
  Complex derivative(Complex z) const override {
    return f_->derivative(g_->value(z)) * g_->derivative(z);
  }
  std::string describe() const override {
    return "(" + f_->describe() + " o " + g_->describe() + ")";
  }
  FnPtr f_, g_;
};

class PrimitiveNode final : public FnNode {
 public:
  PrimitiveNode(FnPtr child, Complex base, int panels)
      : child_(std::move(child)), base_(base), panels_(panels) {}
  Complex value(Complex z) const override {
    return segment_integral([&](Complex w) { return child_->value(w); },
                            base_, z, panels_);
  }
  Complex derivative(Complex z) const override { return child_->value(z); }
  std::string describe() const override {
    return "primitive(" + child_->describe() + ")";
  }
  FnPtr child_;
  Complex base_;
  int panels_;
};

/// Generic leaf for module-supplied maps (flow maps, ratio patches, ...).
class CustomNode final : public FnNode {
 public:
  CustomNode(std::function<Complex(Complex)> v,
             std::function<Complex(Complex)> d, std::string label)
      : v_(std::move(v)), d_(std::move(d)), label_(std::move(label)) {}
  Complex value(Complex z) const override { return v_(z); }
  Complex derivative(Complex z) const override { return d_(z); }
  std::string describe() const override { return label_; }
  std::function<Complex(Complex)> v_, d_;
  std::string label_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// AnalyticFn handle
// ---------------------------------------------------------------------------

class AnalyticFn {
 public:
  AnalyticFn() = default;
  explicit AnalyticFn(FnPtr node) : node_(std::move(node)) {}

  [[nodiscard]] bool valid() const { return node_ != nullptr; }

  /// Value with the domain guard; use raw() in inner loops where the caller
  /// already controls the sample set.
  [[nodiscard]] Complex eval(Complex z) const {
    check_domain(z);
    return node_->value(z);
  }
  [[nodiscard]] Complex deriv(Complex z) const {
    check_domain(z);
    return node_->derivative(z);
  }

  [[nodiscard]] Complex raw(Complex z) const { return node_->value(z); }
  [[nodiscard]] Complex raw_deriv(Complex z) const {
    return node_->derivative(z);
  }

  [[nodiscard]] std::string describe() const {
    return node_ ? node_->describe() : "<empty>";
  }
  [[nodiscard]] const FnPtr& node() const { return node_; }

 private:
  static void check_domain(Complex z) {
    if (!(std::abs(z) < 1.0))
      throw DomainError("evaluation outside the open unit disc");
  }
  FnPtr node_;
};

// --- catalog constructors --------------------------------------------------

[[nodiscard]] inline AnalyticFn make_const(Complex c) {
  return AnalyticFn(std::make_shared<detail::ConstNode>(c));
}
[[nodiscard]] inline AnalyticFn make_identity() {
  return AnalyticFn(std::make_shared<detail::IdentityNode>());
}
[[nodiscard]] inline AnalyticFn make_monomial(int n) {
  return AnalyticFn(std::make_shared<detail::MonomialNode>(n));
}
[[nodiscard]] inline AnalyticFn make_mobius(Complex a) {
  return AnalyticFn(std::make_shared<detail::MobiusNode>(a));
}
[[nodiscard]] inline AnalyticFn make_log_recip_one_minus(Complex a) {
  return AnalyticFn(std::make_shared<detail::LogRecipOneMinusNode>(a));
}
[[nodiscard]] inline AnalyticFn make_inner_singular(double gamma, Complex w) {
  return AnalyticFn(std::make_shared<detail::InnerSingularNode>(gamma, w));
}
[[nodiscard]] inline AnalyticFn make_power_one_minus(double alpha) {
  return AnalyticFn(std::make_shared<detail::PowerOneMinusNode>(alpha));
}
[[nodiscard]] inline AnalyticFn make_polynomial(std::vector<Complex> coeffs) {
  return AnalyticFn(std::make_shared<detail::PolynomialNode>(std::move(coeffs)));
}
[[nodiscard]] inline AnalyticFn make_custom(
    std::function<Complex(Complex)> v, std::function<Complex(Complex)> d,
    std::string label) {
  return AnalyticFn(std::make_shared<detail::CustomNode>(
      std::move(v), std::move(d), std::move(label)));
}

// --- combinators -------------------------------------------------------------

[[nodiscard]] inline AnalyticFn add(const AnalyticFn& f, const AnalyticFn& g) {
  return AnalyticFn(std::make_shared<detail::AddNode>(f.node(), g.node()));
}
[[nodiscard]] inline AnalyticFn subtract(const AnalyticFn& f,
                                         const AnalyticFn& g) {
  return AnalyticFn(std::make_shared<detail::SubNode>(f.node(), g.node()));
}
[[nodiscard]] inline AnalyticFn scale(Complex c, const AnalyticFn& f) {
  return AnalyticFn(std::make_shared<detail::ScaleNode>(c, f.node()));
}
[[nodiscard]] inline AnalyticFn multiply(const AnalyticFn& f,
                                         const AnalyticFn& g) {
  return AnalyticFn(std::make_shared<detail::MulNode>(f.node(), g.node()));
}

/// Deterministic interior sample used by the composition self-map check.
[[nodiscard]] inline std::vector<Complex> self_map_sample(int n = 1000) {
  std::vector<Complex> pts;
  pts.reserve(static_cast<std::size_t>(n));
  constexpr double kGolden = 2.399963229728653;  // 2*pi*(1 - 1/phi)
  for (int i = 0; i < n; ++i) {
    const double r = std::sqrt((i + 0.5) / n) * (1.0 - 0x1p-20);
    const double th = kGolden * i;
    pts.push_back(Complex(r * std::cos(th), r * std::sin(th)));
  }
  return pts;
}

/// Margin 1 - max|g| over the validation sample (positive for a self-map).
[[nodiscard]] inline double self_map_margin(const AnalyticFn& g) {
  double worst = 0.0;
  for (Complex z : self_map_sample()) worst = std::max(worst, std::abs(g.raw(z)));
  return 1.0 - worst;
}

/// f after g.  The inner function must map the disc into itself; validated
/// on a fixed 1000-point sample.
[[nodiscard]] inline AnalyticFn compose(const AnalyticFn& f,
                                        const AnalyticFn& g) {
  const double margin = self_map_margin(g);
  if (!(margin > 0.0))
    throw SelfMapError("compose: inner function is not a self-map of the disc "
                       "(margin " + std::to_string(margin) + ")");
  return AnalyticFn(std::make_shared<detail::ComposeNode>(f.node(), g.node()));
}

/// Antiderivative of `child` along straight segments from `base`.
[[nodiscard]] inline AnalyticFn primitive(const AnalyticFn& child, Complex base,
                                          int path_nodes = 64) {
  const int panels = std::max(1, (path_nodes + 7) / 8);
  return AnalyticFn(
      std::make_shared<detail::PrimitiveNode>(child.node(), base, panels));
}

/// Pointwise derivative as a function.  Its own derivative falls back to
/// Richardson finite differences of f'.
[[nodiscard]] AnalyticFn derivative_view(const AnalyticFn& f);

inline AnalyticFn operator+(const AnalyticFn& f, const AnalyticFn& g) {
  return add(f, g);
}
inline AnalyticFn operator-(const AnalyticFn& f, const AnalyticFn& g) {
  return subtract(f, g);
}
inline AnalyticFn operator*(Complex c, const AnalyticFn& f) {
  return scale(c, f);
}
inline AnalyticFn operator*(const AnalyticFn& f, const AnalyticFn& g) {
  return multiply(f, g);
}

// ---------------------------------------------------------------------------
// Finite-difference validation
// ---------------------------------------------------------------------------

/// Richardson-extrapolated central difference of a complex map at z.  Steps
/// 1e-4, 5e-5, 2.5e-5 scaled by (1-|z|)/2 keep every stencil inside the disc.
template <typename F>
Complex richardson_derivative(F&& f, Complex z) {
  const double scalefac = 0.5 * (1.0 - std::abs(z));
  const std::array<double, 3> steps = {1e-4 * scalefac, 5e-5 * scalefac,
                                       2.5e-5 * scalefac};
  std::array<Complex, 3> d;
  for (std::size_t i = 0; i < 3; ++i) {
    const double h = steps[i];
    d[i] = (f(z + h) - f(z - h)) / (2.0 * h);
  }
  const Complex r01 = (4.0 * d[1] - d[0]) / 3.0;
  const Complex r12 = (4.0 * d[2] - d[1]) / 3.0;
  return (16.0 * r12 - r01) / 15.0;
}

struct DerivCheck {
  Complex exact;
  Complex finite_difference;
  double abs_residual;
  double rel_residual;
  bool pass;
};

/// Compares the tree derivative with the Richardson stencil at z.
[[nodiscard]] inline DerivCheck numeric_deriv_check(const AnalyticFn& f,
                                                    Complex z,
                                                    double tol = 1e-6) {
  DerivCheck out{};
  out.exact = f.deriv(z);
  out.finite_difference =
      richardson_derivative([&](Complex w) { return f.raw(w); }, z);
  out.abs_residual = std::abs(out.exact - out.finite_difference);
  const double denom = std::max(1.0, std::abs(out.exact));
  out.rel_residual = out.abs_residual / denom;
  out.pass = out.rel_residual <= tol;
  return out;
}

inline AnalyticFn derivative_view(const AnalyticFn& f) {
  FnPtr node = f.node();
  return make_custom(
      [node](Complex z) { return node->derivative(z); },
      [node](Complex z) {
        return richardson_derivative(
            [&](Complex w) { return node->derivative(w); }, z);
      },
      "deriv(" + node->describe() + ")");
}

}  // namespace bmoalab
