#include <catch2/catch_amalgamated.hpp>

#include <bmoalab/analytic.hpp>
#include <bmoalab/quadrature.hpp>

#include <cmath>
#include <complex>
#include <cstring>
#include <vector>

using namespace bmoalab;

namespace {

/// Grid that reaches the boundary exactly, used when comparing against
/// closed-form areas and moments of the full disc.
GridSpec full_grid() {
  GridSpec g;
  g.cap_radius = 1.0;
  return g;
}

}  // namespace

TEST_CASE("disc moments against closed forms", "[quadrature]") {
  const GridSpec g = full_grid();

  SECTION("total mass is 1") {
    const IntegralResult r = disc_integrate([](Complex) { return 1.0; }, g);
    REQUIRE(r.value == Catch::Approx(1.0).margin(1e-12));
  }

  SECTION("mean of 1-|z|^2 is 1/2") {
    const IntegralResult r =
        disc_integrate([](Complex z) { return 1.0 - abs2(z); }, g);
    REQUIRE(r.value == Catch::Approx(0.5).margin(1e-12));
  }

  SECTION("mean of |z|^2 is 1/2") {
    const IntegralResult r = disc_integrate([](Complex z) { return abs2(z); }, g);
    REQUIRE(r.value == Catch::Approx(0.5).margin(1e-12));
  }

  SECTION("monomial orthogonality: mean of z^m conj(z)^n") {
    for (int m = 0; m <= 4; ++m) {
      for (int n = 0; n <= 4; ++n) {
        const auto term = [m, n](Complex z) {
          Complex zm(1.0, 0.0), zn(1.0, 0.0);
          for (int k = 0; k < m; ++k) zm *= z;
          for (int k = 0; k < n; ++k) zn *= std::conj(z);
          return zm * zn;
        };
        const IntegralResult re =
            disc_integrate([&](Complex z) { return term(z).real(); }, g);
        const IntegralResult im =
            disc_integrate([&](Complex z) { return term(z).imag(); }, g);
        const double expect = (m == n) ? 1.0 / (m + 1) : 0.0;
        INFO("m=" << m << " n=" << n);
        REQUIRE(re.value == Catch::Approx(expect).margin(1e-10));
        REQUIRE(im.value == Catch::Approx(0.0).margin(1e-10));
      }
    }
  }

  SECTION("weights sum to the normalized area") {
    const SeparableMesh m = build_disc_mesh(g);
    KahanSum acc;
    for (double wr : m.wr) {
      for (double wt : m.wth) acc.add(wr * wt * m.measure_scale);
    }
    REQUIRE(acc.value() == Catch::Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("carleson box areas match the closed form", "[quadrature]") {
  const GridSpec g = full_grid();
  for (double len : {1.0, 0.5, 0.25, 0.0625}) {
    CarlesonBox box;
    box.center_angle = 0.7;
    box.length = len;
    const IntegralResult r =
        box_integrate([](Complex) { return 1.0; }, box, g);
    INFO("length=" << len);
    REQUIRE(r.value == Catch::Approx(box_area(len)).margin(1e-10));
  }
}

TEST_CASE("boxes of a common depth tile an annulus", "[quadrature]") {
  // Eight dyadic arcs of length 2*pi/8 cover the circle; the union of their
  // boxes is the annulus 1-len < |z| < 1, whose integral also equals the
  // difference of two capped disc integrals.
  const double len = kTwoPi / 8.0;
  const auto F = [](Complex z) { return std::exp(z.real()) + 0.5 * z.imag(); };

  GridSpec outer = full_grid();
  GridSpec inner = full_grid();
  inner.cap_radius = 1.0 - len;

  const IntegralResult whole = disc_integrate(F, outer);
  const IntegralResult core = disc_integrate(F, inner);

  KahanSum sum;
  double err = 0.0;
  for (int j = 0; j < 8; ++j) {
    CarlesonBox box;
    box.center_angle = (j + 0.5) * len;
    box.length = len;
    const IntegralResult r = box_integrate(F, box, outer);
    sum.add(r.value);
    err += r.error_estimate;
  }
  const double expect = whole.value - core.value;
  const double budget =
      err + whole.error_estimate + core.error_estimate + 1e-10;
  REQUIRE(std::abs(sum.value() - expect) <= budget);
}

TEST_CASE("circle averages", "[quadrature]") {
  SECTION("constants and powers") {
    const IntegralResult one =
        circle_integrate([](Complex) { return 1.0; }, 0.5);
    REQUIRE(one.value == Catch::Approx(1.0).margin(1e-13));
    const IntegralResult sq =
        circle_integrate([](Complex z) { return abs2(z); }, 0.75);
    REQUIRE(sq.value == Catch::Approx(0.5625).margin(1e-13));
  }

  SECTION("poisson kernel mean") {
    const double t = 0.16;  // |a|^2 with a = 0.4
    const Complex a(0.4, 0.0);
    for (double rho : {0.9, 0.999}) {
      const IntegralResult r = circle_integrate(
          [&](Complex z) {
            return (1.0 - t) / abs2(Complex(1.0, 0.0) - std::conj(a) * z);
          },
          rho);
      const double closed = (1.0 - t) / (1.0 - t * rho * rho);
      INFO("rho=" << rho);
      REQUIRE(r.value == Catch::Approx(closed).margin(1e-9));
    }
  }
}

TEST_CASE("spike detection flags boundary singularities", "[quadrature]") {
  SECTION("derivative of log(1/(1-z)) spikes near angle 0") {
    const AnalyticFn f = make_log_recip_one_minus(Complex(1.0, 0.0));
    const std::vector<double> hits = detect_spike_angles(
        [&](Complex z) { return std::abs(f.raw_deriv(z)); });
    REQUIRE_FALSE(hits.empty());
    double best = kTwoPi;
    for (double a : hits) {
      best = std::min(best, std::min(a, kTwoPi - a));
    }
    REQUIRE(best < 0.05);
  }

  SECTION("smooth integrands produce no spikes") {
    const AnalyticFn f = make_mobius(Complex(0.5, 0.0));
    const std::vector<double> hits = detect_spike_angles(
        [&](Complex z) { return std::abs(f.raw_deriv(z)) + 1.0; });
    REQUIRE(hits.empty());
  }
}

TEST_CASE("windowed meshes stabilize singular integrands", "[quadrature]") {
  // (1-|z|^2)/|1-z|^2 integrates to a finite value; the mass concentrates
  // near z=1 so the windowed mesh must agree with its refinement.
  const auto F = [](Complex z) {
    return (1.0 - abs2(z)) / abs2(Complex(1.0, 0.0) - z);
  };
  GridSpec g;
  const std::vector<double> windows = {0.0};
  const IntegralResult base = disc_integrate(F, g, windows);
  const IntegralResult fine = disc_integrate(F, g.doubled(), windows);
  REQUIRE(std::abs(base.value - fine.value) <
          0.01 * std::max(1.0, std::abs(fine.value)));
  REQUIRE(base.error_estimate < 0.05 * std::abs(base.value));
}

TEST_CASE("integrand failures surface as errors", "[quadrature]") {
  GridSpec g;
  REQUIRE_THROWS_AS(disc_integrate(
                        [](Complex z) {
                          if (z.real() > 0.9) {
                            return std::numeric_limits<double>::quiet_NaN();
                          }
                          return 1.0;
                        },
                        g),
                    IntegrandError);
}

TEST_CASE("results are identical across thread counts", "[quadrature]") {
  const auto F = [](Complex z) {
    return std::exp(z.real()) * std::cos(3.0 * z.imag()) +
           1.0 / (1.0 + abs2(z));
  };
  GridSpec g;
  parallel::set_threads(1);
  const IntegralResult serial = disc_integrate(F, g);
  parallel::set_threads(8);
  const IntegralResult eight = disc_integrate(F, g);
  parallel::set_threads(0);
  REQUIRE(std::memcmp(&serial.value, &eight.value, sizeof(double)) == 0);
  REQUIRE(std::memcmp(&serial.error_estimate, &eight.error_estimate,
                      sizeof(double)) == 0);
}

TEST_CASE("grid validation", "[quadrature]") {
  GridSpec g;
  g.radial_count = 4;
  REQUIRE_THROWS_AS(g.validate(), ParameterError);
  CarlesonBox b;
  b.length = 0.0;
  REQUIRE_THROWS_AS(b.validate(), ParameterError);
  b.length = 7.0;
  REQUIRE_THROWS_AS(b.validate(), ParameterError);
  REQUIRE_THROWS_AS(circle_integrate([](Complex) { return 1.0; }, 1.5),
                    ParameterError);
}
