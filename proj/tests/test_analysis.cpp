#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ostro/analysis.hpp"
#include "ostro/exact_waves.hpp"
#include "ostro/solver.hpp"

using namespace ostro;

namespace {

constexpr double pi = std::numbers::pi;

WaveProfile from(const TorusGrid& g, auto f) { return WaveProfile::from_function(g, f); }

WaveProfile random_profile(std::mt19937_64& rng, const TorusGrid& g, int kmax) {
  std::normal_distribution<double> gauss;
  std::vector<cplx> half(static_cast<std::size_t>(g.nyquist() + 1));
  for (int k = 1; k <= kmax; ++k) half[static_cast<std::size_t>(k)] = cplx(gauss(rng), gauss(rng)) / double(k);
  return WaveProfile::from_coeffs(g, half);
}

}  // namespace

TEST_CASE("singular level examples") {
  const auto a = singular_levels(ModelParams::gardner(0.0, 1.0, 0.0), 1.0);
  REQUIRE(a.phi_plus);
  CHECK(*a.phi_plus == doctest::Approx(1.0));
  CHECK(*a.order_a_plus == 2);
  CHECK_FALSE(a.phi_minus);

  const auto b = singular_levels(ModelParams::gardner(0.0, 0.0, 1.0), 1.0);
  REQUIRE(b.phi_plus);
  REQUIRE(b.phi_minus);
  CHECK(*b.phi_plus == doctest::Approx(1.0));
  CHECK(*b.phi_minus == doctest::Approx(-1.0));
  CHECK(*b.order_a_plus == 2);

  // σ = 1, α = -1/4: F'(u) = -1 + u - u²/4 has the double root u = 2.
  const auto d = singular_levels(ModelParams::gardner(0.0, 1.0, -0.25), 1.0);
  REQUIRE(d.phi_plus);
  CHECK(*d.phi_plus == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(*d.order_a_plus == 3);
}

TEST_CASE("singular levels match the Gardner closed form") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> us(-2.0, 2.0), ua(0.1, 2.0), uc(0.05, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double sigma = us(rng), alpha = ua(rng), c = uc(rng);
    // α > 0: n'(u) = σu + αu² = c has one root on each side of zero.
    const double mid = -sigma / (2 * alpha), rad = std::sqrt(sigma * sigma / (4 * alpha * alpha) + c / alpha);
    const auto s = singular_levels(ModelParams::gardner(0.0, sigma, alpha), c);
    REQUIRE(s.phi_plus);
    REQUIRE(s.phi_minus);
    CHECK(*s.phi_plus == doctest::Approx(mid + rad).epsilon(1e-12));
    CHECK(*s.phi_minus == doctest::Approx(mid - rad).epsilon(1e-12));
  }
}

TEST_CASE("singular levels of general polynomials are the nearest roots of F'") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> uni(-1.0, 1.0), uc(0.1, 1.5);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> poly(7, 0.0);
    for (int j = 2; j <= 6; ++j) poly[static_cast<std::size_t>(j)] = uni(rng);
    const ModelParams p(0.0, poly);
    const double c = uc(rng);
    const auto s = singular_levels(p, c);
    for (auto [root, sign] : {std::pair{s.phi_plus, 1.0}, std::pair{s.phi_minus, -1.0}}) {
      // Oracle: scan F' from zero outward; first sign change brackets the root.
      double first = std::numeric_limits<double>::infinity();
      const double step = 1e-4;
      double prev = F_eval(p, c, 0.0, 1);
      for (double u = step; u < 50.0; u += step) {
        const double cur = F_eval(p, c, sign * u, 1);
        if ((cur > 0) != (prev > 0) || cur == 0.0) {
          first = u;
          break;
        }
        prev = cur;
      }
      if (std::isinf(first)) {
        CHECK_FALSE(root.has_value());
      } else {
        REQUIRE(root.has_value());
        CHECK(std::abs(sign * *root - first) <= 2 * step);
      }
    }
  }
}

TEST_CASE("slack examples") {
  const TorusGrid g(64);
  const auto p = ModelParams::gardner(0.0, 1.0, 0.0);
  CHECK(slack(p, 1.0, WaveProfile::zero(g)) == doctest::Approx(1.0));
  CHECK(slack(p, 1.0, from(g, [](double x) { return 0.5 * std::cos(x); })) == doctest::Approx(0.5));
  const auto wave = ExactWave::reduced(1.0);
  CHECK(std::abs(slack(wave.params(), wave.speed(), wave.sample(TorusGrid(1024)))) <= 1e-14);
}

TEST_CASE("predicted Hölder law examples") {
  const auto r = ExactWave::reduced(1.0);
  const auto a = predicted_holder(r.params(), r.speed(), r.speed());
  CHECK(a.a == 2);
  CHECK(a.exponent == doctest::Approx(1.0));
  CHECK(a.constant == doctest::Approx(pi / 3).epsilon(1e-12));

  const auto m = ExactWave::modified(2.0);
  const double top = std::sqrt(m.speed() / 2.0);
  const auto b = predicted_holder(m.params(), m.speed(), top);
  CHECK(b.a == 2);
  CHECK(b.constant == doctest::Approx(1.0 / std::sqrt(2 * 2.0)).epsilon(1e-12));

  const auto d = predicted_holder(ModelParams::gardner(0.0, 1.0, -0.25), 1.0, 2.0);
  CHECK(d.a == 3);
  CHECK(d.exponent == doctest::Approx(2.0 / 3.0));
  CHECK(d.constant == doctest::Approx(std::cbrt(12.0)).epsilon(1e-12));

  CHECK_THROWS_AS(predicted_holder(ModelParams::gardner(0.0, 1.0, 0.0), 1.0, 0.5), std::domain_error);
}

TEST_CASE("Hölder fit on exact peaked waves") {
  const TorusGrid g(4096);
  const auto r = ExactWave::reduced(1.0);
  const auto fr = holder_fit(r.sample(g), 0.0);
  CHECK(fr.exponent == doctest::Approx(1.0).epsilon(0.05));
  CHECK(fr.constant == doctest::Approx(pi / 3).epsilon(0.02));
  for (double alpha : {1.0, 2.0}) {
    const auto m = ExactWave::modified(alpha);
    const auto fm = holder_fit(m.sample(g), 0.0);
    CHECK(fm.exponent == doctest::Approx(1.0).epsilon(0.05));
    CHECK(fm.constant == doctest::Approx(1.0 / std::sqrt(2 * alpha)).epsilon(0.02));
    // The trough at -π is a corner as well.
    const auto ft = holder_fit(m.sample(g), -pi);
    CHECK(ft.exponent == doctest::Approx(1.0).epsilon(0.05));
  }
}

TEST_CASE("Hölder fit on smooth crests") {
  const TorusGrid g(512);
  const auto f = holder_fit(from(g, [](double x) { return std::cos(x); }), 0.0);
  CHECK(f.exponent >= 1.9);
  CHECK(f.constant == doctest::Approx(0.5).epsilon(0.02));
  const auto p = ModelParams::gardner(0.0, 1.0, 0.0);
  const auto pt = newton_solve(p, 1.0, from(g, [](double x) { return 0.1 * std::cos(x); }), 0.1);
  CHECK(holder_fit(pt.profile, 0.0).exponent >= 1.9);
  CHECK_THROWS_AS(holder_fit(from(g, [](double x) { return std::cos(x); }), 0.0, 5, 2), std::domain_error);
  CHECK_THROWS_AS(holder_fit(WaveProfile::zero(g), 0.0), std::domain_error);
}

TEST_CASE("asymmetry examples") {
  const TorusGrid g(128);
  const auto even = asymmetry(from(g, [](double x) { return std::cos(x); }));
  CHECK(even.value <= 1e-12);
  const auto shifted = asymmetry(from(g, [](double x) { return std::cos(x - 0.7) + 0.3 * std::cos(2 * (x - 0.7)); }));
  // Brent resolves the axis to about sqrt(machine epsilon).
  CHECK(shifted.value <= 1e-7);
  const double lam = std::remainder(shifted.lambda_star - 0.7, pi);
  CHECK(std::abs(lam) <= 1e-6);
  const auto skew = asymmetry(from(g, [](double x) { return std::cos(x) + 0.1 * std::sin(2 * x); }));
  CHECK(skew.value > 1e-2);
  CHECK_THROWS_AS(asymmetry(WaveProfile::zero(g)), std::domain_error);
}

TEST_CASE("asymmetry is invariant under reflection") {
  std::mt19937_64 rng(5);
  const TorusGrid g(64);
  for (int trial = 0; trial < 25; ++trial) {
    const auto f = random_profile(rng, g, 6);
    CHECK(std::abs(asymmetry(f).value - asymmetry(f.reflected()).value) <= 1e-6);
  }
}

TEST_CASE("crest count examples and shift invariance") {
  const TorusGrid g(128);
  CHECK(crest_count(from(g, [](double x) { return std::cos(x); })) == 1);
  CHECK(crest_count(from(g, [](double x) { return std::cos(2 * x); })) == 2);
  CHECK(crest_count(from(g, [](double x) { return std::cos(5 * x); })) == 5);
  CHECK(crest_count(from(g, [](double x) { return std::cos(x) + 0.1 * std::cos(3 * x); })) == 1);
  CHECK(crest_count(WaveProfile::zero(g)) == 0);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> us(-pi, pi);
  for (int trial = 0; trial < 50; ++trial) {
    const auto f = random_profile(rng, g, 5);
    CHECK(crest_count(f) == crest_count(f.shifted(us(rng))));
  }
}

TEST_CASE("Fourier decay rate") {
  const TorusGrid g(4096);
  const auto r = project_zero_mean(ExactWave::reduced(1.0).sample(g));
  CHECK(fourier_decay(r) == doctest::Approx(-2.0).epsilon(0.05));
  CHECK(std::isinf(fourier_decay(from(TorusGrid(64), [](double x) { return std::cos(x); }))));
  CHECK(fourier_decay(from(TorusGrid(64), [](double x) { return std::cos(x); })) < 0);
  CHECK_THROWS_AS(fourier_decay(r, 3), std::invalid_argument);
}

TEST_CASE("amplitude constraint") {
  const TorusGrid g(1024);
  const auto m = ExactWave::modified(1.0);
  const auto eq = amplitude_check(m.params(), m.speed(), m.sample(g));
  CHECK(eq.ok);
  REQUIRE(eq.range_margin);
  CHECK(std::abs(*eq.range_margin) <= 1e-12);

  const auto p = ModelParams::gardner(0.0, 1.0, 1.0);
  const auto small = amplitude_check(p, 1.0, from(g, [](double x) { return 1e-3 * std::cos(x); }));
  CHECK(small.ok);
  CHECK(*small.upper_margin > 0);
  CHECK(*small.lower_margin > 0);

  const double top = *singular_levels(p, 1.0).phi_plus;
  const auto bad = amplitude_check(p, 1.0, from(g, [=](double x) { return 2 * top * std::cos(x); }));
  CHECK_FALSE(bad.ok);
  CHECK(*bad.upper_margin < 0);
}

TEST_CASE("diagnostics report") {
  const TorusGrid g(256);
  const auto p = ModelParams::gardner(0.0, 1.0, 0.0);
  const auto pt = newton_solve(p, 1.0, from(g, [](double x) { return 0.1 * std::cos(x); }), 0.1);
  const auto d = diagnose(p, pt.c, pt.profile);
  CHECK(d.regime == "smooth");
  CHECK(d.crest_count == 1);
  CHECK(d.asymmetry <= 1e-10);
  CHECK(d.amplitude_ok);
  CHECK(d.slack > kNearSingularSlack);
  CHECK_FALSE(d.holder_exponent);

  const auto r = ExactWave::reduced(1.0);
  const auto dr = diagnose(r.params(), r.speed(), project_zero_mean(r.sample(TorusGrid(4096))));
  CHECK(dr.regime == "near-singular");
  REQUIRE(dr.holder_exponent);
  CHECK(*dr.holder_exponent == doctest::Approx(1.0).epsilon(0.05));
  CHECK(dr.predicted_exponent == doctest::Approx(1.0));
}
