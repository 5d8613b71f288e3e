#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include "ostro/solver.hpp"

using namespace ostro;

namespace {

constexpr double pi = std::numbers::pi;

SolverSettings quick(double eps_max, int n = 128) {
  SolverSettings s;
  s.n = n;
  s.n_max = 2 * n;
  s.eps_max = eps_max;
  return s;
}

}  // namespace

TEST_CASE("initial guess") {
  const auto p = ModelParams::gardner(0.0, 1.0, 0.0);
  const auto g1 = initial_guess(p, 1, 0.01, 64);
  CHECK(g1.c == doctest::Approx(1.0));
  CHECK(g1.profile.size() == 64);
  CHECK(g1.profile.cos_coeff(1) == doctest::Approx(0.01));
  const auto g2 = initial_guess(ModelParams::gardner(0.25, 1.0, 0.0), 1, 0.01, 64);
  CHECK(g2.c == doctest::Approx(0.75));
  CHECK_THROWS_AS(initial_guess(ModelParams::gardner(2.0, 1.0, 0.0), 1, 0.01), std::domain_error);
  try {
    initial_guess(ModelParams::gardner(2.0, 1.0, 0.0), 1, 0.01);
  } catch (const std::domain_error& e) {
    CHECK(std::string(e.what()).find("[0,1)") != std::string::npos);
  }
}

TEST_CASE("Newton converges quickly near the bifurcation point") {
  const auto p = ModelParams::gardner(0.0, 1.0, 0.0);
  std::vector<double> shifts;
  for (double eps : {1e-2, 1e-3}) {
    const auto g = initial_guess(p, 1, eps, 128);
    const auto pt = newton_solve(p, g.c, g.profile, eps);
    CHECK(pt.newton_iters <= 5);
    CHECK(pt.residual_norm <= 1e-10);
    CHECK(pt.profile.cos_coeff(1) == doctest::Approx(eps).epsilon(1e-12));
    shifts.push_back(std::abs(pt.c - 1.0));
  }
  // c - c_1 = O(eps²).
  CHECK(shifts[0] / shifts[1] == doctest::Approx(100.0).epsilon(0.1));
}

TEST_CASE("Newton input validation") {
  const auto p = ModelParams::gardner(0.0, 1.0, 0.0);
  const auto g = initial_guess(p, 1, 1e-2, 64);
  CHECK_THROWS_AS(newton_solve(p, g.c, g.profile, 0.0), std::invalid_argument);
  const auto odd = WaveProfile::from_function(g.profile.grid(), [](double x) { return 0.01 * std::sin(x); });
  CHECK_THROWS_AS(newton_solve(p, g.c, odd, 1e-2), std::invalid_argument);
  const auto lifted = WaveProfile::from_function(g.profile.grid(), [](double x) { return 0.1 + 0.01 * std::cos(x); });
  CHECK_THROWS_AS(newton_solve(p, g.c, lifted, 1e-2), std::invalid_argument);
}

TEST_CASE("re-solving a converged point takes one update") {
  const auto p = ModelParams::gardner(0.25, 1.0, 0.0);
  const auto g = initial_guess(p, 1, 0.1, 128);
  const auto first = newton_solve(p, g.c, g.profile, 0.1);
  const auto again = newton_solve(p, first.c, first.profile, 0.1);
  CHECK(again.newton_iters == 1);
  CHECK(std::abs(again.c - first.c) <= 1e-10);
  CHECK(max_abs_diff(again.profile, first.profile) <= 1e-10);
}

TEST_CASE("solutions are grid independent") {
  const auto p = ModelParams::gardner(0.25, 1.0, 0.0);
  const auto g = initial_guess(p, 1, 0.2, 128);
  const auto pt = newton_solve(p, g.c, g.profile, 0.2);
  const auto fine = pt.profile.resampled(256);
  CHECK(residual(p, pt.c, fine).sup_norm() <= 1e-9);
  CHECK(pt.residual_doubled <= 10 * 1e-10);
}

TEST_CASE("iteration cap raises SolverError") {
  const auto p = ModelParams::gardner(0.0, 1.0, 0.0);
  const auto g = initial_guess(p, 1, 0.3, 128);
  CHECK_THROWS_AS(newton_solve(p, g.c, g.profile, 0.3, 1e-12, 1), SolverError);
}

TEST_CASE("smooth branch with surface tension") {
  const auto p = ModelParams::gardner(0.25, 1.0, 0.0);
  const auto br = continue_branch(p, 1, 0.01, 0.02, quick(0.3));
  CHECK(br.termination == Termination::amplitude_target);
  REQUIRE(br.points.size() >= 10);
  CHECK(br.points.front().regime == "asymptotic-regime");
  CHECK(br.points.front().c == doctest::Approx(0.75).epsilon(1e-3));
  CHECK(br.points.back().eps == doctest::Approx(0.3).epsilon(1e-12));
  for (std::size_t i = 0; i < br.points.size(); ++i) {
    const auto& pt = br.points[i];
    CHECK(pt.residual_norm <= pt.tol);
    CHECK(pt.residual_doubled <= 10 * pt.tol);
    CHECK(std::abs(pt.profile.mean()) <= 1e-14);
    if (i > 0) CHECK(pt.eps > br.points[i - 1].eps);
  }
  CHECK(fourier_decay(br.points.back().profile) < -6.0);
}

TEST_CASE("slack decreases along the reduced branch") {
  const auto p = ModelParams::gardner(0.0, 1.0, 0.0);
  const auto br = continue_branch(p, 1, 0.01, 0.05, quick(0.4, 256));
  REQUIRE(br.points.size() >= 5);
  double prev = std::numeric_limits<double>::infinity();
  for (const auto& pt : br.points) {
    const double s = slack(p, pt.c, pt.profile);
    CHECK(s <= prev + 1e-12);
    CHECK(s > 0.0);
    CHECK(amplitude_check(p, pt.c, pt.profile).ok);
    prev = s;
  }
}

TEST_CASE("second-mode branch is pi-periodic") {
  const auto p = ModelParams::gardner(0.0, 1.0, 0.0);
  const auto br = continue_branch(p, 2, 0.005, 0.005, quick(0.02));
  REQUIRE_FALSE(br.points.empty());
  const auto& pt = br.points.back();
  CHECK(pt.c == doctest::Approx(0.25).epsilon(1e-2));
  CHECK(crest_count(pt.profile) == 2);
  for (int k = 1; k < pt.profile.grid().nyquist(); k += 2) CHECK(std::abs(pt.profile.cos_coeff(k)) <= 1e-12);
}

TEST_CASE("perturbed full-basis solves return to symmetric profiles") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> gauss;
  const auto p = ModelParams::gardner(0.25, 1.0, 0.0);
  const auto g = initial_guess(p, 1, 0.1, 64);
  const auto sym = newton_solve(p, g.c, g.profile, 0.1);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<cplx> half(33);
    for (int k = 2; k <= 6; ++k) half[static_cast<std::size_t>(k)] = cplx(0.0, 1e-3 * gauss(rng));
    const auto guess = sym.profile + WaveProfile::from_coeffs(sym.profile.grid(), half);
    CHECK(asymmetry(guess).value > 1e-4);
    const auto pt = newton_solve_full(p, sym.c, guess, 0.1);
    CHECK(asymmetry(pt.profile).value <= 1e-7);
    CHECK(std::abs(pt.c - sym.c) <= 1e-9);
  }
}

TEST_CASE("double-root branch reaches an order-three level") {
  SolverSettings s;
  s.n = 256;
  s.n_max = 512;
  const auto br = trace_double_root_branch(1.0, {0.3, 0.2}, s);
  REQUIRE_FALSE(br.points.empty());
  const auto& pt = br.points.back();
  const auto params = br.family.at(pt.c);
  const auto levels = singular_levels(params, pt.c);
  REQUIRE(levels.phi_plus);
  CHECK(*levels.order_a_plus == 3);
  CHECK(*levels.phi_plus - pt.profile.max() == doctest::Approx(0.2).epsilon(1e-6));
}

TEST_CASE("independent branches can be traced concurrently") {
  const auto settings = quick(0.1, 64);
  const std::vector<double> betas{0.0, 0.1, 0.25};
  std::vector<Branch> serial;
  for (double b : betas) serial.push_back(continue_branch(ModelParams::gardner(b, 1.0, 0.0), 1, 0.01, 0.02, settings));
  std::vector<std::optional<Branch>> parallel(betas.size());
  std::vector<std::thread> threads;
  for (std::size_t i = 0; i < betas.size(); ++i)
    threads.emplace_back([&, i] {
      parallel[i] = continue_branch(ModelParams::gardner(betas[i], 1.0, 0.0), 1, 0.01, 0.02, settings);
    });
  for (auto& t : threads) t.join();
  for (std::size_t i = 0; i < betas.size(); ++i) {
    REQUIRE(parallel[i]->points.size() == serial[i].points.size());
    for (std::size_t j = 0; j < serial[i].points.size(); ++j) {
      CHECK(parallel[i]->points[j].c == serial[i].points[j].c);
      CHECK(max_abs_diff(parallel[i]->points[j].profile, serial[i].points[j].profile) == 0.0);
    }
  }
}
