#include <doctest.h>

#include <cmath>
#include <numbers>
#include <thread>

#include "ostro/evolution.hpp"

using namespace ostro;

namespace {

WaveProfile cosine(const TorusGrid& g, int k, double amp) {
  return WaveProfile::from_function(g, [=](double x) { return amp * std::cos(k * x); });
}

double energy(const WaveProfile& u) {
  double e = 0.0;
  for (int k = 1; k < u.grid().nyquist(); ++k) e += std::norm(u.coeff(k));
  return e;
}

BranchPoint smooth_point(double eps) {
  const auto p = ModelParams::gardner(0.25, 1.0, 0.0);
  const auto g = initial_guess(p, 1, eps, 64);
  return newton_solve(p, g.c, g.profile, eps);
}

}  // namespace

TEST_CASE("zero data stays zero") {
  EvolutionConfig cfg;
  cfg.t_final = 0.5;
  cfg.record_every = 100;
  const auto r = evolve(WaveProfile::zero(TorusGrid(64)), cfg);
  CHECK_FALSE(r.breaking);
  for (const auto& s : r.snapshots) CHECK(s.u.sup_norm() == 0.0);
  CHECK(r.t_reached == doctest::Approx(0.5));
}

TEST_CASE("small data follows the linear dispersion relation") {
  for (double beta : {0.0, 0.25}) {
    EvolutionConfig cfg;
    cfg.params = ModelParams::gardner(beta, 1.0, 0.0);
    cfg.t_final = 1.0;
    cfg.record_every = 1000;
    const double delta = 1e-8;
    for (int k : {1, 3}) {
      const auto r = evolve(cosine(TorusGrid(64), k, delta), cfg);
      const double omega = dispersion(cfg.params, k).omega;
      // û(k, t) = û(k, 0) e^{-iωt}.
      const cplx expect = 0.5 * delta * std::exp(cplx(0.0, -omega * 1.0));
      CHECK(std::abs(r.snapshots.back().u.coeff(k) - expect) <= 1e-8 * delta);
    }
  }
}

TEST_CASE("mean stays zero and linear energy is conserved") {
  EvolutionConfig cfg;
  cfg.params = ModelParams::gardner(0.1, 1.0, 0.0);
  cfg.t_final = 2.0;
  cfg.record_every = 100;
  const auto u0 = cosine(TorusGrid(64), 1, 1e-8) + cosine(TorusGrid(64), 2, 5e-9);
  const auto r = evolve(u0, cfg);
  for (const auto& s : r.snapshots) {
    CHECK(s.u.coeff(0) == cplx(0.0, 0.0));
    CHECK(std::abs(energy(s.u) - energy(u0)) <= 1e-12 * energy(u0));
  }
}

TEST_CASE("input validation") {
  EvolutionConfig cfg;
  const TorusGrid g(64);
  const auto lifted = WaveProfile::from_function(g, [](double x) { return 0.1 + std::cos(x); });
  CHECK_THROWS_AS(evolve(lifted, cfg), std::invalid_argument);
  const auto u0 = cosine(g, 1, 1.0);
  cfg.dt = 2 * cfl_ceiling(cfg.params, u0);
  CHECK_THROWS_AS(evolve(u0, cfg), std::invalid_argument);
  CHECK(std::isinf(cfl_ceiling(cfg.params, WaveProfile::zero(g))));
  CHECK(cfl_ceiling(cfg.params, u0) == doctest::Approx(0.5 * (2 * std::numbers::pi / 64)).epsilon(1e-12));
}

TEST_CASE("steady profiles translate at their speed") {
  const auto pt = smooth_point(0.2);
  EvolutionConfig cfg;
  cfg.params = ModelParams::gardner(0.25, 1.0, 0.0);
  CHECK(traveling_error(pt, 0.0, cfg) == 0.0);
  CHECK(traveling_error(pt, 1.0, cfg) <= 1e-6);
}

TEST_CASE("time stepping is fourth order") {
  const auto pt = smooth_point(0.3);
  EvolutionConfig cfg;
  cfg.params = ModelParams::gardner(0.25, 1.0, 0.0);
  cfg.record_every = 1000000;
  std::vector<double> errs;
  for (double dt : {0.04, 0.02, 0.01}) {
    cfg.dt = dt;
    errs.push_back(traveling_error(pt, 2.0, cfg));
  }
  for (std::size_t i = 1; i < errs.size(); ++i) {
    const double ratio = errs[i - 1] / errs[i];
    CHECK(ratio >= 10.0);
    CHECK(ratio <= 24.0);
  }
}

TEST_CASE("steepening of supercritical data") {
  // For β = 0, σ = 1 smooth data stays smooth when 1 - 3u0'' > 0 everywhere.
  EvolutionConfig cfg;
  cfg.params = ModelParams::gardner(0.0, 1.0, 0.0);
  cfg.t_final = 10.0;
  cfg.record_every = 100000;
  const auto steep = cosine(TorusGrid(128), 1, 3.0);
  cfg.dt = 0.9 * cfl_ceiling(cfg.params, steep);
  const auto r = evolve(steep, cfg);
  CHECK(r.last_gradient > 10 * r.initial_gradient);
  const auto mild = cosine(TorusGrid(128), 1, 0.05);
  const auto q = evolve(mild, cfg);
  CHECK_FALSE(q.breaking);
  CHECK(q.last_gradient < 2 * q.initial_gradient);
}

TEST_CASE("concurrent evolutions match sequential runs") {
  EvolutionConfig cfg;
  cfg.params = ModelParams::gardner(0.25, 1.0, 0.0);
  cfg.t_final = 0.2;
  cfg.record_every = 1000;
  std::vector<WaveProfile> inits;
  for (int k = 1; k <= 4; ++k) inits.push_back(cosine(TorusGrid(64), k, 0.1 / k));
  std::vector<EvolutionResult> serial;
  for (const auto& u : inits) serial.push_back(evolve(u, cfg));
  std::vector<std::optional<EvolutionResult>> parallel(inits.size());
  std::vector<std::thread> threads;
  for (std::size_t i = 0; i < inits.size(); ++i) threads.emplace_back([&, i] { parallel[i] = evolve(inits[i], cfg); });
  for (auto& t : threads) t.join();
  for (std::size_t i = 0; i < inits.size(); ++i)
    CHECK(max_abs_diff(parallel[i]->snapshots.back().u, serial[i].snapshots.back().u) == 0.0);
}
