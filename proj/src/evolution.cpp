#include "ostro/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ostro {

double cfl_ceiling(const ModelParams& p, const WaveProfile& u0) {
  double speed = 0.0;
  for (double u : u0.samples()) speed = std::max(speed, std::abs(nonlin(p, u, 1)));
  if (speed == 0.0) return std::numeric_limits<double>::infinity();
  return 0.5 * u0.grid().spacing() / speed;
}

namespace {

using Spectrum = std::vector<cplx>;

class FluxOperator {
 public:
  FluxOperator(const ModelParams& p, const TorusGrid& g) : p_(p), grid_(g) {}

  // -ik·n(u)^ for 0 < k < n/2; zero at k = 0 and at the Nyquist mode.
  Spectrum operator()(const Spectrum& uhat) const {
    const auto u = WaveProfile::from_coeffs(grid_, uhat);
    const auto nl = dealiased_map(u, p_.degree(), [this](double v) { return nonlin(p_, v, 0); });
    Spectrum out(uhat.size());
    for (std::size_t k = 1; k + 1 < out.size(); ++k) out[k] = cplx(0.0, -static_cast<double>(k)) * nl.coeffs()[k];
    return out;
  }

 private:
  const ModelParams& p_;
  TorusGrid grid_;
};

double gradient_sup(const TorusGrid& g, const Spectrum& uhat) {
  return derivative(WaveProfile::from_coeffs(g, uhat), 1).sup_norm();
}

bool finite(const Spectrum& s) {
  return std::all_of(s.begin(), s.end(), [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

}  // namespace

EvolutionResult evolve(const WaveProfile& u0, const EvolutionConfig& config) {
  if (!(config.dt > 0.0) || !(config.t_final >= 0.0)) throw std::invalid_argument("dt must be positive and t_final non-negative");
  if (config.record_every < 1) throw std::invalid_argument("record_every must be >= 1");
  if (std::abs(u0.mean()) > kMeanTolerance * std::max(1.0, u0.sup_norm()))
    throw std::invalid_argument("initial data must have zero mean");
  const auto& p = config.params;
  const double ceiling = cfl_ceiling(p, u0);
  if (config.dt > ceiling)
    throw std::invalid_argument("dt exceeds the advective ceiling " + std::to_string(ceiling));

  const TorusGrid grid = u0.grid();
  const int half = grid.nyquist() + 1;
  const long steps = std::lround(std::ceil(config.t_final / config.dt - 1e-9));
  const double dt = steps > 0 ? config.t_final / steps : config.dt;

  Spectrum e_half(static_cast<std::size_t>(half)), e_full(static_cast<std::size_t>(half));
  for (int k = 1; k < half - 1; ++k) {
    const double omega = dispersion(p, k).omega;
    e_half[static_cast<std::size_t>(k)] = std::exp(cplx(0.0, -omega * dt / 2.0));
    e_full[static_cast<std::size_t>(k)] = std::exp(cplx(0.0, -omega * dt));
  }

  Spectrum u(u0.coeffs().begin(), u0.coeffs().end());
  u.front() = 0.0;
  u.back() = 0.0;
  const FluxOperator flux(p, grid);

  EvolutionResult result;
  result.initial_gradient = gradient_sup(grid, u);
  result.last_gradient = result.initial_gradient;
  result.snapshots.push_back({0.0, WaveProfile::from_coeffs(grid, u)});
  const double break_level = 1e4 * result.initial_gradient;

  Spectrum tmp(u.size());
  for (long step = 1; step <= steps; ++step) {
    const auto a = flux(u);
    for (std::size_t k = 0; k < u.size(); ++k) tmp[k] = e_half[k] * (u[k] + 0.5 * dt * a[k]);
    const auto b = flux(tmp);
    for (std::size_t k = 0; k < u.size(); ++k) tmp[k] = e_half[k] * u[k] + 0.5 * dt * b[k];
    const auto c = flux(tmp);
    for (std::size_t k = 0; k < u.size(); ++k) tmp[k] = e_full[k] * u[k] + dt * e_half[k] * c[k];
    const auto d = flux(tmp);
    Spectrum next(u.size());
    for (std::size_t k = 0; k < u.size(); ++k)
      next[k] = e_full[k] * u[k] + dt / 6.0 * (e_full[k] * a[k] + 2.0 * e_half[k] * (b[k] + c[k]) + d[k]);

    const double t = step * dt;
    const double grad = finite(next) ? gradient_sup(grid, next) : std::numeric_limits<double>::infinity();
    if (!std::isfinite(grad) || (result.initial_gradient > 0.0 && grad > break_level)) {
      result.breaking = true;
      if (result.snapshots.back().t < (step - 1) * dt)
        result.snapshots.push_back({(step - 1) * dt, WaveProfile::from_coeffs(grid, u)});
      return result;
    }
    u = std::move(next);
    result.t_reached = t;
    result.last_gradient = grad;
    if (step % config.record_every == 0 || step == steps)
      result.snapshots.push_back({t, WaveProfile::from_coeffs(grid, u)});
  }
  return result;
}

double traveling_error(const BranchPoint& point, double t_final, const EvolutionConfig& config) {
  if (t_final == 0.0) return 0.0;
  EvolutionConfig cfg = config;
  cfg.t_final = t_final;
  cfg.record_every = std::numeric_limits<int>::max();
  const auto result = evolve(point.profile, cfg);
  if (result.breaking) throw BlowUpError("evolution broke before the final time");
  const auto& u = result.snapshots.back().u;
  const auto target = point.profile.shifted(point.c * t_final);
  return max_abs_diff(u, target) / point.profile.sup_norm();
}

}  // namespace ostro
