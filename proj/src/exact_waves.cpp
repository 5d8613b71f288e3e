#include "ostro/exact_waves.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ostro {
namespace {

constexpr double pi = std::numbers::pi;

void require_sigma(double sigma) {
  if (sigma == 0.0 || !std::isfinite(sigma)) throw std::invalid_argument("sigma must be nonzero");
}

void require_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be positive");
}

}  // namespace

double reduced_ostrovsky_peak(double sigma, double x) {
  require_sigma(sigma);
  const double r = std::abs(wrap_to_pi(x)) - pi;
  return (3.0 * r * r - pi * pi) / (18.0 * sigma);
}

double modified_peak(double alpha, double x) {
  require_alpha(alpha);
  return (pi / 2.0 - std::abs(wrap_to_pi(x))) / std::sqrt(2.0 * alpha);
}

double reduced_ostrovsky_peak_printed(double sigma, double x) {
  require_sigma(sigma);
  const double r = std::abs(wrap_to_pi(x)) - pi * pi;
  return (3.0 * r * r - pi * pi) / (18.0 * sigma);
}

double modified_peak_printed(double alpha, double x) {
  require_alpha(alpha);
  return (pi * pi / 2.0 - std::abs(wrap_to_pi(x))) / std::sqrt(2.0 * alpha);
}

ExactWave ExactWave::reduced(double sigma) {
  require_sigma(sigma);
  return {Family::reduced_sigma, sigma};
}

ExactWave ExactWave::modified(double alpha) {
  require_alpha(alpha);
  return {Family::modified_alpha, alpha};
}

double ExactWave::speed() const noexcept {
  return family == Family::reduced_sigma ? pi * pi / 9.0 : pi * pi / 8.0;
}

ModelParams ExactWave::params() const {
  return family == Family::reduced_sigma ? ModelParams::gardner(0.0, parameter, 0.0)
                                         : ModelParams::gardner(0.0, 0.0, parameter);
}

double ExactWave::operator()(double x, bool printed) const {
  if (family == Family::reduced_sigma)
    return printed ? reduced_ostrovsky_peak_printed(parameter, x) : reduced_ostrovsky_peak(parameter, x);
  return printed ? modified_peak_printed(parameter, x) : modified_peak(parameter, x);
}

WaveProfile ExactWave::sample(const TorusGrid& grid, bool printed) const {
  return WaveProfile::from_function(grid, [&](double x) { return (*this)(x, printed); });
}

std::string ExactWave::name() const {
  return family == Family::reduced_sigma ? "reduced" : "modified";
}

double verify_exact(const ExactWave& wave, int n, bool printed, std::optional<double> c) {
  if (n < 1024) throw std::invalid_argument("verify_exact needs n >= 1024");
  const TorusGrid grid(n);
  const auto phi = wave.sample(grid, printed);
  const auto p = wave.params();
  const double speed = c.value_or(wave.speed());
  std::vector<double> f(phi.samples().begin(), phi.samples().end());
  for (double& u : f) u = F_eval(p, speed, u, 0);
  const auto total = WaveProfile::from_samples(grid, std::move(f)) + convolve_quadrature(kernel_K, phi);
  return project_zero_mean(total).sup_norm();
}

namespace {

void require_beta(const ModelParams& p) {
  if (!(p.beta() > 0.0)) throw std::domain_error("the steady ODE system needs beta > 0");
}

}  // namespace

double hamiltonian(const ModelParams& p, double c, const OdeState& s) {
  require_beta(p);
  const double b = p.beta();
  const double g = p.gamma();
  return 0.5 * (s.phi_prime * s.phi_prime + (g / b) * s.v_prime * s.v_prime) +
         (-0.5 * c * s.phi * s.phi + nonlin_antiderivative(p, s.phi) - g * s.v * s.phi) / b;
}

OdeState ode_field(const ModelParams& p, double c, const OdeState& s) {
  require_beta(p);
  const double b = p.beta();
  return {s.phi_prime, (c * s.phi - nonlin(p, s.phi) + p.gamma() * s.v) / b, s.v_prime, s.phi, 1.0};
}

double energy_rate(const ModelParams& p, double c, const OdeState& s) {
  const auto f = ode_field(p, c, s);
  const double b = p.beta();
  const double g = p.gamma();
  const double dphi = (-c * s.phi + nonlin(p, s.phi) - g * s.v) / b;
  return dphi * f.phi + s.phi_prime * f.phi_prime + (-g * s.phi / b) * f.v + (g * s.v_prime / b) * f.v_prime;
}

double energy_rate_scale(const ModelParams& p, double c, const OdeState& s) {
  const auto f = ode_field(p, c, s);
  const double b = p.beta();
  const double g = p.gamma();
  const double dphi = (-c * s.phi + nonlin(p, s.phi) - g * s.v) / b;
  return std::abs(dphi * f.phi) + std::abs(s.phi_prime * f.phi_prime) + std::abs(g * s.phi / b * f.v) +
         std::abs(g * s.v_prime / b * f.v_prime);
}

namespace {

OdeState axpy(const OdeState& s, double h, const OdeState& k) {
  return {s.phi + h * k.phi, s.phi_prime + h * k.phi_prime, s.v + h * k.v, s.v_prime + h * k.v_prime,
          s.x + h};
}

bool within(const OdeState& s, double bound) {
  for (double v : {s.phi, s.phi_prime, s.v, s.v_prime})
    if (!std::isfinite(v) || std::abs(v) > bound) return false;
  return true;
}

}  // namespace

Trajectory ode_flow(const ModelParams& p, double c, const OdeState& state0, double length, double step,
                    double bound) {
  require_beta(p);
  if (!(step > 0.0)) throw std::invalid_argument("step must be positive");
  if (!(length >= 0.0)) throw std::invalid_argument("integration length must be non-negative");
  const long steps = std::lround(std::ceil(length / step - 1e-9));
  const double h = steps > 0 ? length / steps : step;
  Trajectory t;
  t.states.reserve(static_cast<std::size_t>(steps + 1));
  t.states.push_back(state0);
  OdeState s = state0;
  for (long i = 0; i < steps; ++i) {
    const auto k1 = ode_field(p, c, s);
    const auto k2 = ode_field(p, c, axpy(s, 0.5 * h, k1));
    const auto k3 = ode_field(p, c, axpy(s, 0.5 * h, k2));
    const auto k4 = ode_field(p, c, axpy(s, h, k3));
    OdeState next;
    next.phi = s.phi + h / 6.0 * (k1.phi + 2.0 * k2.phi + 2.0 * k3.phi + k4.phi);
    next.phi_prime = s.phi_prime + h / 6.0 * (k1.phi_prime + 2.0 * k2.phi_prime + 2.0 * k3.phi_prime + k4.phi_prime);
    next.v = s.v + h / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
    next.v_prime = s.v_prime + h / 6.0 * (k1.v_prime + 2.0 * k2.v_prime + 2.0 * k3.v_prime + k4.v_prime);
    next.x = state0.x + (i + 1) * h;
    if (!within(next, bound)) {
      t.blew_up = true;
      break;
    }
    s = next;
    t.states.push_back(s);
  }
  return t;
}

double energy_drift(const ModelParams& p, double c, const Trajectory& t) {
  if (t.states.empty()) return 0.0;
  const double e0 = hamiltonian(p, c, t.states.front());
  double drift = 0.0;
  for (const auto& s : t.states) drift = std::max(drift, std::abs(hamiltonian(p, c, s) - e0));
  return drift / std::max(1.0, std::abs(e0));
}

}  // namespace ostro
