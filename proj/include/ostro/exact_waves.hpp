// Closed-form highest waves for β = 0 and the steady ODE system for β > 0.
#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ostro/fourier.hpp"
#include "ostro/model.hpp"

namespace ostro {

/// (3(|x|-π)² - π²) / (18σ): peaked wave of n = σu²/2 at c = π²/9.
double reduced_ostrovsky_peak(double sigma, double x);

/// (π/2 - |x|) / √(2α): peaked wave of n = αu³/3 at c = π²/8.
double modified_peak(double alpha, double x);

/// The same formulas with π² in place of π (resp. π²/2 in place of π/2),
/// as they are commonly misprinted.  Not solutions; kept as negative controls.
double reduced_ostrovsky_peak_printed(double sigma, double x);
double modified_peak_printed(double alpha, double x);

struct ExactWave {
  enum class Family { reduced_sigma, modified_alpha };
  Family family;
  double parameter;

  static ExactWave reduced(double sigma);
  static ExactWave modified(double alpha);

  double speed() const noexcept;
  ModelParams params() const;
  double operator()(double x, bool printed = false) const;
  WaveProfile sample(const TorusGrid& grid, bool printed = false) const;
  std::string name() const;
};

/// sup over nodes of P₀[F(φ) + K∗φ], with K∗φ by trapezoid quadrature.
/// Uses the wave's own speed unless `c` is given.  Requires n >= 1024.
double verify_exact(const ExactWave& wave, int n, bool printed = false,
                    std::optional<double> c = std::nullopt);

struct OdeState {
  double phi = 0.0;
  double phi_prime = 0.0;
  double v = 0.0;
  double v_prime = 0.0;
  double x = 0.0;
};

/// E = ½((φ')² + (γ/β)(v')²) + (1/β)(-cφ²/2 + N(φ) - γvφ).  Throws
/// std::domain_error for β = 0.
double hamiltonian(const ModelParams& p, double c, const OdeState& s);

/// Right-hand side of φ'' = (cφ - n(φ) + γv)/β, v'' = φ.
OdeState ode_field(const ModelParams& p, double c, const OdeState& s);

/// ∇E · field: identically zero along the flow.
double energy_rate(const ModelParams& p, double c, const OdeState& s);

/// Sum of the magnitudes of the terms in energy_rate, for relative checks.
double energy_rate_scale(const ModelParams& p, double c, const OdeState& s);

struct Trajectory {
  std::vector<OdeState> states;
  bool blew_up = false;
};

/// Fixed-step RK4 over [state0.x, state0.x + length].  Stops early, with
/// blew_up set, when the state becomes non-finite or exceeds `bound`.
Trajectory ode_flow(const ModelParams& p, double c, const OdeState& state0, double length, double step,
                    double bound = std::numeric_limits<double>::infinity());

/// max_x |E(x) - E(x0)| / max(1, |E(x0)|) over a trajectory.
double energy_drift(const ModelParams& p, double c, const Trajectory& t);

}  // namespace ostro
