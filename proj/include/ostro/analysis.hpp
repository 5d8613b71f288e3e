// Regularity, amplitude and symmetry diagnostics for steady profiles.
#pragma once

#include <optional>
#include <string>

#include "ostro/fourier.hpp"
#include "ostro/model.hpp"

namespace ostro {

/// Roots of F'(u) = -c + n'(u) closest to the origin on each side, with the
/// order a = min{m >= 2 : F^(m) != 0} at each.
struct SingularLevels {
  std::optional<double> phi_minus;
  std::optional<double> phi_plus;
  std::optional<int> order_a_minus;
  std::optional<int> order_a_plus;
};

SingularLevels singular_levels(const ModelParams& p, double c);

/// min over nodes of c - n'(φ).
double slack(const ModelParams& p, double c, const WaveProfile& phi);

struct HolderPrediction {
  int a;
  double exponent;  // 2/a
  double constant;  // (a! |φ̄| / (2 |F^(a)(φ̄)|))^{1/a}
};

/// Local law |φ(x) - φ̄| ~ C |x - x̄|^{2/a} at a level where F' vanishes.
/// Throws std::domain_error when F'(phi_bar) is not zero.
HolderPrediction predicted_holder(const ModelParams& p, double c, double phi_bar);

struct HolderFit {
  double exponent;
  double constant;
  int points;
};

/// Log-log least squares of |φ(x) - φ(x*)| against |x - x*| over the nodes
/// with exclude < |i - i*| <= window on both sides of the node nearest x*.
/// Throws std::domain_error with fewer than 8 usable nodes or a zero increment.
HolderFit holder_fit(const WaveProfile& phi, double x_star, int window = 16, int exclude = 2);

struct Asymmetry {
  double lambda_star;
  double value;
};

/// min over λ of ‖φ(2λ - ·) - φ‖∞ / ‖φ‖∞, by a coarse scan followed by Brent
/// refinement.  Throws std::domain_error for φ = 0.
Asymmetry asymmetry(const WaveProfile& phi);

/// Cyclic count of + to - sign changes of the spectral derivative, ignoring
/// values below 1e-10 ‖φ'‖∞.
int crest_count(const WaveProfile& phi);

/// Slope of log|φ̂(k)| against log k over k_min <= k <= n/3, using only
/// coefficients above 1e-12 of the largest.  Returns -infinity when fewer
/// than three coefficients clear that floor (band-limited input).
/// Throws std::invalid_argument if k_min < 4 or the grid is too coarse.
double fourier_decay(const WaveProfile& phi, int k_min = 4);

struct AmplitudeCheck {
  bool ok;
  std::optional<double> upper_margin;  // φ*₊ - max φ
  std::optional<double> lower_margin;  // min φ - φ*₋
  std::optional<double> range_margin;  // 2√(σ²/4α² + c/α) - (max φ - min φ), Gardner α > 0
};

inline constexpr double kAmplitudeTolerance = 1e-6;

AmplitudeCheck amplitude_check(const ModelParams& p, double c, const WaveProfile& phi);

/// slack above this is the smooth regime; at or below, the Hölder fit is run.
inline constexpr double kNearSingularSlack = 1e-2;

struct DiagnosticsReport {
  double slack = 0.0;
  std::optional<double> holder_exponent;
  std::optional<double> holder_constant;
  double predicted_exponent = 0.0;
  double predicted_constant = 0.0;
  double asymmetry = 0.0;
  int crest_count = 0;
  double fourier_decay_rate = 0.0;
  bool amplitude_ok = true;
  std::string regime;  // "smooth" or "near-singular"
};

DiagnosticsReport diagnose(const ModelParams& p, double c, const WaveProfile& phi);

}  // namespace ostro
