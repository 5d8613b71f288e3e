// Gardner–Ostrovsky steady problem in nonlocal form
//
//   G(c, φ) = P₀[ -φ + D⁻² L_{β,c} φ + L_{β,c} n(φ) ],   L_{β,c} = 1/(c + βD²),
//
// where P₀ removes the mean (the integration constant never becomes an
// unknown).  γ is fixed to 1 throughout.
#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "ostro/fourier.hpp"

namespace ostro {

inline constexpr int kMaxNonlinearDegree = 6;

/// n(u) = Σ_{j=2}^{d} a_j u^j with dispersion parameters β and γ = 1.
class ModelParams {
 public:
  /// `poly[j]` is the coefficient of u^j; poly[0] and poly[1] must vanish.
  ModelParams(double beta, std::vector<double> poly);

  /// n(u) = σ/2 u² + α/3 u³.
  static ModelParams gardner(double beta, double sigma, double alpha);

  double beta() const noexcept { return beta_; }
  double gamma() const noexcept { return 1.0; }
  std::span<const double> poly() const noexcept { return poly_; }
  int degree() const noexcept { return static_cast<int>(poly_.size()) - 1; }

  /// σ and α of the Gardner form (valid when degree <= 3).
  double sigma() const noexcept { return 2.0 * coefficient(2); }
  double alpha() const noexcept { return 3.0 * coefficient(3); }
  double coefficient(int j) const noexcept;

  ModelParams with_beta(double beta) const { return ModelParams(beta, poly_); }

 private:
  double beta_;
  std::vector<double> poly_;
};

/// n^{(order)}(u).
double nonlin(const ModelParams& p, double u, int order = 0);

/// Antiderivative N of n with N(0) = 0.
double nonlin_antiderivative(const ModelParams& p, double u);

/// F^{(order)}(u) for F(u) = -cu + n(u).
double F_eval(const ModelParams& p, double c, double u, int order = 0);

struct Dispersion {
  double omega;
  double phase_velocity;
  double group_velocity;
};

/// ω = γ/k - βk³ and the derived phase and group velocities.
Dispersion dispersion(const ModelParams& p, int k);

/// c_k = 1/k² - βk² when positive.
std::optional<double> bifurcation_speed(const ModelParams& p, int k);

/// Mean of L_{β,c} n(φ), i.e. (1/(2πc)) ∫ n(φ) dx.
double integration_constant(const ModelParams& p, double c, const WaveProfile& phi);

enum class ResidualMethod {
  spectral,    ///< D⁻² spectrally, n(φ) dealiased
  quadrature,  ///< D⁻² as trapezoid convolution with K, n(φ) pointwise
};

/// Zero-mean steady residual G(c, φ).  Throws std::domain_error for c <= 0.
WaveProfile residual(const ModelParams& p, double c, const WaveProfile& phi,
                     ResidualMethod method = ResidualMethod::spectral);

/// D_φG(c, φ)[ψ] = P₀[ -ψ + D⁻²Lψ + L(n'(φ)ψ) ].
WaveProfile jacobian_apply(const ModelParams& p, double c, const WaveProfile& phi,
                           const WaveProfile& psi);

/// Matrix of jacobian_apply in the basis {cos(jx)} (even_only) or
/// {cos(jx), sin(jx)} interleaved, j = 1..n/2-1.  Columns are computed in
/// parallel.
Eigen::MatrixXd jacobian_matrix(const ModelParams& p, double c, const WaveProfile& phi,
                                bool even_only);
Eigen::MatrixXd jacobian_matrix_serial(const ModelParams& p, double c, const WaveProfile& phi,
                                       bool even_only);

/// Direct assembly of the cosine-basis Jacobian from the spectrum of n'(φ)
/// (Toeplitz-plus-Hankel structure).  Agrees with jacobian_matrix(..., true).
Eigen::MatrixXd cosine_jacobian(const ModelParams& p, double c, const WaveProfile& phi);

/// Coefficient of cos(kx) in D²_{c,φ}G(c_k, 0)[cos(k·)] = -D⁻²L²cos(k·).
/// Throws std::domain_error when c_k is not positive.
double transversality_value(const ModelParams& p, int k);

/// Speed at which the trivial-state Jacobian on an n-point grid acquires the
/// kernel cos(kx), located by bracketing root search on its diagonal.
double critical_speed(const ModelParams& p, int k, int n = 64);

}  // namespace ostro
