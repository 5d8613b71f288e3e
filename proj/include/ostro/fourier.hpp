// Discrete Fourier representation of 2π-periodic real functions and the
// nonlocal multiplier operators used by the steady traveling-wave problem.
//
// Conventions:
//   nodes        x_j = -π + 2πj/n,  j = 0..n-1
//   coefficients f̂(k) = (1/2π) ∫ f(x) e^{-ikx} dx, approximated by the
//                trapezoid rule (1/n) Σ_j f_j e^{-ik x_j}
//   storage      half spectrum k = 0..n/2; negative k by conjugation.
//                The Nyquist coefficient f̂(n/2) is real and represents
//                the interpolant term f̂(n/2)·cos((n/2)x).
#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace ostro {

using cplx = std::complex<double>;

/// Absolute zero-mean tolerance relative to max(1, ‖f‖∞).
inline constexpr double kMeanTolerance = 1e-12;

class TorusGrid {
 public:
  /// n must be even and at least 8.
  explicit TorusGrid(int n);

  int size() const noexcept { return n_; }
  int nyquist() const noexcept { return n_ / 2; }
  double spacing() const noexcept;
  double node(int j) const noexcept;
  std::vector<double> nodes() const;

  friend bool operator==(const TorusGrid&, const TorusGrid&) = default;

 private:
  int n_;
};

TorusGrid make_grid(int n);

/// Reduces x to the fundamental interval [-π, π].
double wrap_to_pi(double x) noexcept;

/// Real periodic function held both as node samples and as its half
/// spectrum.  Both views are kept consistent; the type is immutable.
class WaveProfile {
 public:
  static WaveProfile from_samples(const TorusGrid& grid, std::vector<double> samples);
  /// `half` holds f̂(0..n/2).  Imaginary parts of f̂(0) and f̂(n/2) are dropped.
  static WaveProfile from_coeffs(const TorusGrid& grid, std::vector<cplx> half);
  static WaveProfile from_function(const TorusGrid& grid, const std::function<double(double)>& f);
  static WaveProfile zero(const TorusGrid& grid);
  /// Σ_k a_k cos(kx) for k = 1..a.size().
  static WaveProfile from_cosine_series(const TorusGrid& grid, std::span<const double> a);

  const TorusGrid& grid() const noexcept { return grid_; }
  int size() const noexcept { return grid_.size(); }
  std::span<const double> samples() const noexcept { return samples_; }
  std::span<const cplx> coeffs() const noexcept { return coeffs_; }
  double sample(int j) const { return samples_.at(static_cast<std::size_t>(j)); }

  /// f̂(k) for |k| <= n/2.
  cplx coeff(int k) const;
  /// Coefficient a_k of cos(kx), i.e. 2 Re f̂(k) (k >= 1; Nyquist counted once).
  double cos_coeff(int k) const;
  /// Coefficient b_k of sin(kx), i.e. -2 Im f̂(k).
  double sin_coeff(int k) const;
  /// Cosine coefficients a_1..a_{n/2-1}.
  std::vector<double> cosine_series() const;

  double mean() const noexcept { return coeffs_[0].real(); }
  double sup_norm() const noexcept;
  double max() const noexcept;
  double min() const noexcept;

  /// Trigonometric interpolant at an arbitrary point.
  double evaluate(double x) const;

  /// Spectral interpolation (m > n) or truncation (m < n) onto an m-point grid.
  WaveProfile resampled(int m) const;
  /// x ↦ f(x - s), applied as the phase factor e^{-iks}.
  WaveProfile shifted(double s) const;
  /// x ↦ f(2λ - x).
  WaveProfile reflected(double lambda = 0.0) const;

  WaveProfile operator+(const WaveProfile& o) const;
  WaveProfile operator-(const WaveProfile& o) const;
  WaveProfile operator*(double s) const;

 private:
  WaveProfile(TorusGrid grid, std::vector<double> samples, std::vector<cplx> coeffs);

  TorusGrid grid_;
  std::vector<double> samples_;
  std::vector<cplx> coeffs_;
};

inline WaveProfile operator*(double s, const WaveProfile& f) { return f * s; }

/// Largest pointwise difference between two profiles on the same grid.
double max_abs_diff(const WaveProfile& a, const WaveProfile& b);

// --- multiplier operators ----------------------------------------------------

/// Real symbol evaluated for k >= 0; applied to ±k alike, so the operator
/// maps real functions to real functions.
using Symbol = std::function<double(int)>;

/// Coefficients m(k) f̂(k).  A non-finite m(0) is accepted only for zero-mean
/// input and then yields a zero mean; any other non-finite m(k) acting on a
/// nonzero coefficient throws std::domain_error.
WaveProfile apply_multiplier(const WaveProfile& f, const Symbol& m);

/// D⁻²: symbol 1/k², zero at k = 0.  Throws std::domain_error for nonzero mean.
WaveProfile d2_inverse(const WaveProfile& f);

/// L_{β,c} = 1/(c + βD²): symbol 1/(c + βk²).
WaveProfile smoothing_op(const WaveProfile& f, double beta, double c);

/// ∂_x^order: symbol (ik)^order.  The Nyquist mode is dropped for odd orders.
WaveProfile derivative(const WaveProfile& f, int order);

WaveProfile project_zero_mean(const WaveProfile& f);

// --- convolution kernels -----------------------------------------------------

/// Closed form of the kernel of D⁻²: (|x|-π)²/(4π) - π/12 on [-π, π].
double kernel_K(double x) noexcept;

/// (1/π) Σ_{k=1}^{m} cos(kx)/k².
double kernel_K_series(double x, long m_terms);

/// 1/(2πc) + (1/π) Σ_{k=1}^{m} cos(kx)/(c+βk²): kernel of L_{β,c}.
double kernel_G_series(double x, double beta, double c, long m_terms);

/// Summed closed form of the series above:
/// cosh(√(c/β)(π-|x|)) / (2√(βc) sinh(π√(c/β))).
double kernel_G_cosh(double x, double beta, double c);

/// Kernel formula as printed alongside the series in the literature; it
/// does not sum the series and is kept only to document the mismatch.
double kernel_G_printed(double x, double beta, double c);

/// Trapezoid-rule approximation of ∫_𝕋 kernel(x_i - y) f(y) dy at every node.
/// The kernel is sampled once on the grid differences; the outer loop is
/// OpenMP-parallel when available.
WaveProfile convolve_quadrature(const std::function<double(double)>& kernel, const WaveProfile& f);

/// Serial reference for convolve_quadrature.
WaveProfile convolve_quadrature_serial(const std::function<double(double)>& kernel,
                                       const WaveProfile& f);

/// Tabulates a truncated kernel series at many points (OpenMP over points).
std::vector<double> tabulate_series(std::span<const double> xs,
                                    const std::function<double(double)>& series);
std::vector<double> tabulate_series_serial(std::span<const double> xs,
                                           const std::function<double(double)>& series);

// --- dealiased nonlinear evaluation -------------------------------------------

/// Padded grid size on which a polynomial of the given degree in band-limited
/// inputs is computed without aliasing into the retained modes.
int dealias_grid_size(int n, int degree);

/// Evaluates g(f(x)) for a polynomial g of the given degree on a padded grid
/// and truncates back to |k| < n/2 (Nyquist dropped).
WaveProfile dealiased_map(const WaveProfile& f, int degree,
                          const std::function<double(double)>& g);

/// Same for a pointwise map of two profiles of total polynomial degree `degree`.
WaveProfile dealiased_map(const WaveProfile& f, const WaveProfile& h, int degree,
                          const std::function<double(double, double)>& g);

/// Exponential Fourier coefficients ĝ(0..kmax) of g(f) for polynomial g,
/// exact provided the padded grid is large enough for kmax (see dealias_grid_size).
std::vector<cplx> dealiased_spectrum(const WaveProfile& f, int degree, int kmax,
                                     const std::function<double(double)>& g);

namespace fft {

/// f̂(0..n/2) of node samples under the conventions above.
std::vector<cplx> forward(std::span<const double> samples);
/// Node samples of the half spectrum `half` (size n/2+1).
std::vector<double> inverse(std::span<const cplx> half, int n);

}  // namespace fft

}  // namespace ostro
