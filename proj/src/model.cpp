#include "ostro/model.hpp"

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

namespace ostro {

ModelParams::ModelParams(double beta, std::vector<double> poly) : beta_(beta), poly_(std::move(poly)) {
  if (!(beta_ >= 0.0) || !std::isfinite(beta_)) throw std::invalid_argument("beta must be finite and >= 0");
  while (poly_.size() > 2 && poly_.back() == 0.0) poly_.pop_back();
  if (poly_.size() < 3) throw std::invalid_argument("nonlinearity must be nontrivial");
  if (poly_[0] != 0.0 || poly_[1] != 0.0)
    throw std::invalid_argument("nonlinearity must satisfy n(0) = n'(0) = 0");
  if (degree() > kMaxNonlinearDegree)
    throw std::invalid_argument("nonlinearity degree exceeds " + std::to_string(kMaxNonlinearDegree));
  for (double a : poly_)
    if (!std::isfinite(a)) throw std::invalid_argument("nonlinearity coefficients must be finite");
}

ModelParams ModelParams::gardner(double beta, double sigma, double alpha) {
  return ModelParams(beta, {0.0, 0.0, sigma / 2.0, alpha / 3.0});
}

double ModelParams::coefficient(int j) const noexcept {
  if (j < 0 || j >= static_cast<int>(poly_.size())) return 0.0;
  return poly_[static_cast<std::size_t>(j)];
}

namespace {

// d^order/du^order of Σ a_j u^j, by Horner on the differentiated coefficients.
double poly_derivative(std::span<const double> a, double u, int order) {
  const int d = static_cast<int>(a.size()) - 1;
  if (order > d) return 0.0;
  double s = 0.0;
  for (int j = d; j >= order; --j) {
    double falling = 1.0;
    for (int i = 0; i < order; ++i) falling *= (j - i);
    s = s * u + falling * a[static_cast<std::size_t>(j)];
  }
  return s;
}

}  // namespace

double nonlin(const ModelParams& p, double u, int order) {
  if (order < 0) throw std::invalid_argument("derivative order must be >= 0");
  return poly_derivative(p.poly(), u, order);
}

double nonlin_antiderivative(const ModelParams& p, double u) {
  double s = 0.0;
  for (int j = p.degree(); j >= 0; --j) s = (s + p.coefficient(j) / (j + 1)) * u;
  return s;
}

double F_eval(const ModelParams& p, double c, double u, int order) {
  const double n = nonlin(p, u, order);
  if (order == 0) return -c * u + n;
  if (order == 1) return -c + n;
  return n;
}

Dispersion dispersion(const ModelParams& p, int k) {
  if (k == 0) throw std::domain_error("dispersion relation is singular at k = 0");
  const double kd = k;
  const double g = p.gamma();
  const double b = p.beta();
  return {g / kd - b * kd * kd * kd, g / (kd * kd) - b * kd * kd, -g / (kd * kd) - 3.0 * b * kd * kd};
}

std::optional<double> bifurcation_speed(const ModelParams& p, int k) {
  if (k < 1) throw std::invalid_argument("bifurcation wavenumber must be >= 1");
  const double kd = k;
  const double ck = 1.0 / (kd * kd) - p.beta() * kd * kd;
  if (ck > 0.0) return ck;
  return std::nullopt;
}

namespace {

void require_speed(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw std::domain_error("wave speed must be positive");
}

WaveProfile nonlinearity_of(const ModelParams& p, const WaveProfile& phi) {
  return dealiased_map(phi, p.degree(), [&p](double u) { return nonlin(p, u, 0); });
}

}  // namespace

double integration_constant(const ModelParams& p, double c, const WaveProfile& phi) {
  require_speed(c);
  return nonlinearity_of(p, phi).mean() / c;
}

WaveProfile residual(const ModelParams& p, double c, const WaveProfile& phi, ResidualMethod method) {
  require_speed(c);
  const double beta = p.beta();
  if (method == ResidualMethod::spectral) {
    const auto linear = smoothing_op(d2_inverse(phi), beta, c);
    const auto nonlinear = smoothing_op(nonlinearity_of(p, phi), beta, c);
    return project_zero_mean(linear + nonlinear - phi);
  }
  const auto k_conv = convolve_quadrature(kernel_K, phi);
  std::vector<double> n_vals(phi.samples().begin(), phi.samples().end());
  for (double& v : n_vals) v = nonlin(p, v, 0);
  const auto n_phi = WaveProfile::from_samples(phi.grid(), std::move(n_vals));
  return project_zero_mean(smoothing_op(k_conv + n_phi, beta, c) - phi);
}

WaveProfile jacobian_apply(const ModelParams& p, double c, const WaveProfile& phi,
                           const WaveProfile& psi) {
  require_speed(c);
  const double beta = p.beta();
  const auto product = dealiased_map(phi, psi, p.degree(),
                                     [&p](double u, double v) { return nonlin(p, u, 1) * v; });
  const auto out = smoothing_op(d2_inverse(psi), beta, c) + smoothing_op(product, beta, c) - psi;
  return project_zero_mean(out);
}

namespace {

WaveProfile basis_function(const TorusGrid& g, int j, bool sine) {
  std::vector<cplx> half(static_cast<std::size_t>(g.nyquist() + 1));
  half[static_cast<std::size_t>(j)] = sine ? cplx(0.0, -0.5) : cplx(0.5, 0.0);
  return WaveProfile::from_coeffs(g, std::move(half));
}

void fill_column(Eigen::MatrixXd& m, int col, const WaveProfile& out, bool even_only) {
  const int modes = out.grid().nyquist() - 1;
  for (int j = 1; j <= modes; ++j) {
    if (even_only) {
      m(j - 1, col) = out.cos_coeff(j);
    } else {
      m(2 * (j - 1), col) = out.cos_coeff(j);
      m(2 * (j - 1) + 1, col) = out.sin_coeff(j);
    }
  }
}

Eigen::MatrixXd jacobian_matrix_impl(const ModelParams& p, double c, const WaveProfile& phi,
                                     bool even_only, bool parallel) {
  require_speed(c);
  const int modes = phi.grid().nyquist() - 1;
  const int dim = even_only ? modes : 2 * modes;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int col = 0; col < dim; ++col) {
    const int j = even_only ? col + 1 : col / 2 + 1;
    const bool sine = !even_only && (col % 2 == 1);
    const auto out = jacobian_apply(p, c, phi, basis_function(phi.grid(), j, sine));
    fill_column(m, col, out, even_only);
  }
  return m;
}

}  // namespace

Eigen::MatrixXd jacobian_matrix(const ModelParams& p, double c, const WaveProfile& phi, bool even_only) {
  return jacobian_matrix_impl(p, c, phi, even_only, true);
}

Eigen::MatrixXd jacobian_matrix_serial(const ModelParams& p, double c, const WaveProfile& phi,
                                       bool even_only) {
  return jacobian_matrix_impl(p, c, phi, even_only, false);
}

Eigen::MatrixXd cosine_jacobian(const ModelParams& p, double c, const WaveProfile& phi) {
  require_speed(c);
  const int modes = phi.grid().nyquist() - 1;
  const double beta = p.beta();
  const auto b = dealiased_spectrum(phi, std::max(p.degree() - 1, 1), 2 * modes,
                                    [&p](double u) { return nonlin(p, u, 1); });
  Eigen::MatrixXd m(modes, modes);
#pragma omp parallel for schedule(static)
  for (int j = 1; j <= modes; ++j) {
    const double jd = j;
    const double smooth = 1.0 / (c + beta * jd * jd);
    for (int k = 1; k <= modes; ++k) {
      const double hankel = b[static_cast<std::size_t>(j + k)].real();
      const double toeplitz = b[static_cast<std::size_t>(std::abs(j - k))].real();
      m(j - 1, k - 1) = smooth * (toeplitz + hankel);
    }
    m(j - 1, j - 1) += -1.0 + smooth / (jd * jd);
  }
  return m;
}

double transversality_value(const ModelParams& p, int k) {
  const auto ck = bifurcation_speed(p, k);
  if (!ck) throw std::domain_error("no positive bifurcation speed for this wavenumber");
  const double kd = k;
  const double l = 1.0 / (*ck + p.beta() * kd * kd);
  return -l * l / (kd * kd);
}

double critical_speed(const ModelParams& p, int k, int n) {
  if (!bifurcation_speed(p, k)) throw std::domain_error("no positive critical speed for this wavenumber");
  const TorusGrid grid(n);
  if (k >= grid.nyquist()) throw std::invalid_argument("wavenumber not resolved on the grid");
  const auto zero = WaveProfile::zero(grid);
  const auto diagonal = [&](double c) {
    return jacobian_matrix_serial(p, c, zero, true)(k - 1, k - 1);
  };
  const double kd = k;
  double lo = 1e-14;
  double hi = 2.0 / (kd * kd);
  std::uintmax_t iters = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(
      diagonal, lo, hi, boost::math::tools::eps_tolerance<double>(52), iters);
  return 0.5 * (a + b);
}

}  // namespace ostro
