#include "ostro/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ostro {

using std::numbers::pi;

TorusGrid::TorusGrid(int n) : n_(n) {
  if (n < 8 || n % 2 != 0)
    throw std::invalid_argument("grid size must be even and >= 8, got " + std::to_string(n));
}

double TorusGrid::spacing() const noexcept { return 2.0 * pi / n_; }

double TorusGrid::node(int j) const noexcept { return -pi + 2.0 * pi * j / n_; }

std::vector<double> TorusGrid::nodes() const {
  std::vector<double> x(static_cast<std::size_t>(n_));
  for (int j = 0; j < n_; ++j) x[static_cast<std::size_t>(j)] = node(j);
  return x;
}

TorusGrid make_grid(int n) { return TorusGrid(n); }

double wrap_to_pi(double x) noexcept {
  if (x >= -pi && x <= pi) return x;
  double r = std::remainder(x, 2.0 * pi);
  return r;
}

// --- WaveProfile -------------------------------------------------------------

WaveProfile::WaveProfile(TorusGrid grid, std::vector<double> samples, std::vector<cplx> coeffs)
    : grid_(grid), samples_(std::move(samples)), coeffs_(std::move(coeffs)) {}

WaveProfile WaveProfile::from_samples(const TorusGrid& grid, std::vector<double> samples) {
  if (static_cast<int>(samples.size()) != grid.size())
    throw std::invalid_argument("sample count does not match grid size");
  auto coeffs = fft::forward(samples);
  coeffs.front().imag(0.0);
  coeffs.back().imag(0.0);
  return WaveProfile(grid, std::move(samples), std::move(coeffs));
}

WaveProfile WaveProfile::from_coeffs(const TorusGrid& grid, std::vector<cplx> half) {
  if (static_cast<int>(half.size()) != grid.nyquist() + 1)
    throw std::invalid_argument("coefficient count must be n/2 + 1");
  half.front().imag(0.0);
  half.back().imag(0.0);
  auto samples = fft::inverse(half, grid.size());
  return WaveProfile(grid, std::move(samples), std::move(half));
}

WaveProfile WaveProfile::from_function(const TorusGrid& grid,
                                       const std::function<double(double)>& f) {
  std::vector<double> s(static_cast<std::size_t>(grid.size()));
  for (int j = 0; j < grid.size(); ++j) s[static_cast<std::size_t>(j)] = f(grid.node(j));
  return from_samples(grid, std::move(s));
}

WaveProfile WaveProfile::zero(const TorusGrid& grid) {
  return WaveProfile(grid, std::vector<double>(static_cast<std::size_t>(grid.size()), 0.0),
                     std::vector<cplx>(static_cast<std::size_t>(grid.nyquist() + 1)));
}

WaveProfile WaveProfile::from_cosine_series(const TorusGrid& grid, std::span<const double> a) {
  if (static_cast<int>(a.size()) >= grid.nyquist())
    throw std::invalid_argument("cosine series exceeds the resolvable band");
  std::vector<cplx> half(static_cast<std::size_t>(grid.nyquist() + 1));
  for (std::size_t k = 1; k <= a.size(); ++k) half[k] = 0.5 * a[k - 1];
  return from_coeffs(grid, std::move(half));
}

cplx WaveProfile::coeff(int k) const {
  const int N = grid_.nyquist();
  if (k > N || k < -N) throw std::out_of_range("wavenumber outside the represented band");
  if (k >= 0) return coeffs_[static_cast<std::size_t>(k)];
  return std::conj(coeffs_[static_cast<std::size_t>(-k)]);
}

double WaveProfile::cos_coeff(int k) const {
  if (k == grid_.nyquist()) return coeffs_.back().real();
  return 2.0 * coeff(k).real();
}

double WaveProfile::sin_coeff(int k) const {
  if (k == grid_.nyquist()) return 0.0;
  return -2.0 * coeff(k).imag();
}

std::vector<double> WaveProfile::cosine_series() const {
  std::vector<double> a(static_cast<std::size_t>(grid_.nyquist() - 1));
  for (int k = 1; k < grid_.nyquist(); ++k) a[static_cast<std::size_t>(k - 1)] = cos_coeff(k);
  return a;
}

double WaveProfile::sup_norm() const noexcept {
  double m = 0.0;
  for (double v : samples_) m = std::max(m, std::abs(v));
  return m;
}

double WaveProfile::max() const noexcept { return *std::max_element(samples_.begin(), samples_.end()); }

double WaveProfile::min() const noexcept { return *std::min_element(samples_.begin(), samples_.end()); }

double WaveProfile::evaluate(double x) const {
  const int N = grid_.nyquist();
  double s = coeffs_[0].real();
  for (int k = 1; k < N; ++k) {
    const cplx e(std::cos(k * x), std::sin(k * x));
    s += 2.0 * (coeffs_[static_cast<std::size_t>(k)] * e).real();
  }
  s += coeffs_.back().real() * std::cos(N * x);
  return s;
}

WaveProfile WaveProfile::resampled(int m) const {
  const TorusGrid target(m);
  const int n = grid_.size();
  if (m == n) return *this;
  std::vector<cplx> half(static_cast<std::size_t>(target.nyquist() + 1));
  if (m > n) {
    const int N = grid_.nyquist();
    for (int k = 0; k < N; ++k) half[static_cast<std::size_t>(k)] = coeffs_[static_cast<std::size_t>(k)];
    half[static_cast<std::size_t>(N)] = 0.5 * coeffs_.back().real();
  } else {
    const int M = target.nyquist();
    for (int k = 0; k < M; ++k) half[static_cast<std::size_t>(k)] = coeffs_[static_cast<std::size_t>(k)];
    half[static_cast<std::size_t>(M)] = 2.0 * coeffs_[static_cast<std::size_t>(M)].real();
  }
  return from_coeffs(target, std::move(half));
}

WaveProfile WaveProfile::shifted(double s) const {
  std::vector<cplx> half(coeffs_);
  const int N = grid_.nyquist();
  for (int k = 1; k < N; ++k) half[static_cast<std::size_t>(k)] *= std::polar(1.0, -k * s);
  // A real Nyquist cosine cannot be shifted within the band; keep its even part.
  half[static_cast<std::size_t>(N)] *= std::cos(N * s);
  return from_coeffs(grid_, std::move(half));
}

WaveProfile WaveProfile::reflected(double lambda) const {
  // g(x) = f(2λ - x)  ⇒  ĝ(k) = conj(f̂(k)) e^{-2ikλ} for real f.
  std::vector<cplx> half(coeffs_.size());
  const int N = grid_.nyquist();
  for (int k = 0; k < N; ++k)
    half[static_cast<std::size_t>(k)] =
        std::conj(coeffs_[static_cast<std::size_t>(k)]) * std::polar(1.0, -2.0 * k * lambda);
  half[static_cast<std::size_t>(N)] = coeffs_.back() * std::cos(2.0 * N * lambda);
  return from_coeffs(grid_, std::move(half));
}

WaveProfile WaveProfile::operator+(const WaveProfile& o) const {
  if (!(grid_ == o.grid_)) throw std::invalid_argument("profiles live on different grids");
  std::vector<double> s(samples_);
  for (std::size_t j = 0; j < s.size(); ++j) s[j] += o.samples_[j];
  std::vector<cplx> c(coeffs_);
  for (std::size_t k = 0; k < c.size(); ++k) c[k] += o.coeffs_[k];
  return WaveProfile(grid_, std::move(s), std::move(c));
}

WaveProfile WaveProfile::operator-(const WaveProfile& o) const { return *this + o * -1.0; }

WaveProfile WaveProfile::operator*(double a) const {
  std::vector<double> s(samples_);
  for (double& v : s) v *= a;
  std::vector<cplx> c(coeffs_);
  for (cplx& v : c) v *= a;
  return WaveProfile(grid_, std::move(s), std::move(c));
}

double max_abs_diff(const WaveProfile& a, const WaveProfile& b) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument("profiles live on different grids");
  double m = 0.0;
  for (int j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a.sample(j) - b.sample(j)));
  return m;
}

// --- multipliers -------------------------------------------------------------

WaveProfile apply_multiplier(const WaveProfile& f, const Symbol& m) {
  const int N = f.grid().nyquist();
  const double mean_tol = kMeanTolerance * std::max(1.0, f.sup_norm());
  std::vector<cplx> half(f.coeffs().begin(), f.coeffs().end());
  for (int k = 0; k <= N; ++k) {
    const double mk = m(k);
    cplx& c = half[static_cast<std::size_t>(k)];
    if (std::isfinite(mk)) {
      c *= mk;
      continue;
    }
    if (k == 0 && std::abs(c) <= mean_tol) {
      c = 0.0;
      continue;
    }
    if (c == cplx(0.0)) continue;
    throw std::domain_error("multiplier symbol is not finite at k = " + std::to_string(k) +
                            " where the input coefficient is nonzero");
  }
  return WaveProfile::from_coeffs(f.grid(), std::move(half));
}

WaveProfile d2_inverse(const WaveProfile& f) {
  return apply_multiplier(f, [](int k) {
    return k == 0 ? std::numeric_limits<double>::infinity() : 1.0 / (double(k) * k);
  });
}

WaveProfile smoothing_op(const WaveProfile& f, double beta, double c) {
  if (!(c > 0.0)) throw std::domain_error("smoothing operator requires c > 0");
  if (!(beta >= 0.0)) throw std::domain_error("smoothing operator requires beta >= 0");
  return apply_multiplier(f, [=](int k) { return 1.0 / (c + beta * double(k) * k); });
}

WaveProfile derivative(const WaveProfile& f, int order) {
  if (order < 1) throw std::invalid_argument("derivative order must be positive");
  const int N = f.grid().nyquist();
  std::vector<cplx> half(f.coeffs().begin(), f.coeffs().end());
  for (int k = 0; k <= N; ++k) half[static_cast<std::size_t>(k)] *= std::pow(cplx(0.0, k), order);
  if (order % 2 == 1) half[static_cast<std::size_t>(N)] = 0.0;
  return WaveProfile::from_coeffs(f.grid(), std::move(half));
}

WaveProfile project_zero_mean(const WaveProfile& f) {
  std::vector<cplx> half(f.coeffs().begin(), f.coeffs().end());
  half[0] = 0.0;
  return WaveProfile::from_coeffs(f.grid(), std::move(half));
}

// --- dealiasing --------------------------------------------------------------

int dealias_grid_size(int n, int degree) {
  const int factor = std::max(2, (degree + 2) / 2);
  return factor * n;
}

WaveProfile dealiased_map(const WaveProfile& f, int degree,
                          const std::function<double(double)>& g) {
  const int n = f.size();
  const int m = dealias_grid_size(n, degree);
  const WaveProfile padded = f.resampled(m);
  std::vector<double> vals(padded.samples().begin(), padded.samples().end());
  for (double& v : vals) v = g(v);
  const auto spec = fft::forward(vals);
  std::vector<cplx> half(static_cast<std::size_t>(n / 2 + 1));
  std::copy_n(spec.begin(), n / 2, half.begin());
  return WaveProfile::from_coeffs(f.grid(), std::move(half));
}

WaveProfile dealiased_map(const WaveProfile& f, const WaveProfile& h, int degree,
                          const std::function<double(double, double)>& g) {
  if (!(f.grid() == h.grid())) throw std::invalid_argument("profiles live on different grids");
  const int n = f.size();
  const int m = dealias_grid_size(n, degree);
  const WaveProfile pf = f.resampled(m);
  const WaveProfile ph = h.resampled(m);
  std::vector<double> vals(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) vals[static_cast<std::size_t>(j)] = g(pf.sample(j), ph.sample(j));
  const auto spec = fft::forward(vals);
  std::vector<cplx> half(static_cast<std::size_t>(n / 2 + 1));
  std::copy_n(spec.begin(), n / 2, half.begin());
  return WaveProfile::from_coeffs(f.grid(), std::move(half));
}

std::vector<cplx> dealiased_spectrum(const WaveProfile& f, int degree, int kmax,
                                     const std::function<double(double)>& g) {
  const int n = f.size();
  // Products of `degree` factors reach |k| <= degree*n/2; modes up to kmax stay clean
  // when m - degree*n/2 > kmax.
  const long need = static_cast<long>(std::max(degree, 1)) * (n / 2) + kmax + 1;
  const int m = static_cast<int>(n * ((need + n - 1) / n));
  const WaveProfile padded = f.resampled(std::max(m, n));
  std::vector<double> vals(padded.samples().begin(), padded.samples().end());
  for (double& v : vals) v = g(v);
  auto spec = fft::forward(vals);
  spec.resize(static_cast<std::size_t>(kmax + 1));
  return spec;
}

// --- kernels -----------------------------------------------------------------

double kernel_K(double x) noexcept {
  const double ax = std::abs(wrap_to_pi(x));
  return (ax - pi) * (ax - pi) / (4.0 * pi) - pi / 12.0;
}

double kernel_K_series(double x, long m_terms) {
  if (m_terms < 1) throw std::invalid_argument("series needs at least one term");
  double s = 0.0;
  // Summed from the small tail upward to limit cancellation.
  for (long k = m_terms; k >= 1; --k) {
    const double kd = static_cast<double>(k);
    s += std::cos(kd * x) / (kd * kd);
  }
  return s / pi;
}

double kernel_G_series(double x, double beta, double c, long m_terms) {
  if (!(beta > 0.0) || !(c > 0.0)) throw std::domain_error("G kernel requires beta > 0, c > 0");
  if (m_terms < 1) throw std::invalid_argument("series needs at least one term");
  double s = 0.0;
  for (long k = m_terms; k >= 1; --k) {
    const double kd = static_cast<double>(k);
    s += std::cos(kd * x) / (c + beta * kd * kd);
  }
  return 1.0 / (2.0 * pi * c) + s / pi;
}

double kernel_G_cosh(double x, double beta, double c) {
  if (!(beta > 0.0) || !(c > 0.0)) throw std::domain_error("G kernel requires beta > 0, c > 0");
  const double a = std::sqrt(c / beta);
  const double ax = std::abs(wrap_to_pi(x));
  // cosh(a(π-|x|))/sinh(aπ), written with exponentials to survive large a.
  const double num = std::exp(-a * ax) + std::exp(-a * (2.0 * pi - ax));
  const double den = 1.0 - std::exp(-2.0 * a * pi);
  return num / den / (2.0 * std::sqrt(beta * c));
}

double kernel_G_printed(double x, double beta, double c) {
  if (!(beta > 0.0) || !(c > 0.0)) throw std::domain_error("G kernel requires beta > 0, c > 0");
  const double ax = std::abs(wrap_to_pi(x));
  const double r = c / beta;
  return 1.0 / (2.0 * pi * c) +
         beta * pi / (4.0 * pi * c * std::sinh(pi * r)) * std::cosh((pi - ax) * r) -
         beta * beta / (4.0 * pi * c * c);
}

// --- quadrature convolution --------------------------------------------------

namespace {

std::vector<double> kernel_table(const std::function<double(double)>& kernel, const TorusGrid& g) {
  const int n = g.size();
  std::vector<double> t(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) t[static_cast<std::size_t>(m)] = kernel(wrap_to_pi(g.spacing() * m));
  return t;
}

double convolve_at(int i, std::span<const double> table, std::span<const double> f, double h) {
  const int n = static_cast<int>(f.size());
  double s = 0.0;
  for (int j = 0; j < n; ++j) {
    int m = i - j;
    if (m < 0) m += n;
    s += table[static_cast<std::size_t>(m)] * f[static_cast<std::size_t>(j)];
  }
  return h * s;
}

}  // namespace

WaveProfile convolve_quadrature(const std::function<double(double)>& kernel, const WaveProfile& f) {
  const auto table = kernel_table(kernel, f.grid());
  const int n = f.size();
  const double h = f.grid().spacing();
  std::vector<double> out(static_cast<std::size_t>(n));
  const auto samples = f.samples();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = convolve_at(i, table, samples, h);
  return WaveProfile::from_samples(f.grid(), std::move(out));
}

WaveProfile convolve_quadrature_serial(const std::function<double(double)>& kernel,
                                       const WaveProfile& f) {
  const auto table = kernel_table(kernel, f.grid());
  const int n = f.size();
  const double h = f.grid().spacing();
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = convolve_at(i, table, f.samples(), h);
  return WaveProfile::from_samples(f.grid(), std::move(out));
}

std::vector<double> tabulate_series(std::span<const double> xs,
                                    const std::function<double(double)>& series) {
  const long count = static_cast<long>(xs.size());
  std::vector<double> out(xs.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (long i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = series(xs[static_cast<std::size_t>(i)]);
  return out;
}

std::vector<double> tabulate_series_serial(std::span<const double> xs,
                                           const std::function<double(double)>& series) {
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = series(xs[i]);
  return out;
}

}  // namespace ostro
