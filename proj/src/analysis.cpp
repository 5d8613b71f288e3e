#include "ostro/analysis.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace ostro {
namespace {

constexpr double pi = std::numbers::pi;

// Coefficients of F'(u) = -c + n'(u) in ascending powers.
std::vector<double> fprime_coeffs(const ModelParams& p, double c) {
  std::vector<double> q(static_cast<std::size_t>(p.degree()));
  for (int j = 1; j <= p.degree(); ++j) q[static_cast<std::size_t>(j - 1)] = j * p.coefficient(j);
  q[0] -= c;
  return q;
}

std::vector<double> real_roots(std::vector<double> q) {
  while (q.size() > 1 && q.back() == 0.0) q.pop_back();
  const int deg = static_cast<int>(q.size()) - 1;
  std::vector<double> roots;
  if (deg == 1) {
    roots.push_back(-q[0] / q[1]);
  } else if (deg == 2) {
    const double a = q[2], b = q[1], c = q[0];
    const double disc = b * b - 4.0 * a * c;
    const double scale = std::max(b * b, std::abs(4.0 * a * c));
    if (std::abs(disc) <= 1e-12 * scale) {
      roots.push_back(-b / (2.0 * a));
    } else if (disc > 0.0) {
      const double t = -0.5 * (b + std::copysign(std::sqrt(disc), b));
      roots.push_back(t / a);
      roots.push_back(c / t);
    }
  } else if (deg > 2) {
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -q[static_cast<std::size_t>(i)] / q.back();
    const Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    for (const auto& z : es.eigenvalues())
      if (std::abs(z.imag()) <= 1e-8 * (1.0 + std::abs(z.real()))) roots.push_back(z.real());
  }
  return roots;
}

// Σ |a_j| |u|^j-style bound for n^{(order)}, used to decide when a derivative vanishes.
double derivative_scale(const ModelParams& p, double u, int order) {
  double s = 0.0;
  for (int j = order; j <= p.degree(); ++j) {
    double falling = 1.0;
    for (int i = 0; i < order; ++i) falling *= (j - i);
    s += falling * std::abs(p.coefficient(j)) * std::pow(std::abs(u), j - order);
  }
  return s;
}

std::optional<int> order_at(const ModelParams& p, double c, double u) {
  for (int m = 2; m <= p.degree(); ++m) {
    const double v = F_eval(p, c, u, m);
    if (std::abs(v) > 1e-8 * std::max(1.0, derivative_scale(p, u, m))) return m;
  }
  return std::nullopt;
}

}  // namespace

SingularLevels singular_levels(const ModelParams& p, double c) {
  if (!(c > 0.0)) throw std::domain_error("wave speed must be positive");
  SingularLevels out;
  for (double r : real_roots(fprime_coeffs(p, c))) {
    if (r > 0.0 && (!out.phi_plus || r < *out.phi_plus)) out.phi_plus = r;
    if (r < 0.0 && (!out.phi_minus || r > *out.phi_minus)) out.phi_minus = r;
  }
  if (out.phi_plus) out.order_a_plus = order_at(p, c, *out.phi_plus);
  if (out.phi_minus) out.order_a_minus = order_at(p, c, *out.phi_minus);
  return out;
}

double slack(const ModelParams& p, double c, const WaveProfile& phi) {
  double s = std::numeric_limits<double>::infinity();
  for (double u : phi.samples()) s = std::min(s, c - nonlin(p, u, 1));
  return s;
}

HolderPrediction predicted_holder(const ModelParams& p, double c, double phi_bar) {
  const double fp = F_eval(p, c, phi_bar, 1);
  if (std::abs(fp) > 1e-8 * (c + derivative_scale(p, phi_bar, 1)))
    throw std::domain_error("F' does not vanish at the given level");
  const auto a = order_at(p, c, phi_bar);
  if (!a) throw std::logic_error("all derivatives of F vanish at the singular level");
  double factorial = 1.0;
  for (int i = 2; i <= *a; ++i) factorial *= i;
  const double fa = F_eval(p, c, phi_bar, *a);
  const double constant = std::pow(factorial * std::abs(phi_bar) / (2.0 * std::abs(fa)), 1.0 / *a);
  return {*a, 2.0 / *a, constant};
}

HolderFit holder_fit(const WaveProfile& phi, double x_star, int window, int exclude) {
  const auto& g = phi.grid();
  const int n = g.size();
  if (window >= n / 2) throw std::invalid_argument("holder window exceeds half the period");
  const int i_star = static_cast<int>(std::lround((wrap_to_pi(x_star) + pi) / g.spacing())) % n;
  const double h = g.spacing();
  const double peak = phi.sample(i_star);
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int m = 0;
  for (int off = exclude + 1; off <= window; ++off) {
    for (int side : {-1, 1}) {
      const int i = ((i_star + side * off) % n + n) % n;
      const double dy = std::abs(phi.sample(i) - peak);
      if (dy == 0.0) throw std::domain_error("profile is flat inside the holder window");
      const double lx = std::log(off * h);
      const double ly = std::log(dy);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      ++m;
    }
  }
  if (m < 8) throw std::domain_error("holder fit needs at least 8 nodes");
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / m;
  return {slope, std::exp(intercept), m};
}

Asymmetry asymmetry(const WaveProfile& phi) {
  const double norm = phi.sup_norm();
  if (norm == 0.0) throw std::domain_error("asymmetry of the zero profile is undefined");
  const auto defect = [&](double lambda) { return max_abs_diff(phi.reflected(lambda), phi) / norm; };

  // Axes λ and λ + π coincide, so [-π/2, π/2) covers every reflection.
  constexpr int scan = 64;
  const double step = pi / scan;
  int best = 0;
  double best_val = std::numeric_limits<double>::infinity();
  for (int i = 0; i < scan; ++i) {
    const double v = defect(-pi / 2 + i * step);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  const double centre = -pi / 2 + best * step;
  const auto [lam, val] =
      boost::math::tools::brent_find_minima(defect, centre - step, centre + step, 40);
  if (val < best_val) return {lam, val};
  return {centre, best_val};
}

int crest_count(const WaveProfile& phi) {
  const auto d = derivative(phi, 1);
  const double floor = 1e-10 * d.sup_norm();
  std::vector<int> signs;
  for (double v : d.samples())
    if (std::abs(v) > floor) signs.push_back(v > 0.0 ? 1 : -1);
  if (signs.empty()) return 0;
  int count = 0;
  const std::size_t m = signs.size();
  for (std::size_t i = 0; i < m; ++i)
    if (signs[i] > 0 && signs[(i + 1) % m] < 0) ++count;
  return count;
}

double fourier_decay(const WaveProfile& phi, int k_min) {
  if (k_min < 4) throw std::invalid_argument("fourier_decay needs k_min >= 4");
  const int k_max = phi.size() / 3;
  if (k_max - k_min + 1 < 3) throw std::invalid_argument("grid too coarse for a decay fit");
  double top = 0.0;
  for (int k = 1; k <= phi.grid().nyquist(); ++k) top = std::max(top, std::abs(phi.coeff(k)));
  const double floor = 1e-12 * top;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int m = 0;
  for (int k = k_min; k <= k_max; ++k) {
    const double a = std::abs(phi.coeff(k));
    if (!(a > floor) || top == 0.0) continue;
    const double lx = std::log(static_cast<double>(k));
    const double ly = std::log(a);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  if (m < 3) return -std::numeric_limits<double>::infinity();
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

AmplitudeCheck amplitude_check(const ModelParams& p, double c, const WaveProfile& phi) {
  const auto levels = singular_levels(p, c);
  AmplitudeCheck out{true, std::nullopt, std::nullopt, std::nullopt};
  const double hi = phi.max();
  const double lo = phi.min();
  if (levels.phi_plus) {
    out.upper_margin = *levels.phi_plus - hi;
    if (*out.upper_margin < -kAmplitudeTolerance) out.ok = false;
  }
  if (levels.phi_minus) {
    out.lower_margin = lo - *levels.phi_minus;
    if (*out.lower_margin < -kAmplitudeTolerance) out.ok = false;
  }
  const double alpha = p.alpha();
  if (p.degree() <= 3 && alpha > 0.0) {
    const double sigma = p.sigma();
    const double bound = 2.0 * std::sqrt(sigma * sigma / (4.0 * alpha * alpha) + c / alpha);
    out.range_margin = bound - (hi - lo);
    if (*out.range_margin < -kAmplitudeTolerance) out.ok = false;
  }
  return out;
}

DiagnosticsReport diagnose(const ModelParams& p, double c, const WaveProfile& phi) {
  DiagnosticsReport r;
  r.slack = slack(p, c, phi);
  r.regime = r.slack > kNearSingularSlack ? "smooth" : "near-singular";
  const auto levels = singular_levels(p, c);

  int i_min = 0;
  for (int i = 1; i < phi.size(); ++i)
    if (nonlin(p, phi.sample(i), 1) > nonlin(p, phi.sample(i_min), 1)) i_min = i;
  std::optional<double> level = levels.phi_plus ? levels.phi_plus : levels.phi_minus;
  if (r.regime == "near-singular" && levels.phi_plus && levels.phi_minus) {
    const double u = phi.sample(i_min);
    level = std::abs(u - *levels.phi_plus) <= std::abs(u - *levels.phi_minus) ? levels.phi_plus
                                                                                : levels.phi_minus;
  }
  r.predicted_exponent = std::numeric_limits<double>::quiet_NaN();
  r.predicted_constant = std::numeric_limits<double>::quiet_NaN();
  if (level) {
    try {
      const auto pred = predicted_holder(p, c, *level);
      r.predicted_exponent = pred.exponent;
      r.predicted_constant = pred.constant;
    } catch (const std::exception&) {
    }
  }
  if (r.regime == "near-singular") {
    try {
      const auto fit = holder_fit(phi, phi.grid().node(i_min));
      r.holder_exponent = fit.exponent;
      r.holder_constant = fit.constant;
    } catch (const std::exception&) {
    }
  }

  r.asymmetry = phi.sup_norm() > 0.0 ? asymmetry(phi).value : 0.0;
  r.crest_count = crest_count(phi);
  try {
    r.fourier_decay_rate = fourier_decay(phi);
  } catch (const std::invalid_argument&) {
    r.fourier_decay_rate = std::numeric_limits<double>::quiet_NaN();
  }
  r.amplitude_ok = amplitude_check(p, c, phi).ok;
  return r;
}

}  // namespace ostro
