#include "ostro/solver.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ostro {

BranchFamily BranchFamily::fixed(const ModelParams& p) {
  return {[p](double) { return p; }, {}};
}

BranchFamily BranchFamily::gardner_double_root(double beta, double sigma) {
  if (sigma == 0.0) throw std::invalid_argument("double-root family needs sigma != 0");
  return {[=](double c) { return ModelParams::gardner(beta, sigma, -sigma * sigma / (4.0 * c)); },
          [=](double c) {
            return std::vector<double>{0.0, 0.0, 0.0, sigma * sigma / (12.0 * c * c)};
          }};
}

Normalization Normalization::mode_amplitude(int modes, int k0, double eps) {
  if (k0 < 1 || k0 > modes) throw std::invalid_argument("normalization mode not resolved");
  Normalization out;
  out.weights.assign(static_cast<std::size_t>(modes), 0.0);
  out.weights[static_cast<std::size_t>(k0 - 1)] = 1.0;
  out.target = eps;
  return out;
}

Normalization Normalization::crest_gap(int modes, double level_per_c, double gap) {
  Normalization out;
  out.weights.assign(static_cast<std::size_t>(modes), 1.0);
  out.c_weight = -level_per_c;
  out.target = -gap;
  return out;
}

Normalization Normalization::resized(int modes) const {
  Normalization out = *this;
  const bool uniform = std::all_of(weights.begin(), weights.end(), [&](double w) { return w == weights.front(); });
  out.weights.resize(static_cast<std::size_t>(modes), uniform && !weights.empty() ? weights.front() : 0.0);
  return out;
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::max_steps: return "max_steps";
    case Termination::newton_failure: return "newton_failure";
    case Termination::slack_exhausted: return "slack_exhausted";
    case Termination::amplitude_target: return "amplitude_target";
  }
  return "unknown";
}

InitialGuess initial_guess(const ModelParams& p, int k0, double eps, int n) {
  const auto ck = bifurcation_speed(p, k0);
  if (!ck) {
    throw std::domain_error("no positive bifurcation speed 1/k^2 - beta k^2 for k0 = " + std::to_string(k0) +
                            " (k0 = 1 requires beta in [0,1))");
  }
  const TorusGrid grid(n);
  if (k0 >= grid.nyquist()) throw std::invalid_argument("k0 not resolved on the grid");
  std::vector<double> a(static_cast<std::size_t>(k0), 0.0);
  a.back() = eps;
  return {*ck, WaveProfile::from_cosine_series(grid, a)};
}

namespace {

WaveProfile nonlinear_term(const ModelParams& p, const WaveProfile& phi) {
  return dealiased_map(phi, p.degree(), [&p](double u) { return nonlin(p, u, 0); });
}

// ∂G/∂c at fixed φ, including the speed dependence of the nonlinearity.
WaveProfile speed_derivative(const BranchFamily& family, double c, const WaveProfile& phi) {
  const auto p = family.at(c);
  const double beta = p.beta();
  const auto w = d2_inverse(phi) + nonlinear_term(p, phi);
  auto out = apply_multiplier(w, [=](int k) {
    const double l = 1.0 / (c + beta * k * k);
    return -l * l;
  });
  if (family.dpoly_dc) {
    const auto dp = family.dpoly_dc(c);
    const int deg = std::max(2, static_cast<int>(dp.size()) - 1);
    const auto dn = dealiased_map(phi, deg, [&dp](double u) {
      double s = 0.0;
      for (auto it = dp.rbegin(); it != dp.rend(); ++it) s = s * u + *it;
      return s;
    });
    out = out + smoothing_op(dn, beta, c);
  }
  return project_zero_mean(out);
}

void require_even_zero_mean(const WaveProfile& phi) {
  const double scale = std::max(1.0, phi.sup_norm());
  if (std::abs(phi.mean()) > kMeanTolerance * scale)
    throw std::invalid_argument("initial profile must have zero mean");
  for (int k = 1; k < phi.grid().nyquist(); ++k)
    if (std::abs(phi.sin_coeff(k)) > 1e-10 * scale)
      throw std::invalid_argument("initial profile must be even");
}

BranchPoint make_point(const BranchFamily& family, double c, const WaveProfile& phi, double gnorm,
                       int iters, double tol, int k0) {
  const auto p = family.at(c);
  BranchPoint pt;
  pt.c = c;
  pt.eps = phi.cos_coeff(k0);
  pt.profile = phi;
  pt.residual_norm = gnorm;
  pt.residual_doubled = residual(p, c, phi.resampled(2 * phi.size())).sup_norm();
  pt.newton_iters = iters;
  pt.tol = tol;
  const auto ck = bifurcation_speed(p, k0);
  pt.regime = (ck && std::abs(c - *ck) < 10.0 * pt.eps * pt.eps) ? "asymptotic-regime" : "continued";
  return pt;
}

double singular_speed_gap(const ModelParams& p, double c, int modes, int k0) {
  double gap = std::numeric_limits<double>::infinity();
  for (int j = 1; j <= modes; ++j) {
    if (j == k0) continue;
    const double jd = j;
    gap = std::min(gap, std::abs(-1.0 + 1.0 / (c * jd * jd + p.beta() * jd * jd * jd * jd)));
  }
  return gap;
}

}  // namespace

BranchPoint newton_solve(const BranchFamily& family, double c0, const WaveProfile& profile0,
                         const Normalization& norm, double tol, int max_iters, int k0) {
  require_even_zero_mean(profile0);
  const TorusGrid grid = profile0.grid();
  const int modes = grid.nyquist() - 1;
  if (static_cast<int>(norm.weights.size()) != modes)
    throw std::invalid_argument("normalization size does not match the grid");

  Eigen::VectorXd a(modes);
  const auto a0 = profile0.cosine_series();
  for (int k = 0; k < modes; ++k) a(k) = a0[static_cast<std::size_t>(k)];
  const Eigen::Map<const Eigen::VectorXd> w(norm.weights.data(), modes);
  double c = c0;
  double first_norm = -1.0;

  for (int it = 0; it <= max_iters; ++it) {
    const auto phi = WaveProfile::from_cosine_series(grid, std::span<const double>(a.data(), modes));
    const auto p = family.at(c);
    const auto g = residual(p, c, phi);
    const double gnorm = g.sup_norm();
    const double con = w.dot(a) + norm.c_weight * c - norm.target;
    if (!std::isfinite(gnorm) || !std::isfinite(con))
      throw SolverError(SolverError::Kind::diverged, "newton iterate is not finite");
    if (first_norm < 0.0) first_norm = gnorm;
    if (gnorm > 1e6 * (1.0 + first_norm))
      throw SolverError(SolverError::Kind::diverged, "newton iteration diverged");
    if (it > 0 && gnorm <= tol && std::abs(con) <= 1e-12 * (1.0 + std::abs(norm.target)))
      return make_point(family, c, phi, gnorm, it, tol, k0);
    if (it == max_iters) break;

    Eigen::MatrixXd jac(modes + 1, modes + 1);
    jac.topLeftCorner(modes, modes) = cosine_jacobian(p, c, phi);
    const auto dc = speed_derivative(family, c, phi);
    Eigen::VectorXd rhs(modes + 1);
    for (int j = 1; j <= modes; ++j) {
      jac(j - 1, modes) = dc.cos_coeff(j);
      rhs(j - 1) = -g.cos_coeff(j);
    }
    jac.row(modes).head(modes) = w.transpose();
    jac(modes, modes) = norm.c_weight;
    rhs(modes) = -con;

    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(jac);
    if (!(lu.rcond() > 1e-14))
      throw SolverError(SolverError::Kind::singular_jacobian, "bordered jacobian is singular");
    const Eigen::VectorXd d = lu.solve(rhs);
    a += d.head(modes);
    c += d(modes);
    if (!(c > 0.0)) throw SolverError(SolverError::Kind::diverged, "wave speed left c > 0");
  }
  throw SolverError(SolverError::Kind::max_iterations, "newton iteration limit reached");
}

BranchPoint newton_solve(const ModelParams& p, double c0, const WaveProfile& profile0, double eps,
                         double tol, int max_iters, int k0) {
  if (eps == 0.0) throw std::invalid_argument("amplitude constraint requires eps != 0");
  const int modes = profile0.grid().nyquist() - 1;
  return newton_solve(BranchFamily::fixed(p), c0, profile0, Normalization::mode_amplitude(modes, k0, eps),
                      tol, max_iters, k0);
}

BranchPoint newton_solve_full(const ModelParams& p, double c0, const WaveProfile& profile0, double eps,
                              double tol, int max_iters, int k0) {
  if (eps == 0.0) throw std::invalid_argument("amplitude constraint requires eps != 0");
  const TorusGrid grid = profile0.grid();
  const int modes = grid.nyquist() - 1;
  if (k0 < 1 || k0 > modes) throw std::invalid_argument("k0 not resolved on the grid");
  const int dim = 2 * modes;
  const auto family = BranchFamily::fixed(p);

  // Unknowns: interleaved (a_k, b_k) for cos/sin, then c.
  Eigen::VectorXd x(dim + 1);
  for (int k = 1; k <= modes; ++k) {
    x(2 * (k - 1)) = profile0.cos_coeff(k);
    x(2 * (k - 1) + 1) = profile0.sin_coeff(k);
  }
  x(dim) = c0;
  const auto profile_of = [&](const Eigen::VectorXd& v) {
    std::vector<cplx> half(static_cast<std::size_t>(grid.nyquist() + 1));
    for (int k = 1; k <= modes; ++k) half[static_cast<std::size_t>(k)] = 0.5 * cplx(v(2 * (k - 1)), -v(2 * (k - 1) + 1));
    return WaveProfile::from_coeffs(grid, std::move(half));
  };

  for (int it = 0; it <= max_iters; ++it) {
    const double c = x(dim);
    const auto phi = profile_of(x);
    const auto g = residual(p, c, phi);
    const double gnorm = g.sup_norm();
    const double con_a = x(2 * (k0 - 1)) - eps;
    const double con_b = x(2 * (k0 - 1) + 1);
    if (!std::isfinite(gnorm)) throw SolverError(SolverError::Kind::diverged, "newton iterate is not finite");
    if (it > 0 && gnorm <= tol && std::abs(con_a) <= 1e-12 && std::abs(con_b) <= 1e-12)
      return make_point(family, c, phi, gnorm, it, tol, k0);
    if (it == max_iters) break;

    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(dim + 2, dim + 1);
    jac.topLeftCorner(dim, dim) = jacobian_matrix(p, c, phi, false);
    const auto dc = speed_derivative(family, c, phi);
    Eigen::VectorXd rhs(dim + 2);
    for (int k = 1; k <= modes; ++k) {
      jac(2 * (k - 1), dim) = dc.cos_coeff(k);
      jac(2 * (k - 1) + 1, dim) = dc.sin_coeff(k);
      rhs(2 * (k - 1)) = -g.cos_coeff(k);
      rhs(2 * (k - 1) + 1) = -g.sin_coeff(k);
    }
    jac(dim, 2 * (k0 - 1)) = 1.0;
    jac(dim + 1, 2 * (k0 - 1) + 1) = 1.0;
    rhs(dim) = -con_a;
    rhs(dim + 1) = -con_b;
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(jac);
    if (qr.rank() < dim + 1) throw SolverError(SolverError::Kind::singular_jacobian, "full-basis jacobian is rank deficient");
    x += qr.solve(rhs);
    if (!(x(dim) > 0.0)) throw SolverError(SolverError::Kind::diverged, "wave speed left c > 0");
  }
  throw SolverError(SolverError::Kind::max_iterations, "newton iteration limit reached");
}

namespace {

double tail_ratio(const WaveProfile& phi) {
  const auto a = phi.cosine_series();
  double top = 0.0;
  for (double v : a) top = std::max(top, std::abs(v));
  if (top == 0.0) return 0.0;
  const std::size_t m = a.size();
  double tail = 0.0;
  for (std::size_t k = m - std::max<std::size_t>(1, m / 16); k < m; ++k) tail = std::max(tail, std::abs(a[k]));
  return tail / top;
}

WaveProfile on_grid(const WaveProfile& phi, int n) { return phi.size() == n ? phi : phi.resampled(n); }

// Solves, then refines the grid while the spectral tail is not resolved.
std::optional<BranchPoint> solve_refined(const BranchFamily& family, double c0, WaveProfile guess,
                                         const Normalization& norm, double tol, int k0,
                                         const SolverSettings& s, int& n) {
  guess = on_grid(guess, n);
  std::optional<BranchPoint> pt;
  try {
    pt = newton_solve(family, c0, guess, norm.resized(n / 2 - 1), tol, s.max_iters, k0);
  } catch (const SolverError&) {
    return std::nullopt;
  }
  while (tail_ratio(pt->profile) > s.tail_threshold && n < s.n_max) {
    n *= 2;
    try {
      pt = newton_solve(family, pt->c, pt->profile.resampled(n), norm.resized(n / 2 - 1), tol, s.max_iters, k0);
    } catch (const SolverError&) {
      return std::nullopt;
    }
  }
  return pt;
}

bool admissible(const BranchFamily& family, const BranchPoint& pt) {
  const auto p = family.at(pt.c);
  if (p.beta() > 0.0) return true;
  return slack(p, pt.c, pt.profile) > 0.0;
}

}  // namespace

Branch continue_branch(const BranchFamily& family, int k0, double eps_start, double eps_step,
                       const SolverSettings& s) {
  if (!(eps_start > 0.0) || !(eps_step > 0.0)) throw std::invalid_argument("eps_start and eps_step must be positive");
  const auto p0 = family.at(1.0);
  const auto guess = initial_guess(p0, k0, eps_start, s.n);
  double c_start = guess.c;
  if (singular_speed_gap(p0, c_start, s.n / 2 - 1, k0) < 1e-12) c_start += 1e-8;

  Branch branch;
  branch.k0 = k0;
  branch.family = family;
  branch.params = family.at(c_start);
  int n = s.n;
  double step = eps_step;
  double eps_target = std::min(eps_start, s.eps_max);
  double tol = s.tol;
  int streak = 0;
  const bool singular_family = p0.beta() == 0.0;

  while (true) {
    if (static_cast<int>(branch.points.size()) >= s.max_steps) {
      branch.termination = Termination::max_steps;
      break;
    }
    auto& pts = branch.points;
    double c_pred = c_start;
    WaveProfile prof_pred = guess.profile;
    if (pts.size() == 1) {
      c_pred = pts.back().c;
      std::vector<cplx> bump(static_cast<std::size_t>(pts.back().profile.grid().nyquist() + 1));
      bump[static_cast<std::size_t>(k0)] = 0.5 * (eps_target - pts.back().eps);
      prof_pred = pts.back().profile + WaveProfile::from_coeffs(pts.back().profile.grid(), std::move(bump));
    } else if (pts.size() >= 2) {
      const auto& p1 = pts[pts.size() - 2];
      const auto& p2 = pts.back();
      const double t = (eps_target - p2.eps) / (p2.eps - p1.eps);
      c_pred = p2.c + t * (p2.c - p1.c);
      const int m = std::max(p1.profile.size(), p2.profile.size());
      prof_pred = on_grid(p2.profile, m) + (on_grid(p2.profile, m) - on_grid(p1.profile, m)) * t;
    }

    const auto norm = Normalization::mode_amplitude(n / 2 - 1, k0, eps_target);
    int n_try = n;
    auto pt = solve_refined(family, c_pred, prof_pred, norm, tol, k0, s, n_try);
    if (pt && singular_family && !admissible(family, *pt)) pt.reset();

    if (!pt) {
      if (pts.empty()) {
        throw SolverError(SolverError::Kind::no_convergence,
                          "newton failed at the first branch point (eps = " + std::to_string(eps_target) + ")");
      }
      step *= 0.5;
      streak = 0;
      if (step < s.min_step) {
        branch.termination = Termination::newton_failure;
        break;
      }
      eps_target = pts.back().eps + step;
      continue;
    }

    n = n_try;
    pts.push_back(*pt);
    const auto p = family.at(pt->c);
    const double sl = slack(p, pt->c, pt->profile);
    if (sl < s.relax_below_slack) tol = std::max(tol, s.relaxed_tol);
    if (singular_family && sl < s.slack_floor) {
      branch.termination = Termination::slack_exhausted;
      break;
    }
    if (pt->eps >= s.eps_max * (1.0 - 1e-12)) {
      branch.termination = Termination::amplitude_target;
      break;
    }
    if (++streak >= 2 && step < eps_step) {
      step = std::min(eps_step, 2.0 * step);
      streak = 0;
    }
    eps_target = std::min(pt->eps + step, s.eps_max);
  }
  return branch;
}

Branch continue_branch(const ModelParams& p, int k0, double eps_start, double eps_step,
                       const SolverSettings& settings) {
  return continue_branch(BranchFamily::fixed(p), k0, eps_start, eps_step, settings);
}

Branch trace_double_root_branch(double sigma, const std::vector<double>& gaps, const SolverSettings& settings) {
  if (!(sigma > 0.0)) throw std::invalid_argument("double-root branch needs sigma > 0");
  const auto family = BranchFamily::gardner_double_root(0.0, sigma);
  SolverSettings s = settings;
  s.slack_floor = settings.relax_below_slack;
  Branch branch = continue_branch(family, 1, 0.01, 0.05, s);
  if (branch.termination != Termination::slack_exhausted) return branch;

  int n = branch.points.back().profile.size();
  for (double gap : gaps) {
    const auto& last = branch.points.back();
    const auto norm = Normalization::crest_gap(n / 2 - 1, 2.0 / sigma, gap);
    auto pt = solve_refined(family, last.c, last.profile, norm, s.relaxed_tol, 1, s, n);
    if (pt && !admissible(family, *pt)) pt.reset();
    if (!pt || pt->eps <= last.eps) {
      branch.termination = Termination::newton_failure;
      return branch;
    }
    branch.points.push_back(*pt);
  }
  branch.termination = Termination::slack_exhausted;
  return branch;
}

void attach_diagnostics(Branch& branch) {
  auto& pts = branch.points;
  const int count = static_cast<int>(pts.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < count; ++i) {
    auto& pt = pts[static_cast<std::size_t>(i)];
    pt.diagnostics = diagnose(branch.family.at(pt.c), pt.c, pt.profile);
  }
}

}  // namespace ostro
