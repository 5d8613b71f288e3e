#include "ostro/commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "ostro/analysis.hpp"
#include "ostro/evolution.hpp"
#include "ostro/exact_waves.hpp"
#include "ostro/model.hpp"
#include "ostro/solver.hpp"

#ifndef OSTRO_GIT_DESCRIBE
#define OSTRO_GIT_DESCRIBE "unknown"
#endif

namespace ostro::cli {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

namespace fs = std::filesystem;
using Header = std::vector<std::pair<std::string, std::string>>;

constexpr double inf = std::numeric_limits<double>::infinity();

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

void write_header(std::ostream& os, const std::string& title, const Header& h) {
  os << "# ostro " << title << '\n';
  for (const auto& [k, v] : h) os << "# " << k << " = " << v << '\n';
}

fs::path prepare_dir(const std::string& dir) {
  fs::path p(dir.empty() ? "." : dir);
  fs::create_directories(p);
  return p;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  return f;
}

std::string git_describe() { return OSTRO_GIT_DESCRIBE; }

ModelParams gardner_checked(double beta, double sigma, double alpha) {
  if (!(beta >= 0.0)) throw ValidationError("beta must be >= 0 (got " + format_double(beta) + ")");
  if (sigma == 0.0 && alpha == 0.0) throw ValidationError("sigma and alpha cannot both vanish");
  return ModelParams::gardner(beta, sigma, alpha);
}

void check_grid(int n, const std::string& name) {
  if (n < 8 || n % 2 != 0) throw ValidationError(name + " must be even and >= 8");
}

// --- branch -------------------------------------------------------------------

struct BranchOptions {
  double beta = 0.0;
  double sigma = 1.0;
  double alpha = 0.0;
  int k0 = 1;
  double eps_start = 0.01;
  double eps_step = 0.02;
  double eps_max = inf;
  int n = 512;
  int n_max = 1024;
  double tol = 1e-10;
  double relaxed_tol = 1e-6;
  double slack_floor = 1e-2;
  int max_steps = 1000;
  int profile_every = 10;
  bool double_root = false;
  std::vector<double> gaps{0.3, 0.2, 0.15, 0.1, 0.07, 0.05};
  double perturb = 0.0;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
};

Header branch_header(const BranchOptions& o) {
  std::string gaps;
  for (double g : o.gaps) gaps += (gaps.empty() ? "" : " ") + format_double(g);
  return {{"beta", format_double(o.beta)},
          {"sigma", format_double(o.sigma)},
          {"alpha", o.double_root ? "-sigma^2/(4c)" : format_double(o.alpha)},
          {"k0", std::to_string(o.k0)},
          {"eps_start", format_double(o.eps_start)},
          {"eps_step", format_double(o.eps_step)},
          {"eps_max", format_double(o.eps_max)},
          {"n", std::to_string(o.n)},
          {"n_max", std::to_string(o.n_max)},
          {"tol", format_double(o.tol)},
          {"relaxed_tol", format_double(o.relaxed_tol)},
          {"slack_floor", format_double(o.slack_floor)},
          {"max_steps", std::to_string(o.max_steps)},
          {"double_root", o.double_root ? "true" : "false"},
          {"gaps", gaps},
          {"perturb", format_double(o.perturb)},
          {"seed", std::to_string(o.seed)},
          {"git_describe", git_describe()}};
}

void validate_branch(const BranchOptions& o) {
  check_grid(o.n, "n");
  if (o.n_max < o.n) throw ValidationError("n-max must be >= n");
  if (o.k0 < 1 || o.k0 >= o.n / 2) throw ValidationError("k0 must lie in [1, n/2)");
  if (!(o.eps_start > 0.0) || !(o.eps_step > 0.0)) throw ValidationError("eps-start and eps-step must be positive");
  if (!(o.eps_max >= o.eps_start)) throw ValidationError("eps-max must be >= eps-start");
  if (!(o.tol > 0.0) || !(o.relaxed_tol > 0.0)) throw ValidationError("tolerances must be positive");
  if (o.profile_every < 1) throw ValidationError("profile-every must be >= 1");
  if (!(o.perturb >= 0.0)) throw ValidationError("perturb must be >= 0");
  const auto p = o.double_root ? ModelParams::gardner(o.beta, o.sigma, -o.sigma * o.sigma / 4.0)
                               : gardner_checked(o.beta, o.sigma, o.alpha);
  if (!bifurcation_speed(p, o.k0)) {
    std::ostringstream msg;
    msg << "beta = " << format_double(o.beta) << " admits no positive bifurcation speed for k0 = " << o.k0;
    if (o.k0 == 1) msg << "; the k0 = 1 branch requires beta in [0,1)";
    else msg << "; k0 = " << o.k0 << " requires beta < 1/k0^4";
    throw ValidationError(msg.str());
  }
  if (o.double_root) {
    if (!(o.sigma > 0.0)) throw ValidationError("double-root branch needs sigma > 0");
    if (o.beta != 0.0) throw ValidationError("double-root branch is defined for beta = 0");
    if (o.k0 != 1) throw ValidationError("double-root branch uses k0 = 1");
    if (o.perturb > 0.0) throw ValidationError("perturb is not available for the double-root branch");
  }
}

std::string csv_row(const BranchPoint& pt) {
  const auto& d = *pt.diagnostics;
  std::ostringstream os;
  os << format_double(pt.eps) << ',' << format_double(pt.c) << ',' << format_double(pt.profile.max()) << ','
     << format_double(pt.profile.min()) << ',' << format_double(d.slack) << ',' << format_double(pt.residual_norm)
     << ',' << d.crest_count << ',' << format_double(d.asymmetry) << ',' << format_double(d.fourier_decay_rate)
     << ',' << (d.holder_exponent ? format_double(*d.holder_exponent) : "");
  return os.str();
}

int cmd_branch(const BranchOptions& o, std::ostream& out, std::ostream& err) {
  validate_branch(o);
  SolverSettings s;
  s.tol = o.tol;
  s.relaxed_tol = o.relaxed_tol;
  s.n = o.n;
  s.n_max = o.n_max;
  s.slack_floor = o.slack_floor;
  s.max_steps = o.max_steps;
  s.eps_max = o.eps_max;

  Branch branch;
  try {
    branch = o.double_root ? trace_double_root_branch(o.sigma, o.gaps, s)
                           : continue_branch(gardner_checked(o.beta, o.sigma, o.alpha), o.k0, o.eps_start,
                                             o.eps_step, s);
  } catch (const SolverError& e) {
    err << "solver failure: " << e.what() << '\n';
    return kSolverFailure;
  }
  attach_diagnostics(branch);

  const auto dir = prepare_dir(o.out_dir);
  const auto header = branch_header(o);
  {
    auto f = open_out(dir / "branch.csv");
    write_header(f, "branch", header);
    f << "eps,c,max_phi,min_phi,slack,residual,crest_count,asymmetry,fourier_decay,holder_exponent_or_blank\n";
    for (const auto& pt : branch.points) f << csv_row(pt) << '\n';
  }
  const auto& pts = branch.points;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i % static_cast<std::size_t>(o.profile_every) != 0 && i + 1 != pts.size()) continue;
    const auto p = branch.family.at(pts[i].c);
    Header h = header;
    h.insert(h.begin(), {{"index", std::to_string(i)},
                         {"c", format_double(pts[i].c)},
                         {"eps", format_double(pts[i].eps)},
                         {"alpha_at_c", format_double(p.alpha())}});
    char name[32];
    std::snprintf(name, sizeof name, "profile_%04zu.txt", i);
    write_profile((dir / name).string(), pts[i].profile, h);
  }

  nlohmann::ordered_json m;
  m["command"] = "branch";
  m["git_describe"] = git_describe();
  m["params"] = {{"beta", o.beta}, {"sigma", o.sigma}, {"alpha", o.double_root ? nlohmann::json("-sigma^2/(4c)") : nlohmann::json(o.alpha)},
                 {"gamma", 1.0}, {"k0", o.k0}, {"double_root", o.double_root}};
  m["grid"] = {{"n", o.n}, {"n_max", o.n_max}, {"final_n", pts.empty() ? o.n : pts.back().profile.size()}};
  m["tolerances"] = {{"tol", o.tol}, {"relaxed_tol", o.relaxed_tol}, {"slack_floor", o.slack_floor},
                     {"tail_threshold", s.tail_threshold}};
  m["continuation"] = {{"eps_start", o.eps_start}, {"eps_step", o.eps_step},
                       {"eps_max", std::isfinite(o.eps_max) ? nlohmann::json(o.eps_max) : nlohmann::json("inf")},
                       {"max_steps", o.max_steps}};
  m["seed"] = o.seed;
  m["termination"] = to_string(branch.termination);
  m["points"] = pts.size();
  if (!pts.empty()) {
    const auto& last = pts.back();
    m["terminal"] = {{"c", last.c}, {"eps", last.eps}, {"slack", last.diagnostics->slack},
                     {"max_phi", last.profile.max()}, {"min_phi", last.profile.min()}};
  }

  if (o.perturb > 0.0 && !pts.empty()) {
    const auto& base = pts[pts.size() / 2];
    std::mt19937_64 rng(o.seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<cplx> bump(static_cast<std::size_t>(base.profile.grid().nyquist() + 1));
    for (int k = 1; k <= 4; ++k)
      if (k != o.k0) bump[static_cast<std::size_t>(k)] = cplx(0.0, -0.5 * o.perturb * std::abs(base.eps) * uni(rng));
    const auto guess = base.profile + WaveProfile::from_coeffs(base.profile.grid(), std::move(bump));
    try {
      const auto sol = newton_solve_full(branch.family.at(base.c), base.c, guess, base.eps, std::max(base.tol, 1e-10));
      const double asym = asymmetry(sol.profile).value;
      m["perturbation"] = {{"eps", base.eps}, {"converged", true}, {"asymmetry", asym}, {"c", sol.c}};
      out << "perturbed full-basis solve: asymmetry " << format_double(asym) << '\n';
    } catch (const SolverError& e) {
      m["perturbation"] = {{"eps", base.eps}, {"converged", false}, {"reason", e.what()}};
      out << "perturbed full-basis solve did not converge: " << e.what() << '\n';
    }
  }
  {
    auto f = open_out(dir / "manifest.json");
    f << m.dump(2) << '\n';
  }

  out << "points: " << pts.size() << '\n' << "termination: " << to_string(branch.termination) << '\n';
  if (!pts.empty()) {
    out << "terminal c: " << format_double(pts.back().c) << '\n'
        << "terminal slack: " << format_double(pts.back().diagnostics->slack) << '\n';
  }
  return kOk;
}

// --- verify-exact -------------------------------------------------------------

struct VerifyOptions {
  std::string family = "reduced";
  double sigma = 1.0;
  double alpha = 1.0;
  int n = 4096;
  bool printed = false;
  double c = std::numeric_limits<double>::quiet_NaN();
  double tol = 1e-4;
};

int cmd_verify_exact(const VerifyOptions& o, std::ostream& out) {
  if (o.n < 1024 || o.n % 2 != 0) throw ValidationError("n must be even and >= 1024");
  if (!(o.tol > 0.0)) throw ValidationError("tol must be positive");
  ExactWave wave = ExactWave::reduced(1.0);
  if (o.family == "reduced") {
    if (o.sigma == 0.0) throw ValidationError("sigma must be nonzero");
    wave = ExactWave::reduced(o.sigma);
  } else {
    if (!(o.alpha > 0.0)) throw ValidationError("alpha must be positive");
    wave = ExactWave::modified(o.alpha);
  }
  std::optional<double> c;
  if (!std::isnan(o.c)) {
    if (!(o.c > 0.0)) throw ValidationError("c must be positive");
    c = o.c;
  }
  const double speed = c.value_or(wave.speed());
  const double corrected = verify_exact(wave, o.n, false, c);
  const double printed = verify_exact(wave, o.n, true, c);
  out << "family: " << wave.name() << '\n'
      << "parameter: " << format_double(wave.parameter) << '\n'
      << "c: " << format_double(speed) << '\n'
      << "n: " << o.n << '\n'
      << "corrected form residual: " << format_double(corrected) << (corrected <= o.tol ? " PASS" : " FAIL") << '\n'
      << "printed form residual: " << format_double(printed) << (printed <= o.tol ? " PASS" : " FAIL") << '\n';
  if (o.printed) {
    if (printed > o.tol) {
      out << "printed form fails the residual check (expected failure)\n";
      return kCheckFailed;
    }
    out << "printed form passes the residual check\n";
    return kOk;
  }
  return corrected <= o.tol ? kOk : kCheckFailed;
}

// --- evolve -------------------------------------------------------------------

struct EvolveOptions {
  std::string profile;
  bool zero = false;
  int n = 256;
  double beta = 0.0;
  double sigma = 1.0;
  double alpha = 0.0;
  double c = std::numeric_limits<double>::quiet_NaN();
  double dt = 1e-3;
  double t_final = 1.0;
  int record_every = 100;
  std::string out_dir = ".";
};

double header_value(const std::map<std::string, std::string>& h, const std::string& key, double fallback) {
  const auto it = h.find(key);
  if (it == h.end()) return fallback;
  try {
    return std::stod(it->second);
  } catch (const std::exception&) {
    return fallback;
  }
}

int cmd_evolve(EvolveOptions o, const CLI::App& sub, std::ostream& out, std::ostream& err) {
  if (o.profile.empty() == !o.zero) throw ValidationError("give exactly one of --profile or --zero");
  WaveProfile u0 = WaveProfile::zero(TorusGrid(8));
  if (o.zero) {
    check_grid(o.n, "n");
    u0 = WaveProfile::zero(TorusGrid(o.n));
  } else {
    auto file = read_profile(o.profile);
    u0 = file.profile;
    const auto& h = file.header;
    if (!sub.count("--beta")) o.beta = header_value(h, "beta", o.beta);
    if (!sub.count("--sigma")) o.sigma = header_value(h, "sigma", o.sigma);
    if (!sub.count("--alpha")) o.alpha = header_value(h, h.count("alpha_at_c") ? "alpha_at_c" : "alpha", o.alpha);
    if (!sub.count("--c")) o.c = header_value(h, "c", o.c);
  }
  if (!(o.dt > 0.0) || !(o.t_final >= 0.0)) throw ValidationError("dt must be positive and t-final non-negative");
  if (o.record_every < 1) throw ValidationError("record-every must be >= 1");
  if (std::abs(u0.mean()) > 1e-8 * std::max(1.0, u0.sup_norm()))
    throw ValidationError("initial profile must have zero mean");
  u0 = project_zero_mean(u0);
  EvolutionConfig cfg{o.dt, o.t_final, gardner_checked(o.beta, o.sigma, o.alpha), o.record_every};
  const double ceiling = cfl_ceiling(cfg.params, u0);
  if (o.dt > ceiling) throw ValidationError("dt exceeds the advective ceiling " + format_double(ceiling));

  const auto result = evolve(u0, cfg);
  const auto dir = prepare_dir(o.out_dir);
  const Header header{{"source", o.zero ? "zero" : o.profile},
                      {"n", std::to_string(u0.size())},
                      {"beta", format_double(o.beta)},
                      {"sigma", format_double(o.sigma)},
                      {"alpha", format_double(o.alpha)},
                      {"c", format_double(o.c)},
                      {"dt", format_double(o.dt)},
                      {"t_final", format_double(o.t_final)},
                      {"record_every", std::to_string(o.record_every)},
                      {"git_describe", git_describe()}};
  {
    auto f = open_out(dir / "snapshots.csv");
    write_header(f, "evolve", header);
    f << "t,x,u\n";
    for (const auto& snap : result.snapshots) {
      const auto& g = snap.u.grid();
      for (int j = 0; j < g.size(); ++j)
        f << format_double(snap.t) << ',' << format_double(g.node(j)) << ',' << format_double(snap.u.sample(j)) << '\n';
    }
  }
  std::optional<double> travel;
  if (!result.breaking && std::isfinite(o.c) && u0.sup_norm() > 0.0) {
    const auto target = u0.shifted(o.c * result.t_reached);
    travel = max_abs_diff(result.snapshots.back().u, target) / u0.sup_norm();
  }
  std::ostringstream summary;
  summary << "t_reached = " << format_double(result.t_reached) << '\n'
          << "breaking = " << (result.breaking ? "true" : "false") << '\n'
          << "initial_gradient = " << format_double(result.initial_gradient) << '\n'
          << "last_gradient = " << format_double(result.last_gradient) << '\n'
          << "traveling_error = " << (travel ? format_double(*travel) : "n/a") << '\n';
  {
    auto f = open_out(dir / "summary.txt");
    write_header(f, "evolve", header);
    f << summary.str();
  }
  out << summary.str();
  if (result.breaking) {
    err << "wave breaking detected at t = " << format_double(result.t_reached) << " (sup|u_x| = "
        << format_double(result.last_gradient) << ")\n";
    return kBlowUp;
  }
  return kOk;
}

// --- kernels ------------------------------------------------------------------

struct KernelOptions {
  double beta = 1.0;
  double c = 1.0;
  int points = 1000;
  long k_terms = 100000;
  long g_terms = 1000000;
  bool paper_form = false;
  std::string out_dir = ".";
};

int cmd_kernels(const KernelOptions& o, std::ostream& out) {
  if (!(o.beta > 0.0) || !(o.c > 0.0)) throw ValidationError("kernel G needs beta > 0 and c > 0");
  if (o.points < 2) throw ValidationError("points must be >= 2");
  if (o.k_terms < 1 || o.g_terms < 1) throw ValidationError("term counts must be >= 1");
  std::vector<double> xs(static_cast<std::size_t>(o.points));
  for (int j = 0; j < o.points; ++j) xs[static_cast<std::size_t>(j)] = -std::numbers::pi + 2.0 * std::numbers::pi * j / o.points;
  const auto k_series = tabulate_series(xs, [&](double x) { return kernel_K_series(x, o.k_terms); });
  const auto g_series = tabulate_series(xs, [&](double x) { return kernel_G_series(x, o.beta, o.c, o.g_terms); });

  const Header header{{"beta", format_double(o.beta)},
                      {"c", format_double(o.c)},
                      {"points", std::to_string(o.points)},
                      {"k_terms", std::to_string(o.k_terms)},
                      {"g_terms", std::to_string(o.g_terms)},
                      {"g_closed_form", o.paper_form ? "printed" : "cosh"},
                      {"git_describe", git_describe()}};
  const auto dir = prepare_dir(o.out_dir);
  auto f = open_out(dir / "kernels.csv");
  write_header(f, "kernels", header);
  f << "x,K_closed,K_series,K_abs_diff,G_series,G_closed,G_abs_diff\n";
  double k_max = 0.0, g_max = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    const double kc = kernel_K(xs[j]);
    const double gc = o.paper_form ? kernel_G_printed(xs[j], o.beta, o.c) : kernel_G_cosh(xs[j], o.beta, o.c);
    const double kd = std::abs(kc - k_series[j]);
    const double gd = std::abs(gc - g_series[j]);
    k_max = std::max(k_max, kd);
    g_max = std::max(g_max, gd);
    f << format_double(xs[j]) << ',' << format_double(kc) << ',' << format_double(k_series[j]) << ','
      << format_double(kd) << ',' << format_double(g_series[j]) << ',' << format_double(gc) << ','
      << format_double(gd) << '\n';
  }
  out << "K: max |closed - series| = " << format_double(k_max) << " (tail bound "
      << format_double(1.0 / (std::numbers::pi * static_cast<double>(o.k_terms))) << ")\n";
  if (o.paper_form) {
    out << "G printed form: max |closed - series| = " << format_double(g_max)
        << (g_max > 1e-5 ? " MISMATCH: the printed form does not sum the series\n" : " (agrees)\n");
  } else {
    out << "G cosh form: max |closed - series| = " << format_double(g_max) << (g_max <= 1e-5 ? " (agrees)\n" : " MISMATCH\n");
  }
  return kOk;
}

// --- diagnose -----------------------------------------------------------------

struct DiagnoseOptions {
  std::string profile;
  double beta = 0.0;
  double sigma = 1.0;
  double alpha = 0.0;
  double c = std::numeric_limits<double>::quiet_NaN();
  double x_star = std::numeric_limits<double>::quiet_NaN();
  int window = 16;
  int exclude = 2;
};

std::string opt_str(const std::optional<double>& v) { return v ? format_double(*v) : "none"; }

int cmd_diagnose(DiagnoseOptions o, const CLI::App& sub, std::ostream& out) {
  auto file = read_profile(o.profile);
  const auto& h = file.header;
  if (!sub.count("--beta")) o.beta = header_value(h, "beta", o.beta);
  if (!sub.count("--sigma")) o.sigma = header_value(h, "sigma", o.sigma);
  if (!sub.count("--alpha")) o.alpha = header_value(h, h.count("alpha_at_c") ? "alpha_at_c" : "alpha", o.alpha);
  if (!sub.count("--c")) o.c = header_value(h, "c", o.c);
  if (!(o.c > 0.0)) throw ValidationError("a positive speed c is required (flag or profile header)");
  const auto p = gardner_checked(o.beta, o.sigma, o.alpha);
  const auto& phi = file.profile;
  const auto r = diagnose(p, o.c, phi);
  const auto levels = singular_levels(p, o.c);
  const auto amp = amplitude_check(p, o.c, phi);
  out << "c = " << format_double(o.c) << '\n'
      << "n = " << phi.size() << '\n'
      << "slack = " << format_double(r.slack) << '\n'
      << "regime = " << r.regime << '\n'
      << "phi_plus = " << opt_str(levels.phi_plus) << '\n'
      << "phi_minus = " << opt_str(levels.phi_minus) << '\n'
      << "predicted_exponent = " << format_double(r.predicted_exponent) << '\n'
      << "predicted_constant = " << format_double(r.predicted_constant) << '\n'
      << "holder_exponent = " << opt_str(r.holder_exponent) << '\n'
      << "holder_constant = " << opt_str(r.holder_constant) << '\n'
      << "asymmetry = " << format_double(r.asymmetry) << '\n'
      << "crest_count = " << r.crest_count << '\n'
      << "fourier_decay = " << format_double(r.fourier_decay_rate) << '\n'
      << "amplitude_ok = " << (amp.ok ? "true" : "false") << '\n';
  if (!std::isnan(o.x_star)) {
    const auto fit = holder_fit(phi, o.x_star, o.window, o.exclude);
    out << "fit_exponent = " << format_double(fit.exponent) << '\n'
        << "fit_constant = " << format_double(fit.constant) << '\n'
        << "fit_points = " << fit.points << '\n';
  }
  return kOk;
}

}  // namespace

ProfileFile read_profile(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot read profile file " + path);
  std::map<std::string, std::string> header;
  std::vector<double> values;
  std::string line;
  while (std::getline(f, line)) {
    const auto t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      const auto eq = t.find('=');
      if (eq != std::string::npos) header[trim(t.substr(1, eq - 1))] = trim(t.substr(eq + 1));
      continue;
    }
    std::istringstream ls(t);
    double x = 0.0, v = 0.0;
    if (!(ls >> x >> v)) throw ValidationError("malformed profile line: " + t);
    values.push_back(v);
  }
  const int n = static_cast<int>(values.size());
  if (n < 8 || n % 2 != 0) throw ValidationError("profile must have an even number (>= 8) of samples");
  return {WaveProfile::from_samples(TorusGrid(n), std::move(values)), std::move(header)};
}

void write_profile(const std::string& path, const WaveProfile& phi,
                   const std::vector<std::pair<std::string, std::string>>& header) {
  auto f = open_out(path);
  write_header(f, "profile", header);
  const auto& g = phi.grid();
  for (int j = 0; j < g.size(); ++j) f << format_double(g.node(j)) << ' ' << format_double(phi.sample(j)) << '\n';
}

// CLI11 only reads config files for the top-level app, so subcommand files
// are applied here.  Options already given on the command line (or through
// the environment) win.
void apply_config(CLI::App& sub, const std::string& path) {
  if (!fs::exists(path)) throw CLI::FileError::Missing(path);
  for (const auto& item : CLI::ConfigINI().from_file(path)) {
    if (item.name == "++" || item.name == "--") continue;
    std::string name = item.name;
    std::replace(name.begin(), name.end(), '_', '-');
    auto* opt = sub.get_option_no_throw("--" + name);
    if (opt == nullptr || name == "config") throw CLI::ConfigError::Extras(item.fullname());
    if (opt->count() > 0) continue;
    for (const auto& v : item.inputs) opt->add_result(v);
    opt->run_callback();
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Periodic traveling waves of Gardner-Ostrovsky equations", "ostro"};
  app.require_subcommand(1);
  std::string config_path;

  BranchOptions bo;
  auto* branch = app.add_subcommand("branch", "continue a wave branch from its bifurcation point");
  branch->add_option("--config", config_path, "flat key = value file; flags override it");
  branch->add_option("--beta", bo.beta, "Boussinesq dispersion beta >= 0");
  branch->add_option("--sigma", bo.sigma, "quadratic coefficient (n = sigma/2 u^2 + alpha/3 u^3)");
  branch->add_option("--alpha", bo.alpha, "cubic coefficient");
  branch->add_option("--k0", bo.k0, "bifurcating wavenumber");
  branch->add_option("--eps-start", bo.eps_start, "first amplitude");
  branch->add_option("--eps-step", bo.eps_step, "amplitude step");
  branch->add_option("--eps-max", bo.eps_max, "stop once this amplitude is reached");
  branch->add_option("--n", bo.n, "initial grid size");
  branch->add_option("--n-max", bo.n_max, "largest grid size used by tail refinement");
  branch->add_option("--tol", bo.tol, "Newton tolerance (sup norm)");
  branch->add_option("--relaxed-tol", bo.relaxed_tol, "tolerance once the slack drops below 0.05");
  branch->add_option("--slack-floor", bo.slack_floor, "beta = 0: stop below this slack");
  branch->add_option("--max-steps", bo.max_steps, "maximum number of stored points");
  branch->add_option("--profile-every", bo.profile_every, "write every m-th profile (and the last)");
  branch->add_flag("--double-root", bo.double_root, "use alpha = -sigma^2/(4c) and approach the cusped wave");
  branch->add_option("--gaps", bo.gaps, "crest gaps for the double-root approach");
  branch->add_option("--perturb", bo.perturb, "relative size of a random asymmetric perturbation for a full-basis re-solve");
  branch->add_option("--seed", bo.seed, "random seed for --perturb");
  branch->add_option("--output-dir,-o", bo.out_dir, "output directory")->envname(kOutputDirEnv);

  VerifyOptions vo;
  auto* verify = app.add_subcommand("verify-exact", "residual check of the explicit peaked waves");
  verify->add_option("--config", config_path, "flat key = value file; flags override it");
  verify->add_option("--family", vo.family, "reduced or modified")->check(CLI::IsMember({"reduced", "modified"}));
  verify->add_option("--sigma", vo.sigma, "sigma of the reduced wave");
  verify->add_option("--alpha", vo.alpha, "alpha of the modified wave");
  verify->add_option("--n", vo.n, "grid size (>= 1024)");
  verify->add_flag("--use-printed-form", vo.printed, "judge the misprinted formula instead");
  verify->add_option("--c", vo.c, "override the wave speed");
  verify->add_option("--tol", vo.tol, "residual tolerance");

  EvolveOptions eo;
  auto* evolve_cmd = app.add_subcommand("evolve", "time-evolve a profile");
  evolve_cmd->add_option("--config", config_path, "flat key = value file; flags override it");
  evolve_cmd->add_option("--profile", eo.profile, "profile file (x value per line)");
  evolve_cmd->add_flag("--zero", eo.zero, "start from u = 0");
  evolve_cmd->add_option("--n", eo.n, "grid size for --zero");
  evolve_cmd->add_option("--beta", eo.beta, "Boussinesq dispersion");
  evolve_cmd->add_option("--sigma", eo.sigma, "quadratic coefficient");
  evolve_cmd->add_option("--alpha", eo.alpha, "cubic coefficient");
  evolve_cmd->add_option("--c", eo.c, "wave speed for the traveling-error summary");
  evolve_cmd->add_option("--dt", eo.dt, "time step");
  evolve_cmd->add_option("--t-final", eo.t_final, "final time");
  evolve_cmd->add_option("--record-every", eo.record_every, "snapshot interval in steps");
  evolve_cmd->add_option("--output-dir,-o", eo.out_dir, "output directory")->envname(kOutputDirEnv);

  KernelOptions ko;
  auto* kernels = app.add_subcommand("kernels", "tabulate the convolution kernels against their series");
  kernels->add_option("--config", config_path, "flat key = value file; flags override it");
  kernels->add_option("--beta", ko.beta, "beta > 0 for G");
  kernels->add_option("--c", ko.c, "c > 0 for G");
  kernels->add_option("--points", ko.points, "number of sample points");
  kernels->add_option("--k-terms", ko.k_terms, "terms of the K series");
  kernels->add_option("--g-terms", ko.g_terms, "terms of the G series");
  kernels->add_flag("--printed-G-form,--paper-G-form", ko.paper_form, "compare the misprinted closed form of G");
  kernels->add_option("--output-dir,-o", ko.out_dir, "output directory")->envname(kOutputDirEnv);

  DiagnoseOptions dopt;
  auto* diag = app.add_subcommand("diagnose", "regularity, amplitude and symmetry diagnostics of a profile");
  diag->add_option("--config", config_path, "flat key = value file; flags override it");
  diag->add_option("--profile", dopt.profile, "profile file")->required();
  diag->add_option("--beta", dopt.beta, "Boussinesq dispersion");
  diag->add_option("--sigma", dopt.sigma, "quadratic coefficient");
  diag->add_option("--alpha", dopt.alpha, "cubic coefficient");
  diag->add_option("--c", dopt.c, "wave speed");
  diag->add_option("--x-star", dopt.x_star, "run a Hoelder fit at this point");
  diag->add_option("--window", dopt.window, "Hoelder fit window in nodes");
  diag->add_option("--exclude", dopt.exclude, "Hoelder fit exclusion radius in nodes");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
    if (!config_path.empty()) apply_config(*app.get_subcommands().front(), config_path);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*branch) return cmd_branch(bo, out, err);
    if (*verify) return cmd_verify_exact(vo, out);
    if (*evolve_cmd) return cmd_evolve(eo, *evolve_cmd, out, err);
    if (*kernels) return cmd_kernels(ko, out);
    if (*diag) return cmd_diagnose(dopt, *diag, out);
  } catch (const ValidationError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kValidation;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << '\n';
    return kValidation;
  } catch (const std::domain_error& e) {
    err << "invalid input: " << e.what() << '\n';
    return kValidation;
  } catch (const SolverError& e) {
    err << "solver failure: " << e.what() << '\n';
    return kSolverFailure;
  }
  return kValidation;
}

}  // namespace ostro::cli
