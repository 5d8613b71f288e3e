// Newton solver on the even cosine subspace with a bordered amplitude
// constraint, and ε-continuation of the branch bifurcating from (c_k, 0).
#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ostro/analysis.hpp"
#include "ostro/fourier.hpp"
#include "ostro/model.hpp"

namespace ostro {

class SolverError : public std::runtime_error {
 public:
  enum class Kind { singular_jacobian, max_iterations, diverged, left_subspace, no_convergence };
  SolverError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Model parameters along a branch, possibly depending on the speed c.
struct BranchFamily {
  std::function<ModelParams(double)> params;
  /// ∂/∂c of the polynomial coefficients (empty when the nonlinearity is fixed).
  std::function<std::vector<double>(double)> dpoly_dc;

  static BranchFamily fixed(const ModelParams& p);
  /// Gardner nonlinearity with α = -σ²/(4c), so that F' has a double root at
  /// φ = 2c/σ for every speed.
  static BranchFamily gardner_double_root(double beta, double sigma);

  ModelParams at(double c) const { return params(c); }
};

/// Linear side condition Σ w_k a_k + w_c c = target closing the Newton system.
struct Normalization {
  std::vector<double> weights;  // indexed k - 1 over cosine coefficients a_k
  double c_weight = 0.0;
  double target = 0.0;

  /// a_{k0} = eps.
  static Normalization mode_amplitude(int modes, int k0, double eps);
  /// φ(0) = level_per_c · c - gap, with φ(0) = Σ a_k.
  static Normalization crest_gap(int modes, double level_per_c, double gap);

  Normalization resized(int modes) const;
};

struct SolverSettings {
  double tol = 1e-10;
  double relaxed_tol = 1e-6;
  double relax_below_slack = 0.05;
  int max_iters = 30;
  int n = 512;
  int n_max = 1024;
  double tail_threshold = 1e-10;
  double slack_floor = 1e-2;
  int max_steps = 1000;
  double eps_max = std::numeric_limits<double>::infinity();
  double min_step = 1e-7;
};

struct BranchPoint {
  double c = 0.0;
  double eps = 0.0;
  WaveProfile profile = WaveProfile::zero(TorusGrid(8));
  double residual_norm = 0.0;
  double residual_doubled = 0.0;
  int newton_iters = 0;
  double tol = 0.0;
  std::string regime;  // "asymptotic-regime" or "continued"
  std::optional<DiagnosticsReport> diagnostics;
};

enum class Termination { max_steps, newton_failure, slack_exhausted, amplitude_target };

std::string to_string(Termination t);

struct Branch {
  int k0 = 1;
  BranchFamily family;
  /// Parameters at the bifurcation point.
  ModelParams params = ModelParams::gardner(0.0, 1.0, 0.0);
  std::vector<BranchPoint> points;
  Termination termination = Termination::max_steps;
};

struct InitialGuess {
  double c;
  WaveProfile profile;
};

/// (c_{k0}, eps·cos(k0 x)) on an n-point grid.  Throws std::domain_error when
/// c_{k0} is not positive.
InitialGuess initial_guess(const ModelParams& p, int k0, double eps, int n = 512);

/// Newton iteration for {cosine coefficients of G = 0, normalization} in
/// (a_1..a_{n/2-1}, c).  Throws SolverError on failure and
/// std::invalid_argument for profiles that are not even with zero mean.
BranchPoint newton_solve(const BranchFamily& family, double c0, const WaveProfile& profile0,
                         const Normalization& norm, double tol, int max_iters, int k0 = 1);

/// Amplitude-normalized solve for fixed parameters.
BranchPoint newton_solve(const ModelParams& p, double c0, const WaveProfile& profile0, double eps,
                         double tol = 1e-10, int max_iters = 30, int k0 = 1);

/// Full trigonometric basis solve with the phase fixed by b_{k0} = 0
/// (Gauss-Newton, least squares).  Used to test that perturbed asymmetric
/// guesses return to symmetric profiles.
BranchPoint newton_solve_full(const ModelParams& p, double c0, const WaveProfile& profile0,
                              double eps, double tol = 1e-10, int max_iters = 40, int k0 = 1);

/// Continuation in eps from eps_start with steps of eps_step, halved on
/// failure down to settings.min_step.  Points whose extremum reaches a
/// singular level are rejected.
Branch continue_branch(const BranchFamily& family, int k0, double eps_start, double eps_step,
                       const SolverSettings& settings = {});
Branch continue_branch(const ModelParams& p, int k0, double eps_start, double eps_step,
                       const SolverSettings& settings = {});

/// Branch of the double-root family: eps-continuation until slack falls below
/// settings.relax_below_slack, then crest-gap solves φ(0) = 2c/σ - gap for each
/// gap in `gaps` (decreasing).
Branch trace_double_root_branch(double sigma, const std::vector<double>& gaps,
                                const SolverSettings& settings = {});

/// Attaches diagnostics to every point (in parallel over points).
void attach_diagnostics(Branch& branch);

}  // namespace ostro
