// Pseudospectral time stepping of (u_t + n(u)_x + βu_xxx)_x = u on
// zero-mean periodic data:  û_t = -iω(k)û - ik·n(u)^,  ω = 1/k - βk³.
#pragma once

#include <stdexcept>
#include <vector>

#include "ostro/fourier.hpp"
#include "ostro/model.hpp"
#include "ostro/solver.hpp"

namespace ostro {

struct EvolutionConfig {
  double dt = 1e-3;
  double t_final = 1.0;
  ModelParams params = ModelParams::gardner(0.0, 1.0, 0.0);
  int record_every = 1;
};

struct Snapshot {
  double t;
  WaveProfile u;
};

struct EvolutionResult {
  std::vector<Snapshot> snapshots;
  bool breaking = false;
  double t_reached = 0.0;
  double initial_gradient = 0.0;
  double last_gradient = 0.0;  // sup|u_x| of the last finite state
};

class BlowUpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Advective ceiling 0.5·(2π/n) / max|n'(u0)| (infinite for u0 = 0).
double cfl_ceiling(const ModelParams& p, const WaveProfile& u0);

/// Integrating-factor RK4 with the linear phase applied exactly and the flux
/// dealiased.  The mean and the Nyquist mode are held at zero.  Stops with
/// `breaking` set when sup|u_x| exceeds 1e4 times its initial value or the
/// field becomes non-finite.  Throws std::invalid_argument for a nonzero
/// mean or a step above the CFL ceiling.
EvolutionResult evolve(const WaveProfile& u0, const EvolutionConfig& config);

/// ‖u(T) - φ(· - cT)‖∞ / ‖φ‖∞ for the evolution of a steady profile.
/// Throws BlowUpError if the evolution breaks.
double traveling_error(const BranchPoint& point, double t_final, const EvolutionConfig& config);

}  // namespace ostro
