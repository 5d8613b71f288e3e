// FFTW-backed real transforms.  Plans are created once per size under a
// mutex (the FFTW planner is not thread-safe) and executed through the
// new-array interface, which is.
#include "ostro/fourier.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace ostro::fft {
namespace {

struct PlanPair {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};
using RealBuf = std::unique_ptr<double[], FftwFree>;
using CplxBuf = std::unique_ptr<fftw_complex[], FftwFree>;

RealBuf alloc_real(int n) { return RealBuf(fftw_alloc_real(static_cast<std::size_t>(n))); }
CplxBuf alloc_cplx(int n) { return CplxBuf(fftw_alloc_complex(static_cast<std::size_t>(n))); }

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [n, p] : plans_) {
      fftw_destroy_plan(p.r2c);
      fftw_destroy_plan(p.c2r);
    }
  }

  PlanPair get(int n) {
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(n); it != plans_.end()) return it->second;
    auto re = alloc_real(n);
    auto co = alloc_cplx(n / 2 + 1);
    PlanPair p;
    p.r2c = fftw_plan_dft_r2c_1d(n, re.get(), co.get(), FFTW_ESTIMATE);
    p.c2r = fftw_plan_dft_c2r_1d(n, co.get(), re.get(), FFTW_ESTIMATE);
    if (!p.r2c || !p.c2r) throw std::runtime_error("fftw planning failed");
    plans_.emplace(n, p);
    return p;
  }

 private:
  std::mutex mutex_;
  std::map<int, PlanPair> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

}  // namespace

std::vector<cplx> forward(std::span<const double> samples) {
  const int n = static_cast<int>(samples.size());
  const int half = n / 2 + 1;
  const PlanPair plan = cache().get(n);
  auto in = alloc_real(n);
  auto out = alloc_cplx(half);
  std::copy(samples.begin(), samples.end(), in.get());
  fftw_execute_dft_r2c(plan.r2c, in.get(), out.get());

  // Nodes start at -π, so f̂(k) = (-1)^k X_k / n.
  std::vector<cplx> coeffs(static_cast<std::size_t>(half));
  const double inv_n = 1.0 / n;
  for (int k = 0; k < half; ++k) {
    const double sign = (k % 2 == 0) ? inv_n : -inv_n;
    coeffs[static_cast<std::size_t>(k)] = cplx(out[k][0], out[k][1]) * sign;
  }
  return coeffs;
}

std::vector<double> inverse(std::span<const cplx> half_spectrum, int n) {
  const int half = n / 2 + 1;
  if (static_cast<int>(half_spectrum.size()) != half)
    throw std::invalid_argument("fft::inverse: spectrum size does not match grid");
  const PlanPair plan = cache().get(n);
  auto in = alloc_cplx(half);
  auto out = alloc_real(n);
  for (int k = 0; k < half; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    const cplx v = half_spectrum[static_cast<std::size_t>(k)] * sign;
    in[k][0] = v.real();
    in[k][1] = (k == 0 || k == n / 2) ? 0.0 : v.imag();
  }
  fftw_execute_dft_c2r(plan.c2r, in.get(), out.get());
  return std::vector<double>(out.get(), out.get() + n);
}

}  // namespace ostro::fft
