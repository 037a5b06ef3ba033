#include "fft.hpp"

#include <map>
#include <mutex>
#include <new>
#include <tuple>

namespace paradom::detail {
namespace {

struct PlanCache {
  std::mutex mu;
  std::map<std::tuple<int, int, int>, fftw_plan> plans;

  ~PlanCache() {
    for (auto& [key, p] : plans) fftw_destroy_plan(p);
  }

  fftw_plan get(int dim, int m, bool forward) {
    std::lock_guard<std::mutex> lock(mu);
    const auto key = std::make_tuple(dim, m, forward ? 1 : 0);
    auto it = plans.find(key);
    if (it != plans.end()) return it->second;
    int dims[3] = {m, m, m};
    const std::size_t nr = real_size(dim, m);
    const std::size_t nh = half_size(dim, m);
    double* r = fftw_alloc_real(nr);
    fftw_complex* h = fftw_alloc_complex(nh);
    fftw_plan p = forward
                      ? fftw_plan_dft_r2c(dim, dims, r, h, FFTW_ESTIMATE)
                      : fftw_plan_dft_c2r(dim, dims, h, r, FFTW_ESTIMATE);
    fftw_free(r);
    fftw_free(h);
    plans.emplace(key, p);
    return p;
  }
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

}  // namespace

std::size_t real_size(int dim, int m) {
  std::size_t s = 1;
  for (int a = 0; a < dim; ++a) s *= static_cast<std::size_t>(m);
  return s;
}

std::size_t half_size(int dim, int m) {
  std::size_t s = static_cast<std::size_t>(m / 2 + 1);
  for (int a = 0; a + 1 < dim; ++a) s *= static_cast<std::size_t>(m);
  return s;
}

FftBuffers::FftBuffers(int dim, int m)
    : dim_(dim), m_(m), nreal_(real_size(dim, m)), nhalf_(half_size(dim, m)) {
  real_ = fftw_alloc_real(nreal_);
  half_ = fftw_alloc_complex(nhalf_);
  if (!real_ || !half_) {
    fftw_free(real_);
    fftw_free(half_);
    throw std::bad_alloc();
  }
}

FftBuffers::~FftBuffers() {
  fftw_free(real_);
  fftw_free(half_);
}

void FftBuffers::backward() {
  fftw_execute_dft_c2r(cache().get(dim_, m_, false), half_, real_);
}

void FftBuffers::forward() {
  fftw_execute_dft_r2c(cache().get(dim_, m_, true), real_, half_);
}

}  // namespace paradom::detail
