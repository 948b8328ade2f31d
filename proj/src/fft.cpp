#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

#include "lplab/field.hpp"

namespace lplab::detail {
namespace {

// FFTW planning is not thread-safe; execution with the new-array interface is.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int dimension, std::size_t n, bool inverse) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_tuple(dimension, n, inverse);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    const std::size_t total = dimension == 1 ? n : n * n;
    auto* buffer = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * total));
    const int sign = inverse ? FFTW_BACKWARD : FFTW_FORWARD;
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    const int ni = static_cast<int>(n);
    fftw_plan plan = dimension == 1 ? fftw_plan_dft_1d(ni, buffer, buffer, sign, flags)
                                    : fftw_plan_dft_2d(ni, ni, buffer, buffer, sign, flags);
    fftw_free(buffer);
    if (plan == nullptr) throw Error("fftw planning failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, std::size_t, bool>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

}  // namespace

void fft_inplace(std::span<std::complex<double>> data, int dimension, std::size_t n, bool inverse) {
  fftw_plan plan = cache().get(dimension, n, inverse);
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, ptr, ptr);
}

}  // namespace lplab::detail
