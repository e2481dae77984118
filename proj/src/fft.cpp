#include "nlslab/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace nlslab {

namespace {

bool is_smooth(std::size_t n) {
  for (std::size_t p : {2u, 3u, 5u})
    while (n % p == 0) n /= p;
  return n == 1;
}

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class Plan {
 public:
  Plan(std::size_t n, FftDirection dir) : n_(n) {
    buf_ = fftw_alloc_complex(n);
    if (buf_ == nullptr) throw std::bad_alloc();
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan_ = fftw_plan_dft_1d(static_cast<int>(n), buf_, buf_,
                             dir == FftDirection::Forward ? FFTW_FORWARD : FFTW_BACKWARD,
                             FFTW_ESTIMATE);
    if (plan_ == nullptr) {
      fftw_free(buf_);
      throw std::runtime_error("fftw: plan creation failed");
    }
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
  ~Plan() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan_);
    fftw_free(buf_);
  }

  void run(std::span<cplx> data) {
    static_assert(sizeof(cplx) == sizeof(fftw_complex));
    std::memcpy(buf_, data.data(), n_ * sizeof(cplx));
    fftw_execute(plan_);
    std::memcpy(static_cast<void*>(data.data()), buf_, n_ * sizeof(cplx));
  }

 private:
  std::size_t n_;
  fftw_complex* buf_ = nullptr;
  fftw_plan plan_ = nullptr;
};

Plan& plan_for(std::size_t n, FftDirection dir) {
  thread_local std::map<std::pair<std::size_t, FftDirection>, std::unique_ptr<Plan>> cache;
  auto& slot = cache[{n, dir}];
  if (!slot) slot = std::make_unique<Plan>(n, dir);
  return *slot;
}

}  // namespace

std::size_t fft_size_at_least(std::size_t min_size) {
  std::size_t n = std::max<std::size_t>(2, min_size);
  if (n % 2) ++n;
  while (!is_smooth(n)) n += 2;
  return n;
}

void fft_inplace(std::span<cplx> data, FftDirection dir) {
  if (data.empty()) return;
  plan_for(data.size(), dir).run(data);
}

}  // namespace nlslab
