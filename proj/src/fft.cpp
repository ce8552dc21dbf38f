#include "kbs/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace kbs {
namespace {

struct PlanPair {
  fftw_plan forward;
  fftw_plan backward;
};

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Plans live for the whole process; they are shared by every Fft of the
// same length.
PlanPair plans_for(std::size_t n) {
  static std::map<std::size_t, PlanPair> cache;
  std::lock_guard<std::mutex> lock(planner_mutex());
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  std::vector<std::complex<double>> a(n), b(n);
  auto* in = reinterpret_cast<fftw_complex*>(a.data());
  auto* out = reinterpret_cast<fftw_complex*>(b.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  const int len = static_cast<int>(n);
  PlanPair p{fftw_plan_dft_1d(len, in, out, FFTW_FORWARD, flags),
             fftw_plan_dft_1d(len, in, out, FFTW_BACKWARD, flags)};
  if (p.forward == nullptr || p.backward == nullptr)
    throw std::runtime_error("FFTW planning failed");
  cache.emplace(n, p);
  return p;
}

void execute(void* plan, std::span<const std::complex<double>> in,
             std::span<std::complex<double>> out, std::size_t n) {
  if (in.size() != n || out.size() != n)
    throw std::invalid_argument("Fft: buffer size mismatch");
  // FFTW takes a non-const input pointer but does not write to it for
  // out-of-place transforms.
  auto* src = reinterpret_cast<fftw_complex*>(
      const_cast<std::complex<double>*>(in.data()));
  auto* dst = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(static_cast<fftw_plan>(plan), src, dst);
}

}  // namespace

Fft::Fft(std::size_t n) : n_(n) {
  auto p = plans_for(n);
  forward_plan_ = p.forward;
  backward_plan_ = p.backward;
}

void Fft::forward(std::span<const std::complex<double>> in,
                  std::span<std::complex<double>> out) const {
  execute(forward_plan_, in, out, n_);
}

void Fft::backward(std::span<const std::complex<double>> in,
                   std::span<std::complex<double>> out) const {
  execute(backward_plan_, in, out, n_);
}

}  // namespace kbs
