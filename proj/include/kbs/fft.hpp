#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace kbs {

/// Complex-to-complex FFTW transform of a fixed length.
///
/// Plans are created once per length in a process-wide cache guarded by a
/// mutex (the FFTW planner is not reentrant); executing a plan on caller
/// buffers is thread-safe. Plans use FFTW_ESTIMATE | FFTW_UNALIGNED so the
/// arithmetic does not depend on buffer alignment or timing, which keeps
/// runs bit-reproducible.
class Fft {
 public:
  explicit Fft(std::size_t n);

  std::size_t size() const { return n_; }

  /// out[j] = sum_k in[k] exp(-2 pi i j k / n)
  void forward(std::span<const std::complex<double>> in,
               std::span<std::complex<double>> out) const;
  /// out[k] = sum_j in[j] exp(+2 pi i j k / n)   (unnormalized)
  void backward(std::span<const std::complex<double>> in,
                std::span<std::complex<double>> out) const;

 private:
  std::size_t n_;
  void* forward_plan_;
  void* backward_plan_;
};

}  // namespace kbs
