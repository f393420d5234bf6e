#pragma once

#include <complex>
#include <memory>
#include <span>

namespace sweq {

/// Square 2D complex DFT of fixed size, row-major. forward uses e^{−2πi jk/M},
/// backward uses e^{+2πi jk/M}; neither is normalized.
class Fft2d {
 public:
  explicit Fft2d(int size);
  ~Fft2d();
  Fft2d(const Fft2d&) = delete;
  Fft2d& operator=(const Fft2d&) = delete;
  Fft2d(Fft2d&&) noexcept;
  Fft2d& operator=(Fft2d&&) noexcept;

  int size() const { return size_; }
  void forward(std::span<std::complex<double>> data) const;
  void backward(std::span<std::complex<double>> data) const;

 private:
  struct Plans;
  int size_;
  std::unique_ptr<Plans> plans_;
};

}  // namespace sweq
