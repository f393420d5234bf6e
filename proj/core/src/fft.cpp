#include "sweq/fft.hpp"

#include <algorithm>
#include <mutex>

#include <fftw3.h>

#include "sweq/fockspace.hpp"

namespace sweq {

namespace {

// Planner calls are not thread-safe in FFTW; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct Fft2d::Plans {
  fftw_complex* buffer = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  std::mutex exec_mutex;  // buffer is shared between calls

  ~Plans() {
    std::lock_guard lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
    if (buffer) fftw_free(buffer);
  }
};

Fft2d::Fft2d(int size) : size_(size), plans_(std::make_unique<Plans>()) {
  if (size < 2) throw InvalidArgument("Fft2d: size must be >= 2");
  std::lock_guard lock(planner_mutex());
  const auto n = static_cast<size_t>(size) * static_cast<size_t>(size);
  plans_->buffer = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  plans_->forward = fftw_plan_dft_2d(size, size, plans_->buffer, plans_->buffer, FFTW_FORWARD, FFTW_ESTIMATE);
  plans_->backward = fftw_plan_dft_2d(size, size, plans_->buffer, plans_->buffer, FFTW_BACKWARD, FFTW_ESTIMATE);
}

Fft2d::~Fft2d() = default;
Fft2d::Fft2d(Fft2d&&) noexcept = default;
Fft2d& Fft2d::operator=(Fft2d&&) noexcept = default;

namespace {

void run(fftw_plan plan, fftw_complex* buffer, std::mutex& m, int size, std::span<std::complex<double>> data) {
  const auto n = static_cast<size_t>(size) * static_cast<size_t>(size);
  if (data.size() != n) throw InvalidArgument("Fft2d: data size does not match transform size");
  std::lock_guard lock(m);
  auto* buf = reinterpret_cast<std::complex<double>*>(buffer);
  std::copy(data.begin(), data.end(), buf);
  fftw_execute(plan);
  std::copy(buf, buf + n, data.begin());
}

}  // namespace

void Fft2d::forward(std::span<std::complex<double>> data) const {
  run(plans_->forward, plans_->buffer, plans_->exec_mutex, size_, data);
}

void Fft2d::backward(std::span<std::complex<double>> data) const {
  run(plans_->backward, plans_->buffer, plans_->exec_mutex, size_, data);
}

}  // namespace sweq
