#include "dualdomain/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dd {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

Fft::Fft(std::size_t n) : n_(n), pow2_(is_pow2(n)) {
  if (n == 0) throw std::invalid_argument("Fft: size must be positive");
  const double step = -2.0 * std::numbers::pi / static_cast<double>(n);
  if (pow2_) {
    twiddle_.resize(n / 2);
    for (std::size_t j = 0; j < n / 2; ++j)
      twiddle_[j] = std::polar(1.0, step * static_cast<double>(j));
    bitrev_.resize(n);
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = 0;
      for (std::size_t b = 0; b < bits; ++b)
        if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
      bitrev_[i] = r;
    }
  } else {
    roots_.resize(n);
    for (std::size_t j = 0; j < n; ++j)
      roots_[j] = std::polar(1.0, step * static_cast<double>(j));
  }
}

void Fft::transform(std::complex<double>* data, bool conjugate) const {
  if (!pow2_) {
    std::vector<std::complex<double>> out(n_);
    for (std::size_t k = 0; k < n_; ++k) {
      std::complex<double> acc{0.0, 0.0};
      for (std::size_t l = 0; l < n_; ++l) {
        std::complex<double> w = roots_[(k * l) % n_];
        if (conjugate) w = std::conj(w);
        acc += data[l] * w;
      }
      out[k] = acc;
    }
    for (std::size_t k = 0; k < n_; ++k) data[k] = out[k];
    return;
  }

  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t j = bitrev_[i];
    if (i < j) std::swap(data[i], data[j]);
  }
  for (std::size_t len = 2; len <= n_; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n_ / len;
    for (std::size_t start = 0; start < n_; start += len) {
      for (std::size_t j = 0; j < half; ++j) {
        std::complex<double> w = twiddle_[j * stride];
        if (conjugate) w = std::conj(w);
        const std::complex<double> a = data[start + j];
        const std::complex<double> b = data[start + j + half] * w;
        data[start + j] = a + b;
        data[start + j + half] = a - b;
      }
    }
  }
}

void Fft::forward(std::complex<double>* data) const { transform(data, false); }

void Fft::inverse(std::complex<double>* data) const { transform(data, true); }

}  // namespace dd
