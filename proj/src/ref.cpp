#include "dualdomain/ref.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dd::ref {

std::vector<std::complex<double>> analyze(const FrameSpec& spec,
                                          std::span<const double> x) {
  const std::size_t P = spec.signal_length();
  if (x.size() != P) throw std::invalid_argument("signal length mismatch");
  const std::size_t M = spec.channels();
  const std::size_t L = spec.window_length();
  const std::size_t a = spec.hop();
  const std::vector<double>& g = spec.window();

  std::vector<std::complex<double>> c(spec.num_coefficients());
  for (std::size_t n = 0; n < spec.num_frames(); ++n)
    for (std::size_t m = 0; m < M; ++m) {
      std::complex<double> acc{0.0, 0.0};
      for (std::size_t l = 0; l < L; ++l) {
        const double angle = -2.0 * std::numbers::pi *
                             static_cast<double>(m) * static_cast<double>(l) /
                             static_cast<double>(M);
        acc += g[l] * x[(n * a + l) % P] *
               std::complex<double>(std::cos(angle), std::sin(angle));
      }
      c[n * M + m] = acc;
    }
  return c;
}

std::vector<double> synthesize(const FrameSpec& spec,
                               std::span<const std::complex<double>> z) {
  if (z.size() != spec.num_coefficients())
    throw std::invalid_argument("coefficient length mismatch");
  const std::size_t P = spec.signal_length();
  const std::size_t M = spec.channels();
  const std::size_t L = spec.window_length();
  const std::size_t a = spec.hop();
  const std::vector<double>& g = spec.window();

  std::vector<double> x(P, 0.0);
  for (std::size_t n = 0; n < spec.num_frames(); ++n)
    for (std::size_t l = 0; l < L; ++l) {
      std::complex<double> acc{0.0, 0.0};
      for (std::size_t m = 0; m < M; ++m) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(m) *
                             static_cast<double>(l) / static_cast<double>(M);
        acc += z[n * M + m] *
               std::complex<double>(std::cos(angle), std::sin(angle));
      }
      x[(n * a + l) % P] += g[l] * acc.real();
    }
  return x;
}

void project(std::span<const double> x, const BoxConstraint& box,
             std::span<double> out) {
  if (out.size() != x.size()) throw std::invalid_argument("size mismatch");
  if (box.size() == 0) {
    std::copy(x.begin(), x.end(), out.begin());
    return;
  }
  if (box.size() != x.size()) throw std::invalid_argument("size mismatch");
  for (std::size_t i = 0; i < x.size(); ++i)
    out[i] = std::min(std::max(x[i], box.lower[i]), box.upper[i]);
}

void soft_threshold(std::span<const std::complex<double>> z, double t,
                    std::span<std::complex<double>> out) {
  if (out.size() != z.size()) throw std::invalid_argument("size mismatch");
  for (std::size_t q = 0; q < z.size(); ++q) {
    const double mag = std::abs(z[q]);
    out[q] = mag <= t ? std::complex<double>{0.0, 0.0}
                      : z[q] * (1.0 - t / mag);
  }
}

double norm_sq(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

}  // namespace dd::ref
