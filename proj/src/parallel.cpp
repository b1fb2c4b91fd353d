#include "dualdomain/parallel.hpp"

#include <cmath>
#include <vector>

namespace dd::par {

namespace {

template <typename BlockFn>
double blocked_sum(std::size_t n, BlockFn&& partial) {
  const std::ptrdiff_t sn = static_cast<std::ptrdiff_t>(n);
  const std::ptrdiff_t nb = (sn + block - 1) / block;
  if (nb <= 1) return partial(0, sn);
  std::vector<double> parts(static_cast<std::size_t>(nb));
#pragma omp parallel for schedule(static) if (sn > grain)
  for (std::ptrdiff_t b = 0; b < nb; ++b) {
    const std::ptrdiff_t lo = b * block;
    const std::ptrdiff_t hi = std::min(lo + block, sn);
    parts[static_cast<std::size_t>(b)] = partial(lo, hi);
  }
  double total = 0.0;
  for (double p : parts) total += p;
  return total;
}

}  // namespace

double sum(const double* x, std::size_t n) {
  return blocked_sum(n, [&](std::ptrdiff_t lo, std::ptrdiff_t hi) {
    double s = 0.0;
    for (std::ptrdiff_t i = lo; i < hi; ++i) s += x[i];
    return s;
  });
}

double dot(const double* a, const double* b, std::size_t n) {
  return blocked_sum(n, [&](std::ptrdiff_t lo, std::ptrdiff_t hi) {
    double s = 0.0;
    for (std::ptrdiff_t i = lo; i < hi; ++i) s += a[i] * b[i];
    return s;
  });
}

double norm_sq(const double* x, std::size_t n) { return dot(x, x, n); }

double norm_sq(const std::complex<double>* z, std::size_t n) {
  // std::complex<double> is layout-compatible with double[2].
  return norm_sq(reinterpret_cast<const double*>(z), 2 * n);
}

double max_abs(const double* x, std::size_t n) {
  const std::ptrdiff_t sn = static_cast<std::ptrdiff_t>(n);
  double m = 0.0;
#pragma omp parallel for schedule(static) reduction(max : m) if (sn > grain)
  for (std::ptrdiff_t i = 0; i < sn; ++i) m = std::max(m, std::abs(x[i]));
  return m;
}

bool all_finite(const double* x, std::size_t n) {
  const std::ptrdiff_t sn = static_cast<std::ptrdiff_t>(n);
  bool ok = true;
#pragma omp parallel for schedule(static) reduction(&& : ok) if (sn > grain)
  for (std::ptrdiff_t i = 0; i < sn; ++i) ok = ok && std::isfinite(x[i]);
  return ok;
}

bool all_finite(const std::complex<double>* z, std::size_t n) {
  return all_finite(reinterpret_cast<const double*>(z), 2 * n);
}

}  // namespace dd::par
