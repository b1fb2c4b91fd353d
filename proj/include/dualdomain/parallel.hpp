#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <vector>

// Deterministic data-parallel reductions. Sums are accumulated per fixed-size
// block and the block partials are combined serially in index order, so the
// result is bitwise identical for any thread count.

namespace dd::par {

// Minimum element count before a loop goes parallel.
inline constexpr std::ptrdiff_t grain = 4096;

// Block size for deterministic reductions.
inline constexpr std::ptrdiff_t block = 4096;

// Deterministic sum of term(i) for i in [0, n).
template <typename TermFn>
double map_sum(std::size_t n, TermFn&& term) {
  const std::ptrdiff_t sn = static_cast<std::ptrdiff_t>(n);
  const std::ptrdiff_t nb = (sn + block - 1) / block;
  std::vector<double> parts(static_cast<std::size_t>(std::max<std::ptrdiff_t>(nb, 1)), 0.0);
#pragma omp parallel for schedule(static) if (sn > grain)
  for (std::ptrdiff_t b = 0; b < nb; ++b) {
    const std::ptrdiff_t hi = std::min(b * block + block, sn);
    double s = 0.0;
    for (std::ptrdiff_t i = b * block; i < hi; ++i) s += term(i);
    parts[static_cast<std::size_t>(b)] = s;
  }
  double total = 0.0;
  for (double p : parts) total += p;
  return total;
}

double sum(const double* x, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
double norm_sq(const double* x, std::size_t n);
double norm_sq(const std::complex<double>* z, std::size_t n);
double max_abs(const double* x, std::size_t n);
bool all_finite(const double* x, std::size_t n);
bool all_finite(const std::complex<double>* z, std::size_t n);

}  // namespace dd::par
