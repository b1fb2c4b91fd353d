#include "dualdomain/feasible.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "dualdomain/parallel.hpp"

namespace dd {

namespace {

inline double clamp_to(double v, double lo, double hi) {
  return std::min(std::max(v, lo), hi);
}

void check_interval(double lo, double hi) {
  if (std::isnan(lo) || std::isnan(hi) || lo > hi)
    throw std::invalid_argument("empty or invalid interval");
}

}  // namespace

BoxConstraint build_box(std::span<const Record> records) {
  BoxConstraint box;
  box.lower.reserve(records.size());
  box.upper.reserve(records.size());
  for (const Record& r : records) {
    check_interval(r.lower, r.upper);
    box.lower.push_back(r.lower);
    box.upper.push_back(r.upper);
  }
  return box;
}

TfBoxConstraint build_tf_box(std::span<const TfRecord> records) {
  TfBoxConstraint box;
  box.re_lower.reserve(records.size());
  box.re_upper.reserve(records.size());
  box.im_lower.reserve(records.size());
  box.im_upper.reserve(records.size());
  for (const TfRecord& r : records) {
    check_interval(r.re_lower, r.re_upper);
    check_interval(r.im_lower, r.im_upper);
    box.re_lower.push_back(r.re_lower);
    box.re_upper.push_back(r.re_upper);
    box.im_lower.push_back(r.im_lower);
    box.im_upper.push_back(r.im_upper);
  }
  return box;
}

void project(std::span<const double> x, const BoxConstraint& box,
             std::span<double> out) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
  if (out.size() != x.size()) throw std::invalid_argument("size mismatch");
  if (box.size() == 0) {
    std::copy(x.begin(), x.end(), out.begin());
    return;
  }
  if (box.size() != x.size()) throw std::invalid_argument("size mismatch");
#pragma omp parallel for schedule(static) if (n >= par::grain)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    out[i] = clamp_to(x[i], box.lower[i], box.upper[i]);
}

void project(std::span<const std::complex<double>> z,
             const TfBoxConstraint& box, std::span<std::complex<double>> out) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(z.size());
  if (out.size() != z.size()) throw std::invalid_argument("size mismatch");
  if (box.size() == 0) {
    std::copy(z.begin(), z.end(), out.begin());
    return;
  }
  if (box.size() != z.size()) throw std::invalid_argument("size mismatch");
#pragma omp parallel for schedule(static) if (n >= par::grain)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    out[i] = {clamp_to(z[i].real(), box.re_lower[i], box.re_upper[i]),
              clamp_to(z[i].imag(), box.im_lower[i], box.im_upper[i])};
}

double distance(std::span<const double> x, const BoxConstraint& box) {
  if (box.size() == 0) return 0.0;
  if (box.size() != x.size()) throw std::invalid_argument("size mismatch");
  const double* lo = box.lower.data();
  const double* hi = box.upper.data();
  const double* v = x.data();
  const double d2 = par::map_sum(x.size(), [&](std::ptrdiff_t i) {
    const double r = v[i] - clamp_to(v[i], lo[i], hi[i]);
    return r * r;
  });
  return std::sqrt(d2);
}

double distance(std::span<const std::complex<double>> z,
                const TfBoxConstraint& box) {
  if (box.size() == 0) return 0.0;
  if (box.size() != z.size()) throw std::invalid_argument("size mismatch");
  const std::complex<double>* v = z.data();
  const double d2 = par::map_sum(z.size(), [&](std::ptrdiff_t i) {
    const double re = v[i].real() - clamp_to(v[i].real(), box.re_lower[i],
                                             box.re_upper[i]);
    const double im = v[i].imag() - clamp_to(v[i].imag(), box.im_lower[i],
                                             box.im_upper[i]);
    return re * re + im * im;
  });
  return std::sqrt(d2);
}

void prox_distance(std::span<const double> x, const BoxConstraint& box,
                   double tau, std::span<double> out) {
  if (tau < 0.0) throw std::invalid_argument("tau must be nonnegative");
  const double dist = distance(x, box);
  if (dist <= tau) {
    project(x, box, out);
    return;
  }
  const double step = tau / dist;
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static) if (n >= par::grain)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double p = clamp_to(x[i], box.lower[i], box.upper[i]);
    out[i] = x[i] + step * (p - x[i]);
  }
}

void prox_distance(std::span<const std::complex<double>> z,
                   const TfBoxConstraint& box, double tau,
                   std::span<std::complex<double>> out) {
  if (tau < 0.0) throw std::invalid_argument("tau must be nonnegative");
  const double dist = distance(z, box);
  if (dist <= tau) {
    project(z, box, out);
    return;
  }
  const double step = tau / dist;
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(z.size());
#pragma omp parallel for schedule(static) if (n >= par::grain)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double pr = clamp_to(z[i].real(), box.re_lower[i], box.re_upper[i]);
    const double pi = clamp_to(z[i].imag(), box.im_lower[i], box.im_upper[i]);
    out[i] = {z[i].real() + step * (pr - z[i].real()),
              z[i].imag() + step * (pi - z[i].imag())};
  }
}

}  // namespace dd
