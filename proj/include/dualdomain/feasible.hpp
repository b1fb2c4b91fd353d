#pragma once

#include <complex>
#include <span>
#include <vector>

#include "dualdomain/degradation.hpp"

namespace dd {

// Per-entry interval bounds for a real vector. Empty vectors mean
// "unconstrained" and are accepted by every operation below.
struct BoxConstraint {
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t size() const { return lower.size(); }
};

// Separate interval bounds for real and imaginary parts of a complex vector.
struct TfBoxConstraint {
  std::vector<double> re_lower, re_upper;
  std::vector<double> im_lower, im_upper;

  std::size_t size() const { return re_lower.size(); }
};

BoxConstraint build_box(std::span<const Record> records);
TfBoxConstraint build_tf_box(std::span<const TfRecord> records);

// Entrywise clamp onto the box.
void project(std::span<const double> x, const BoxConstraint& box,
             std::span<double> out);
void project(std::span<const std::complex<double>> z,
             const TfBoxConstraint& box, std::span<std::complex<double>> out);

// Euclidean distance from x to the box (0 when inside).
double distance(std::span<const double> x, const BoxConstraint& box);
double distance(std::span<const std::complex<double>> z,
                const TfBoxConstraint& box);

// Proximity operator of tau·dist(., box): full projection when the distance
// is at most tau, otherwise a step of length tau towards the projection.
void prox_distance(std::span<const double> x, const BoxConstraint& box,
                   double tau, std::span<double> out);
void prox_distance(std::span<const std::complex<double>> z,
                   const TfBoxConstraint& box, double tau,
                   std::span<std::complex<double>> out);

}  // namespace dd
