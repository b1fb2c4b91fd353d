#pragma once

// Slow, obviously-correct computations the tests compare the library
// against. Nothing here shares code with the production kernels.

#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "dualdomain/feasible.hpp"
#include "dualdomain/frame.hpp"

namespace oracle {

// Dense analysis matrix, one row per coefficient q = n*M + m, built
// straight from the transform definition:
//   A[q][(n*hop + l) mod P] += g[l] * exp(-2*pi*i*m*l / M).
inline std::vector<std::vector<std::complex<double>>> dense_analysis_matrix(
    const dd::FrameSpec& spec) {
  const std::size_t P = spec.signal_length();
  const std::size_t Q = spec.num_coefficients();
  const std::size_t M = spec.channels();
  const std::size_t hop = spec.hop();
  const std::vector<double>& g = spec.window();
  const double two_pi = 2.0 * std::acos(-1.0);

  std::vector<std::vector<std::complex<double>>> A(
      Q, std::vector<std::complex<double>>(P, {0.0, 0.0}));
  for (std::size_t n = 0; n < spec.num_frames(); ++n)
    for (std::size_t m = 0; m < M; ++m)
      for (std::size_t l = 0; l < g.size(); ++l) {
        const double phase = -two_pi * static_cast<double>(m) *
                             static_cast<double>(l) / static_cast<double>(M);
        A[n * M + m][(n * hop + l) % P] +=
            g[l] * std::complex<double>(std::cos(phase), std::sin(phase));
      }
  return A;
}

inline std::vector<std::complex<double>> apply_dense(
    const std::vector<std::vector<std::complex<double>>>& A,
    std::span<const double> x) {
  std::vector<std::complex<double>> out(A.size());
  for (std::size_t q = 0; q < A.size(); ++q) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t p = 0; p < x.size(); ++p) acc += A[q][p] * x[p];
    out[q] = acc;
  }
  return out;
}

// Adjoint application kept complex so callers can check that the
// imaginary residue vanishes for conjugate-symmetric inputs.
inline std::vector<std::complex<double>> apply_dense_adjoint(
    const std::vector<std::vector<std::complex<double>>>& A,
    std::span<const std::complex<double>> z) {
  if (A.empty()) return {};
  std::vector<std::complex<double>> out(A[0].size(), {0.0, 0.0});
  for (std::size_t q = 0; q < A.size(); ++q)
    for (std::size_t p = 0; p < out.size(); ++p)
      out[p] += std::conj(A[q][p]) * z[q];
  return out;
}

// Minimizer of ||w - v||^2 over a finite box, found by enumerating all
// 3^d KKT patterns (each coordinate at its lower bound, interior, or at
// its upper bound). Independent of the clamp formula under test.
inline std::vector<double> box_qp(std::span<const double> v,
                                  const dd::BoxConstraint& box) {
  const std::size_t d = v.size();
  if (box.lower.size() != d || box.upper.size() != d)
    throw std::invalid_argument("box_qp: size mismatch");
  std::size_t combos = 1;
  for (std::size_t i = 0; i < d; ++i) combos *= 3;

  std::vector<double> best(d, 0.0);
  double best_obj = std::numeric_limits<double>::infinity();
  std::vector<double> w(d);
  for (std::size_t code = 0; code < combos; ++code) {
    std::size_t rest = code;
    bool feasible = true;
    for (std::size_t i = 0; i < d && feasible; ++i) {
      const int choice = static_cast<int>(rest % 3);
      rest /= 3;
      switch (choice) {
        case 0:
          w[i] = box.lower[i];
          break;
        case 1:  // interior stationary point w_i = v_i
          if (v[i] < box.lower[i] || v[i] > box.upper[i]) feasible = false;
          w[i] = v[i];
          break;
        default:
          w[i] = box.upper[i];
          break;
      }
    }
    if (!feasible) continue;
    double obj = 0.0;
    for (std::size_t i = 0; i < d; ++i) obj += (w[i] - v[i]) * (w[i] - v[i]);
    if (obj < best_obj) {
      best_obj = obj;
      best = w;
    }
  }
  return best;
}

}  // namespace oracle
