#pragma once

#include <complex>
#include <span>
#include <vector>

#include "dualdomain/feasible.hpp"
#include "dualdomain/frame.hpp"

// Plain serial implementations, straight from the defining formulas, with
// no FFT and no threading. They exist to cross-check the optimized kernels
// and to serve as the baseline in the benchmark.
namespace dd::ref {

std::vector<std::complex<double>> analyze(const FrameSpec& spec,
                                          std::span<const double> x);

std::vector<double> synthesize(const FrameSpec& spec,
                               std::span<const std::complex<double>> z);

void project(std::span<const double> x, const BoxConstraint& box,
             std::span<double> out);

void soft_threshold(std::span<const std::complex<double>> z, double t,
                    std::span<std::complex<double>> out);

double norm_sq(std::span<const double> x);

}  // namespace dd::ref
