#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "dualdomain/fft.hpp"

namespace dd {

enum class Window { Sine, Hann, Rectangular };

std::string to_string(Window family);
Window window_from_string(const std::string& s);

// Which side of the transform the solver's primal variable lives on.
enum class Model { Analysis, Synthesis };

// Operator composition whose spectral norm bounds the step sizes: the
// two-block tight-frame assignment or the three-block general assignment.
enum class OperatorStack { TightPair, GeneralTriple };

// Cyclic discrete Gabor transform with a tight-normalized window, so that
// synthesize(analyze(x)) == x to numerical precision (Parseval, frame
// bound 1). Immutable after construction and shareable across threads.
//
// Coefficients are indexed q = frame * channels + bin. Analysis of a real
// signal has the usual conjugate symmetry across bins; partner() and
// is_self_conjugate() expose that pairing.
class FrameSpec {
 public:
  FrameSpec(std::size_t window_length, std::size_t hop, std::size_t channels,
            std::size_t signal_length, std::vector<double> tight_window,
            Window family = Window::Sine);

  std::size_t window_length() const { return window_length_; }
  Window family() const { return family_; }
  std::size_t hop() const { return hop_; }
  std::size_t channels() const { return channels_; }
  std::size_t signal_length() const { return signal_length_; }
  std::size_t num_frames() const { return signal_length_ / hop_; }
  std::size_t num_coefficients() const { return channels_ * num_frames(); }

  const std::vector<double>& window() const { return window_; }
  const Fft& fft() const { return fft_; }

  std::size_t partner(std::size_t q) const {
    const std::size_t m = q % channels_;
    return q - m + (channels_ - m) % channels_;
  }
  bool is_self_conjugate(std::size_t q) const {
    const std::size_t m = q % channels_;
    return m == 0 || 2 * m == channels_;
  }

 private:
  std::size_t window_length_, hop_, channels_, signal_length_;
  Window family_;
  std::vector<double> window_;
  Fft fft_;
};

// Builds a Parseval tight frame. The window of the given family is
// normalized by the diagonal of the frame operator; the signal length is
// padded up to a multiple of the hop (at least one full window).
FrameSpec make_tight_frame(std::size_t window_length, std::size_t hop,
                           std::size_t channels, std::size_t signal_length,
                           Window family = Window::Sine);

// A: R^P -> C^Q, windowed DFTs of hop-shifted frames (cyclic boundary).
std::vector<std::complex<double>> analyze(const FrameSpec& spec,
                                          std::span<const double> x);

// A*: C^Q -> R^P, the adjoint of analyze.
std::vector<double> synthesize(const FrameSpec& spec,
                               std::span<const std::complex<double>> z);

// Spectral norm of sum_m L_m* L_m for the given assignment, by power
// iteration to the requested relative tolerance. Empty weights mean W = Id.
double operator_norm(const FrameSpec& spec, OperatorStack stack, Model model,
                     std::span<const double> weights = {},
                     double rel_tol = 1e-6);

// Power iteration on a self-adjoint positive semidefinite map given as a
// callable; exposed for direct use on custom operators.
double power_iteration_norm(
    std::size_t dim,
    const std::function<void(const std::vector<double>&, std::vector<double>&)>&
        apply,
    double rel_tol = 1e-6, int max_iterations = 20000, std::uint64_t seed = 1);
double power_iteration_norm(
    std::size_t dim,
    const std::function<void(const std::vector<std::complex<double>>&,
                             std::vector<std::complex<double>>&)>& apply,
    double rel_tol = 1e-6, int max_iterations = 20000, std::uint64_t seed = 1);

}  // namespace dd
