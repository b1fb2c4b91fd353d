#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dualdomain/degradation.hpp"
#include "dualdomain/frame.hpp"
#include "dualdomain/solver.hpp"

namespace dd {

// Bit-budget encoder settings: keep a random fraction of samples and the
// largest-magnitude fraction of TF coefficients, quantize both.
struct EncodeSpec {
  double p_time = 0.0;   // fraction of time samples kept, in [0, 1]
  double p_tf = 0.0;     // fraction of TF coefficients kept, in [0, 1]
  int bits_time = 16;    // bits per kept sample
  int bits_tf = 16;      // bits per kept coefficient part
  std::uint64_t seed = 0;
  const FrameSpec* frame = nullptr;
};

// Everything the decoder sees. A conjugate pair of coefficients is carried
// by its representative and costs two parts; a self-conjugate (purely real)
// coefficient costs one.
struct EncodedPayload {
  std::size_t window_length = 0;
  std::size_t hop = 0;
  std::size_t channels = 0;
  std::size_t signal_length = 0;  // P, already a multiple of hop
  Window window_family = Window::Sine;
  std::uint64_t seed = 0;
  double p_time = 0.0, p_tf = 0.0;
  int bits_time = 0, bits_tf = 0;
  double tf_scale = 0.0;  // quantizer scale for TF parts, side information
  std::uint64_t bits = 0;  // kept_samples*bits_time + kept_parts*bits_tf
  std::vector<Record> time_records;    // P entries
  std::vector<TfRecord> tf_records;    // Q entries, conjugate-mirrored
};

// The frame the payload was produced with.
FrameSpec payload_frame(const EncodedPayload& payload);

// Largest-magnitude selection over conjugate-pair representatives with
// mirroring to partners; a pair costs two parts, a self-conjugate one.
// bits_tf == 0 keeps the selected coefficients exactly instead of
// quantizing them.
struct TfEncoding {
  std::vector<TfRecord> records;  // Q entries
  double tf_scale = 0.0;
  std::uint64_t parts = 0;  // parts consumed out of round(p_tf * Q)
};
TfEncoding encode_tf(const FrameSpec& frame,
                     std::span<const std::complex<double>> c, double p_tf,
                     int bits_tf);

// `y` must be peak-normalized (max |y| = 1) and match the frame length.
EncodedPayload encode(std::span<const double> y, const EncodeSpec& spec);

// Reconstructs by constrained l1 minimization over the payload's boxes.
SolveResult decode(const EncodedPayload& payload, Model model,
                   const SolverConfig& config,
                   Algorithm algorithm = Algorithm::Tight);

// Single-domain baseline: synthesize the quantized kept coefficients,
// missing ones as zero.
std::vector<double> tf_direct_baseline(const EncodedPayload& payload);

// Signal-to-distortion ratio in dB, capped at +300 for a zero residual.
double sdr(std::span<const double> reference,
           std::span<const double> estimate);

}  // namespace dd
