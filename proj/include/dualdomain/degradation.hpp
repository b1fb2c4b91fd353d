#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dd {

enum class Tag { Reliable, Missing, ClippedLow, ClippedHigh, Quantized };

std::string to_string(Tag tag);
Tag tag_from_string(const std::string& s);

// What is known about one real value after degradation: the observed value
// and the interval the original is known to lie in (closed; +-inf allowed).
struct Record {
  Tag tag = Tag::Reliable;
  double observed = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

// Same for one TF coefficient, real and imaginary parts bounded separately.
struct TfRecord {
  Tag tag = Tag::Missing;
  std::complex<double> observed{0.0, 0.0};
  double re_lower = 0.0, re_upper = 0.0;
  double im_lower = 0.0, im_upper = 0.0;
};

// Mid-riser uniform quantizer: levels at +-(k + 1/2)·step·scale, no level at
// zero, clamped to magnitude (1 - step/2)·scale.
struct QuantizerSpec {
  int bits = 16;
  double step = 0.0;   // 2^(1-bits), before scaling
  double scale = 1.0;  // 1 in the time domain, data-dependent in TF
};

QuantizerSpec make_quantizer(int bits, double scale = 1.0);

struct QuantizedValue {
  double level = 0.0;
  double lower = 0.0;  // decision interval, outermost cells reach +-inf
  double upper = 0.0;
};

struct QuantizedComplex {
  std::complex<double> level{0.0, 0.0};
  double re_lower = 0.0, re_upper = 0.0;
  double im_lower = 0.0, im_upper = 0.0;
};

// Zeroes every entry outside `keep`; kept entries are tagged reliable.
std::pair<std::vector<double>, std::vector<Record>> apply_mask(
    std::span<const double> x, std::span<const std::size_t> keep);

// Hard clipping at +-theta with half-infinite intervals on saturated entries.
std::pair<std::vector<double>, std::vector<Record>> clip(
    std::span<const double> x, double theta);

QuantizedValue quantize(double u, const QuantizerSpec& spec);

// Real and imaginary parts quantized independently.
QuantizedComplex quantize_complex(std::complex<double> z,
                                  const QuantizerSpec& spec);

}  // namespace dd
