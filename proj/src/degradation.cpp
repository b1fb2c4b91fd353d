#include "dualdomain/degradation.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dd {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::string to_string(Tag tag) {
  switch (tag) {
    case Tag::Reliable: return "reliable";
    case Tag::Missing: return "missing";
    case Tag::ClippedLow: return "clipped_low";
    case Tag::ClippedHigh: return "clipped_high";
    case Tag::Quantized: return "quantized";
  }
  return "reliable";
}

Tag tag_from_string(const std::string& s) {
  if (s == "reliable") return Tag::Reliable;
  if (s == "missing") return Tag::Missing;
  if (s == "clipped_low") return Tag::ClippedLow;
  if (s == "clipped_high") return Tag::ClippedHigh;
  if (s == "quantized") return Tag::Quantized;
  throw std::invalid_argument("unknown degradation tag: " + s);
}

QuantizerSpec make_quantizer(int bits, double scale) {
  if (bits < 1 || bits > 52)
    throw std::invalid_argument("make_quantizer: bits out of range");
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw std::invalid_argument("make_quantizer: scale must be positive");
  return QuantizerSpec{bits, std::ldexp(1.0, 1 - bits), scale};
}

std::pair<std::vector<double>, std::vector<Record>> apply_mask(
    std::span<const double> x, std::span<const std::size_t> keep) {
  std::vector<double> out(x.size(), 0.0);
  std::vector<Record> rec(x.size());
  for (std::size_t p = 0; p < x.size(); ++p)
    rec[p] = Record{Tag::Missing, 0.0, -kInf, kInf};
  for (std::size_t idx : keep) {
    if (idx >= x.size())
      throw std::out_of_range("apply_mask: keep index out of range");
    out[idx] = x[idx];
    rec[idx] = Record{Tag::Reliable, x[idx], x[idx], x[idx]};
  }
  return {std::move(out), std::move(rec)};
}

std::pair<std::vector<double>, std::vector<Record>> clip(
    std::span<const double> x, double theta) {
  if (!(theta > 0.0)) throw std::invalid_argument("clip: theta must be positive");
  std::vector<double> out(x.size());
  std::vector<Record> rec(x.size());
  for (std::size_t p = 0; p < x.size(); ++p) {
    const double v = x[p];
    if (v > theta) {
      out[p] = theta;
      rec[p] = Record{Tag::ClippedHigh, theta, theta, kInf};
    } else if (v < -theta) {
      out[p] = -theta;
      rec[p] = Record{Tag::ClippedLow, -theta, -kInf, -theta};
    } else {
      out[p] = v;
      rec[p] = Record{Tag::Reliable, v, v, v};
    }
  }
  return {std::move(out), std::move(rec)};
}

QuantizedValue quantize(double u, const QuantizerSpec& spec) {
  const double d = spec.step * spec.scale;
  const double sign = (u >= 0.0) ? 1.0 : -1.0;

  // Cell index, compared as an integer so the outermost cell is detected
  // exactly; the clamped level magnitude is (1 - step/2)·scale.
  const double cell_max = std::ldexp(1.0, spec.bits - 1) - 1.0;
  double cell = std::floor(std::abs(u) / d);
  const bool outermost = !(cell < cell_max);
  if (outermost) cell = cell_max;

  const double mag = (cell + 0.5) * d;
  const double level = sign * mag;

  QuantizedValue q;
  q.level = level;
  if (outermost) {
    q.lower = sign > 0.0 ? mag - d / 2.0 : -kInf;
    q.upper = sign > 0.0 ? kInf : -(mag - d / 2.0);
  } else {
    q.lower = level - d / 2.0;
    q.upper = level + d / 2.0;
  }
  return q;
}

QuantizedComplex quantize_complex(std::complex<double> z,
                                  const QuantizerSpec& spec) {
  if (!(spec.scale > 0.0))
    throw std::invalid_argument(
        "quantize_complex: scale must be positive (all-zero batch?)");
  const QuantizedValue re = quantize(z.real(), spec);
  const QuantizedValue im = quantize(z.imag(), spec);
  QuantizedComplex q;
  q.level = {re.level, im.level};
  q.re_lower = re.lower;
  q.re_upper = re.upper;
  q.im_lower = im.lower;
  q.im_upper = im.upper;
  return q;
}

}  // namespace dd
