#include "dualdomain/codec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "dualdomain/feasible.hpp"
#include "dualdomain/parallel.hpp"
#include "dualdomain/rng.hpp"

namespace dd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

TfRecord missing_tf_record() {
  TfRecord r;
  r.tag = Tag::Missing;
  r.observed = {0.0, 0.0};
  r.re_lower = -kInf;
  r.re_upper = kInf;
  r.im_lower = -kInf;
  r.im_upper = kInf;
  return r;
}

void check_encode_spec(std::span<const double> y, const EncodeSpec& spec) {
  if (spec.frame == nullptr) throw std::invalid_argument("encode: no frame");
  if (y.size() != spec.frame->signal_length())
    throw std::invalid_argument("encode: signal length does not match frame");
  if (!(spec.p_time >= 0.0 && spec.p_time <= 1.0))
    throw std::invalid_argument("encode: p_time outside [0, 1]");
  if (!(spec.p_tf >= 0.0 && spec.p_tf <= 1.0))
    throw std::invalid_argument("encode: p_tf outside [0, 1]");
  const double peak = par::max_abs(y.data(), y.size());
  if (!(std::abs(peak - 1.0) <= 1e-9))
    throw std::invalid_argument("encode: input must be peak-normalized");
  make_quantizer(spec.bits_time);  // validates the bit depths
  make_quantizer(spec.bits_tf);
}

}  // namespace

FrameSpec payload_frame(const EncodedPayload& payload) {
  FrameSpec frame =
      make_tight_frame(payload.window_length, payload.hop, payload.channels,
                       payload.signal_length, payload.window_family);
  if (frame.signal_length() != payload.signal_length)
    throw std::invalid_argument("payload: inconsistent frame geometry");
  return frame;
}

EncodedPayload encode(std::span<const double> y, const EncodeSpec& spec) {
  check_encode_spec(y, spec);
  const FrameSpec& frame = *spec.frame;
  const std::size_t P = frame.signal_length();

  EncodedPayload payload;
  payload.window_length = frame.window_length();
  payload.hop = frame.hop();
  payload.channels = frame.channels();
  payload.signal_length = P;
  payload.window_family = frame.family();
  payload.seed = spec.seed;
  payload.p_time = spec.p_time;
  payload.p_tf = spec.p_tf;
  payload.bits_time = spec.bits_time;
  payload.bits_tf = spec.bits_tf;

  // Time domain: a seeded uniformly random subset, quantized.
  const std::size_t keep_count = static_cast<std::size_t>(
      std::llround(spec.p_time * static_cast<double>(P)));
  std::vector<std::size_t> order(P);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(spec.seed);
  rng.shuffle(order);
  std::vector<char> kept_sample(P, 0);
  for (std::size_t k = 0; k < keep_count; ++k) kept_sample[order[k]] = 1;

  const QuantizerSpec qt = make_quantizer(spec.bits_time);
  payload.time_records.resize(P);
  for (std::size_t i = 0; i < P; ++i) {
    Record& r = payload.time_records[i];
    if (kept_sample[i]) {
      const QuantizedValue qv = quantize(y[i], qt);
      r = {Tag::Quantized, qv.level, qv.lower, qv.upper};
    } else {
      r = {Tag::Missing, 0.0, -kInf, kInf};
    }
  }

  // TF domain: a partial, quantized view of the original signal's
  // coefficients.
  const std::vector<std::complex<double>> c = analyze(frame, y);
  TfEncoding tf = encode_tf(frame, c, spec.p_tf, spec.bits_tf);
  payload.tf_records = std::move(tf.records);
  payload.tf_scale = tf.tf_scale;
  payload.bits =
      static_cast<std::uint64_t>(keep_count) *
          static_cast<std::uint64_t>(spec.bits_time) +
      tf.parts * static_cast<std::uint64_t>(spec.bits_tf);
  return payload;
}

TfEncoding encode_tf(const FrameSpec& frame,
                     std::span<const std::complex<double>> c, double p_tf,
                     int bits_tf) {
  const std::size_t Q = frame.num_coefficients();
  const std::size_t M = frame.channels();
  if (c.size() != Q)
    throw std::invalid_argument("encode_tf: coefficient count mismatch");
  if (!(p_tf >= 0.0 && p_tf <= 1.0))
    throw std::invalid_argument("encode_tf: p_tf outside [0, 1]");
  if (bits_tf != 0) make_quantizer(bits_tf);

  // Largest-magnitude representatives first, greedily packed until the
  // part budget p_tf*Q is full (a pair costs two parts).
  struct Rep {
    double magnitude;
    std::size_t q;
  };
  std::vector<Rep> reps;
  reps.reserve(Q / 2 + frame.num_frames());
  for (std::size_t n = 0; n < frame.num_frames(); ++n)
    for (std::size_t m = 0; 2 * m <= M; ++m) {
      const std::size_t q = n * M + m;
      reps.push_back({std::abs(c[q]), q});
    }
  std::sort(reps.begin(), reps.end(), [](const Rep& a, const Rep& b) {
    if (a.magnitude != b.magnitude) return a.magnitude > b.magnitude;
    return a.q < b.q;
  });

  const std::uint64_t part_budget =
      static_cast<std::uint64_t>(std::llround(p_tf * static_cast<double>(Q)));
  std::vector<std::size_t> kept_reps;
  std::uint64_t parts_used = 0;
  double tf_scale = 0.0;
  for (const Rep& rep : reps) {
    const std::uint64_t cost = frame.is_self_conjugate(rep.q) ? 1 : 2;
    if (parts_used + cost > part_budget) continue;
    parts_used += cost;
    kept_reps.push_back(rep.q);
    tf_scale = std::max(tf_scale, std::abs(c[rep.q].real()));
    tf_scale = std::max(tf_scale, std::abs(c[rep.q].imag()));
  }

  TfEncoding out;
  out.records.assign(Q, missing_tf_record());
  if (bits_tf == 0) {
    // Exact transmission of the selected coefficients.
    for (std::size_t q : kept_reps) {
      TfRecord& r = out.records[q];
      r.tag = Tag::Reliable;
      const double re = c[q].real();
      const double im = frame.is_self_conjugate(q) ? 0.0 : c[q].imag();
      r.observed = {re, im};
      r.re_lower = r.re_upper = re;
      r.im_lower = r.im_upper = im;
      if (!frame.is_self_conjugate(q)) {
        TfRecord& partner = out.records[frame.partner(q)];
        partner = r;
        partner.observed = std::conj(r.observed);
        partner.im_lower = -im;
        partner.im_upper = -im;
      }
    }
    out.tf_scale = tf_scale;
    out.parts = parts_used;
    return out;
  }

  if (!kept_reps.empty() && tf_scale > 0.0) {
    const QuantizerSpec qf = make_quantizer(bits_tf, tf_scale);
    for (std::size_t q : kept_reps) {
      TfRecord& r = out.records[q];
      r.tag = Tag::Quantized;
      if (frame.is_self_conjugate(q)) {
        // The coefficient is real; its imaginary part is known exactly.
        const QuantizedValue qv = quantize(c[q].real(), qf);
        r.observed = {qv.level, 0.0};
        r.re_lower = qv.lower;
        r.re_upper = qv.upper;
        r.im_lower = 0.0;
        r.im_upper = 0.0;
      } else {
        const QuantizedComplex qc = quantize_complex(c[q], qf);
        r.observed = qc.level;
        r.re_lower = qc.re_lower;
        r.re_upper = qc.re_upper;
        r.im_lower = qc.im_lower;
        r.im_upper = qc.im_upper;
        TfRecord& partner = out.records[frame.partner(q)];
        partner.tag = Tag::Quantized;
        partner.observed = std::conj(qc.level);
        partner.re_lower = qc.re_lower;
        partner.re_upper = qc.re_upper;
        partner.im_lower = -qc.im_upper;
        partner.im_upper = -qc.im_lower;
      }
    }
  } else {
    parts_used = 0;  // nothing transmittable
  }
  out.tf_scale = tf_scale;
  out.parts = parts_used;
  return out;
}

SolveResult decode(const EncodedPayload& payload, Model model,
                   const SolverConfig& config, Algorithm algorithm) {
  const FrameSpec frame = payload_frame(payload);
  const std::size_t P = frame.signal_length();
  if (payload.time_records.size() != P ||
      payload.tf_records.size() != frame.num_coefficients())
    throw std::invalid_argument("payload: record counts do not match frame");

  std::vector<double> init(P);
  for (std::size_t i = 0; i < P; ++i)
    init[i] = payload.time_records[i].observed;

  ProblemSpec problem;
  problem.frame = &frame;
  problem.model = model;
  problem.mode = Mode::Consistent;
  problem.box_time = build_box(payload.time_records);
  problem.box_tf = build_tf_box(payload.tf_records);

  return algorithm == Algorithm::Tight ? solve_tight(problem, config, init)
                                       : solve_general(problem, config, init);
}

std::vector<double> tf_direct_baseline(const EncodedPayload& payload) {
  const FrameSpec frame = payload_frame(payload);
  const std::size_t Q = frame.num_coefficients();
  if (payload.tf_records.size() != Q)
    throw std::invalid_argument("payload: record counts do not match frame");
  std::vector<std::complex<double>> z(Q);
  for (std::size_t q = 0; q < Q; ++q) z[q] = payload.tf_records[q].observed;
  return synthesize(frame, z);
}

double sdr(std::span<const double> reference,
           std::span<const double> estimate) {
  if (reference.size() != estimate.size())
    throw std::invalid_argument("sdr: length mismatch");
  const double ref_sq = par::norm_sq(reference.data(), reference.size());
  if (ref_sq <= 0.0) throw std::invalid_argument("sdr: zero reference");
  const double* r = reference.data();
  const double* e = estimate.data();
  const double res_sq = par::map_sum(reference.size(), [&](std::ptrdiff_t i) {
    const double d = r[i] - e[i];
    return d * d;
  });
  if (res_sq == 0.0) return 300.0;
  const double value = 10.0 * std::log10(ref_sq / res_sq);
  return std::isfinite(value) ? value : 300.0;
}

}  // namespace dd
