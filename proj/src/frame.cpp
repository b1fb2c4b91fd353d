#include "dualdomain/frame.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dualdomain/parallel.hpp"
#include "dualdomain/rng.hpp"

namespace dd {

std::string to_string(Window family) {
  switch (family) {
    case Window::Sine: return "sine";
    case Window::Hann: return "hann";
    case Window::Rectangular: return "rectangular";
  }
  throw std::invalid_argument("unknown window family");
}

Window window_from_string(const std::string& s) {
  if (s == "sine") return Window::Sine;
  if (s == "hann") return Window::Hann;
  if (s == "rectangular") return Window::Rectangular;
  throw std::invalid_argument("unknown window family: " + s);
}

FrameSpec::FrameSpec(std::size_t window_length, std::size_t hop,
                     std::size_t channels, std::size_t signal_length,
                     std::vector<double> tight_window, Window family)
    : window_length_(window_length),
      hop_(hop),
      channels_(channels),
      signal_length_(signal_length),
      family_(family),
      window_(std::move(tight_window)),
      fft_(channels) {
  if (window_length == 0 || hop == 0 || channels == 0 || signal_length == 0)
    throw std::invalid_argument("FrameSpec: dimensions must be positive");
  if (channels < window_length)
    throw std::invalid_argument(
        "FrameSpec: channels must be >= window_length (painless case)");
  if (hop > window_length)
    throw std::invalid_argument("FrameSpec: hop must not exceed window_length");
  if (signal_length % hop != 0)
    throw std::invalid_argument("FrameSpec: hop must divide signal_length");
  if (signal_length < window_length)
    throw std::invalid_argument("FrameSpec: signal shorter than window");
  if (window_.size() != window_length)
    throw std::invalid_argument("FrameSpec: window size mismatch");
}

FrameSpec make_tight_frame(std::size_t window_length, std::size_t hop,
                           std::size_t channels, std::size_t signal_length,
                           Window family) {
  if (window_length == 0 || hop == 0 || channels == 0 || signal_length == 0)
    throw std::invalid_argument("make_tight_frame: dimensions must be positive");
  if (channels < window_length)
    throw std::invalid_argument(
        "make_tight_frame: channels must be >= window_length");
  if (hop > window_length)
    throw std::invalid_argument("make_tight_frame: hop must not exceed window");

  // Pad to a whole number of hops covering at least one window.
  std::size_t padded = (signal_length + hop - 1) / hop * hop;
  while (padded < window_length) padded += hop;

  std::vector<double> g(window_length);
  for (std::size_t l = 0; l < window_length; ++l) {
    const double x = static_cast<double>(l);
    const double n = static_cast<double>(window_length);
    switch (family) {
      case Window::Sine:
        g[l] = std::sin(std::numbers::pi * (x + 0.5) / n);
        break;
      case Window::Hann:
        g[l] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * x / n);
        break;
      case Window::Rectangular:
        g[l] = 1.0;
        break;
    }
  }

  // Diagonal of the frame operator, periodic in the hop; dividing by its
  // square root makes A*A = Id.
  std::vector<double> diag(hop, 0.0);
  for (std::size_t l = 0; l < window_length; ++l)
    diag[l % hop] += g[l] * g[l] * static_cast<double>(channels);
  for (std::size_t r = 0; r < hop; ++r)
    if (diag[r] <= 0.0)
      throw std::invalid_argument(
          "make_tight_frame: window does not cover every hop offset");
  for (std::size_t l = 0; l < window_length; ++l)
    g[l] /= std::sqrt(diag[l % hop]);

  return FrameSpec(window_length, hop, channels, padded, std::move(g), family);
}

std::vector<std::complex<double>> analyze(const FrameSpec& spec,
                                          std::span<const double> x) {
  const std::size_t L = spec.signal_length();
  if (x.size() != L)
    throw std::invalid_argument("analyze: signal length mismatch");
  const std::size_t M = spec.channels();
  const std::size_t a = spec.hop();
  const std::size_t Lw = spec.window_length();
  const std::size_t N = spec.num_frames();
  const std::vector<double>& g = spec.window();

  std::vector<std::complex<double>> out(spec.num_coefficients());
  const std::ptrdiff_t sn = static_cast<std::ptrdiff_t>(N);
#pragma omp parallel if (N * M > static_cast<std::size_t>(par::grain))
  {
    std::vector<std::complex<double>> buf(M);
#pragma omp for schedule(static)
    for (std::ptrdiff_t n = 0; n < sn; ++n) {
      const std::size_t base = static_cast<std::size_t>(n) * a;
      for (std::size_t l = 0; l < Lw; ++l) {
        std::size_t p = base + l;
        if (p >= L) p -= L;
        buf[l] = {x[p] * g[l], 0.0};
      }
      for (std::size_t l = Lw; l < M; ++l) buf[l] = {0.0, 0.0};
      spec.fft().forward(buf.data());
      std::complex<double>* dst = out.data() + static_cast<std::size_t>(n) * M;
      for (std::size_t m = 0; m < M; ++m) dst[m] = buf[m];
    }
  }
  return out;
}

std::vector<double> synthesize(const FrameSpec& spec,
                               std::span<const std::complex<double>> z) {
  const std::size_t Q = spec.num_coefficients();
  if (z.size() != Q)
    throw std::invalid_argument("synthesize: coefficient length mismatch");
  const std::size_t M = spec.channels();
  const std::size_t a = spec.hop();
  const std::size_t Lw = spec.window_length();
  const std::size_t N = spec.num_frames();
  const std::size_t L = spec.signal_length();
  const std::vector<double>& g = spec.window();

  // Per-frame windowed inverse DFTs, then a gather over output samples so
  // overlapping frames never race.
  std::vector<double> frames(N * Lw);
  const std::ptrdiff_t sn = static_cast<std::ptrdiff_t>(N);
#pragma omp parallel if (N * M > static_cast<std::size_t>(par::grain))
  {
    std::vector<std::complex<double>> buf(M);
#pragma omp for schedule(static)
    for (std::ptrdiff_t n = 0; n < sn; ++n) {
      const std::complex<double>* src =
          z.data() + static_cast<std::size_t>(n) * M;
      for (std::size_t m = 0; m < M; ++m) buf[m] = src[m];
      spec.fft().inverse(buf.data());
      double* dst = frames.data() + static_cast<std::size_t>(n) * Lw;
      for (std::size_t l = 0; l < Lw; ++l) dst[l] = buf[l].real() * g[l];
    }
  }

  std::vector<double> x(L);
  const std::size_t cover = (Lw + a - 1) / a;
  const std::ptrdiff_t sl = static_cast<std::ptrdiff_t>(L);
#pragma omp parallel for schedule(static) if (sl > par::grain)
  for (std::ptrdiff_t ps = 0; ps < sl; ++ps) {
    const std::size_t p = static_cast<std::size_t>(ps);
    const std::size_t n0 = p / a;
    double acc = 0.0;
    for (std::size_t j = 0; j < cover; ++j) {
      const std::size_t n = (n0 + N - j) % N;
      std::size_t l = p + L - n * a;
      if (l >= L) l -= L;
      if (l < Lw) acc += frames[n * Lw + l];
    }
    x[p] = acc;
  }
  return x;
}

namespace {

template <typename Vec>
double power_iteration_impl(
    std::size_t dim, const std::function<void(const Vec&, Vec&)>& apply,
    double rel_tol, int max_iterations, std::uint64_t seed) {
  if (dim == 0) throw std::invalid_argument("power iteration: empty domain");
  Rng rng(seed);
  Vec v(dim), av(dim);
  for (auto& e : v) e = rng.normal();

  auto norm_of = [](const Vec& u) {
    return std::sqrt(par::norm_sq(u.data(), u.size()));
  };

  double nv = norm_of(v);
  if (nv == 0.0) v[0] = typename Vec::value_type(1.0), nv = 1.0;
  for (auto& e : v) e /= nv;

  double lambda = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    apply(v, av);
    const double na = norm_of(av);
    if (na == 0.0) return 0.0;
    const double prev = lambda;
    lambda = na;  // Rayleigh estimate for a PSD self-adjoint map, ||v|| = 1
    for (std::size_t i = 0; i < dim; ++i) v[i] = av[i] / na;
    if (it > 0 && std::abs(lambda - prev) <= rel_tol * lambda) break;
  }
  return lambda;
}

}  // namespace

double power_iteration_norm(
    std::size_t dim,
    const std::function<void(const std::vector<double>&, std::vector<double>&)>&
        apply,
    double rel_tol, int max_iterations, std::uint64_t seed) {
  return power_iteration_impl<std::vector<double>>(dim, apply, rel_tol,
                                                   max_iterations, seed);
}

double power_iteration_norm(
    std::size_t dim,
    const std::function<void(const std::vector<std::complex<double>>&,
                             std::vector<std::complex<double>>&)>& apply,
    double rel_tol, int max_iterations, std::uint64_t seed) {
  return power_iteration_impl<std::vector<std::complex<double>>>(
      dim, apply, rel_tol, max_iterations, seed);
}

double operator_norm(const FrameSpec& spec, OperatorStack stack, Model model,
                     std::span<const double> weights, double rel_tol) {
  const std::size_t Q = spec.num_coefficients();
  if (!weights.empty() && weights.size() != Q)
    throw std::invalid_argument("operator_norm: weight length mismatch");

  // w2p1[q] = W[q]^2 + 1 covers both blocks sharing the transform.
  auto w2p1 = [&](std::size_t q) {
    const double w = weights.empty() ? 1.0 : weights[q];
    return w * w + 1.0;
  };

  if (model == Model::Analysis) {
    const std::size_t P = spec.signal_length();
    std::function<void(const std::vector<double>&, std::vector<double>&)> apply =
        [&](const std::vector<double>& v, std::vector<double>& out) {
          auto c = analyze(spec, v);
          for (std::size_t q = 0; q < Q; ++q) c[q] *= w2p1(q);
          out = synthesize(spec, c);
          if (stack == OperatorStack::GeneralTriple)
            for (std::size_t p = 0; p < P; ++p) out[p] += v[p];
        };
    return power_iteration_norm(P, apply, rel_tol);
  }

  std::function<void(const std::vector<std::complex<double>>&,
                     std::vector<std::complex<double>>&)>
      apply = [&](const std::vector<std::complex<double>>& v,
                  std::vector<std::complex<double>>& out) {
        out.resize(Q);
        for (std::size_t q = 0; q < Q; ++q) out[q] = v[q] * w2p1(q);
        if (stack == OperatorStack::GeneralTriple) {
          auto x = synthesize(spec, v);
          auto c = analyze(spec, x);
          for (std::size_t q = 0; q < Q; ++q) out[q] += c[q];
        }
      };
  return power_iteration_norm(Q, apply, rel_tol);
}

}  // namespace dd
