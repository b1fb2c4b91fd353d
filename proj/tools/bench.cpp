// Timing comparison between the serial reference kernels and the
// production (FFT + OpenMP) ones, with a max-difference column as a
// cheap correctness cross-check.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dualdomain/feasible.hpp"
#include "dualdomain/frame.hpp"
#include "dualdomain/parallel.hpp"
#include "dualdomain/ref.hpp"
#include "dualdomain/rng.hpp"
#include "dualdomain/solver.hpp"

namespace {

double time_best_ms(int repeats, const std::function<void()>& fn) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0)
                              .count());
  }
  return best;
}

void print_row(const std::string& name, double serial_ms, double parallel_ms,
               double max_diff) {
  std::printf("%-16s %12.3f %12.3f %9.2fx %12.3e\n", name.c_str(), serial_ms,
              parallel_ms, serial_ms / parallel_ms, max_diff);
}

double max_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_diff(std::span<const std::complex<double>> a,
                std::span<const std::complex<double>> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kernel benchmark: serial reference vs production"};
  std::size_t signal_length = 16384;
  std::size_t window_length = 512;
  std::size_t hop = 256;
  std::size_t channels = 512;
  int repeats = 5;
  app.add_option("--signal-length", signal_length)->capture_default_str();
  app.add_option("--window-length", window_length)->capture_default_str();
  app.add_option("--hop", hop)->capture_default_str();
  app.add_option("--channels", channels)->capture_default_str();
  app.add_option("--repeats", repeats)
      ->check(CLI::Range(1, 1000))
      ->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  const dd::FrameSpec frame =
      dd::make_tight_frame(window_length, hop, channels, signal_length);
  const std::size_t P = frame.signal_length();
  const std::size_t Q = frame.num_coefficients();

  dd::Rng rng(7);
  std::vector<double> x(P);
  for (double& v : x) v = rng.uniform(-1.0, 1.0);
  std::vector<std::complex<double>> z(Q);
  for (auto& v : z) v = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};

  dd::BoxConstraint box;
  box.lower.resize(P);
  box.upper.resize(P);
  for (std::size_t i = 0; i < P; ++i) {
    const double a = rng.uniform(-1.0, 1.0);
    const double b = rng.uniform(-1.0, 1.0);
    box.lower[i] = std::min(a, b);
    box.upper[i] = std::max(a, b);
  }

  std::printf("P = %zu, Q = %zu, window %zu, hop %zu, channels %zu\n", P, Q,
              window_length, hop, channels);
  std::printf("%-16s %12s %12s %10s %12s\n", "kernel", "serial ms",
              "parallel ms", "speedup", "max |diff|");

  {
    std::vector<std::complex<double>> ref_out, out;
    const double serial =
        time_best_ms(repeats, [&] { ref_out = dd::ref::analyze(frame, x); });
    const double parallel =
        time_best_ms(repeats, [&] { out = dd::analyze(frame, x); });
    print_row("analyze", serial, parallel, max_diff(ref_out, out));
  }
  {
    std::vector<double> ref_out, out;
    const double serial =
        time_best_ms(repeats, [&] { ref_out = dd::ref::synthesize(frame, z); });
    const double parallel =
        time_best_ms(repeats, [&] { out = dd::synthesize(frame, z); });
    print_row("synthesize", serial, parallel, max_diff(ref_out, out));
  }
  {
    std::vector<double> ref_out(P), out(P);
    const double serial =
        time_best_ms(repeats, [&] { dd::ref::project(x, box, ref_out); });
    const double parallel =
        time_best_ms(repeats, [&] { dd::project(x, box, out); });
    print_row("project", serial, parallel, max_diff(ref_out, out));
  }
  {
    std::vector<std::complex<double>> ref_out(Q), out(Q);
    const double t = 0.125;
    const double serial = time_best_ms(
        repeats, [&] { dd::ref::soft_threshold(z, t, ref_out); });
    const double parallel =
        time_best_ms(repeats, [&] { dd::soft_threshold(z, t, out); });
    print_row("soft_threshold", serial, parallel, max_diff(ref_out, out));
  }
  {
    double ref_v = 0.0, v = 0.0;
    const double serial =
        time_best_ms(repeats, [&] { ref_v = dd::ref::norm_sq(x); });
    const double parallel = time_best_ms(
        repeats, [&] { v = dd::par::norm_sq(x.data(), x.size()); });
    print_row("norm_sq", serial, parallel, std::abs(ref_v - v));
  }
  return 0;
}
