#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "dualdomain/frame.hpp"
#include "dualdomain/rng.hpp"
#include "support/oracles.hpp"

using dd::FrameSpec;
using cvec = std::vector<std::complex<double>>;
using rvec = std::vector<double>;

namespace {

rvec random_signal(std::size_t n, std::uint64_t seed) {
  dd::Rng rng(seed);
  rvec x(n);
  for (double& v : x) v = rng.uniform(-1.0, 1.0);
  return x;
}

cvec random_coeffs(std::size_t n, std::uint64_t seed) {
  dd::Rng rng(seed);
  cvec z(n);
  for (auto& v : z) v = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
  return z;
}

double max_abs(const rvec& a, const rvec& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("tight frame construction pads and sizes") {
  const FrameSpec big = dd::make_tight_frame(2048, 1024, 2048, 44100);
  CHECK(big.signal_length() == 45056);
  CHECK(big.num_frames() == 44);
  CHECK(big.num_coefficients() == 2048 * 44);

  const FrameSpec tiny = dd::make_tight_frame(4, 2, 4, 8);
  CHECK(tiny.signal_length() == 8);
  CHECK(tiny.num_coefficients() == 16);

  CHECK_THROWS(dd::make_tight_frame(8, 4, 4, 16));  // channels < window
  CHECK_THROWS(dd::make_tight_frame(0, 4, 8, 16));
  CHECK_THROWS(dd::make_tight_frame(8, 0, 8, 16));
  CHECK_THROWS(dd::make_tight_frame(8, 4, 8, 0));
}

TEST_CASE("normalized window shifts sum to 1/channels") {
  const FrameSpec f = dd::make_tight_frame(8, 4, 8, 16);
  const std::size_t P = f.signal_length();
  for (std::size_t p = 0; p < P; ++p) {
    double total = 0.0;
    for (std::size_t n = 0; n < f.num_frames(); ++n) {
      const std::size_t off = (p + P - n * f.hop() % P) % P;
      if (off < f.window_length()) total += f.window()[off] * f.window()[off];
    }
    CHECK(total == doctest::Approx(1.0 / 8.0).epsilon(1e-12));
  }
}

TEST_CASE("analyze matches the dense operator on tiny specs") {
  const std::size_t geo[][4] = {{4, 2, 4, 8}, {8, 4, 8, 16}, {8, 4, 16, 24}};
  for (const auto& g : geo) {
    const FrameSpec f = dd::make_tight_frame(g[0], g[1], g[2], g[3]);
    const auto A = oracle::dense_analysis_matrix(f);

    rvec impulse(f.signal_length(), 0.0);
    impulse[0] = 1.0;
    for (const rvec& x :
         {impulse, random_signal(f.signal_length(), 7 + g[2])}) {
      const cvec got = dd::analyze(f, x);
      const cvec want = oracle::apply_dense(A, x);
      REQUIRE(got.size() == want.size());
      for (std::size_t q = 0; q < got.size(); ++q)
        CHECK(std::abs(got[q] - want[q]) <= 1e-12);
    }
  }
}

TEST_CASE("synthesize matches the dense adjoint on tiny specs") {
  const FrameSpec f = dd::make_tight_frame(8, 4, 8, 16);
  const auto A = oracle::dense_analysis_matrix(f);
  cvec z = random_coeffs(f.num_coefficients(), 21);
  rvec got = dd::synthesize(f, z);
  cvec want = oracle::apply_dense_adjoint(A, z);
  for (std::size_t p = 0; p < got.size(); ++p)
    CHECK(std::abs(got[p] - want[p].real()) <= 1e-12);

  // Conjugate-symmetrized input: the dense adjoint is then exactly real.
  for (std::size_t q = 0; q < z.size(); ++q) {
    const std::size_t qb = f.partner(q);
    if (qb > q)
      z[qb] = std::conj(z[q]);
    else if (qb == q)
      z[q].imag(0.0);
  }
  got = dd::synthesize(f, z);
  want = oracle::apply_dense_adjoint(A, z);
  for (std::size_t p = 0; p < got.size(); ++p) {
    CHECK(std::abs(got[p] - want[p].real()) <= 1e-12);
    CHECK(std::abs(want[p].imag()) <= 1e-12);
  }
}

TEST_CASE("zero maps to zero both ways") {
  const FrameSpec f = dd::make_tight_frame(8, 4, 8, 32);
  const cvec c = dd::analyze(f, rvec(f.signal_length(), 0.0));
  for (const auto& v : c) CHECK(std::abs(v) == 0.0);
  const rvec x = dd::synthesize(f, cvec(f.num_coefficients(), {0.0, 0.0}));
  for (double v : x) CHECK(v == 0.0);
}

TEST_CASE("length mismatches are rejected") {
  const FrameSpec f = dd::make_tight_frame(8, 4, 8, 16);
  CHECK_THROWS(dd::analyze(f, rvec(f.signal_length() + 1, 0.0)));
  CHECK_THROWS(dd::synthesize(f, cvec(f.num_coefficients() - 1)));
}

TEST_CASE("round trip, energy and adjointness across specs") {
  struct Geo {
    std::size_t wl, hop, ch, len;
    dd::Window fam;
  };
  const Geo geos[] = {{2048, 1024, 2048, 44100, dd::Window::Sine},
                      {4, 2, 4, 8, dd::Window::Sine},
                      {8, 4, 8, 16, dd::Window::Hann},
                      {16, 4, 16, 64, dd::Window::Sine},
                      {8, 8, 8, 32, dd::Window::Rectangular}};
  int seed = 100;
  for (const Geo& g : geos) {
    const FrameSpec f = dd::make_tight_frame(g.wl, g.hop, g.ch, g.len, g.fam);
    const std::size_t P = f.signal_length(), Q = f.num_coefficients();
    for (int t = 0; t < 3; ++t) {
      const rvec x = random_signal(P, ++seed);
      const cvec c = dd::analyze(f, x);
      const rvec back = dd::synthesize(f, c);

      double xinf = 0.0, x2 = 0.0, c2 = 0.0;
      for (double v : x) {
        xinf = std::max(xinf, std::abs(v));
        x2 += v * v;
      }
      for (const auto& v : c) c2 += std::norm(v);
      CHECK(max_abs(back, x) <= 1e-10 * xinf);
      CHECK(std::abs(c2 - x2) <= 1e-10 * x2);

      // <A x, z> vs <x, A* z>, real parts.
      const cvec z = random_coeffs(Q, 1000 + seed);
      const rvec az = dd::synthesize(f, z);
      std::complex<double> lhs{0.0, 0.0};
      double rhs = 0.0, z2 = 0.0;
      for (std::size_t q = 0; q < Q; ++q) {
        lhs += std::conj(c[q]) * z[q];
        z2 += std::norm(z[q]);
      }
      for (std::size_t p = 0; p < P; ++p) rhs += x[p] * az[p];
      CHECK(std::abs(lhs.real() - rhs) <= 1e-10 * std::sqrt(x2 * z2));
    }
  }
}

TEST_CASE("real input gives conjugate-symmetric coefficients") {
  const FrameSpec f = dd::make_tight_frame(8, 4, 8, 24);
  const cvec c = dd::analyze(f, random_signal(f.signal_length(), 5));
  for (std::size_t q = 0; q < c.size(); ++q) {
    const std::size_t qb = f.partner(q);
    CHECK(std::abs(c[qb] - std::conj(c[q])) <= 1e-12);
    if (f.is_self_conjugate(q)) CHECK(std::abs(c[q].imag()) <= 1e-12);
  }
}

TEST_CASE("operator norms match the block assignments") {
  const FrameSpec f = dd::make_tight_frame(16, 8, 16, 64);
  for (dd::Model m : {dd::Model::Analysis, dd::Model::Synthesis}) {
    CHECK(dd::operator_norm(f, dd::OperatorStack::TightPair, m) ==
          doctest::Approx(2.0).epsilon(1e-3));
    CHECK(dd::operator_norm(f, dd::OperatorStack::GeneralTriple, m) ==
          doctest::Approx(3.0).epsilon(1e-3));
  }

  // Identity alone.
  const double one = dd::power_iteration_norm(
      8, std::function<void(const rvec&, rvec&)>(
             [](const rvec& in, rvec& out) { out = in; }));
  CHECK(one == doctest::Approx(1.0).epsilon(1e-9));

  // Dense 2x2 with known spectrum {3, 1}.
  const double three = dd::power_iteration_norm(
      2, std::function<void(const rvec&, rvec&)>([](const rvec& in, rvec& out) {
        out[0] = 2.0 * in[0] + in[1];
        out[1] = in[0] + 2.0 * in[1];
      }));
  CHECK(three == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("weighted operator norm reflects the largest weight") {
  const FrameSpec f = dd::make_tight_frame(8, 4, 8, 16);
  std::vector<double> w(f.num_coefficients(), 1.0);
  w[3] = 2.0;  // max weight 2 -> W^2 contributes 4
  const double tight =
      dd::operator_norm(f, dd::OperatorStack::TightPair, dd::Model::Synthesis, w);
  CHECK(tight == doctest::Approx(5.0).epsilon(1e-3));  // W^2 + Id on z
}
