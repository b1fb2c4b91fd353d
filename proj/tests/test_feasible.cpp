#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "dualdomain/feasible.hpp"
#include "dualdomain/rng.hpp"
#include "support/oracles.hpp"

using dd::BoxConstraint;
using dd::Record;
using dd::Tag;
using cplx = std::complex<double>;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> project(const std::vector<double>& v,
                            const BoxConstraint& box) {
  std::vector<double> out(v.size());
  dd::project(v, box, out);
  return out;
}
}  // namespace

TEST_CASE("boxes mirror the record intervals") {
  std::vector<Record> reliable{{Tag::Reliable, 0.3, 0.3, 0.3},
                               {Tag::Reliable, -1.0, -1.0, -1.0}};
  const BoxConstraint degenerate = dd::build_box(reliable);
  CHECK(degenerate.lower == std::vector<double>{0.3, -1.0});
  CHECK(degenerate.upper == std::vector<double>{0.3, -1.0});

  std::vector<Record> missing{{Tag::Missing, 0.0, -kInf, kInf}};
  const BoxConstraint free_box = dd::build_box(missing);
  CHECK(free_box.lower[0] == -kInf);
  CHECK(free_box.upper[0] == kInf);

  std::vector<Record> clipped{{Tag::ClippedHigh, 0.8, 0.8, kInf}};
  const BoxConstraint clip_box = dd::build_box(clipped);
  CHECK(clip_box.lower[0] == 0.8);
  CHECK(clip_box.upper[0] == kInf);

  std::vector<Record> bad{{Tag::Quantized, 0.0, 1.0, -1.0}};
  CHECK_THROWS(dd::build_box(bad));
}

TEST_CASE("tf boxes carry separate real and imaginary intervals") {
  std::vector<dd::TfRecord> recs(2);
  recs[0] = {Tag::Quantized, {0.25, -0.25}, 0.0, 0.5, -0.5, 0.0};
  recs[1] = {Tag::Missing, {0.0, 0.0}, -kInf, kInf, -kInf, kInf};
  const dd::TfBoxConstraint box = dd::build_tf_box(recs);
  CHECK(box.re_lower[0] == 0.0);
  CHECK(box.re_upper[0] == 0.5);
  CHECK(box.im_lower[0] == -0.5);
  CHECK(box.im_upper[0] == 0.0);
  CHECK(box.re_upper[1] == kInf);

  std::vector<cplx> z{{2.0, 3.0}, {1.0, 1.0}};
  std::vector<cplx> out(2);
  dd::project(std::span<const cplx>(z), box, out);
  CHECK(out[0] == cplx{0.5, 0.0});
  CHECK(out[1] == z[1]);
}

TEST_CASE("projection clamps entrywise") {
  BoxConstraint box{{0.0}, {1.0}};
  CHECK(project({0.4}, box) == std::vector<double>{0.4});
  CHECK(project({2.0}, box) == std::vector<double>{1.0});
  CHECK(project({-3.0}, box) == std::vector<double>{0.0});

  // Complex 2+3i against Re [0,1], Im [-1,1].
  dd::TfBoxConstraint tf{{0.0}, {1.0}, {-1.0}, {1.0}};
  std::vector<cplx> z{{2.0, 3.0}}, out(1);
  dd::project(std::span<const cplx>(z), tf, out);
  CHECK(out[0] == cplx{1.0, 1.0});

  std::vector<double> mismatched(2, 0.0);
  CHECK_THROWS(dd::project(std::vector<double>{1.0, 2.0}, box, mismatched));
}

TEST_CASE("projection is idempotent, feasible and nonexpansive") {
  dd::Rng rng(314);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 1 + rng.below(8);
    BoxConstraint box;
    std::vector<double> u(n), v(n);
    for (std::size_t i = 0; i < n; ++i) {
      double lo = rng.uniform(-2.0, 2.0), hi = rng.uniform(-2.0, 2.0);
      if (lo > hi) std::swap(lo, hi);
      if (rng.below(8) == 0) lo = -kInf;
      if (rng.below(8) == 0) hi = kInf;
      box.lower.push_back(lo);
      box.upper.push_back(hi);
      u[i] = rng.uniform(-4.0, 4.0);
      v[i] = rng.uniform(-4.0, 4.0);
    }
    const auto pu = project(u, box), pv = project(v, box);
    CHECK(project(pu, box) == pu);
    double duv = 0.0, dpup = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(pu[i] >= box.lower[i]);
      CHECK(pu[i] <= box.upper[i]);
      duv += (u[i] - v[i]) * (u[i] - v[i]);
      dpup += (pu[i] - pv[i]) * (pu[i] - pv[i]);
    }
    CHECK(dpup <= duv + 1e-15);
  }
}

TEST_CASE("projection matches the brute quadratic-program oracle") {
  dd::Rng rng(2718);
  for (int t = 0; t < 400; ++t) {
    const std::size_t n = 1 + rng.below(8);
    BoxConstraint box;
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
      double lo = rng.uniform(-3.0, 3.0), hi = rng.uniform(-3.0, 3.0);
      if (lo > hi) std::swap(lo, hi);
      box.lower.push_back(lo);
      box.upper.push_back(hi);
      v[i] = rng.uniform(-5.0, 5.0);
    }
    const auto fast = project(v, box);
    const auto slow = oracle::box_qp(v, box);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(std::abs(fast[i] - slow[i]) <= 1e-8);
  }
}

TEST_CASE("distance is zero inside and euclidean outside") {
  BoxConstraint box{{0.0, 0.0}, {1.0, 1.0}};
  CHECK(dd::distance(std::vector<double>{0.5, 0.5}, box) == 0.0);
  CHECK(dd::distance(std::vector<double>{2.0, 1.0}, box) ==
        doctest::Approx(1.0));
  CHECK(dd::distance(std::vector<double>{2.0, -1.0}, box) ==
        doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("prox of the distance steps toward the projection") {
  BoxConstraint box{{0.0}, {1.0}};
  std::vector<double> out(1);

  dd::prox_distance(std::vector<double>{0.7}, box, 0.5, out);
  CHECK(out[0] == 0.7);  // already inside

  dd::prox_distance(std::vector<double>{3.0}, box, 0.5, out);
  CHECK(out[0] == doctest::Approx(2.5).epsilon(1e-14));

  dd::prox_distance(std::vector<double>{3.0}, box, 2.0, out);
  CHECK(out[0] == 1.0);  // tau >= dist gives the projection

  // Continuity across dist == tau.
  const double dist = 2.0;
  std::vector<double> lo_side(1), hi_side(1);
  dd::prox_distance(std::vector<double>{3.0}, box, dist * (1.0 - 1e-12),
                    lo_side);
  dd::prox_distance(std::vector<double>{3.0}, box, dist * (1.0 + 1e-12),
                    hi_side);
  CHECK(std::abs(lo_side[0] - hi_side[0]) <= 1e-10);

  CHECK_THROWS(dd::prox_distance(std::vector<double>{3.0}, box, -1.0, out));
}

TEST_CASE("complex prox of the distance") {
  dd::TfBoxConstraint tf{{0.0}, {1.0}, {0.0}, {1.0}};
  std::vector<cplx> out(1);

  std::vector<cplx> inside{{0.5, 0.5}};
  dd::prox_distance(std::span<const cplx>(inside), tf, 0.3, out);
  CHECK(out[0] == inside[0]);

  // dist((4,1),(1,1)) = 3; a step of 1.5 lands halfway.
  std::vector<cplx> far{{4.0, 1.0}};
  dd::prox_distance(std::span<const cplx>(far), tf, 1.5, out);
  CHECK(out[0].real() == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(out[0].imag() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("empty boxes mean unconstrained") {
  const BoxConstraint none;
  std::vector<double> v{3.0, -4.0}, out(2);
  dd::project(v, none, out);
  CHECK(out == v);
  CHECK(dd::distance(v, none) == 0.0);
  dd::prox_distance(v, none, 0.5, out);
  CHECK(out == v);
}
