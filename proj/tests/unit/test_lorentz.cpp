#include "doctest.h"

#include "fpoly/errors.hpp"
#include "fpoly/lorentz.hpp"

#include <cmath>
#include <random>

using namespace fpoly;

namespace {

LorentzVector random_unit(std::mt19937_64& rng, double max_dist = 3.0) {
  std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI), dist(0.0, max_dist);
  const double t = ang(rng);
  const double dir[2] = {std::cos(t), std::sin(t)};
  return hyperboloid_point(dir, dist(rng));
}

}  // namespace

TEST_CASE("bilinear form") {
  CHECK(bilinear({0, 0, 1}, {0, 0, 1}) == -1.0);
  CHECK(bilinear({1, 0, 1}, {1, 0, 1}) == 0.0);
  CHECK(bilinear({1, 2, 3}, {4, 5, 6}) == -4.0);
  CHECK_THROWS_AS(bilinear({1, 2, 3}, {1, 2}), ValidationError);

  std::mt19937_64 rng(7);
  std::normal_distribution<double> n(0.0, 3.0);
  for (int k = 0; k < 200; ++k) {
    LorentzVector x{n(rng), n(rng), n(rng)}, y{n(rng), n(rng), n(rng)};
    CHECK(bilinear(x, y) == bilinear(y, x));
  }
}

TEST_CASE("causal classification") {
  CHECK(classify({0, 0, 1}) == CausalClass::FutureTimelike);
  CHECK(classify({1, 0, 0}) == CausalClass::Spacelike);
  CHECK(classify({1, 0, -1}) == CausalClass::PastLightlike);
  CHECK(classify({1, 0, 1}) == CausalClass::FutureLightlike);
  CHECK(classify({0, 0, -2}) == CausalClass::PastTimelike);
  CHECK(classify({0, 0, 0}) == CausalClass::Zero);

  std::mt19937_64 rng(11);
  std::normal_distribution<double> n(0.0, 2.0);
  std::uniform_real_distribution<double> lam(1e-3, 1e3);
  for (int k = 0; k < 500; ++k) {
    LorentzVector x{n(rng), n(rng), n(rng)};
    CHECK(classify(x * lam(rng)) == classify(x));
  }
}

TEST_CASE("hyperbolic distance") {
  const LorentzVector o{0, 0, 1};
  CHECK(hyp_distance(o, o) == 0.0);
  const LorentzVector v{std::sinh(1.0), 0, std::cosh(1.0)};
  CHECK(hyp_distance(o, v) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(hyp_distance(o, {1, 0, 0}), ValidationError);
  CHECK_THROWS_AS(hyp_distance(o, {0, 0, 2}), ValidationError);

  std::mt19937_64 rng(3);
  for (int k = 0; k < 300; ++k) {
    const auto a = random_unit(rng), b = random_unit(rng), c = random_unit(rng);
    CHECK(hyp_distance(a, c) <= hyp_distance(a, b) + hyp_distance(b, c) + 1e-9);
  }
}

TEST_CASE("arccosh clamping") {
  CHECK(clamped_arccosh(1.0 - 5e-13) == 0.0);
  CHECK(clamped_arccosh(1.0) == 0.0);
  CHECK_THROWS_AS(clamped_arccosh(1.0 - 1e-9), NumericError);
}

TEST_CASE("projection onto the hyperboloid") {
  const auto a = to_hyperboloid({0, 0, 5});
  CHECK(a[2] == doctest::Approx(1.0));
  const auto b = to_hyperboloid({3, 0, 5});
  CHECK(b[0] == doctest::Approx(0.75));
  CHECK(b[2] == doctest::Approx(1.25));
  CHECK_THROWS_AS(to_hyperboloid({1, 0, 0}), ValidationError);

  std::mt19937_64 rng(5);
  for (int k = 0; k < 100; ++k) {
    const auto u = random_unit(rng);
    const auto w = to_hyperboloid(u * 3.7);
    CHECK((to_hyperboloid(w).coords() - w.coords()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((w.coords() - u.coords()).cwiseAbs().maxCoeff() < 1e-12 * std::max(1.0, u.time()));
  }
}

TEST_CASE("support planes") {
  const auto p = support_plane({0, 0, 1}, 1.0);
  CHECK(p.foot[2] == 1.0);
  REQUIRE(p.frame.size() == 2);
  CHECK(p.frame[0][0] == 1.0);
  CHECK(p.frame[1][1] == 1.0);
  const auto q = support_plane({0, 0, 1}, 2.5);
  CHECK(q.foot[2] == 2.5);
  CHECK_THROWS_AS(support_plane({0, 0, 1}, 0.0), ValidationError);
  CHECK_THROWS_AS(support_plane({0, 0, 2}, 1.0), ValidationError);

  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-3.0, 3.0), h(0.1, 4.0);
  for (int k = 0; k < 100; ++k) {
    const auto eta = random_unit(rng, 4.0);
    const auto sp = support_plane(eta, h(rng));
    CHECK(std::abs(bilinear(sp.normal, sp.normal) + 1.0) < 1e-12 * eta.time() * eta.time());
    for (int a = 0; a < 2; ++a) {
      CHECK(std::abs(bilinear(sp.frame[a], sp.normal)) < 1e-12 * eta.time() * eta.time());
      for (int b = 0; b < 2; ++b)
        CHECK(std::abs(bilinear(sp.frame[a], sp.frame[b]) - (a == b ? 1.0 : 0.0)) < 1e-12 * eta.time() * eta.time());
    }
    const double uv[2] = {u(rng), u(rng)};
    const auto x = sp.point(uv);
    CHECK(std::abs(bilinear(x, sp.normal) + sp.offset) < 1e-10 * eta.time() * eta.time());
    const auto back = sp.coordinates(x);
    CHECK(back[0] == doctest::Approx(uv[0]).epsilon(1e-9));
  }
}

TEST_CASE("frames are deterministic") {
  const LorentzVector eta = to_hyperboloid({0.3, -0.2, 1.4});
  const auto f1 = spacelike_frame(eta);
  const auto f2 = spacelike_frame(eta);
  for (std::size_t a = 0; a < f1.size(); ++a) CHECK((f1[a].coords() - f2[a].coords()).norm() == 0.0);
}
