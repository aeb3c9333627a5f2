#include "doctest.h"

#include "../support/fixtures.hpp"
#include "fpoly/json_io.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

using namespace fpoly;
using namespace fixtures;

namespace {

bool near(const LorentzVector& a, const LorentzVector& b, double tol) {
  return (a.coords() - b.coords()).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace

TEST_CASE("support numbers") {
  const double c = 2.0 + 2.0 * std::numbers::sqrt2;
  const double phi = std::acosh(c);
  // Oracle: foot of the perpendicular in the plane of the two normals.
  CHECK(support_number(1.0, 1.0, phi) == doctest::Approx(0.81047).epsilon(1e-5));
  CHECK(support_number(1.0, 1.0, phi) ==
        doctest::Approx((1.0 + 2.0 * std::numbers::sqrt2) / std::sqrt(11.0 + 8.0 * std::numbers::sqrt2)).epsilon(1e-14));
  CHECK(std::abs(support_number(1.0, std::cosh(0.7), 0.7)) < 1e-15);
  CHECK_THROWS_AS(support_number(1.0, 1.0, 0.0), ValidationError);

  const double step = 1e-6;
  const double dj = (support_number(1.2, 0.9 + step, 1.3) - support_number(1.2, 0.9 - step, 1.3)) / (2 * step);
  const double di = (support_number(1.2 + step, 0.9, 1.3) - support_number(1.2 - step, 0.9, 1.3)) / (2 * step);
  CHECK(dj == doctest::Approx(-1.0 / std::sinh(1.3)).epsilon(1e-8));
  CHECK(di == doctest::Approx(std::cosh(1.3) / std::sinh(1.3)).epsilon(1e-8));

  const double hp = support_number(1.0, 1.0, phi);
  CHECK(subface_support(hp, hp, std::numbers::pi / 4) == doctest::Approx(hp * (std::numbers::sqrt2 - 1)).epsilon(1e-14));
  CHECK(subface_support(hp, hp, std::numbers::pi / 4) == doctest::Approx(0.3357).epsilon(1e-4));
  CHECK(subface_support(0.4, 0.4, std::numbers::pi / 2) == doctest::Approx(0.4));
  CHECK_THROWS_AS(subface_support(1.0, 1.0, 0.0), ValidationError);
  CHECK_THROWS_AS(subface_support(1.0, 1.0, std::numbers::pi), ValidationError);
}

TEST_CASE("single-orbit octagon polyhedron") {
  const auto p = build(single_orbit(), {{1.0}});
  const auto& f = p.facet(0);
  REQUIRE(f.polygon.size() == 8);
  REQUIRE(f.edges.size() == 8);
  const double phi0 = octagon_phi();
  for (const auto& e : f.edges) {
    CHECK(e.neighbor == 0);
    CHECK(e.phi == doctest::Approx(phi0).epsilon(1e-12));
    CHECK(e.support == doctest::Approx(std::tanh(phi0 / 2)).epsilon(1e-12));
    CHECK(e.length == doctest::Approx(f.edges[0].length).epsilon(1e-12));
  }
  for (auto v : f.polygon) CHECK(planar::norm(v) == doctest::Approx(planar::norm(f.polygon[0])).epsilon(1e-12));
  CHECK(f.area == doctest::Approx(octagon_facet_area()).epsilon(1e-12));
  CHECK(f.area == doctest::Approx(16.0 * (3.0 - 2.0 * std::numbers::sqrt2)).epsilon(1e-12));
  // Half edge length equals the subface support of a vertex.
  CHECK(f.edges[0].length / 2 ==
        doctest::Approx(subface_support(f.edges[0].support, f.edges[0].support, std::numbers::pi / 4)).epsilon(1e-10));
  CHECK_FALSE(is_simple(p));

  // Vertices project radially onto the Dirichlet cell vertices.
  const auto cell = dirichlet_cell(*octagon(), {0, 0, 1});
  for (const auto& v : f.ambient_vertices()) {
    const auto q = to_hyperboloid(v);
    CHECK(std::any_of(cell.vertices.begin(), cell.vertices.end(), [&](const auto& w) { return near(q, w, 1e-9); }));
  }
}

TEST_CASE("d = 1 segment") {
  for (double ell : {0.5, 1.0, 2.3}) {
    for (double c : {0.3, 1.0, 4.0}) {
      const NormalFamily fam(boost(ell), {LorentzVector{0, 1}});
      const auto p = build(fam, {{c}});
      CHECK(p.facet(0).area == doctest::Approx(2.0 * c * std::tanh(ell / 2)).epsilon(1e-12));
      CHECK(p.facet(0).area == doctest::Approx(2.0 * c * (std::cosh(ell) - 1) / std::sinh(ell)).epsilon(1e-12));
      CHECK(is_simple(p));
      REQUIRE(p.facet(0).edges.size() == 2);
    }
  }
}

TEST_CASE("facet invariants on random multi-orbit polyhedra") {
  std::mt19937_64 rng(101);
  const auto& fam = three_orbits();
  for (int trial = 0; trial < 20; ++trial) {
    const auto h = random_support(rng, fam);
    const auto p = build(fam, h);
    for (const auto& f : p.facets()) {
      REQUIRE_FALSE(f.false_face());
      CHECK(f.area == doctest::Approx(planar::shoelace_area(f.polygon)).epsilon(1e-10));
      double half_sum = 0.0;
      for (const auto& e : f.edges) {
        CHECK(std::abs(e.support - support_number(h[f.rep_index], h[e.neighbor], e.phi)) < 1e-10);
        half_sum += 0.5 * e.support * e.length;
      }
      CHECK(std::abs(f.area - half_sum) < 1e-9);
      for (const auto& v : f.ambient_vertices()) CHECK(classify(v) == CausalClass::FutureTimelike);
      // Vertex distance data from the subface formula.
      const std::size_t m = f.polygon.size();
      for (std::size_t k = 0; k < m; ++k) {
        const auto& a = f.edges[k];
        const auto& b = f.edges[(k + 1) % m];
        const double omega = std::acos(std::clamp(planar::dot(a.direction, b.direction), -1.0, 1.0));
        const auto v = f.polygon[(k + 1) % m];
        const auto foot = a.direction * a.support;
        CHECK(planar::norm(v - foot) == doctest::Approx(std::abs(subface_support(b.support, a.support, omega))).epsilon(1e-9));
      }
    }

    // Edge reciprocity.
    for (const auto& f : p.facets()) {
      for (const auto& e : f.edges) {
        const SquareMatrix inv = lorentz_inverse(e.element.matrix);
        const auto& g = p.facet(e.neighbor);
        const auto it = std::find_if(g.edges.begin(), g.edges.end(), [&](const FacetEdge& x) {
          return x.neighbor == f.rep_index && (x.element.matrix - inv).cwiseAbs().maxCoeff() < 1e-8;
        });
        REQUIRE(it != g.edges.end());
        CHECK(it->length == doctest::Approx(e.length).epsilon(1e-9));
      }
    }

    // Scaling homogeneity of every vertex.
    const double lambda = 0.5 + trial * 0.1;
    const auto q = build(fam, lambda * h);
    CHECK(strongly_isomorphic(p, q));
    for (std::size_t i = 0; i < fam.size(); ++i) {
      const auto vp = p.facet(i).ambient_vertices();
      const auto vq = q.facet(i).ambient_vertices();
      REQUIRE(vp.size() == vq.size());
      for (std::size_t k = 0; k < vp.size(); ++k) CHECK(near(vp[k] * lambda, vq[k], 1e-10 * lambda));
    }
  }
}

TEST_CASE("equivariance under generators") {
  std::mt19937_64 rng(7);
  const auto& fam = three_orbits();
  const auto h = random_support(rng, fam);
  const auto p = build(fam, h);
  for (const auto& gen : octagon()->generators()) {
    std::vector<LorentzVector> moved = fam.reps();
    moved[1] = gen.apply(moved[1]);
    const NormalFamily fam2(octagon(), moved);
    const auto q = build(fam2, h);
    const auto vp = p.facet(1).ambient_vertices();
    const auto vq = q.facet(1).ambient_vertices();
    REQUIRE(vp.size() == vq.size());
    for (const auto& v : vp) {
      const auto w = gen.apply(v);
      CHECK(std::any_of(vq.begin(), vq.end(), [&](const auto& x) { return near(w, x, 1e-9 * w.time()); }));
    }
    CHECK(q.facet(1).area == doctest::Approx(p.facet(1).area).epsilon(1e-10));
  }
}

TEST_CASE("family validation and domain errors") {
  CHECK_THROWS_AS(NormalFamily(octagon(), {LorentzVector{0, 0, 2}}), ValidationError);
  CHECK_THROWS_AS(NormalFamily(octagon(), {LorentzVector{0, 0, 1}, LorentzVector{0, 0, 1}}), ValidationError);
  // Same orbit: the origin and its image under a generator.
  CHECK_THROWS_AS(NormalFamily(octagon(), {LorentzVector{0, 0, 1}, octagon()->generators()[2].apply({0, 0, 1})}),
                  ValidationError);
  CHECK_THROWS_AS(build(single_orbit(), {{0.0}}), ValidationError);
  CHECK_THROWS_AS(build(single_orbit(), {{1.0, 2.0}}), ValidationError);

  const NormalFamily two(octagon(), {LorentzVector{0, 0, 1}, polar_point(0.5, 0.0)});
  try {
    build(two, {{1.0, 3.0}});
    FAIL("expected EmptyFacet");
  } catch (const EmptyFacetError& e) {
    // The deeper plane of the second normal swallows the first facet.
    CHECK(e.index() == 0);
    CHECK(std::string(e.what()).find("EmptyFacet(0)") != std::string::npos);
  }
  BuildOptions allow;
  allow.allow_false_faces = true;
  const auto p = build(two, {{1.0, 3.0}}, allow);
  CHECK(p.facet(0).false_face());
  CHECK(p.facet(0).area == 0.0);
  CHECK(p.facet(1).area > 0.0);
  CHECK_FALSE(is_simple(p));
}

TEST_CASE("strong isomorphy and simplicity") {
  const auto& ref = simple_reference();
  CHECK(is_simple(ref));
  CHECK(strongly_isomorphic(ref, ref));
  CHECK(strongly_isomorphic(ref, build(ref.family(), 2.5 * ref.support())));
  CHECK_THROWS_AS(strongly_isomorphic(ref, build(single_orbit(), {{1.0}})), FanMismatchError);

  // Push one support number until some edge disappears.
  SupportVector h = ref.support();
  bool changed = false;
  for (int k = 0; k < 200 && !changed; ++k) {
    h.values[2] *= 1.01;
    try {
      changed = !strongly_isomorphic(ref, build(ref.family(), h));
    } catch (const NumericError&) {
      break;
    }
  }
  CHECK(changed);
}

TEST_CASE("perturbation to a simple polyhedron") {
  const auto single = build(single_orbit(), {{1.0}});
  CHECK_THROWS_AS(perturb_to_simple(single, 1e-3, 1), NumericError);

  const auto& ref = simple_reference();
  const auto same = perturb_to_simple(ref, 1e-3, 5);
  CHECK(same.support().values == ref.support().values);

  // Octagon with two orbits added, tangent to the same hyperboloid: not simple
  // when the extra normals are symmetric, simple after perturbation.
  const NormalFamily fam = single_orbit().extended({polar_point(1.0, 0.0), polar_point(1.0, std::numbers::pi / 4)});
  const auto sym = build(fam, {{1.0, 1.0, 1.0}});
  const auto p = perturb_to_simple(sym, 1e-2, 99);
  CHECK(is_simple(p));
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(p.support()[i] - 1.0) <= 1e-2);
  const auto p2 = perturb_to_simple(sym, 1e-2, 99);
  CHECK(p2.support().values == p.support().values);

  // A second, much smaller perturbation stays in the class.
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SupportVector h = p.support();
  for (double& v : h.values) v += 1e-3 * u(rng);
  CHECK(strongly_isomorphic(p, build(fam, h)));
}

TEST_CASE("Minkowski sums within a simple class") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    const auto hp = random_in_class(rng), hq = random_in_class(rng);
    const auto p = build(three_orbits(), hp), q = build(three_orbits(), hq);
    const auto s = build(three_orbits(), hp + hq);
    CHECK(strongly_isomorphic(p, s));
    for (std::size_t i = 0; i < 3; ++i) {
      const auto& a = p.facet(i).polygon;
      const auto& b = q.facet(i).polygon;
      const auto& c = s.facet(i).polygon;
      REQUIRE(a.size() == c.size());
      // Same fan: vertex k of the sum is the sum of vertices k, up to the rotation of the list.
      std::size_t shift = 0;
      for (; shift < b.size(); ++shift)
        if (p.facet(i).edges[0].word == q.facet(i).edges[shift].word &&
            p.facet(i).edges[0].neighbor == q.facet(i).edges[shift].neighbor)
          break;
      REQUIRE(shift < b.size());
      for (std::size_t k = 0; k < a.size(); ++k) {
        const auto sum = a[k] + b[(k + shift) % b.size()];
        bool found = false;
        for (const auto& v : c) found = found || planar::norm(v - sum) < 1e-9;
        CHECK(found);
      }
    }
  }
}

TEST_CASE("ball approximation") {
  const auto g = octagon();
  BallApproximation info;
  const auto p0 = approximate_ball(g, 10.0, &info);
  CHECK(info.level == 0);
  CHECK(p0.facets().size() == 1);
  CHECK(p0.facet(0).area == doctest::Approx(octagon_facet_area()).epsilon(1e-12));

  double prev = 0.0;
  std::size_t prev_n = 0;
  for (int level = 0; level <= 3; ++level) {
    const auto p = approximate_ball_level(g, level);
    CHECK(p.family().size() > prev_n);
    prev_n = p.family().size();
    // Coarser samples are a prefix of finer ones: nested bodies.
    if (level > 0) {
      const auto coarse = cell_sample_points(*g, level - 1);
      for (std::size_t k = 0; k < coarse.size(); ++k) CHECK(near(coarse[k], p.family().reps()[k], 0.0));
    }
    double covol = 0.0;
    for (const auto& f : p.facets()) {
      CHECK(std::abs(bilinear(f.plane.foot, f.plane.foot) + 1.0) < 1e-10);
      covol += f.area / 3.0;
    }
    CHECK(covol > prev);
    CHECK(covol < 4.0 * std::numbers::pi / 3.0);
    prev = covol;
  }

  const auto d1 = approximate_ball_level(boost(1.0), 3);
  CHECK(d1.family().size() == 8);
}

TEST_CASE("support function and polar dual") {
  const auto p = build(single_orbit(), {{1.0}});
  const LorentzVector o{0, 0, 1};
  CHECK(support_value(p, o) == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(polar_dual_radial(p, o) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK_THROWS_AS(support_value(p, {1, 0, 0}), ValidationError);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ang(0, 2 * std::numbers::pi), dist(0, 3.0), lam(0.2, 5.0);
  const auto& fam = three_orbits();
  const auto h = random_support(rng, fam);
  const auto q = build(fam, h);
  for (std::size_t i = 0; i < fam.size(); ++i) {
    CHECK(support_value(q, fam.reps()[i]) == doctest::Approx(-h[i]).epsilon(1e-10));
    CHECK(polar_dual_radial(q, fam.reps()[i]) == doctest::Approx(1.0 / h[i]).epsilon(1e-10));
  }
  for (int k = 0; k < 10; ++k) {
    const auto eta = polar_point(dist(rng), ang(rng));
    const double hv = support_value(q, eta);
    CHECK(hv < 0.0);
    const double l = lam(rng);
    CHECK(support_value(q, eta * l) == doctest::Approx(l * hv).epsilon(1e-12));
    for (const auto& gen : octagon()->generators())
      CHECK(support_value(q, gen.apply(eta)) == doctest::Approx(hv).epsilon(1e-9));
  }

  // Tangent body with all support numbers t: dual radial 1/t at facet normals.
  const auto t = build(single_orbit(), {{2.5}});
  CHECK(polar_dual_radial(t, o) == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("mesh export") {
  const auto p = build(single_orbit(), {{1.0}});
  const auto obj0 = export_mesh(p, 0, MeshFormat::Obj);
  CHECK(std::count(obj0.begin(), obj0.end(), 'f') >= 1);

  const auto obj = export_mesh(p, 1, MeshFormat::Obj);
  std::istringstream in(obj);
  std::string line;
  std::vector<std::vector<double>> verts;
  std::vector<std::vector<std::size_t>> faces;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "v") {
      std::vector<double> v;
      std::string tok;
      while (ls >> tok) v.push_back(std::strtod(tok.c_str(), nullptr));
      verts.push_back(v);
    } else if (tag == "f") {
      std::vector<std::size_t> f;
      std::size_t idx;
      while (ls >> idx) f.push_back(idx);
      faces.push_back(f);
    }
  }
  REQUIRE(faces.size() == 9);
  for (const auto& f : faces) CHECK(f.size() == 8);

  // Bit-exact round trip against the in-memory vertices.
  const auto ball = word_ball(*octagon(), 1);
  std::size_t k = 0;
  for (const auto& e : ball)
    for (const auto& v : p.facet(0).ambient_vertices()) {
      const auto w = e.apply(v);
      for (int c = 0; c < 3; ++c) CHECK(verts[k][static_cast<std::size_t>(c)] == w[c]);
      ++k;
    }

  // Each edge of the central octagon is an edge of one neighbour.
  auto vec = [&](std::size_t idx) { return LorentzVector(std::span<const double>(verts[idx - 1])); };
  const auto& centre = faces[0];
  for (std::size_t a = 0; a < 8; ++a) {
    const auto u = vec(centre[a]), v = vec(centre[(a + 1) % 8]);
    int shared = 0;
    for (std::size_t f = 1; f < faces.size(); ++f) {
      bool hu = false, hv = false;
      for (auto idx : faces[f]) {
        hu = hu || near(vec(idx), u, 1e-8);
        hv = hv || near(vec(idx), v, 1e-8);
      }
      if (hu && hv) ++shared;
    }
    CHECK(shared == 1);
  }

  const auto json = export_mesh(p, 0, MeshFormat::Json);
  const auto doc = Json::parse(json);
  CHECK(doc["faces"].size() == 1);
  CHECK(doc["faces"][0]["edges"].size() == 8);
  CHECK_THROWS_AS(export_mesh(p, -1, MeshFormat::Obj), ValidationError);
}
