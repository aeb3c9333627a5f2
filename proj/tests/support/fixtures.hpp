#pragma once

// Shared groups, families and seeded generators for the test binaries.

#include "fpoly/errors.hpp"
#include "fpoly/polyhedra.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <random>

namespace fixtures {

using namespace fpoly;

inline double octagon_phi() { return std::acosh(5.0 + 4.0 * std::numbers::sqrt2); }

/// 16(3 - 2 sqrt 2): regular octagon of inradius tanh(phi0/2), area 8 r^2 tan(pi/8).
inline double octagon_facet_area() {
  const double r = std::tanh(octagon_phi() / 2.0);
  return 8.0 * r * r * std::tan(std::numbers::pi / 8.0);
}

inline std::shared_ptr<const FuchsianGroup> octagon() {
  static const auto g = std::make_shared<const FuchsianGroup>(octagon_group());
  return g;
}

inline std::shared_ptr<const FuchsianGroup> boost(double ell) {
  return std::make_shared<const FuchsianGroup>(boost_group(ell));
}

inline LorentzVector polar_point(double dist, double angle) {
  const double dir[2] = {std::cos(angle), std::sin(angle)};
  return hyperboloid_point(dir, dist);
}

inline NormalFamily single_orbit() { return NormalFamily(octagon(), {LorentzVector{0, 0, 1}}); }

/// Three orbits of normals: the origin and two interior points of its Dirichlet cell.
inline const NormalFamily& three_orbits() {
  static const NormalFamily f(octagon(), {LorentzVector{0, 0, 1}, polar_point(1.0, 0.3), polar_point(1.4, 2.2)});
  return f;
}

/// Support vectors near (1,1,1) accepted only when the build succeeds.
inline SupportVector random_support(std::mt19937_64& rng, const NormalFamily& f, double lo = 0.7, double hi = 1.4) {
  std::uniform_real_distribution<double> u(lo, hi);
  while (true) {
    SupportVector h;
    for (std::size_t i = 0; i < f.size(); ++i) h.values.push_back(u(rng));
    try {
      build(f, h);
      return h;
    } catch (const NumericError&) {
    }
  }
}

/// Simple reference polyhedron of the three-orbit family.
inline const FuchsianPolyhedron& simple_reference() {
  static const FuchsianPolyhedron p = [] {
    std::mt19937_64 rng(2024);
    while (true) {
      auto h = random_support(rng, three_orbits(), 0.9, 1.1);
      auto q = build(three_orbits(), h);
      if (is_simple(q)) return q;
    }
  }();
  return p;
}

/// Support vectors strongly isomorphic to the simple reference.
inline SupportVector random_in_class(std::mt19937_64& rng, double spread = 0.02) {
  const auto& ref = simple_reference();
  std::uniform_real_distribution<double> u(-spread, spread), s(0.5, 2.0);
  while (true) {
    const double scale = s(rng);
    SupportVector h = ref.support();
    for (double& v : h.values) v = scale * (v + u(rng));
    try {
      auto q = build(ref.family(), h);
      if (q.fan_signature() == ref.fan_signature() && is_simple(q)) return h;
    } catch (const NumericError&) {
    }
  }
}

}  // namespace fixtures
