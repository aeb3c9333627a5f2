#include "fpoly/fuchsian.hpp"

#include "fpoly/errors.hpp"
#include "fpoly/planar.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace fpoly {

SquareMatrix lorentz_inverse(const SquareMatrix& m) {
  const auto n = m.rows();
  SquareMatrix j = SquareMatrix::Identity(n, n);
  j(n - 1, n - 1) = -1.0;
  return j * m.transpose() * j;
}

namespace {

SquareMatrix form_matrix(int n) {
  SquareMatrix j = SquareMatrix::Identity(n, n);
  j(n - 1, n - 1) = -1.0;
  return j;
}

double max_abs_diff(const SquareMatrix& a, const SquareMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

// Buckets orbit points by their distance to a reference point, so lookups only
// compare against points on (nearly) the same sphere.
class PointIndex {
public:
  explicit PointIndex(LorentzVector reference) : ref_(std::move(reference)) {}

  bool contains(const LorentzVector& p) const {
    const double key = -bilinear_unchecked(ref_, p);
    const double w = 1e-7 * std::max(1.0, key);
    for (auto it = buckets_.lower_bound(key - w); it != buckets_.end() && it->first <= key + w; ++it) {
      if ((it->second.coords() - p.coords()).cwiseAbs().maxCoeff() <= tol::kOrbitDedup * std::max(1.0, key))
        return true;
    }
    return false;
  }

  void insert(const LorentzVector& p) { buckets_.emplace(-bilinear_unchecked(ref_, p), p); }

private:
  LorentzVector ref_;
  std::multimap<double, LorentzVector> buckets_;
};

}  // namespace

Isometry Isometry::identity(int dim) { return {SquareMatrix::Identity(dim + 1, dim + 1), {}}; }

Isometry compose(const Isometry& a, const Isometry& b) {
  Isometry out{a.matrix * b.matrix, a.word};
  out.word.insert(out.word.end(), b.word.begin(), b.word.end());
  if (static_cast<int>(out.word.size()) > tol::kRenormalizeWordLength) out.matrix = renormalize(out.matrix);
  return out;
}

double form_residual(const SquareMatrix& m) {
  const SquareMatrix j = form_matrix(static_cast<int>(m.rows()));
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return max_abs_diff(m.transpose() * j * m, j) / (scale * scale);
}

bool is_isometry(const SquareMatrix& m, double tolerance) {
  if (m.rows() != m.cols() || m.rows() < 2) return false;
  const auto n = m.rows();
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return form_residual(m) <= tolerance && m(n - 1, n - 1) > 0.0 &&
         std::abs(m.determinant() - 1.0) <= tolerance * std::pow(scale, static_cast<double>(n));
}

SquareMatrix renormalize(const SquareMatrix& m) {
  // For an isometry J M^T J M = I; one Newton-Schulz step for the J-orthogonal
  // group. Below 1e-12 the relative residual is rounding noise of M^T J M
  // itself and a correction would only add drift.
  if (form_residual(m) < 1e-12) return m;
  const auto n = m.rows();
  const SquareMatrix x = lorentz_inverse(m) * m;
  // The iteration only contracts near the group; huge matrices are left alone.
  if (max_abs_diff(x, SquareMatrix::Identity(n, n)) > 0.1) return m;
  SquareMatrix corrected = 0.5 * m * (3.0 * SquareMatrix::Identity(n, n) - x);
  return form_residual(corrected) < form_residual(m) ? corrected : m;
}

SquareMatrix rotation(int dim, double theta) {
  SquareMatrix r = SquareMatrix::Identity(dim + 1, dim + 1);
  if (dim < 2) return r;
  r(0, 0) = std::cos(theta);
  r(0, 1) = -std::sin(theta);
  r(1, 0) = std::sin(theta);
  r(1, 1) = std::cos(theta);
  return r;
}

SquareMatrix boost(int dim, double t) {
  SquareMatrix b = SquareMatrix::Identity(dim + 1, dim + 1);
  b(0, 0) = std::cosh(t);
  b(0, dim) = std::sinh(t);
  b(dim, 0) = std::sinh(t);
  b(dim, dim) = std::cosh(t);
  return b;
}

double translation_length(const SquareMatrix& m) {
  const double tr = m.trace();
  const auto n = m.rows();
  // Hyperbolic elements: eigenvalues e^{+-l} plus d-1 unimodular ones.
  if (n == 2) return clamped_arccosh(tr / 2.0);
  if (n == 3) return clamped_arccosh((tr - 1.0) / 2.0);
  throw ValidationError("translation_length: only implemented for d <= 2");
}

FuchsianGroup::FuchsianGroup(int dim, std::vector<SquareMatrix> generators, std::string label,
                             std::optional<double> quotient_volume)
    : dim_(dim), label_(std::move(label)), quotient_volume_(quotient_volume) {
  if (dim < 1 || dim + 1 > kMaxCoords) throw ValidationError("group dimension out of range: " + std::to_string(dim));
  if (generators.empty()) throw ValidationError("group '" + label_ + "' has no generators");
  for (std::size_t k = 0; k < generators.size(); ++k) {
    const auto& m = generators[k];
    if (m.rows() != dim + 1 || m.cols() != dim + 1)
      throw ValidationError("generator " + std::to_string(k) + " is not a " + std::to_string(dim + 1) + "x" +
                            std::to_string(dim + 1) + " matrix");
    if (!is_isometry(m))
      throw ValidationError("generator " + std::to_string(k) +
                            " is not an orientation- and time-preserving isometry (form residual " +
                            std::to_string(form_residual(m)) + ")");
  }
  for (std::size_t k = 0; k < generators.size(); ++k)
    generators_.push_back({generators[k], {static_cast<int>(k)}});

  // Close under inverses: append missing ones.
  const std::size_t listed = generators_.size();
  inverse_.assign(listed, -1);
  for (std::size_t k = 0; k < listed; ++k) {
    if (inverse_[k] >= 0) continue;
    const SquareMatrix inv = lorentz_inverse(generators_[k].matrix);
    for (std::size_t l = 0; l < generators_.size(); ++l) {
      if (max_abs_diff(generators_[l].matrix, inv) < tol::kMatrixDedup * std::max(1.0, inv.cwiseAbs().maxCoeff())) {
        inverse_[k] = static_cast<int>(l);
        if (l < inverse_.size()) inverse_[l] = static_cast<int>(k);
        break;
      }
    }
    if (inverse_[k] < 0) {
      const int idx = static_cast<int>(generators_.size());
      generators_.push_back({inv, {idx}});
      inverse_.push_back(static_cast<int>(k));
      inverse_[k] = idx;
    }
  }
  if (quotient_volume_ && !(*quotient_volume_ > 0.0))
    throw ValidationError("quotient volume must be positive");
}

double FuchsianGroup::quotient_volume() const {
  if (quotient_volume_) return *quotient_volume_;
  return dirichlet_cell(*this, LorentzVector::origin(dim_)).volume;
}

double FuchsianGroup::min_generator_displacement(const LorentzVector& x) const {
  const LorentzVector b = to_hyperboloid(x);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& g : generators_) best = std::min(best, clamped_arccosh(-bilinear(b, g.apply(b))));
  return best;
}

double FuchsianGroup::max_generator_displacement(const LorentzVector& x) const {
  const LorentzVector b = to_hyperboloid(x);
  double worst = 0.0;
  for (const auto& g : generators_) worst = std::max(worst, clamped_arccosh(-bilinear(b, g.apply(b))));
  return worst;
}

FuchsianGroup boost_group(double ell) {
  if (!(ell > 0.0)) throw ValidationError("boost group needs a positive translation length, got " + std::to_string(ell));
  return FuchsianGroup(1, {boost(1, ell)}, "boost:" + std::to_string(ell), ell);
}

double octagon_translation_cosh() { return 5.0 + 4.0 * std::numbers::sqrt2; }

FuchsianGroup octagon_group() {
  const double phi0 = std::acosh(octagon_translation_cosh());
  std::vector<SquareMatrix> gens;
  for (int k = 0; k < 4; ++k) {
    const double theta = k * std::numbers::pi / 4.0;
    const SquareMatrix a = rotation(2, theta) * boost(2, phi0) * rotation(2, -theta);
    gens.push_back(a);
    gens.push_back(lorentz_inverse(a));
  }
  // Gauss-Bonnet: area of a genus-2 surface is 4 pi.
  return FuchsianGroup(2, std::move(gens), "octagon", 4.0 * std::numbers::pi);
}

SquareMatrix octagon_relator(const FuchsianGroup& g) {
  const auto& gen = g.generators();
  auto a = [&](int k) -> const SquareMatrix& { return gen[static_cast<std::size_t>(2 * k)].matrix; };
  auto ai = [&](int k) -> const SquareMatrix& { return gen[static_cast<std::size_t>(2 * k + 1)].matrix; };
  return a(0) * ai(1) * a(2) * ai(3) * ai(0) * a(1) * ai(2) * a(3);
}

std::vector<Isometry> word_ball(const FuchsianGroup& g, int max_length) {
  if (max_length < 0) throw ValidationError("word_ball: negative length");
  std::vector<Isometry> all{Isometry::identity(g.dim())};
  std::multimap<double, std::size_t> index{{all.front().origin_cosh(), 0}};
  std::vector<std::size_t> frontier{0};
  for (int len = 1; len <= max_length; ++len) {
    std::vector<std::size_t> next;
    for (std::size_t f : frontier) {
      for (const auto& gen : g.generators()) {
        Isometry cand = compose(all[f], gen);
        const double key = cand.origin_cosh();
        const double w = 1e-7 * std::max(1.0, key);
        bool dup = false;
        for (auto it = index.lower_bound(key - w); it != index.end() && it->first <= key + w; ++it) {
          if (max_abs_diff(all[it->second].matrix, cand.matrix) < tol::kMatrixDedup * std::max(1.0, key)) {
            dup = true;
            break;
          }
        }
        if (dup) continue;
        index.emplace(key, all.size());
        next.push_back(all.size());
        all.push_back(std::move(cand));
      }
    }
    frontier = std::move(next);
  }
  return all;
}

std::pair<Isometry, LorentzVector> reduce_point(const FuchsianGroup& g, const LorentzVector& x) {
  LorentzVector cur = to_hyperboloid(x);
  Isometry delta = Isometry::identity(g.dim());
  const auto& gens = g.generators();
  for (int step = 0; step < 100000; ++step) {
    std::size_t best = gens.size();
    double best_time = cur.time() * (1.0 - 1e-13);
    for (std::size_t k = 0; k < gens.size(); ++k) {
      const double t = gens[k].apply(cur).time();
      if (t < best_time) {
        best_time = t;
        best = k;
      }
    }
    if (best == gens.size()) return {delta, cur};
    cur = to_hyperboloid(gens[best].apply(cur));
    // x = delta cur = (delta g^-1)(g cur)
    delta = compose(delta, gens[static_cast<std::size_t>(g.inverse_of(static_cast<int>(best)))]);
  }
  throw NumericError("reduce_point: descent did not terminate");
}

namespace {

OrbitBall orbit_bfs(const FuchsianGroup& g, const LorentzVector& base, double radius) {
  const double margin = g.max_generator_displacement(base);
  const double keep_cosh = std::cosh(radius);
  const double expand_cosh = std::cosh(radius + margin);
  constexpr std::size_t kMaxElements = 4'000'000;

  OrbitBall ball{base, {}, 0.0, 0};
  std::vector<OrbitPoint> found{{Isometry::identity(g.dim()), base, 0.0}};
  PointIndex index(base);
  index.insert(base);
  std::vector<std::size_t> frontier{0};
  while (!frontier.empty()) {
    ++ball.word_length;
    std::vector<std::size_t> next;
    for (std::size_t f : frontier) {
      for (const auto& gen : g.generators()) {
        // Right multiplication: found[f].element * gen maps base to a neighbour tile.
        LorentzVector p = found[f].element.apply(gen.apply(base));
        const double c = -bilinear_unchecked(base, p);
        if (c > expand_cosh) continue;
        if (index.contains(p)) continue;
        index.insert(p);
        Isometry e = compose(found[f].element, gen);
        p = e.apply(base);
        next.push_back(found.size());
        found.push_back({std::move(e), p, clamped_arccosh(c)});
        if (found.size() > kMaxElements)
          throw NumericError("orbit: more than " + std::to_string(kMaxElements) + " elements within radius " +
                             std::to_string(radius + margin));
      }
    }
    frontier = std::move(next);
  }
  for (auto& op : found) {
    if (-bilinear_unchecked(base, op.point) <= keep_cosh) ball.elements.push_back(std::move(op));
  }
  std::sort(ball.elements.begin(), ball.elements.end(), [](const OrbitPoint& a, const OrbitPoint& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    for (int k = 0; k < a.point.size(); ++k)
      if (a.point[k] != b.point[k]) return a.point[k] < b.point[k];
    return false;
  });
  for (const auto& e : ball.elements) ball.radius = std::max(ball.radius, e.distance);
  return ball;
}

}  // namespace

OrbitBall orbit(const FuchsianGroup& g, const LorentzVector& x, double radius) {
  if (!(radius > 0.0)) throw ValidationError("orbit: radius must be positive");
  const LorentzVector base = to_hyperboloid(x);
  if (base.dim() != g.dim()) throw ValidationError("orbit: point dimension does not match the group");
  const LorentzVector o = LorentzVector::origin(g.dim());
  if (clamped_arccosh(base.time()) < 1e-12) return orbit_bfs(g, o, radius);
  // Enumerate around the origin, where generator displacements are small and
  // products stay well conditioned. With x = delta q and q near the origin,
  // d(x, g x) <= R iff g = delta g' delta^-1 with d(q, g' q) <= R, which
  // implies d(o, g' o) <= R + 2 d(o, q).
  const auto [delta, q] = reduce_point(g, base);
  const double offset = clamped_arccosh(q.time());
  const auto around = orbit_bfs(g, o, radius + 2.0 * offset + 1e-9);
  Isometry delta_inv{lorentz_inverse(delta.matrix), {}};
  for (auto it = delta.word.rbegin(); it != delta.word.rend(); ++it) delta_inv.word.push_back(g.inverse_of(*it));
  OrbitBall ball{base, {}, 0.0, around.word_length};
  const double keep_cosh = std::cosh(radius);
  for (const auto& e : around.elements) {
    const LorentzVector pq = e.element.apply(q);
    const double c = -bilinear_unchecked(q, pq);
    if (c > keep_cosh) continue;
    Isometry conj{delta.matrix * e.element.matrix * delta_inv.matrix, delta.word};
    conj.word.insert(conj.word.end(), e.element.word.begin(), e.element.word.end());
    conj.word.insert(conj.word.end(), delta_inv.word.begin(), delta_inv.word.end());
    LorentzVector p = delta.apply(pq);
    ball.elements.push_back({std::move(conj), std::move(p), clamped_arccosh(c)});
  }
  std::sort(ball.elements.begin(), ball.elements.end(), [](const OrbitPoint& a, const OrbitPoint& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    for (int k = 0; k < a.point.size(); ++k)
      if (a.point[k] != b.point[k]) return a.point[k] < b.point[k];
    return false;
  });
  for (const auto& e : ball.elements) ball.radius = std::max(ball.radius, e.distance);
  return ball;
}

std::optional<std::vector<int>> canonical_word(const FuchsianGroup& g, const SquareMatrix& m) {
  const auto& gens = g.generators();
  const auto n = m.rows();
  SquareMatrix cur = m;
  std::vector<int> word;
  for (int step = 0; step < 4096; ++step) {
    if (max_abs_diff(cur, SquareMatrix::Identity(n, n)) < tol::kMatrixDedup * std::max(1.0, cur(n - 1, n - 1)))
      return word;
    const double c0 = cur(n - 1, n - 1);
    int best = -1;
    double best_c = c0;
    for (std::size_t k = 0; k < gens.size(); ++k) {
      const auto& inv = gens[static_cast<std::size_t>(g.inverse_of(static_cast<int>(k)))].matrix;
      const double c = inv.row(n - 1).dot(cur.col(n - 1));
      if (c < best_c - 1e-9 * std::max(1.0, best_c)) {
        best_c = c;
        best = static_cast<int>(k);
      }
    }
    if (best < 0) return std::nullopt;
    word.push_back(best);
    cur = gens[static_cast<std::size_t>(g.inverse_of(best))].matrix * cur;
    if (word.size() % tol::kRenormalizeWordLength == 0) cur = renormalize(cur);
  }
  return std::nullopt;
}

double hyperbolic_angle(const LorentzVector& p, const LorentzVector& q, const LorentzVector& r) {
  const LorentzVector tq = q + p * bilinear(q, p);
  const LorentzVector tr = r + p * bilinear(r, p);
  const double c = bilinear(tq, tr) / std::sqrt(bilinear(tq, tq) * bilinear(tr, tr));
  return std::acos(std::clamp(c, -1.0, 1.0));
}

DirichletCell dirichlet_cell(const FuchsianGroup& g, const LorentzVector& a_in) {
  if (g.dim() > 2) throw ValidationError("dirichlet_cell: only d <= 2 is supported");
  if (!is_unit_future_timelike(a_in)) throw ValidationError("dirichlet_cell: centre must lie on the hyperboloid");
  const LorentzVector a = to_hyperboloid(a_in);
  const auto frame = spacelike_frame(a);
  double radius = 2.0 * g.min_generator_displacement(a);
  constexpr double kMaxRadius = 40.0;
  while (radius <= kMaxRadius) {
    const OrbitBall ob = orbit(g, a, radius);
    DirichletCell cell{a, {}, {}, 0.0, radius, 0.0};
    if (g.dim() == 1) {
      double lo = -1.0;
      double hi = 1.0;
      for (const auto& e : ob.elements) {
        if (e.distance == 0.0) continue;
        const double s = bilinear(e.point, frame[0]);
        const double off = (std::cosh(e.distance) - 1.0) / std::abs(s);
        if (s > 0) hi = std::min(hi, off);
        else lo = std::max(lo, -off);
      }
      if (hi >= 1.0 - 1e-12 || lo <= -1.0 + 1e-12) {
        radius *= 2.0;
        continue;
      }
      cell.vertices = {to_hyperboloid(a + frame[0] * lo), to_hyperboloid(a + frame[0] * hi)};
      cell.volume = hyp_distance(cell.vertices[0], cell.vertices[1]);
    } else {
      planar::ConvexPolygon poly = planar::square(1.0);
      int label = 0;
      for (const auto& e : ob.elements) {
        if (e.distance == 0.0) continue;
        const planar::Vec2 w{bilinear(e.point, frame[0]), bilinear(e.point, frame[1])};
        const double s = planar::norm(w);
        poly = planar::clip(poly, {w * (1.0 / s), (std::cosh(e.distance) - 1.0) / s, label++}, 1e-13);
      }
      bool bounded = !poly.empty() && !poly.touches_label(planar::kBoxLabel);
      for (const auto& v : poly.vertices) bounded = bounded && planar::norm(v) < 1.0 - 1e-12;
      if (!bounded) {
        radius *= 2.0;
        continue;
      }
      for (const auto& v : poly.vertices) cell.vertices.push_back(to_hyperboloid(a + frame[0] * v.x + frame[1] * v.y));
      const std::size_t k = cell.vertices.size();
      double angle_sum = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        const double ang =
            hyperbolic_angle(cell.vertices[i], cell.vertices[(i + k - 1) % k], cell.vertices[(i + 1) % k]);
        cell.interior_angles.push_back(ang);
        angle_sum += ang;
      }
      cell.volume = (static_cast<double>(k) - 2.0) * std::numbers::pi - angle_sum;
    }
    for (const auto& v : cell.vertices) cell.circumradius = std::max(cell.circumradius, hyp_distance(a, v));
    // Bisectors of orbit points farther than 2*circumradius cannot cut the cell.
    if (2.0 * cell.circumradius < radius) return cell;
    radius = 2.0 * cell.circumradius + 0.5;
  }
  throw NumericError("dirichlet_cell: insufficient orbit radius (tried up to " + std::to_string(kMaxRadius) +
                     "); the group may not be cocompact");
}

}  // namespace fpoly
