#include "fpoly/polyhedra.hpp"

#include "fpoly/errors.hpp"
#include "fpoly/json_io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>
#include <tuple>

namespace fpoly {

// ---------------------------------------------------------------------------
// Element cache and families

std::shared_ptr<const std::vector<OrbitPoint>> ElementCache::within(double radius) const {
  std::lock_guard<std::mutex> lock(mutex_);
  if (elements_ && radius_ >= radius) return elements_;
  const double r = std::max(radius, 1.25 * radius_);
  auto ob = orbit(*group_, LorentzVector::origin(group_->dim()), r);
  elements_ = std::make_shared<const std::vector<OrbitPoint>>(std::move(ob.elements));
  radius_ = r;
  return elements_;
}

NormalFamily::NormalFamily(std::shared_ptr<const FuchsianGroup> group, std::vector<LorentzVector> reps)
    : group_(std::move(group)), reps_(std::move(reps)) {
  if (!group_) throw ValidationError("normal family: missing group");
  if (reps_.empty()) throw ValidationError("normal family: no normals");
  const LorentzVector o = LorentzVector::origin(group_->dim());
  for (std::size_t i = 0; i < reps_.size(); ++i) {
    const auto& r = reps_[i];
    if (r.dim() != group_->dim())
      throw ValidationError("normal " + std::to_string(i) + ": dimension " + std::to_string(r.dim()) +
                            " does not match the group dimension " + std::to_string(group_->dim()));
    if (!is_unit_future_timelike(r, 1e-10))
      throw ValidationError("normal " + std::to_string(i) + " is not a unit future-timelike vector");
    auto [delta, q] = reduce_point(*group_, r);
    spread_ = std::max(spread_, hyp_distance(o, q));
    reducer_inverses_.push_back(lorentz_inverse(delta.matrix));
    reducers_.push_back(std::move(delta));
    reduced_.push_back(std::move(q));
  }
  cache_ = std::make_shared<ElementCache>(group_);
  // Orbit comparison on the reduced representatives: an image g q_i equal to
  // q_j needs d(o, g o) <= d(o, q_i) + d(o, q_j).
  std::vector<std::pair<double, std::size_t>> by_x;
  for (std::size_t j = 0; j < reduced_.size(); ++j) by_x.emplace_back(reduced_[j][0], j);
  std::sort(by_x.begin(), by_x.end());
  const auto elements = cache_->within(2.0 * spread_ + 1e-6);
  for (std::size_t i = 0; i < reduced_.size(); ++i) {
    for (const auto& e : *elements) {
      if (e.distance > 2.0 * spread_ + 1e-6) break;
      const LorentzVector p = e.element.apply(reduced_[i]);
      const double slack = 1e-8 * p.time();
      auto it = std::lower_bound(by_x.begin(), by_x.end(), std::make_pair(p[0] - slack, std::size_t{0}));
      for (; it != by_x.end() && it->first <= p[0] + slack; ++it) {
        const std::size_t j = it->second;
        if (j == i) continue;
        if ((p.coords() - reduced_[j].coords()).cwiseAbs().maxCoeff() > slack) continue;
        const auto a = std::min(i, j), b = std::max(i, j);
        if (e.distance == 0.0)
          throw ValidationError("normals " + std::to_string(a) + " and " + std::to_string(b) + " are collinear");
        throw ValidationError("normals " + std::to_string(a) + " and " + std::to_string(b) +
                              " lie in the same group orbit");
      }
    }
  }
}

bool NormalFamily::same_as(const NormalFamily& other) const {
  if (reps_.size() != other.reps_.size()) return false;
  if (group_ != other.group_) {
    if (group_->label() != other.group_->label() || group_->generators().size() != other.group_->generators().size())
      return false;
    for (std::size_t k = 0; k < group_->generators().size(); ++k)
      if ((group_->generators()[k].matrix - other.group_->generators()[k].matrix).cwiseAbs().maxCoeff() > 1e-12)
        return false;
  }
  for (std::size_t i = 0; i < reps_.size(); ++i)
    if ((reps_[i].coords() - other.reps_[i].coords()).cwiseAbs().maxCoeff() > 1e-12) return false;
  return true;
}

NormalFamily NormalFamily::permuted(const std::vector<std::size_t>& order) const {
  if (order.size() != reps_.size()) throw ValidationError("permuted: order has the wrong size");
  std::vector<LorentzVector> r;
  for (auto k : order) {
    if (k >= reps_.size()) throw ValidationError("permuted: index out of range");
    r.push_back(reps_[k]);
  }
  NormalFamily out(group_, std::move(r));
  out.cache_ = cache_;
  return out;
}

NormalFamily NormalFamily::extended(const std::vector<LorentzVector>& extra) const {
  std::vector<LorentzVector> r = reps_;
  r.insert(r.end(), extra.begin(), extra.end());
  NormalFamily out(group_, std::move(r));
  out.cache_ = cache_;
  return out;
}

double SupportVector::max() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, v);
  return m;
}

void SupportVector::validate(std::size_t expected_size) const {
  if (values.size() != expected_size)
    throw ValidationError("support vector has " + std::to_string(values.size()) + " entries, expected " +
                          std::to_string(expected_size));
  for (std::size_t i = 0; i < values.size(); ++i)
    if (!(values[i] > 0.0) || !std::isfinite(values[i]))
      throw ValidationError("support number " + std::to_string(i) + " must be positive, got " +
                            format_double(values[i]));
}

SupportVector operator+(const SupportVector& a, const SupportVector& b) {
  if (a.size() != b.size()) throw ValidationError("support vectors of different sizes");
  SupportVector s = a;
  for (std::size_t i = 0; i < s.size(); ++i) s.values[i] += b.values[i];
  return s;
}

SupportVector operator*(double s, const SupportVector& a) {
  SupportVector r = a;
  for (double& v : r.values) v *= s;
  return r;
}

// ---------------------------------------------------------------------------
// Support numbers

double support_number(double h_i, double h_j, double phi) {
  if (!(phi > 0.0)) throw ValidationError("support_number: normals are collinear (phi = 0)");
  return -(h_j - h_i * std::cosh(phi)) / std::sinh(phi);
}

double subface_support(double h_ij, double h_ik, double omega) {
  if (!(omega > 1e-12) || !(omega < std::numbers::pi - 1e-12))
    throw ValidationError("subface_support: degenerate angle " + format_double(omega));
  return (h_ij - h_ik * std::cos(omega)) / std::sin(omega);
}

// ---------------------------------------------------------------------------
// Facets

LorentzVector FacetGeometry::ambient(planar::Vec2 u) const {
  const double c[2] = {u.x, u.y};
  return plane.point(std::span<const double>(c, plane.frame.size()));
}

std::vector<LorentzVector> FacetGeometry::ambient_vertices() const {
  std::vector<LorentzVector> out;
  out.reserve(polygon.size());
  for (auto u : polygon) out.push_back(ambient(u));
  return out;
}

namespace {

struct Candidate {
  std::size_t neighbor;
  const OrbitPoint* element;  // acts on the reduced representatives
  LorentzVector normal;       // reducer_i * gamma' * reduced_j
  double cosh_phi;
};

std::string word_string(const std::vector<int>& w) {
  std::string s;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (k) s += '.';
    s += std::to_string(w[k]);
  }
  return s;
}

using EdgeKey = std::pair<std::size_t, std::vector<int>>;

std::string facet_signature(const FacetGeometry& f) {
  if (f.false_face()) return "-";
  std::vector<EdgeKey> keys;
  for (const auto& e : f.edges) keys.emplace_back(e.neighbor, e.word);
  // Lexicographically smallest rotation of the cyclic list.
  std::vector<EdgeKey> best = keys;
  for (std::size_t r = 1; r < keys.size(); ++r) {
    std::vector<EdgeKey> rot(keys.begin() + static_cast<long>(r), keys.end());
    rot.insert(rot.end(), keys.begin(), keys.begin() + static_cast<long>(r));
    if (rot < best) best = std::move(rot);
  }
  std::string s;
  for (const auto& [j, w] : best) s += "(" + std::to_string(j) + ":" + word_string(w) + ")";
  return s;
}

// The orbit normal reducer_i g' reduced_j equals gamma eta_j with
// gamma = reducer_i g' reducer_j^-1.
Isometry edge_element(const NormalFamily& f, std::size_t i, std::size_t j, const Isometry& inner) {
  const auto& g = f.group();
  Isometry e{f.reducer(i).matrix * inner.matrix * f.reducer_inverse(j), f.reducer(i).word};
  e.word.insert(e.word.end(), inner.word.begin(), inner.word.end());
  const auto& rj = f.reducer(j).word;
  for (auto it = rj.rbegin(); it != rj.rend(); ++it) e.word.push_back(g.inverse_of(*it));
  if (e.origin_cosh() < 1.0 + 1e-12 && (e.matrix - SquareMatrix::Identity(e.matrix.rows(), e.matrix.cols())).cwiseAbs().maxCoeff() < 1e-9) {
    e.matrix.setIdentity();
    e.word.clear();
    return e;
  }
  if (auto w = canonical_word(g, e.matrix)) e.word = *w;
  return e;
}

struct FacetOutcome {
  FacetGeometry geometry;
  bool certified = false;
};

// Orbit images g' reduced_j of all representatives, flattened for fast scans.
struct NormalPool {
  int stride = 0;
  std::vector<double> coords;
  std::vector<std::size_t> neighbor;
  std::vector<const OrbitPoint*> element;
};

NormalPool make_pool(const NormalFamily& family, const std::vector<OrbitPoint>& elements, double radius) {
  NormalPool pool;
  const auto& reps = family.reduced();
  pool.stride = family.dim() + 1;
  const LorentzVector o = LorentzVector::origin(family.dim());
  std::vector<double> rep_dist;
  for (const auto& r : reps) rep_dist.push_back(hyp_distance(o, r));
  for (const auto& e : elements) {
    if (e.distance > radius + 2.0 * family.spread()) break;
    for (std::size_t j = 0; j < reps.size(); ++j) {
      if (e.distance > radius + family.spread() + rep_dist[j]) continue;
      const Coords nu = e.element.matrix * reps[j].coords();
      pool.coords.insert(pool.coords.end(), nu.data(), nu.data() + nu.size());
      pool.neighbor.push_back(j);
      pool.element.push_back(&e);
    }
  }
  return pool;
}

FacetOutcome compute_facet(const NormalFamily& family, const SupportVector& h, std::size_t i, double cutoff,
                           const NormalPool& pool, const BuildOptions& options) {
  const auto& reps = family.reduced();
  const auto& eta = family.reps()[i];
  const auto& q_i = reps[i];
  const SquareMatrix& lift = family.reducer(i).matrix;
  const int d = family.dim();
  const double h_i = h[i];
  const double h_max = h.max();
  const double cosh_cut = std::cosh(cutoff);

  std::vector<Candidate> cands;
  const int st = pool.stride;
  Coords q = q_i.coords();
  q[st - 1] = -q[st - 1];
  for (std::size_t k = 0; k < pool.neighbor.size(); ++k) {
    const double* nu = &pool.coords[k * static_cast<std::size_t>(st)];
    double c = 0.0;
    for (int a = 0; a < st; ++a) c -= q[a] * nu[a];
    if (c > cosh_cut) continue;
    const std::size_t j = pool.neighbor[k];
    if (j == i && pool.element[k]->distance == 0.0) continue;
    const Coords v = Eigen::Map<const Coords>(nu, st);
    cands.push_back({j, pool.element[k], LorentzVector(Coords(lift * v)), c});
  }
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    if (a.cosh_phi != b.cosh_phi) return a.cosh_phi < b.cosh_phi;
    if (a.neighbor != b.neighbor) return a.neighbor < b.neighbor;
    return std::lexicographical_compare(a.normal.coords().begin(), a.normal.coords().end(),
                                        b.normal.coords().begin(), b.normal.coords().end());
  });

  FacetOutcome out;
  FacetGeometry& f = out.geometry;
  f.rep_index = i;
  f.plane = support_plane(eta, h_i);
  f.cutoff = cutoff;

  const double box = 1e3 * std::max(1.0, h_max);
  const double eps = tol::kClip * std::max(1.0, h_max);

  std::vector<planar::HalfPlane> lines;
  std::vector<double> phis;
  lines.reserve(cands.size());
  for (std::size_t k = 0; k < cands.size(); ++k) {
    const auto& c = cands[k];
    const double phi = clamped_arccosh(c.cosh_phi);
    const double sh = std::sinh(phi);
    planar::Vec2 n{bilinear_unchecked(f.plane.frame[0], c.normal) / sh,
                   d >= 2 ? bilinear_unchecked(f.plane.frame[1], c.normal) / sh : 0.0};
    const double nn = planar::norm(n);
    n = n * (1.0 / nn);
    lines.push_back({n, (h_i * c.cosh_phi - h[c.neighbor]) / sh, static_cast<int>(k)});
    phis.push_back(phi);
  }

  std::vector<int> edge_labels;
  double radius = 0.0;
  bool empty = false;
  if (d == 1) {
    double lo = -box, hi = box;
    int lo_label = planar::kBoxLabel, hi_label = planar::kBoxLabel;
    for (const auto& l : lines) {
      if (l.normal.x > 0) {
        if (l.offset < hi) { hi = l.offset; hi_label = l.label; }
      } else if (-l.offset > lo) {
        lo = -l.offset;
        lo_label = l.label;
      }
    }
    if (hi - lo <= eps) {
      empty = true;
    } else {
      if (lo_label == planar::kBoxLabel || hi_label == planar::kBoxLabel) return out;
      f.polygon = {{lo, 0.0}, {hi, 0.0}};
      edge_labels = {lo_label, hi_label};
      radius = std::max(std::abs(lo), std::abs(hi));
      f.area = hi - lo;
    }
  } else {
    planar::ConvexPolygon poly = planar::square(box);
    for (const auto& l : lines) {
      poly = planar::clip(poly, l, eps);
      if (poly.empty()) break;
    }
    if (poly.empty() || poly.area() <= eps * eps) {
      empty = true;
    } else {
      if (poly.touches_label(planar::kBoxLabel)) return out;
      f.polygon = poly.vertices;
      edge_labels = poly.labels;
      radius = poly.max_radius();
      f.area = poly.area();
    }
  }

  if (empty) {
    // More constraints only shrink the set, so emptiness is final.
    if (!options.allow_false_faces)
      throw EmptyFacetError(i, "support vector outside the admissible cone (facet has no interior)");
    f.polygon.clear();
    f.area = 0.0;
    out.certified = true;
    return out;
  }

  // Farther orbit normals sit at offset >= (h_i cosh phi - h_max)/sinh phi, increasing in phi.
  const double reach = (h_i * cosh_cut - h_max) / std::sinh(cutoff);
  if (!(reach > radius)) return out;
  out.certified = true;

  for (std::size_t k = 0; k < edge_labels.size(); ++k) {
    const auto& c = cands[static_cast<std::size_t>(edge_labels[k])];
    const auto& l = lines[static_cast<std::size_t>(edge_labels[k])];
    FacetEdge e;
    e.neighbor = c.neighbor;
    e.element = edge_element(family, i, c.neighbor, c.element->element);
    e.word = e.element.word;
    e.phi = phis[static_cast<std::size_t>(edge_labels[k])];
    e.support = l.offset;
    e.direction = l.normal;
    if (d == 1) {
      e.length = 1.0;
    } else {
      const auto a = f.polygon[k], b = f.polygon[(k + 1) % f.polygon.size()];
      e.length = planar::norm(b - a);
    }
    f.edges.push_back(std::move(e));
  }
  for (std::size_t k = 0; k < lines.size(); ++k)
    if (lines[k].offset <= radius + 1e-6) f.nearby.push_back({cands[k].neighbor, phis[k], lines[k]});
  return out;
}

}  // namespace

FuchsianPolyhedron::FuchsianPolyhedron(NormalFamily family, SupportVector support, std::vector<FacetGeometry> facets)
    : family_(std::move(family)), support_(std::move(support)), facets_(std::move(facets)) {
  for (std::size_t i = 0; i < facets_.size(); ++i) {
    if (i) signature_ += '|';
    signature_ += facet_signature(facets_[i]);
  }
}

std::vector<double> FuchsianPolyhedron::areas() const {
  std::vector<double> a;
  for (const auto& f : facets_) a.push_back(f.area);
  return a;
}

double FuchsianPolyhedron::min_edge_length() const {
  double m = std::numeric_limits<double>::infinity();
  if (dim() == 1) return m;
  for (const auto& f : facets_)
    for (const auto& e : f.edges) m = std::min(m, e.length);
  return m;
}

std::vector<LorentzVector> FuchsianPolyhedron::vertices() const {
  std::vector<LorentzVector> v;
  for (const auto& f : facets_)
    for (auto& p : f.ambient_vertices()) v.push_back(std::move(p));
  return v;
}

FuchsianPolyhedron build(const NormalFamily& family, const SupportVector& h, const BuildOptions& options) {
  h.validate(family.size());
  if (family.dim() > 2) throw ValidationError("build: facet geometry is implemented for d <= 2");
  const std::size_t n = family.size();
  std::vector<FacetGeometry> facets(n);
  std::vector<char> done(n, 0);
  double cutoff = options.initial_cutoff;
  auto overflow = [&](const std::string& why) {
    std::string which;
    for (std::size_t i = 0; i < n; ++i)
      if (!done[i]) which += (which.empty() ? "" : ",") + std::to_string(i);
    return CutoffOverflowError("build: orbit cutoff " + format_double(cutoff) + " does not certify facets [" + which +
                               "]; support ratio h_max/h_min = " +
                               format_double(h.max() / *std::min_element(h.values.begin(), h.values.end())) + why);
  };
  while (true) {
    std::shared_ptr<const std::vector<OrbitPoint>> elements;
    try {
      elements = family.elements().within(cutoff + 2.0 * family.spread() + 1e-6);
    } catch (const NumericError& e) {
      throw overflow(std::string("; ") + e.what());
    }
    const NormalPool pool = make_pool(family, *elements, cutoff + 1e-6);

    std::vector<std::size_t> todo;
    for (std::size_t i = 0; i < n; ++i)
      if (!done[i]) todo.push_back(i);
    std::vector<std::exception_ptr> errors(n);
    auto work = [&](std::size_t begin, std::size_t step) {
      for (std::size_t k = begin; k < todo.size(); k += step) {
        const std::size_t i = todo[k];
        try {
          auto r = compute_facet(family, h, i, cutoff, pool, options);
          if (r.certified) {
            facets[i] = std::move(r.geometry);
            done[i] = 1;
          }
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    };
    const std::size_t threads =
        todo.size() >= 32 ? std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), 16) : 1;
    if (threads > 1) {
      std::vector<std::thread> pool_threads;
      for (std::size_t t = 0; t < threads; ++t) pool_threads.emplace_back(work, t, threads);
      for (auto& t : pool_threads) t.join();
    } else {
      work(0, 1);
    }
    // Lowest failing facet first, independent of scheduling.
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);

    if (std::all_of(done.begin(), done.end(), [](char c) { return c != 0; })) break;
    if (cutoff >= options.max_cutoff) throw overflow("");
    cutoff = std::min(2.0 * cutoff, options.max_cutoff);
  }
  return FuchsianPolyhedron(family, h, std::move(facets));
}

// ---------------------------------------------------------------------------
// Predicates

bool is_simple(const FuchsianPolyhedron& p) {
  if (p.dim() == 1) return true;
  for (const auto& f : p.facets()) {
    if (f.false_face()) return false;
    for (auto v : f.polygon) {
      int active = 0;
      for (const auto& c : f.nearby)
        if (std::abs(planar::dot(c.half_plane.normal, v) - c.half_plane.offset) <= tol::kVertexActive) ++active;
      if (active != 2) return false;
    }
  }
  return true;
}

bool strongly_isomorphic(const FuchsianPolyhedron& p, const FuchsianPolyhedron& q) {
  if (!p.family().same_as(q.family())) throw FanMismatchError("strongly_isomorphic: normal families differ");
  return p.fan_signature() == q.fan_signature();
}

FuchsianPolyhedron perturb_to_simple(const FuchsianPolyhedron& p, double epsilon, std::uint64_t seed,
                                     const PerturbOptions& options) {
  if (is_simple(p)) return p;
  const auto& h = p.support();
  const double h_min = *std::min_element(h.values.begin(), h.values.end());
  if (!(epsilon > 0.0) || !(epsilon < h_min))
    throw ValidationError("perturb_to_simple: epsilon must lie in (0, min support number)");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int attempt = 0; attempt < options.max_retries; ++attempt) {
    SupportVector q = h;
    for (double& v : q.values) v += epsilon * u(rng);
    try {
      auto r = build(p.family(), q);
      if (is_simple(r)) return r;
    } catch (const NumericError&) {
    }
  }
  throw NumericError("perturb_to_simple: no simple polyhedron within epsilon " + format_double(epsilon) + " after " +
                     std::to_string(options.max_retries) + " retries");
}

// ---------------------------------------------------------------------------
// Ball approximation

namespace {


struct CellTriangulation {
  std::vector<LorentzVector> points;
  std::vector<bool> boundary;
  std::vector<std::array<std::size_t, 3>> triangles;
  double spacing = 0.0;
};

LorentzVector midpoint(const LorentzVector& a, const LorentzVector& b) { return to_hyperboloid(a + b); }

CellTriangulation triangulate_cell(const FuchsianGroup& g, int depth) {
  const auto cell = dirichlet_cell(g, LorentzVector::origin(g.dim()));
  CellTriangulation t;
  t.points.push_back(LorentzVector::origin(2));
  t.boundary.push_back(false);
  const std::size_t m = cell.vertices.size();
  for (const auto& v : cell.vertices) {
    t.points.push_back(v);
    t.boundary.push_back(true);
  }
  std::map<std::pair<std::size_t, std::size_t>, bool> boundary_edge;
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t a = 1 + k, b = 1 + (k + 1) % m;
    t.triangles.push_back({0, a, b});
    boundary_edge[{std::min(a, b), std::max(a, b)}] = true;
  }
  for (int s = 0; s < depth; ++s) {
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> mids;
    auto mid = [&](std::size_t a, std::size_t b) {
      const auto key = std::make_pair(std::min(a, b), std::max(a, b));
      auto it = mids.find(key);
      if (it != mids.end()) return it->second;
      const std::size_t idx = t.points.size();
      t.points.push_back(midpoint(t.points[key.first], t.points[key.second]));
      const bool on = boundary_edge.count(key) > 0;
      t.boundary.push_back(on);
      if (on) {
        boundary_edge[{std::min(key.first, idx), std::max(key.first, idx)}] = true;
        boundary_edge[{std::min(key.second, idx), std::max(key.second, idx)}] = true;
      }
      mids.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<std::size_t, 3>> next;
    for (const auto& tri : t.triangles) {
      const auto ab = mid(tri[0], tri[1]), bc = mid(tri[1], tri[2]), ca = mid(tri[2], tri[0]);
      next.push_back({tri[0], ab, ca});
      next.push_back({ab, tri[1], bc});
      next.push_back({ca, bc, tri[2]});
      next.push_back({ab, bc, ca});
    }
    t.triangles = std::move(next);
  }
  for (const auto& tri : t.triangles)
    for (int k = 0; k < 3; ++k)
      t.spacing = std::max(t.spacing, hyp_distance(t.points[tri[k]], t.points[tri[(k + 1) % 3]]));
  return t;
}

}  // namespace

std::vector<LorentzVector> cell_sample_points(const FuchsianGroup& g, int level) {
  if (level < 0 || level > kMaxBallLevel)
    throw ValidationError("ball level must lie in [0, " + std::to_string(kMaxBallLevel) + "]");
  const int d = g.dim();
  if (level == 0) return {LorentzVector::origin(d)};
  if (d == 1) {
    const double ell = translation_length(g.generators()[0].matrix);
    std::vector<LorentzVector> pts;
    // Dyadic order keeps coarser levels a prefix of finer ones.
    pts.push_back(LorentzVector{0.0, 1.0});
    for (int s = 1; s <= level; ++s)
      for (int k = 1; k < (1 << s); k += 2) {
        const double t = ell * k / (1 << s);
        pts.push_back(LorentzVector{std::sinh(t), std::cosh(t)});
      }
    return pts;
  }
  if (d != 2) throw ValidationError("ball approximation is implemented for d <= 2");
  const auto tri = triangulate_cell(g, level - 1);
  const auto cell = dirichlet_cell(g, LorentzVector::origin(2));
  const auto elements = orbit(g, LorentzVector::origin(2), 2.0 * cell.circumradius + 0.5).elements;
  std::vector<LorentzVector> kept;
  std::vector<bool> kept_boundary;
  for (std::size_t k = 0; k < tri.points.size(); ++k) {
    const auto& p = tri.points[k];
    bool duplicate = false;
    if (tri.boundary[k]) {
      for (const auto& e : elements) {
        if (e.distance == 0.0) continue;
        const auto q = e.element.apply(p);
        for (std::size_t m = 0; m < kept.size() && !duplicate; ++m)
          if (kept_boundary[m] && -bilinear_unchecked(q, kept[m]) < 1.0 + 1e-12) duplicate = true;
        if (duplicate) break;
      }
    }
    if (!duplicate) {
      kept.push_back(p);
      kept_boundary.push_back(tri.boundary[k]);
    }
  }
  return kept;
}

double cell_sample_spacing(const FuchsianGroup& g, int level) {
  if (level < 0 || level > kMaxBallLevel)
    throw ValidationError("ball level must lie in [0, " + std::to_string(kMaxBallLevel) + "]");
  if (g.dim() == 1) {
    const double ell = translation_length(g.generators()[0].matrix);
    return level == 0 ? ell : ell / (1 << level);
  }
  if (level == 0) return 2.0 * dirichlet_cell(g, LorentzVector::origin(g.dim())).circumradius;
  return triangulate_cell(g, level - 1).spacing;
}

FuchsianPolyhedron approximate_ball_level(std::shared_ptr<const FuchsianGroup> g, int level) {
  auto pts = cell_sample_points(*g, level);
  NormalFamily family(std::move(g), std::move(pts));
  SupportVector h{std::vector<double>(family.size(), 1.0)};
  return build(family, h);
}

FuchsianPolyhedron approximate_ball(std::shared_ptr<const FuchsianGroup> g, double sample_radius,
                                    BallApproximation* info) {
  if (!(sample_radius > 0.0)) throw ValidationError("approximate_ball: sample radius must be positive");
  int level = 0;
  while (level < kMaxBallLevel && cell_sample_spacing(*g, level) > sample_radius) ++level;
  if (info) *info = {level, cell_sample_spacing(*g, level)};
  return approximate_ball_level(std::move(g), level);
}

// ---------------------------------------------------------------------------
// Support function queries

double support_value(const FuchsianPolyhedron& p, const LorentzVector& eta) {
  if (eta.dim() != p.dim()) throw ValidationError("support_value: dimension mismatch");
  if (classify(eta) != CausalClass::FutureTimelike)
    throw ValidationError("support_value: direction must be future-timelike, got " + to_string(classify(eta)));
  const double scale = std::sqrt(-bilinear(eta, eta));
  const LorentzVector e = eta * (1.0 / scale);
  const auto verts = p.vertices();
  if (verts.empty()) throw NumericError("support_value: polyhedron has no vertices");
  double r_min = std::numeric_limits<double>::infinity(), spread = 0.0;
  for (const auto& v : verts) {
    const double r = std::sqrt(-bilinear(v, v));
    r_min = std::min(r_min, r);
    spread = std::max(spread, clamped_arccosh(v.time() / r));
  }
  const double r_eta = clamped_arccosh(e.time());
  double ball = r_eta + spread + 1.0;
  while (true) {
    const auto elements = p.family().elements().within(ball);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& g : *elements) {
      if (g.distance > ball) break;
      // <gamma v, e> = <v, gamma^-1 e>; gamma^-1 = J gamma^T J.
      Coords je = e.coords();
      je[je.size() - 1] = -je[je.size() - 1];
      LorentzVector back(Coords(g.element.matrix.transpose() * je));
      back[back.size() - 1] = -back[back.size() - 1];
      for (const auto& v : verts) best = std::min(best, -bilinear_unchecked(v, back));
    }
    // A vertex image at distance > d* from e has -<w,e> >= r_min cosh d* = best.
    const double d_star = clamped_arccosh(std::max(1.0, best / r_min));
    const double needed = r_eta + d_star + spread + 1e-9;
    if (needed <= ball) return -scale * best;
    ball = needed + 0.1;
  }
}

double polar_dual_radial(const FuchsianPolyhedron& p, const LorentzVector& eta) {
  if (!is_unit_future_timelike(eta)) throw ValidationError("polar_dual_radial: direction must lie on the hyperboloid");
  return -1.0 / support_value(p, eta);
}

// ---------------------------------------------------------------------------
// Mesh export

std::string export_mesh(const FuchsianPolyhedron& p, int word_length, MeshFormat format) {
  if (word_length < 0) throw ValidationError("export_mesh: word length must be >= 0");
  const auto& g = p.family().group();
  const auto ball = word_ball(g, word_length);
  if (format == MeshFormat::Obj) {
    std::ostringstream os;
    os << "# fpoly mesh: group " << g.label() << ", word length " << word_length << "\n";
    std::size_t next = 1;
    for (const auto& e : ball) {
      for (const auto& f : p.facets()) {
        if (f.false_face()) continue;
        const auto vs = f.ambient_vertices();
        for (const auto& v : vs) {
          const auto w = e.apply(v);
          os << "v";
          for (int k = 0; k < w.size(); ++k) os << ' ' << format_double(w[k]);
          os << "\n";
        }
        if (p.dim() == 1) {
          os << "l " << next << ' ' << next + 1 << "\n";
        } else {
          os << "f";
          for (std::size_t k = 0; k < vs.size(); ++k) os << ' ' << next + k;
          os << "\n";
        }
        next += vs.size();
      }
    }
    return os.str();
  }
  Json faces = Json::array();
  for (const auto& e : ball) {
    for (const auto& f : p.facets()) {
      Json face;
      face["rep_index"] = f.rep_index;
      face["word"] = e.word;
      face["area"] = f.area;
      face["support"] = p.support()[f.rep_index];
      Json verts = Json::array();
      for (const auto& v : f.ambient_vertices()) verts.push_back(e.apply(v).to_vector());
      face["vertices"] = verts;
      Json poly = Json::array();
      for (auto u : f.polygon) poly.push_back({u.x, u.y});
      face["polygon"] = poly;
      Json edges = Json::array();
      for (const auto& ed : f.edges)
        edges.push_back({{"neighbor", ed.neighbor}, {"word", ed.word}, {"support", ed.support},
                         {"length", ed.length}, {"phi", ed.phi}});
      face["edges"] = edges;
      faces.push_back(face);
    }
  }
  Json doc{{"group", g.label()}, {"word_length", word_length}, {"faces", faces}};
  return dump_json(doc) + "\n";
}

}  // namespace fpoly
