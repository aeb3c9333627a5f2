#include "fpoly/covolume.hpp"

#include "fpoly/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

namespace fpoly {

CovolumeReport covol(const FuchsianPolyhedron& p) {
  CovolumeReport r;
  r.areas = p.areas();
  r.support = p.support();
  double s = 0.0;
  for (std::size_t i = 0; i < r.areas.size(); ++i) s += p.support()[i] * r.areas[i];
  r.covol = s / (p.dim() + 1);
  return r;
}

AreaJacobian area_jacobian(const FuchsianPolyhedron& p) {
  const std::size_t n = p.facets().size();
  AreaJacobian jac;
  jac.matrix = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    for (const auto& e : p.facet(i).edges) {
      const double sh = std::sinh(e.phi);
      // dh_ik/dh_i = cosh/sinh, dh_ik/dh_j = -1/sinh; dA_i/dh_ik = L_ik.
      jac.matrix(ii, ii) += e.length * std::cosh(e.phi) / sh;
      jac.matrix(ii, static_cast<Eigen::Index>(e.neighbor)) -= e.length / sh;
    }
  }
  jac.min_edge_length = p.min_edge_length();
  if (p.dim() >= 2 && jac.min_edge_length < tol::kShortEdge) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "edge of length %.3g below %.0e: combinatorics may change under perturbation",
                  jac.min_edge_length, tol::kShortEdge);
    jac.warnings.emplace_back(buf);
  }
  return jac;
}

JacobianCertificate AreaJacobian::certificate() const {
  JacobianCertificate c;
  const auto n = matrix.rows();
  c.symmetry_error = n ? (matrix - matrix.transpose()).cwiseAbs().maxCoeff() : 0.0;
  c.dominance_margin = std::numeric_limits<double>::infinity();
  c.positive_diagonal = true;
  c.nonpositive_offdiagonal = true;
  for (Eigen::Index i = 0; i < n; ++i) {
    double off = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      off += std::abs(matrix(i, j));
      if (matrix(i, j) > 0.0) c.nonpositive_offdiagonal = false;
    }
    if (!(matrix(i, i) > 0.0)) c.positive_diagonal = false;
    c.dominance_margin = std::min(c.dominance_margin, matrix(i, i) - off);
  }
  const Eigen::MatrixXd sym = 0.5 * (matrix + matrix.transpose());
  Eigen::LLT<Eigen::MatrixXd> llt(sym);
  c.cholesky_ok = llt.info() == Eigen::Success;
  if (n) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
    c.min_eigenvalue = es.eigenvalues().minCoeff();
  }
  return c;
}

Eigen::MatrixXd covol_hessian(const FuchsianPolyhedron& p) { return area_jacobian(p).matrix; }

double minkowski_area(const FuchsianPolyhedron& p) {
  double s = 0.0;
  for (double a : p.areas()) s += a;
  return s;
}

double ball_minkowski_area(const FuchsianGroup& g) { return g.quotient_volume(); }

double ball_covol(const FuchsianGroup& g) { return g.quotient_volume() / (g.dim() + 1); }

// ---------------------------------------------------------------------------

FanClass::FanClass(const FuchsianPolyhedron& reference)
    : family_(reference.family()), signature_(reference.fan_signature()) {
  if (!is_simple(reference)) throw ValidationError("reference polyhedron is not simple");
  for (const auto& f : reference.facets()) {
    std::vector<Edge> edges;
    const std::size_t m = f.edges.size();
    for (std::size_t k = 0; k < m; ++k) {
      const auto& e = f.edges[k];
      double omega = 0.0;
      if (dim() == 2) {
        const auto& nx = f.edges[(k + 1) % m].direction;
        omega = std::atan2(planar::cross(e.direction, nx), planar::dot(e.direction, nx));
      }
      edges.push_back({e.neighbor, std::cosh(e.phi), std::sinh(e.phi), omega});
    }
    edges_.push_back(std::move(edges));
  }
}

FuchsianPolyhedron FanClass::member(const SupportVector& h) const {
  try {
    auto p = build(family_, h);
    if (p.fan_signature() != signature_) throw FanMismatchError("support vector has a different normal fan");
    return p;
  } catch (const EmptyFacetError& e) {
    throw FanMismatchError(std::string("support vector leaves the class: ") + e.what());
  }
}

bool FanClass::contains(const SupportVector& h) const {
  try {
    member(h);
    return true;
  } catch (const FanMismatchError&) {
    return false;
  }
}

double FanClass::offset(std::size_t i, const Edge& e, const SupportVector& h) const {
  return (h[i] * e.cosh_phi - h[e.neighbor]) / e.sinh_phi;
}

double FanClass::formal_area(std::size_t i, const SupportVector& h) const {
  const auto& edges = edges_[i];
  const std::size_t m = edges.size();
  if (m == 0) return 0.0;
  std::vector<double> p(m);
  for (std::size_t k = 0; k < m; ++k) p[k] = offset(i, edges[k], h);
  if (dim() == 1) return p[0] + p[1];
  double a = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t next = (k + 1) % m, prev = (k + m - 1) % m;
    const double len =
        subface_support(p[next], p[k], edges[k].omega_next) + subface_support(p[prev], p[k], edges[prev].omega_next);
    a += p[k] * len;
  }
  return 0.5 * a;
}

std::vector<double> FanClass::formal_areas(const SupportVector& h) const {
  std::vector<double> a(size());
  for (std::size_t i = 0; i < size(); ++i) a[i] = formal_area(i, h);
  return a;
}

double FanClass::formal_covol(const SupportVector& h) const {
  double s = 0.0;
  for (std::size_t i = 0; i < size(); ++i) s += h[i] * formal_area(i, h);
  return s / (dim() + 1);
}

namespace {

double factorial(int m) {
  double f = 1.0;
  for (int k = 2; k <= m; ++k) f *= k;
  return f;
}

// (1/m!) sum over nonempty subsets S of (-1)^{m-|S|} F(sum_S X).
template <class F>
double polarize(const std::vector<SupportVector>& args, F&& fn) {
  const int m = static_cast<int>(args.size());
  double s = 0.0;
  for (unsigned mask = 1; mask < (1u << m); ++mask) {
    SupportVector sum;
    sum.values.assign(args[0].size(), 0.0);
    int count = 0;
    for (int k = 0; k < m; ++k)
      if (mask & (1u << k)) {
        sum = sum + args[static_cast<std::size_t>(k)];
        ++count;
      }
    s += ((m - count) % 2 ? -1.0 : 1.0) * fn(sum);
  }
  return s / factorial(m);
}

void check_arity(const FanClass& cls, const std::vector<SupportVector>& args, std::size_t expected) {
  if (args.size() != expected)
    throw ValidationError("expected " + std::to_string(expected) + " support vectors, got " +
                          std::to_string(args.size()));
  for (std::size_t k = 0; k < args.size(); ++k) {
    args[k].validate(cls.size());
    cls.member(args[k]);
  }
}

double mixed_face_area_unchecked(const FanClass& cls, const std::vector<SupportVector>& args, std::size_t i) {
  return polarize(args, [&](const SupportVector& h) { return cls.formal_area(i, h); });
}

double mixed_facet_route(const FanClass& cls, const std::vector<SupportVector>& args) {
  const std::vector<SupportVector> rest(args.begin() + 1, args.end());
  double s = 0.0;
  for (std::size_t i = 0; i < cls.size(); ++i) s += args[0][i] * mixed_face_area_unchecked(cls, rest, i);
  return s / (cls.dim() + 1);
}

}  // namespace

double mixed_face_area(const FanClass& cls, const std::vector<SupportVector>& args, std::size_t i) {
  check_arity(cls, args, static_cast<std::size_t>(cls.dim()));
  if (i >= cls.size()) throw ValidationError("facet index " + std::to_string(i) + " out of range");
  return mixed_face_area_unchecked(cls, args, i);
}

MixedCovolume mixed_covol(const FanClass& cls, const std::vector<SupportVector>& args) {
  check_arity(cls, args, static_cast<std::size_t>(cls.dim() + 1));
  MixedCovolume r;
  r.value = mixed_facet_route(cls, args);
  r.polarization_value = polarize(args, [&](const SupportVector& h) { return covol(cls.member(h)).covol; });
  r.discrepancy = std::abs(r.value - r.polarization_value);
  return r;
}

double mixed_covol_linear(const FuchsianPolyhedron& k, const FuchsianPolyhedron& p) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.facets().size(); ++i)
    s += -support_value(k, p.family().reps()[i]) * p.facet(i).area;
  return s / (p.dim() + 1);
}

// ---------------------------------------------------------------------------

std::string to_string(Inequality which) {
  switch (which) {
    case Inequality::ReversedAF: return "reversed-AF";
    case Inequality::Minkowski1: return "minkowski-1";
    case Inequality::Minkowski2: return "minkowski-2";
    case Inequality::ReversedBM: return "reversed-BM";
    case Inequality::Linearized1: return "linearized-1";
    case Inequality::Isoperimetric: return "isoperimetric";
    case Inequality::Convexity: return "convexity";
  }
  return "?";
}

InequalityReport make_inequality_report(Inequality name, double lhs, double rhs) {
  InequalityReport r;
  r.name = name;
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = rhs - lhs;
  r.pass = r.slack >= -tol::kInequality * std::max({std::abs(lhs), std::abs(rhs), 1.0});
  return r;
}

std::vector<InequalityReport> verify_inequalities(const FanClass& cls, const SupportVector& k1,
                                                  const SupportVector& k2, double t, std::uint64_t seed) {
  if (!(t > 0.0 && t < 1.0)) throw ValidationError("t must lie in (0, 1)");
  k1.validate(cls.size());
  k2.validate(cls.size());
  const auto p1 = cls.member(k1);
  const auto p2 = cls.member(k2);
  const int d = cls.dim();

  // Third body: a positive combination of K1 and K2 (always in the class), jittered when the class allows.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(0.2, 1.0), jitter(-0.05, 0.05);
  const SupportVector base = coef(rng) * k1 + coef(rng) * k2;
  SupportVector k3 = base;
  for (int attempt = 0; attempt < 8; ++attempt) {
    SupportVector trial = base;
    for (auto& v : trial.values) v *= 1.0 + jitter(rng);
    if (cls.contains(trial)) {
      k3 = trial;
      break;
    }
  }

  auto mixed = [&](std::vector<SupportVector> front, const SupportVector& fill) {
    while (front.size() < static_cast<std::size_t>(d + 1)) front.push_back(fill);
    return mixed_facet_route(cls, front);
  };
  const double c1 = covol(p1).covol, c2 = covol(p2).covol;
  const double v12 = mixed({k1}, k2);  // covol(K1, K2, .., K2)
  const double e = 1.0 / (d + 1);
  const double ct = covol(cls.member((1.0 - t) * k1 + t * k2)).covol;

  std::vector<InequalityReport> out;
  {
    const double a = mixed({k1, k2}, k3), b = mixed({k1, k1}, k3), c = mixed({k2, k2}, k3);
    out.push_back(make_inequality_report(Inequality::ReversedAF, a * a, b * c));
  }
  out.push_back(make_inequality_report(Inequality::Minkowski1, std::pow(v12, d + 1), std::pow(c2, d) * c1));
  out.push_back(make_inequality_report(Inequality::Minkowski2, v12 * v12, c2 * mixed({k1, k1}, k2)));
  out.push_back(make_inequality_report(Inequality::ReversedBM, std::pow(ct, e),
                                       (1.0 - t) * std::pow(c1, e) + t * std::pow(c2, e)));
  out.push_back(make_inequality_report(Inequality::Linearized1, (d + 1) * v12, d * c2 + c1));
  {
    const double sb = ball_minkowski_area(cls.family().group());
    const double cb = sb / (d + 1);
    out.push_back(make_inequality_report(Inequality::Isoperimetric, std::pow(minkowski_area(p1) / sb, d + 1),
                                         std::pow(c1 / cb, d)));
  }
  out.push_back(make_inequality_report(Inequality::Convexity, ct, (1.0 - t) * c1 + t * c2));
  return out;
}

// ---------------------------------------------------------------------------

namespace {

bool same_group(const FuchsianGroup& a, const FuchsianGroup& b) {
  if (&a == &b) return true;
  if (a.dim() != b.dim() || a.generators().size() != b.generators().size()) return false;
  for (std::size_t k = 0; k < a.generators().size(); ++k)
    if ((a.generators()[k].matrix - b.generators()[k].matrix).cwiseAbs().maxCoeff() > 1e-12) return false;
  return true;
}

template <class F>
HausdorffReport sup_over_samples(const FuchsianGroup& g, const std::vector<LorentzVector>& extra, int level, F&& fn) {
  std::vector<LorentzVector> samples = cell_sample_points(g, level);
  samples.insert(samples.end(), extra.begin(), extra.end());
  HausdorffReport r;
  r.level = level;
  r.samples = samples.size();
  for (const auto& eta : samples) r.distance = std::max(r.distance, std::abs(fn(eta)));
  return r;
}

}  // namespace

HausdorffReport hausdorff_distance(const FuchsianPolyhedron& p, const FuchsianPolyhedron& q, int level) {
  if (!same_group(p.family().group(), q.family().group()))
    throw ValidationError("polyhedra belong to different groups");
  std::vector<LorentzVector> extra = p.family().reps();
  extra.insert(extra.end(), q.family().reps().begin(), q.family().reps().end());
  return sup_over_samples(p.family().group(), extra, level,
                          [&](const LorentzVector& eta) { return support_value(p, eta) - support_value(q, eta); });
}

HausdorffReport hausdorff_distance_to_ball(const FuchsianPolyhedron& p, int level) {
  return sup_over_samples(p.family().group(), p.family().reps(), level,
                          [&](const LorentzVector& eta) { return support_value(p, eta) + 1.0; });
}

}  // namespace fpoly
