#include "fpoly/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fpoly {

void SolverConfig::validate() const {
  if (!(tol > 0.0)) throw ValidationError("solver tol must be positive");
  if (max_iter < 1) throw ValidationError("solver max_iter must be at least 1");
  if (!(shrink > 0.0 && shrink < 1.0)) throw ValidationError("solver shrink must lie in (0, 1)");
  if (!(min_step > 0.0 && min_step <= 1.0)) throw ValidationError("solver min_step must lie in (0, 1]");
}

namespace {

void validate_targets(const NormalFamily& family, const std::vector<double>& f) {
  if (f.size() != family.size())
    throw ValidationError("expected " + std::to_string(family.size()) + " target areas, got " +
                          std::to_string(f.size()));
  for (std::size_t i = 0; i < f.size(); ++i)
    if (!(f[i] > 0.0) || !std::isfinite(f[i]))
      throw ValidationError("target area " + std::to_string(i) + " must be positive");
}

// Boundary measure of the Euclidean d-ball of volume v.
double ball_perimeter(int d, double v) {
  const double unit = std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
  return d * std::pow(unit, 1.0 / d) * std::pow(v, (d - 1.0) / d);
}

double sup_residual(const std::vector<double>& a, const std::vector<double>& f) {
  double r = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) r = std::max(r, std::abs(a[i] - f[i]));
  return r;
}

}  // namespace

double min_normal_separation(const NormalFamily& family) {
  const auto& q = family.reduced();
  for (double r = 1.0; r <= 64.0; r *= 2.0) {
    const double reach = 2.0 * family.spread() + r;
    const auto elements = family.elements().within(reach + 1e-9);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& e : *elements) {
      if (e.distance > reach) break;
      for (std::size_t j = 0; j < q.size(); ++j) {
        const LorentzVector moved = e.element.apply(q[j]);
        for (std::size_t i = 0; i < q.size(); ++i) {
          if (i == j && e.distance == 0.0) continue;
          best = std::min(best, hyp_distance(q[i], moved));
        }
      }
    }
    if (best <= r) return best;
  }
  throw NumericError("normal separation not found within the search radius");
}

double properness_bound(const NormalFamily& family, const std::vector<double>& f) {
  validate_targets(family, f);
  const int d = family.dim();
  const double lambda = std::tanh(min_normal_separation(family) / 2.0);  // (cosh phi - 1) / sinh phi
  const double fmax = *std::max_element(f.begin(), f.end());
  const double fmin = *std::min_element(f.begin(), f.end());
  return d * fmax / (lambda * ball_perimeter(d, fmin));
}

SolverReport solve_minkowski(const NormalFamily& family, const std::vector<double>& f, const SolverConfig& cfg) {
  cfg.validate();
  validate_targets(family, f);
  const std::size_t n = family.size();
  const int d = family.dim();

  SolverReport rep;
  rep.properness_bound = properness_bound(family, f);

  // Tangent polyhedra of the ball have every facet, so s(1,..,1) is admissible.
  SupportVector h;
  h.values.assign(n, 1.0);
  {
    const auto a1 = build(family, h).areas();
    double sf = 0.0, sa = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sf += f[i];
      sa += a1[i];
    }
    h = std::pow(sf / sa, 1.0 / d) * h;
  }
  const double fnorm = *std::max_element(f.begin(), f.end());
  const double ceiling = 2.0 * std::max(rep.properness_bound, h.max());

  auto p = build(family, h);
  auto areas = p.areas();
  double res = sup_residual(areas, f);
  rep.residual_history.push_back(res);

  while (true) {
    if (res <= cfg.tol * fnorm) {
      rep.converged = true;
      break;
    }
    if (rep.iterations >= cfg.max_iter) {
      rep.solution = h;
      throw NonConvergenceError("Newton iteration did not converge in " + std::to_string(cfg.max_iter) +
                                    " iterations (residual " + std::to_string(res) + ")",
                                rep);
    }
    const Eigen::MatrixXd jac = area_jacobian(p).matrix;
    Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (jac + jac.transpose()));
    if (llt.info() != Eigen::Success) {
      rep.solution = h;
      throw NonConvergenceError("area Jacobian is not positive definite", rep);
    }
    Eigen::VectorXd r(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) r[static_cast<Eigen::Index>(i)] = areas[i] - f[i];
    const Eigen::VectorXd delta = llt.solve(-r);

    bool accepted = false, any_admissible = false;
    for (double alpha = 1.0; alpha >= cfg.min_step; alpha *= cfg.shrink) {
      SupportVector trial = h;
      for (std::size_t i = 0; i < n; ++i) trial.values[i] += alpha * delta[static_cast<Eigen::Index>(i)];
      if (*std::min_element(trial.values.begin(), trial.values.end()) <= 0.0 || trial.max() > ceiling) continue;
      try {
        auto q = build(family, trial);
        any_admissible = true;
        auto qa = q.areas();
        const double qres = sup_residual(qa, f);
        if (qres < res) {
          if (q.fan_signature() != p.fan_signature()) ++rep.combinatorics_changes;
          h = std::move(trial);
          p = std::move(q);
          areas = std::move(qa);
          res = qres;
          rep.step_lengths.push_back(alpha);
          accepted = true;
          break;
        }
      } catch (const EmptyFacetError&) {
      }
    }
    ++rep.iterations;
    if (!accepted) {
      rep.solution = h;
      if (!any_admissible) throw DomainEscapeError("no step length keeps the support vector admissible", rep);
      throw NonConvergenceError("line search could not decrease the residual (" + std::to_string(res) + ")", rep);
    }
    rep.residual_history.push_back(res);
  }
  rep.solution = h;
  return rep;
}

}  // namespace fpoly
