#pragma once

// Covolume, facet areas and their derivatives; mixed areas and mixed
// covolumes on a simple strongly isomorphic class; the inequality harness.

#include "fpoly/polyhedra.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace fpoly {

namespace tol {
inline constexpr double kInequality = 1e-9;  // relative pass tolerance
}  // namespace tol

struct CovolumeReport {
  double covol = 0.0;
  std::vector<double> areas;
  SupportVector support;
};

/// (1/(d+1)) sum h(i) A(F_i).
CovolumeReport covol(const FuchsianPolyhedron& p);

struct JacobianCertificate {
  double symmetry_error = 0.0;    // max |J - J^T|
  double dominance_margin = 0.0;  // min_i J_ii - sum_{j != i} |J_ij|
  bool positive_diagonal = false;
  bool nonpositive_offdiagonal = false;
  bool cholesky_ok = false;
  double min_eigenvalue = 0.0;
};

struct AreaJacobian {
  Eigen::MatrixXd matrix;  // (i,j) = dA(F_i)/dh(j)
  double min_edge_length = 0.0;
  std::vector<std::string> warnings;

  JacobianCertificate certificate() const;
};

AreaJacobian area_jacobian(const FuchsianPolyhedron& p);
/// Hessian of covol in support coordinates; equal to the area Jacobian.
Eigen::MatrixXd covol_hessian(const FuchsianPolyhedron& p);

/// Total facet area per fundamental domain.
double minkowski_area(const FuchsianPolyhedron& p);
/// S(B): volume of H^d / Gamma.
double ball_minkowski_area(const FuchsianGroup& g);
/// covol(B) = S(B) / (d+1).
double ball_covol(const FuchsianGroup& g);

/// The normal fan of a simple polyhedron, with the facet areas as formal
/// polynomials in the support vector (edge offsets are linear in h).
class FanClass {
public:
  explicit FanClass(const FuchsianPolyhedron& reference);

  const NormalFamily& family() const { return family_; }
  const std::string& signature() const { return signature_; }
  int dim() const { return family_.dim(); }
  std::size_t size() const { return family_.size(); }

  /// Builds h and throws FanMismatchError unless its fan equals the class fan.
  FuchsianPolyhedron member(const SupportVector& h) const;
  bool contains(const SupportVector& h) const;

  double formal_area(std::size_t i, const SupportVector& h) const;
  std::vector<double> formal_areas(const SupportVector& h) const;
  double formal_covol(const SupportVector& h) const;

private:
  struct Edge {
    std::size_t neighbor;
    double cosh_phi;
    double sinh_phi;
    double omega_next;  // angle to the next edge's normal (d = 2)
  };
  double offset(std::size_t i, const Edge& e, const SupportVector& h) const;

  NormalFamily family_;
  std::string signature_;
  std::vector<std::vector<Edge>> edges_;
};

/// Mixed area of facet i over d support vectors of the class (polarized shoelace area).
double mixed_face_area(const FanClass& cls, const std::vector<SupportVector>& args, std::size_t i);

struct MixedCovolume {
  double value = 0.0;               // facet route, (1/(d+1)) <X_1, A(X_2, ..)>
  double polarization_value = 0.0;  // alternating sum over covolumes of partial sums
  double discrepancy = 0.0;
};

/// Mixed covolume of d+1 members of the class.
MixedCovolume mixed_covol(const FanClass& cls, const std::vector<SupportVector>& args);

/// covol(K, P, .., P) = (1/(d+1)) sum_i h_K(eta_i) A(F_i(P)) over the facets of P.
double mixed_covol_linear(const FuchsianPolyhedron& k, const FuchsianPolyhedron& p);

enum class Inequality { ReversedAF, Minkowski1, Minkowski2, ReversedBM, Linearized1, Isoperimetric, Convexity };
std::string to_string(Inequality which);

struct InequalityReport {
  Inequality name = Inequality::ReversedAF;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs
  bool pass = false;
};

InequalityReport make_inequality_report(Inequality name, double lhs, double rhs);

/// Evaluates every reversed inequality on K1, K2 (and a third member drawn from seed).
std::vector<InequalityReport> verify_inequalities(const FanClass& cls, const SupportVector& k1,
                                                  const SupportVector& k2, double t, std::uint64_t seed);

struct HausdorffReport {
  double distance = 0.0;
  std::size_t samples = 0;
  int level = 0;
};

/// max |H_P - H_Q| over facet normals of both and the cell samples of `level`.
HausdorffReport hausdorff_distance(const FuchsianPolyhedron& p, const FuchsianPolyhedron& q, int level = 3);
/// Same against the unit ball B, whose support is -1 on unit directions.
HausdorffReport hausdorff_distance_to_ball(const FuchsianPolyhedron& p, int level = 3);

}  // namespace fpoly
