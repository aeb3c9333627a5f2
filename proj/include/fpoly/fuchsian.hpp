#pragma once

// Fuchsian groups acting on the hyperboloid: generators, word balls, orbits
// and Dirichlet cells.

#include "fpoly/lorentz.hpp"

#include <optional>
#include <utility>
#include <string>
#include <vector>

namespace fpoly {

namespace tol {
inline constexpr double kIsometry = 1e-9;
inline constexpr double kMatrixDedup = 1e-8;
inline constexpr double kOrbitDedup = 1e-8;
inline constexpr int kRenormalizeWordLength = 16;
}  // namespace tol

/// A linear isometry of Minkowski space preserving the future cone.
struct Isometry {
  SquareMatrix matrix;
  std::vector<int> word;  // generator indices, applied left to right as a matrix product

  static Isometry identity(int dim);
  LorentzVector apply(const LorentzVector& x) const { return LorentzVector(Coords(matrix * x.coords())); }
  int dim() const { return static_cast<int>(matrix.rows()) - 1; }
  /// cosh of the displacement of (0,..,0,1).
  double origin_cosh() const { return matrix(matrix.rows() - 1, matrix.cols() - 1); }
};

/// this * other, with the word concatenated; renormalized on long words.
Isometry compose(const Isometry& a, const Isometry& b);

/// Max deviation of M^T J M from J.
double form_residual(const SquareMatrix& m);
bool is_isometry(const SquareMatrix& m, double tolerance = tol::kIsometry);

/// J M^T J, the inverse of an isometry.
SquareMatrix lorentz_inverse(const SquareMatrix& m);

/// One Newton-Schulz step pulling M back onto the isometry group.
SquareMatrix renormalize(const SquareMatrix& m);

/// Rotation by theta in the x1x2-plane (d >= 2) and boost along x1.
SquareMatrix rotation(int dim, double theta);
SquareMatrix boost(int dim, double t);

/// Translation length of a hyperbolic isometry (from its trace).
double translation_length(const SquareMatrix& m);

class FuchsianGroup {
public:
  /// Adds missing inverses; throws ValidationError on non-isometries.
  FuchsianGroup(int dim, std::vector<SquareMatrix> generators, std::string label,
                std::optional<double> quotient_volume = std::nullopt);

  int dim() const noexcept { return dim_; }
  const std::string& label() const noexcept { return label_; }
  const std::vector<Isometry>& generators() const noexcept { return generators_; }
  int inverse_of(int g) const { return inverse_[static_cast<std::size_t>(g)]; }

  /// Volume of H^d / Gamma: given by metadata, or measured on the Dirichlet cell.
  double quotient_volume() const;
  bool has_quotient_volume_metadata() const { return quotient_volume_.has_value(); }

  /// Smallest displacement of `x` by a generator.
  double min_generator_displacement(const LorentzVector& x) const;
  double max_generator_displacement(const LorentzVector& x) const;

private:
  int dim_;
  std::vector<Isometry> generators_;
  std::vector<int> inverse_;
  std::string label_;
  std::optional<double> quotient_volume_;
};

/// Boost group in dimension d = 1 with translation length `ell`.
FuchsianGroup boost_group(double ell);

/// cosh of the side-pairing translation length of the regular genus-2 octagon (angles pi/4).
double octagon_translation_cosh();

/// Genus-2 surface group pairing opposite sides of the regular octagon centred at (0,0,1).
FuchsianGroup octagon_group();

/// Product a0 a1^-1 a2 a3^-1 a0^-1 a1 a2^-1 a3 of the octagon side pairings.
SquareMatrix octagon_relator(const FuchsianGroup& octagon);

/// All distinct elements of word length <= L, identity first, canonical order.
std::vector<Isometry> word_ball(const FuchsianGroup& g, int max_length);

struct OrbitPoint {
  Isometry element;
  LorentzVector point;
  double distance = 0.0;
};

struct OrbitBall {
  LorentzVector base;  // normalized onto the hyperboloid
  std::vector<OrbitPoint> elements;  // sorted by distance, base first
  double radius = 0.0;  // max distance retained
  int word_length = 0;  // deepest shell explored
};

/// x = delta q with q reached from x by greedy displacement descent towards the origin.
std::pair<Isometry, LorentzVector> reduce_point(const FuchsianGroup& g, const LorentzVector& x);

/// Orbit points within hyperbolic distance R of x.
OrbitBall orbit(const FuchsianGroup& g, const LorentzVector& x, double radius);

/// Word of a group element obtained by greedy displacement descent, when the
/// descent reaches the identity.
std::optional<std::vector<int>> canonical_word(const FuchsianGroup& g, const SquareMatrix& m);

struct DirichletCell {
  LorentzVector center;
  std::vector<LorentzVector> vertices;  // on the hyperboloid, counter-clockwise (d=2); two endpoints (d=1)
  std::vector<double> interior_angles;  // d = 2 only
  double circumradius = 0.0;
  double orbit_radius = 0.0;  // radius of the orbit ball used
  double volume = 0.0;        // hyperbolic area (d=2) or length (d=1)
};

DirichletCell dirichlet_cell(const FuchsianGroup& g, const LorentzVector& a);

/// Angle at p between the geodesics towards q and r.
double hyperbolic_angle(const LorentzVector& p, const LorentzVector& q, const LorentzVector& r);

}  // namespace fpoly
