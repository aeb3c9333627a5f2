#pragma once

// Gamma-invariant convex polyhedra given by support numbers over a family of
// orbit-representative facet normals. Only the n representative facets are
// computed; each is a half-plane intersection inside its support plane.

#include "fpoly/fuchsian.hpp"
#include "fpoly/planar.hpp"

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace fpoly {

namespace tol {
inline constexpr double kVertexActive = 1e-8;  // constraint active at a vertex (frame units)
inline constexpr double kClip = 1e-12;         // relative clipping slack
inline constexpr double kShortEdge = 1e-7;     // Jacobian warning threshold
}  // namespace tol

/// Group elements around (0,..,0,1), grown on demand and shared between builds.
class ElementCache {
public:
  explicit ElementCache(std::shared_ptr<const FuchsianGroup> group) : group_(std::move(group)) {}
  /// Snapshot containing at least every element displacing the origin by <= radius.
  std::shared_ptr<const std::vector<OrbitPoint>> within(double radius) const;

private:
  std::shared_ptr<const FuchsianGroup> group_;
  mutable std::mutex mutex_;
  mutable std::shared_ptr<const std::vector<OrbitPoint>> elements_;
  mutable double radius_ = 0.0;
};

class NormalFamily {
public:
  /// Validates: reps unit future-timelike, pairwise non-collinear, in distinct orbits.
  NormalFamily(std::shared_ptr<const FuchsianGroup> group, std::vector<LorentzVector> reps);

  const FuchsianGroup& group() const { return *group_; }
  const std::shared_ptr<const FuchsianGroup>& group_ptr() const { return group_; }
  const std::vector<LorentzVector>& reps() const { return reps_; }
  std::size_t size() const { return reps_.size(); }
  int dim() const { return group_->dim(); }
  /// Max distance from the origin of the representatives pulled back by reduce_point.
  double spread() const { return spread_; }
  /// reps()[i] = reducer(i) reduced()[i] with reduced()[i] close to the origin.
  const std::vector<LorentzVector>& reduced() const { return reduced_; }
  const Isometry& reducer(std::size_t i) const { return reducers_[i]; }
  const SquareMatrix& reducer_inverse(std::size_t i) const { return reducer_inverses_[i]; }
  const ElementCache& elements() const { return *cache_; }

  bool same_as(const NormalFamily& other) const;
  /// The family with representatives in a new order (rep k of the result is reps[order[k]]).
  NormalFamily permuted(const std::vector<std::size_t>& order) const;
  /// Union with extra representatives (must stay in distinct orbits).
  NormalFamily extended(const std::vector<LorentzVector>& extra) const;

private:
  std::shared_ptr<const FuchsianGroup> group_;
  std::vector<LorentzVector> reps_;
  std::vector<LorentzVector> reduced_;
  std::vector<Isometry> reducers_;
  std::vector<SquareMatrix> reducer_inverses_;
  double spread_ = 0.0;
  std::shared_ptr<ElementCache> cache_;
};

struct SupportVector {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double max() const;
  /// Throws ValidationError naming the first non-positive entry.
  void validate(std::size_t expected_size) const;
};

SupportVector operator+(const SupportVector& a, const SupportVector& b);
SupportVector operator*(double s, const SupportVector& a);

/// A codimension-2 face of the polyhedron seen from facet i: the facet of
/// orbit normal gamma * eta_j. For d = 1 it is an endpoint and `length` is 1.
struct FacetEdge {
  std::size_t neighbor = 0;      // orbit index j
  Isometry element;              // gamma
  std::vector<int> word;         // canonical word of gamma
  double phi = 0.0;              // hyperbolic distance between eta_i and gamma eta_j
  double support = 0.0;          // h_ij, signed distance of the edge line from the foot
  double length = 0.0;           // L_ij
  planar::Vec2 direction;        // outward unit normal in the facet frame
};

/// A constraint line near the facet; kept for vertex-activity tests.
struct NearbyConstraint {
  std::size_t neighbor = 0;
  double phi = 0.0;
  planar::HalfPlane half_plane;
};

struct FacetGeometry {
  std::size_t rep_index = 0;
  SupportPlane plane;
  /// CCW polygon (d = 2) or the two endpoints {lo,0},{hi,0} (d = 1); empty for false faces.
  std::vector<planar::Vec2> polygon;
  std::vector<FacetEdge> edges;  // edge k runs from polygon[k] to polygon[k+1]; for d = 1: {lo, hi}
  std::vector<NearbyConstraint> nearby;
  double area = 0.0;
  double cutoff = 0.0;  // orbit cutoff that certified the facet

  bool false_face() const { return polygon.empty(); }
  LorentzVector ambient(planar::Vec2 u) const;
  std::vector<LorentzVector> ambient_vertices() const;
};

struct BuildOptions {
  bool allow_false_faces = false;
  double initial_cutoff = 1.0;
  double max_cutoff = 8.0;
};

class FuchsianPolyhedron {
public:
  FuchsianPolyhedron(NormalFamily family, SupportVector support, std::vector<FacetGeometry> facets);

  const NormalFamily& family() const { return family_; }
  const SupportVector& support() const { return support_; }
  const std::vector<FacetGeometry>& facets() const { return facets_; }
  const FacetGeometry& facet(std::size_t i) const { return facets_[i]; }
  const std::string& fan_signature() const { return signature_; }
  int dim() const { return family_.dim(); }
  std::vector<double> areas() const;
  /// Shortest edge over all facets (infinity if none).
  double min_edge_length() const;
  /// All polygon vertices of the representative facets, ambient coordinates.
  std::vector<LorentzVector> vertices() const;

private:
  NormalFamily family_;
  SupportVector support_;
  std::vector<FacetGeometry> facets_;
  std::string signature_;
};

/// h_ij = -(h_j - h_i cosh phi) / sinh phi.
double support_number(double h_i, double h_j, double phi);
/// Support number of a codimension-3 face inside a facet: (h_ij - h_ik cos w) / sin w.
double subface_support(double h_ij, double h_ik, double omega);

FuchsianPolyhedron build(const NormalFamily& family, const SupportVector& h, const BuildOptions& options = {});

bool is_simple(const FuchsianPolyhedron& p);
bool strongly_isomorphic(const FuchsianPolyhedron& p, const FuchsianPolyhedron& q);

struct PerturbOptions {
  int max_retries = 32;
};
FuchsianPolyhedron perturb_to_simple(const FuchsianPolyhedron& p, double epsilon, std::uint64_t seed,
                                     const PerturbOptions& options = {});

inline constexpr int kMaxBallLevel = 6;

/// Points of a nested triangulation of the Dirichlet cell of the origin, one per orbit.
/// Level 0 is the origin alone; each further level halves the spacing.
std::vector<LorentzVector> cell_sample_points(const FuchsianGroup& g, int level);
/// Spacing (max edge length) of the triangulation behind `level` (level >= 1).
double cell_sample_spacing(const FuchsianGroup& g, int level);

struct BallApproximation {
  int level = 0;
  double spacing = 0.0;
};

/// Tangent polyhedron (all support numbers 1) over the cell samples of the level.
FuchsianPolyhedron approximate_ball_level(std::shared_ptr<const FuchsianGroup> g, int level);
/// Picks the coarsest level whose spacing is <= sample_radius.
FuchsianPolyhedron approximate_ball(std::shared_ptr<const FuchsianGroup> g, double sample_radius,
                                    BallApproximation* info = nullptr);

/// Extended support function H(eta) = max over vertices of <v, eta>.
double support_value(const FuchsianPolyhedron& p, const LorentzVector& eta);
/// Radial coordinate -1/H(eta) of the polar dual's boundary in direction eta.
double polar_dual_radial(const FuchsianPolyhedron& p, const LorentzVector& eta);

enum class MeshFormat { Obj, Json };
std::string export_mesh(const FuchsianPolyhedron& p, int word_length, MeshFormat format);

}  // namespace fpoly
