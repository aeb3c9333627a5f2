#pragma once

// Minkowski space R^{d+1} with the form x1*y1 + ... + xd*yd - x_{d+1}*y_{d+1}.

#include <Eigen/Dense>

#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace fpoly {

inline constexpr int kMaxCoords = 8;

using Coords = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxCoords, 1>;
using SquareMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxCoords, kMaxCoords>;

namespace tol {
inline constexpr double kLight = 1e-10;      // causal classification
inline constexpr double kGeometric = 1e-9;   // geometric predicates
inline constexpr double kUnit = 1e-9;        // accepted deviation of <x,x> from -1
inline constexpr double kArccoshClamp = 1e-12;
}  // namespace tol

class LorentzVector {
public:
  LorentzVector() = default;
  explicit LorentzVector(int dim) : c_(Coords::Zero(dim + 1)) {}
  LorentzVector(std::initializer_list<double> coords);
  explicit LorentzVector(std::span<const double> coords);
  explicit LorentzVector(const Coords& c) : c_(c) {}

  static LorentzVector origin(int dim);  // (0,...,0,1)

  int dim() const noexcept { return static_cast<int>(c_.size()) - 1; }
  int size() const noexcept { return static_cast<int>(c_.size()); }
  double operator[](int k) const { return c_[k]; }
  double& operator[](int k) { return c_[k]; }
  double time() const { return c_[c_.size() - 1]; }

  const Coords& coords() const noexcept { return c_; }
  std::vector<double> to_vector() const { return {c_.data(), c_.data() + c_.size()}; }

  LorentzVector operator+(const LorentzVector& o) const { return LorentzVector(Coords(c_ + o.c_)); }
  LorentzVector operator-(const LorentzVector& o) const { return LorentzVector(Coords(c_ - o.c_)); }
  LorentzVector operator*(double s) const { return LorentzVector(Coords(c_ * s)); }
  friend LorentzVector operator*(double s, const LorentzVector& v) { return v * s; }
  LorentzVector& operator+=(const LorentzVector& o) { c_ += o.c_; return *this; }

private:
  Coords c_;
};

enum class CausalClass { FutureTimelike, PastTimelike, FutureLightlike, PastLightlike, Spacelike, Zero };

std::string to_string(CausalClass c);

/// <x,y>_- ; throws ValidationError on dimension mismatch.
double bilinear(const LorentzVector& x, const LorentzVector& y);

/// Unchecked form for hot loops; x and y must have equal size.
inline double bilinear_unchecked(const LorentzVector& x, const LorentzVector& y) {
  const auto n = x.size() - 1;
  double s = -x[n] * y[n];
  for (int k = 0; k < n; ++k) s += x[k] * y[k];
  return s;
}

CausalClass classify(const LorentzVector& x);

bool is_unit_future_timelike(const LorentzVector& x, double tolerance = tol::kUnit);

/// Hyperbolic distance between two points of the unit hyperboloid.
double hyp_distance(const LorentzVector& u, const LorentzVector& v);

/// arccosh with the clamp rule: [1-1e-12, 1] maps to 0, below is an error.
double clamped_arccosh(double c);

/// Radial projection of a future-timelike vector onto the unit hyperboloid.
LorentzVector to_hyperboloid(const LorentzVector& x);

/// The spacelike hyperplane {x : <x, normal> = -offset} with an orthonormal frame.
struct SupportPlane {
  LorentzVector normal;
  double offset = 0.0;
  LorentzVector foot;
  std::vector<LorentzVector> frame;

  /// Ambient point foot + sum_a u_a * frame_a.
  LorentzVector point(std::span<const double> u) const;
  /// Frame coordinates of an ambient point (assumed on the plane).
  std::vector<double> coordinates(const LorentzVector& x) const;
};

/// Deterministic orthonormal basis of the spacelike complement of a unit timelike vector.
std::vector<LorentzVector> spacelike_frame(const LorentzVector& eta);

SupportPlane support_plane(const LorentzVector& eta, double h);

/// Point on the hyperboloid at distance `t` from the origin (0,..,0,1) in direction `dir` (unit, spatial).
LorentzVector hyperboloid_point(std::span<const double> dir, double t);

}  // namespace fpoly
