#include "fpoly/lorentz.hpp"

#include "fpoly/errors.hpp"

#include <algorithm>
#include <cmath>

namespace fpoly {

LorentzVector::LorentzVector(std::initializer_list<double> coords)
    : LorentzVector(std::span<const double>(coords.begin(), coords.size())) {}

LorentzVector::LorentzVector(std::span<const double> coords) {
  if (coords.size() < 2 || coords.size() > static_cast<std::size_t>(kMaxCoords))
    throw ValidationError("LorentzVector needs between 2 and " + std::to_string(kMaxCoords) +
                          " coordinates, got " + std::to_string(coords.size()));
  c_.resize(static_cast<Eigen::Index>(coords.size()));
  for (std::size_t k = 0; k < coords.size(); ++k) c_[static_cast<Eigen::Index>(k)] = coords[k];
}

LorentzVector LorentzVector::origin(int dim) {
  LorentzVector v(dim);
  v[dim] = 1.0;
  return v;
}

std::string to_string(CausalClass c) {
  switch (c) {
    case CausalClass::FutureTimelike: return "future-timelike";
    case CausalClass::PastTimelike: return "past-timelike";
    case CausalClass::FutureLightlike: return "future-lightlike";
    case CausalClass::PastLightlike: return "past-lightlike";
    case CausalClass::Spacelike: return "spacelike";
    case CausalClass::Zero: return "zero";
  }
  return "unknown";
}

double bilinear(const LorentzVector& x, const LorentzVector& y) {
  if (x.size() != y.size())
    throw ValidationError("bilinear: dimension mismatch (" + std::to_string(x.dim()) + " vs " +
                          std::to_string(y.dim()) + ")");
  return bilinear_unchecked(x, y);
}

CausalClass classify(const LorentzVector& x) {
  const double scale = x.coords().squaredNorm();
  if (scale == 0.0) return CausalClass::Zero;
  // Relative test so that classify(s*x) == classify(x) for s > 0.
  const double q = bilinear(x, x) / scale;
  const bool future = x.time() > 0.0;
  if (q < -tol::kLight) return future ? CausalClass::FutureTimelike : CausalClass::PastTimelike;
  if (q > tol::kLight) return CausalClass::Spacelike;
  return future ? CausalClass::FutureLightlike : CausalClass::PastLightlike;
}

bool is_unit_future_timelike(const LorentzVector& x, double tolerance) {
  // Rounding in <x,x> grows with the square of the coordinates.
  return x.time() > 0.0 && std::abs(bilinear(x, x) + 1.0) <= tolerance * std::max(1.0, x.time() * x.time());
}

double clamped_arccosh(double c) {
  if (c < 1.0) {
    if (c >= 1.0 - tol::kArccoshClamp) return 0.0;
    throw NumericError("arccosh argument " + std::to_string(c) + " below 1");
  }
  return std::acosh(c);
}

double hyp_distance(const LorentzVector& u, const LorentzVector& v) {
  if (!is_unit_future_timelike(u) || !is_unit_future_timelike(v))
    throw ValidationError("hyp_distance: inputs must be unit future-timelike");
  return clamped_arccosh(-bilinear(u, v));
}

LorentzVector to_hyperboloid(const LorentzVector& x) {
  if (classify(x) != CausalClass::FutureTimelike)
    throw ValidationError("to_hyperboloid: input is " + to_string(classify(x)));
  return x * (1.0 / std::sqrt(-bilinear(x, x)));
}

LorentzVector SupportPlane::point(std::span<const double> u) const {
  LorentzVector x = foot;
  for (std::size_t a = 0; a < frame.size(); ++a) x += frame[a] * u[a];
  return x;
}

std::vector<double> SupportPlane::coordinates(const LorentzVector& x) const {
  const LorentzVector rel = x - foot;
  std::vector<double> u(frame.size());
  for (std::size_t a = 0; a < frame.size(); ++a) u[a] = bilinear(rel, frame[a]);
  return u;
}

std::vector<LorentzVector> spacelike_frame(const LorentzVector& eta) {
  const int n = eta.size();
  std::vector<LorentzVector> frame;
  for (int k = 0; k < n && static_cast<int>(frame.size()) < n - 1; ++k) {
    LorentzVector v(eta.dim());
    v[k] = 1.0;
    // Projection onto eta-perp: v + <v,eta> eta, since <eta,eta> = -1.
    v += eta * bilinear(v, eta);
    for (const auto& e : frame) v = v - e * bilinear(v, e);
    const double nn = bilinear(v, v);
    if (nn < 1e-6) continue;  // near-parallel candidate
    frame.push_back(v * (1.0 / std::sqrt(nn)));
  }
  return frame;
}

SupportPlane support_plane(const LorentzVector& eta, double h) {
  if (!(h > 0.0)) throw ValidationError("support_plane: offset must be positive, got " + std::to_string(h));
  if (!is_unit_future_timelike(eta)) throw ValidationError("support_plane: normal must be unit future-timelike");
  return SupportPlane{eta, h, eta * h, spacelike_frame(eta)};
}

LorentzVector hyperboloid_point(std::span<const double> dir, double t) {
  LorentzVector p(static_cast<int>(dir.size()));
  for (std::size_t k = 0; k < dir.size(); ++k) p[static_cast<int>(k)] = std::sinh(t) * dir[k];
  p[static_cast<int>(dir.size())] = std::cosh(t);
  return p;
}

}  // namespace fpoly
