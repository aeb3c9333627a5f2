#include "fpoly/planar.hpp"

#include <algorithm>
#include <cmath>

namespace fpoly::planar {

double norm(Vec2 a) { return std::hypot(a.x, a.y); }

double shoelace_area(std::span<const Vec2> pts) {
  const std::size_t n = pts.size();
  if (n < 3) return 0.0;
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += cross(pts[k], pts[(k + 1) % n]);
  return 0.5 * s;
}

double ConvexPolygon::area() const { return empty() ? 0.0 : shoelace_area(vertices); }

double ConvexPolygon::edge_length(std::size_t k) const {
  return norm(vertices[(k + 1) % vertices.size()] - vertices[k]);
}

double ConvexPolygon::perimeter() const {
  double p = 0.0;
  for (std::size_t k = 0; k < vertices.size(); ++k) p += edge_length(k);
  return p;
}

double ConvexPolygon::max_radius() const {
  double r = 0.0;
  for (const auto& v : vertices) r = std::max(r, norm(v));
  return r;
}

bool ConvexPolygon::touches_label(int label) const {
  return std::find(labels.begin(), labels.end(), label) != labels.end();
}

ConvexPolygon square(double h) {
  return {{{-h, -h}, {h, -h}, {h, h}, {-h, h}}, {kBoxLabel, kBoxLabel, kBoxLabel, kBoxLabel}};
}

ConvexPolygon clip(const ConvexPolygon& poly, const HalfPlane& hp, double eps) {
  const std::size_t n = poly.vertices.size();
  if (n == 0) return poly;
  std::vector<double> s(n);
  bool any_out = false;
  bool any_in = false;
  for (std::size_t k = 0; k < n; ++k) {
    s[k] = dot(hp.normal, poly.vertices[k]) - hp.offset;
    (s[k] > eps ? any_out : any_in) = true;
  }
  if (!any_out) return poly;
  if (!any_in) return {};

  ConvexPolygon out;
  out.vertices.reserve(n + 1);
  out.labels.reserve(n + 1);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t m = (k + 1) % n;
    const Vec2 cur = poly.vertices[k];
    const Vec2 nxt = poly.vertices[m];
    const bool cur_in = s[k] <= eps;
    const bool nxt_in = s[m] <= eps;
    if (cur_in) {
      out.vertices.push_back(cur);
      out.labels.push_back(poly.labels[k]);
      if (!nxt_in) {
        const double t = s[k] >= 0.0 ? 0.0 : s[k] / (s[k] - s[m]);
        out.vertices.push_back(cur + (nxt - cur) * t);
        out.labels.push_back(hp.label);
      }
    } else if (nxt_in) {
      const double t = s[m] >= 0.0 ? 1.0 : s[k] / (s[k] - s[m]);
      out.vertices.push_back(cur + (nxt - cur) * t);
      out.labels.push_back(poly.labels[k]);
    }
  }
  drop_short_edges(out, eps);
  if (out.vertices.size() < 3) return {};
  return out;
}

void drop_short_edges(ConvexPolygon& poly, double eps) {
  bool changed = true;
  while (changed && poly.vertices.size() >= 2) {
    changed = false;
    const std::size_t n = poly.vertices.size();
    for (std::size_t k = 0; k < n; ++k) {
      if (poly.edge_length(k) < eps) {
        poly.vertices.erase(poly.vertices.begin() + static_cast<std::ptrdiff_t>(k));
        poly.labels.erase(poly.labels.begin() + static_cast<std::ptrdiff_t>(k));
        changed = true;
        break;
      }
    }
  }
}

Vec2 intersect(const HalfPlane& a, const HalfPlane& b) {
  const double det = cross(a.normal, b.normal);
  return {(a.offset * b.normal.y - b.offset * a.normal.y) / det,
          (a.normal.x * b.offset - b.normal.x * a.offset) / det};
}

}  // namespace fpoly::planar
