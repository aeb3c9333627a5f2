#pragma once

// Convex polygon clipping in a 2D frame. Every edge carries the label of the
// half-plane that produced it, so adjacency survives the intersection.

#include <span>
#include <vector>

namespace fpoly::planar {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
double norm(Vec2 a);

inline constexpr int kBoxLabel = -1;

/// { u : dot(normal, u) <= offset }, normal of unit length.
struct HalfPlane {
  Vec2 normal;
  double offset = 0.0;
  int label = kBoxLabel;
};

/// Counter-clockwise polygon; edge k runs from vertices[k] to vertices[k+1 mod n].
struct ConvexPolygon {
  std::vector<Vec2> vertices;
  std::vector<int> labels;

  bool empty() const { return vertices.size() < 3; }
  double area() const;
  double perimeter() const;
  double edge_length(std::size_t k) const;
  /// Largest distance from the frame origin to a vertex.
  double max_radius() const;
  bool touches_label(int label) const;
};

ConvexPolygon square(double half_width);

/// Keeps points with dot(normal,u) - offset <= eps; eps absorbs rounding so
/// that lines through an existing vertex do not create sliver edges.
ConvexPolygon clip(const ConvexPolygon& poly, const HalfPlane& hp, double eps);

/// Merges consecutive vertices closer than `eps`.
void drop_short_edges(ConvexPolygon& poly, double eps);

/// Vertex of the lines dot(a.normal,u)=a.offset and dot(b.normal,u)=b.offset.
Vec2 intersect(const HalfPlane& a, const HalfPlane& b);

double shoelace_area(std::span<const Vec2> pts);

}  // namespace fpoly::planar
