#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace ppcnet {

using Vec2 = Eigen::Vector2d;

struct Circle {
  Vec2 center;
  double radius;
};

// Axis-aligned rectangle, min corner / max corner.
struct Rect {
  Vec2 lo;
  Vec2 hi;

  bool contains(const Vec2& p) const {
    return p.x() >= lo.x() && p.x() <= hi.x() && p.y() >= lo.y() && p.y() <= hi.y();
  }
  double width() const { return hi.x() - lo.x(); }
  double height() const { return hi.y() - lo.y(); }
  double area() const { return width() * height(); }
};

// A thick 2D line segment; one per arm link.
struct Capsule {
  Vec2 a;
  Vec2 b;
  double half_width;
};

inline double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 <= 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

namespace detail {

inline double cross2(const Vec2& u, const Vec2& v) { return u.x() * v.y() - u.y() * v.x(); }

inline bool segments_intersect(const Vec2& a1, const Vec2& a2, const Vec2& b1, const Vec2& b2) {
  const double d1 = cross2(a2 - a1, b1 - a1);
  const double d2 = cross2(a2 - a1, b2 - a1);
  const double d3 = cross2(b2 - b1, a1 - b1);
  const double d4 = cross2(b2 - b1, a2 - b1);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  // Collinear / endpoint touches fall through to the distance term, which is 0 there.
  return false;
}

}  // namespace detail

inline double segment_segment_distance(const Vec2& a1, const Vec2& a2, const Vec2& b1,
                                       const Vec2& b2) {
  if (detail::segments_intersect(a1, a2, b1, b2)) return 0.0;
  double d = point_segment_distance(a1, b1, b2);
  d = std::min(d, point_segment_distance(a2, b1, b2));
  d = std::min(d, point_segment_distance(b1, a1, a2));
  d = std::min(d, point_segment_distance(b2, a1, a2));
  return d;
}

inline double point_rect_distance(const Vec2& p, const Rect& r) {
  const double dx = std::max({r.lo.x() - p.x(), 0.0, p.x() - r.hi.x()});
  const double dy = std::max({r.lo.y() - p.y(), 0.0, p.y() - r.hi.y()});
  return std::hypot(dx, dy);
}

inline double segment_rect_distance(const Vec2& a, const Vec2& b, const Rect& r) {
  if (r.contains(a) || r.contains(b)) return 0.0;
  const Vec2 c00 = r.lo;
  const Vec2 c10{r.hi.x(), r.lo.y()};
  const Vec2 c11 = r.hi;
  const Vec2 c01{r.lo.x(), r.hi.y()};
  double d = segment_segment_distance(a, b, c00, c10);
  d = std::min(d, segment_segment_distance(a, b, c10, c11));
  d = std::min(d, segment_segment_distance(a, b, c11, c01));
  d = std::min(d, segment_segment_distance(a, b, c01, c00));
  return d;
}

inline double capsule_capsule_distance(const Capsule& p, const Capsule& q) {
  return segment_segment_distance(p.a, p.b, q.a, q.b);
}

}  // namespace ppcnet
