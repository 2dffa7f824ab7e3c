#pragma once

#include <cmath>

namespace layoutgame {

/// Screen-space point in pixels. y grows downward.
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

struct BoundingBox {
  double width = 5000.0;
  double height = 6000.0;

  double diagonal() const { return std::hypot(width, height); }
  bool contains(Point p) const {
    return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height;
  }
  Point clamp(Point p) const;

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Sign of the cross product (b - a) x (c - a): +1, -1 or 0.
int orientation(Point a, Point b, Point c);

/// True iff the open segments (a,b) and (c,d) share a point. Collinear
/// overlap of positive length counts; touching at an endpoint does not.
bool open_segments_intersect(Point a, Point b, Point c, Point d);

/// Distance from p to the closed segment [a,b]. Degenerate segments fall back
/// to point distance.
double point_segment_distance(Point p, Point a, Point b);

/// Downward test for a directed segment from tail to head: head strictly below
/// tail on screen and the angle against the horizontal at least
/// theta_min_degrees (inclusive). Zero-length segments are never downward.
bool is_downward(Point tail, Point head, double theta_min_degrees);

}  // namespace layoutgame
