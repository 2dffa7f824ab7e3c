#include "layoutgame/geometry.hpp"

#include <algorithm>
#include <numbers>

namespace layoutgame {

Point BoundingBox::clamp(Point p) const {
  return {std::clamp(p.x, 0.0, width), std::clamp(p.y, 0.0, height)};
}

int orientation(Point a, Point b, Point c) {
  const double cross = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
  return (cross > 0.0) - (cross < 0.0);
}

namespace {

// Open-interval overlap of two collinear segments, measured along the axis
// where the first segment has the larger extent.
bool collinear_overlap(Point a, Point b, Point c, Point d) {
  const bool use_x = std::abs(b.x - a.x) >= std::abs(b.y - a.y);
  auto coord = [use_x](Point p) { return use_x ? p.x : p.y; };
  const double lo1 = std::min(coord(a), coord(b));
  const double hi1 = std::max(coord(a), coord(b));
  const double lo2 = std::min(coord(c), coord(d));
  const double hi2 = std::max(coord(c), coord(d));
  return std::max(lo1, lo2) < std::min(hi1, hi2);
}

}  // namespace

bool open_segments_intersect(Point a, Point b, Point c, Point d) {
  // An open segment of zero length is empty.
  if (a == b || c == d) {
    return false;
  }
  const int o1 = orientation(a, b, c);
  const int o2 = orientation(a, b, d);
  const int o3 = orientation(c, d, a);
  const int o4 = orientation(c, d, b);
  if (o1 == 0 && o2 == 0) {
    return collinear_overlap(a, b, c, d);
  }
  // Any remaining zero means an endpoint touches the other segment, which is
  // not a point of both open segments.
  return o1 * o2 < 0 && o3 * o4 < 0;
}

double point_segment_distance(Point p, Point a, Point b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  if (len2 == 0.0) {
    return distance(p, a);
  }
  const double t = ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2;
  if (t <= 0.0) {
    return distance(p, a);
  }
  if (t >= 1.0) {
    return distance(p, b);
  }
  return std::abs(dx * (p.y - a.y) - dy * (p.x - a.x)) / std::sqrt(len2);
}

bool is_downward(Point tail, Point head, double theta_min_degrees) {
  const double dy = head.y - tail.y;
  if (!(dy > 0.0)) {
    return false;
  }
  const double angle = std::atan2(dy, std::abs(head.x - tail.x)) * 180.0 / std::numbers::pi;
  return angle >= theta_min_degrees;
}

}  // namespace layoutgame
