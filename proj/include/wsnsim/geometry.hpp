#pragma once

#include <cmath>

namespace wsnsim {

// Planar position in meters.
struct Point2D {
  double x = 0.0;
  double y = 0.0;
};

inline double squared_distance(Point2D p, Point2D q) {
  const double dx = p.x - q.x;
  const double dy = p.y - q.y;
  return dx * dx + dy * dy;
}

// Euclidean distance in meters.
inline double euclidean(Point2D p, Point2D q) {
  return std::sqrt(squared_distance(p, q));
}

}  // namespace wsnsim
