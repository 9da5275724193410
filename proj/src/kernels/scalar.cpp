#include <cmath>
#include <limits>

#include "mulepatrol/kernels.hpp"

namespace mule::kernels::scalar {

namespace {

inline double sq_dist(double px, double py, double qx, double qy) {
  const double dx = px - qx;
  const double dy = py - qy;
  return dx * dx + dy * dy;
}

}  // namespace

void nearest_endpoints(Point qa, Point qb, const SegmentSoA& cand, std::span<double> dist,
                       std::span<std::uint8_t> selector) {
  const std::size_t n = cand.ax.size();
  for (std::size_t j = 0; j < n; ++j) {
    double best = sq_dist(qa.x, qa.y, cand.ax[j], cand.ay[j]);
    std::uint8_t sel = 0;
    const double d1 = sq_dist(qa.x, qa.y, cand.bx[j], cand.by[j]);
    if (d1 < best) best = d1, sel = 1;
    const double d2 = sq_dist(qb.x, qb.y, cand.ax[j], cand.ay[j]);
    if (d2 < best) best = d2, sel = 2;
    const double d3 = sq_dist(qb.x, qb.y, cand.bx[j], cand.by[j]);
    if (d3 < best) best = d3, sel = 3;
    dist[j] = std::sqrt(best);
    selector[j] = sel;
  }
}

void contact_windows(const RelativeMotionSoA& m, double duration, double radius, std::span<double> enter,
                     std::span<double> exit) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const double r2 = radius * radius;
  const std::size_t n = m.rx.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double rx = m.rx[i], ry = m.ry[i], wx = m.wx[i], wy = m.wy[i];
    const double c = (rx * rx + ry * ry) - r2;
    const double a = wx * wx + wy * wy;
    const double b = rx * wx + ry * wy;
    double lo = kInf, hi = -kInf;
    if (a == 0.0) {
      if (c <= 0.0) lo = 0.0, hi = duration;
    } else {
      const double disc = b * b - a * c;
      if (disc >= 0.0) {
        const double root = std::sqrt(disc);
        const double u0 = (-b - root) / a;
        const double u1 = (-b + root) / a;
        const double l = u0 > 0.0 ? u0 : 0.0;
        const double h = u1 < duration ? u1 : duration;
        if (l <= h) lo = l, hi = h;
      }
    }
    enter[i] = lo;
    exit[i] = hi;
  }
}

}  // namespace mule::kernels::scalar
