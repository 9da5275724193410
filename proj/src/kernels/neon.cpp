#include "mulepatrol/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

#include <limits>

namespace mule::kernels::neon {

namespace {

inline float64x2_t sq_dist(float64x2_t px, float64x2_t py, float64x2_t qx, float64x2_t qy) {
  const float64x2_t dx = vsubq_f64(px, qx);
  const float64x2_t dy = vsubq_f64(py, qy);
  // Separate multiply and add; vfmaq would round differently from scalar.
  return vaddq_f64(vmulq_f64(dx, dx), vmulq_f64(dy, dy));
}

}  // namespace

void nearest_endpoints(Point qa, Point qb, const SegmentSoA& cand, std::span<double> dist,
                       std::span<std::uint8_t> selector) {
  const std::size_t n = cand.ax.size();
  const float64x2_t qax = vdupq_n_f64(qa.x), qay = vdupq_n_f64(qa.y);
  const float64x2_t qbx = vdupq_n_f64(qb.x), qby = vdupq_n_f64(qb.y);
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const float64x2_t cax = vld1q_f64(&cand.ax[j]), cay = vld1q_f64(&cand.ay[j]);
    const float64x2_t cbx = vld1q_f64(&cand.bx[j]), cby = vld1q_f64(&cand.by[j]);
    float64x2_t best = sq_dist(qax, qay, cax, cay);
    float64x2_t sel = vdupq_n_f64(0.0);
    const float64x2_t d1 = sq_dist(qax, qay, cbx, cby);
    uint64x2_t lt = vcltq_f64(d1, best);
    best = vbslq_f64(lt, d1, best);
    sel = vbslq_f64(lt, vdupq_n_f64(1.0), sel);
    const float64x2_t d2 = sq_dist(qbx, qby, cax, cay);
    lt = vcltq_f64(d2, best);
    best = vbslq_f64(lt, d2, best);
    sel = vbslq_f64(lt, vdupq_n_f64(2.0), sel);
    const float64x2_t d3 = sq_dist(qbx, qby, cbx, cby);
    lt = vcltq_f64(d3, best);
    best = vbslq_f64(lt, d3, best);
    sel = vbslq_f64(lt, vdupq_n_f64(3.0), sel);
    vst1q_f64(&dist[j], vsqrtq_f64(best));
    selector[j] = static_cast<std::uint8_t>(vgetq_lane_f64(sel, 0));
    selector[j + 1] = static_cast<std::uint8_t>(vgetq_lane_f64(sel, 1));
  }
  if (j < n) {
    const SegmentSoA tail{cand.ax.subspan(j), cand.ay.subspan(j), cand.bx.subspan(j), cand.by.subspan(j)};
    scalar::nearest_endpoints(qa, qb, tail, dist.subspan(j), selector.subspan(j));
  }
}

void contact_windows(const RelativeMotionSoA& m, double duration, double radius, std::span<double> enter,
                     std::span<double> exit) {
  const std::size_t n = m.rx.size();
  const float64x2_t zero = vdupq_n_f64(0.0);
  const float64x2_t dur = vdupq_n_f64(duration);
  const float64x2_t r2 = vdupq_n_f64(radius * radius);
  const float64x2_t inf = vdupq_n_f64(std::numeric_limits<double>::infinity());
  const float64x2_t ninf = vdupq_n_f64(-std::numeric_limits<double>::infinity());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t rx = vld1q_f64(&m.rx[i]), ry = vld1q_f64(&m.ry[i]);
    const float64x2_t wx = vld1q_f64(&m.wx[i]), wy = vld1q_f64(&m.wy[i]);
    const float64x2_t c = vsubq_f64(vaddq_f64(vmulq_f64(rx, rx), vmulq_f64(ry, ry)), r2);
    const float64x2_t a = vaddq_f64(vmulq_f64(wx, wx), vmulq_f64(wy, wy));
    const float64x2_t b = vaddq_f64(vmulq_f64(rx, wx), vmulq_f64(ry, wy));

    const uint64x2_t a_zero = vceqq_f64(a, zero);
    const uint64x2_t static_hit = vandq_u64(a_zero, vcleq_f64(c, zero));

    const float64x2_t disc = vsubq_f64(vmulq_f64(b, b), vmulq_f64(a, c));
    const uint64x2_t real = vbicq_u64(vcgeq_f64(disc, zero), a_zero);
    const float64x2_t root = vsqrtq_f64(vmaxq_f64(disc, zero));
    const float64x2_t nb = vnegq_f64(b);
    const float64x2_t u0 = vdivq_f64(vsubq_f64(nb, root), a);
    const float64x2_t u1 = vdivq_f64(vaddq_f64(nb, root), a);
    const float64x2_t l = vbslq_f64(vcgtq_f64(u0, zero), u0, zero);
    const float64x2_t h = vbslq_f64(vcltq_f64(u1, dur), u1, dur);
    const uint64x2_t moving_hit = vandq_u64(real, vcleq_f64(l, h));

    float64x2_t lo = vbslq_f64(moving_hit, l, inf);
    float64x2_t hi = vbslq_f64(moving_hit, h, ninf);
    lo = vbslq_f64(static_hit, zero, lo);
    hi = vbslq_f64(static_hit, dur, hi);
    vst1q_f64(&enter[i], lo);
    vst1q_f64(&exit[i], hi);
  }
  if (i < n) {
    const RelativeMotionSoA tail{m.rx.subspan(i), m.ry.subspan(i), m.wx.subspan(i), m.wy.subspan(i)};
    scalar::contact_windows(tail, duration, radius, enter.subspan(i), exit.subspan(i));
  }
}

}  // namespace mule::kernels::neon

#else

#include <stdexcept>

namespace mule::kernels::neon {

void nearest_endpoints(Point, Point, const SegmentSoA&, std::span<double>, std::span<std::uint8_t>) {
  throw std::logic_error("NEON kernels not compiled in");
}
void contact_windows(const RelativeMotionSoA&, double, double, std::span<double>, std::span<double>) {
  throw std::logic_error("NEON kernels not compiled in");
}

}  // namespace mule::kernels::neon

#endif
