#include "mulepatrol/kernels.hpp"

#if defined(MULEPATROL_HAVE_AVX2)

#include <immintrin.h>

#include <cmath>
#include <limits>

namespace mule::kernels::avx2 {

namespace {

inline __m256d sq_dist(__m256d px, __m256d py, __m256d qx, __m256d qy) {
  const __m256d dx = _mm256_sub_pd(px, qx);
  const __m256d dy = _mm256_sub_pd(py, qy);
  return _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
}

}  // namespace

void nearest_endpoints(Point qa, Point qb, const SegmentSoA& cand, std::span<double> dist,
                       std::span<std::uint8_t> selector) {
  const std::size_t n = cand.ax.size();
  const __m256d qax = _mm256_set1_pd(qa.x), qay = _mm256_set1_pd(qa.y);
  const __m256d qbx = _mm256_set1_pd(qb.x), qby = _mm256_set1_pd(qb.y);
  const __m256d one = _mm256_set1_pd(1.0), two = _mm256_set1_pd(2.0), three = _mm256_set1_pd(3.0);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d cax = _mm256_loadu_pd(&cand.ax[j]), cay = _mm256_loadu_pd(&cand.ay[j]);
    const __m256d cbx = _mm256_loadu_pd(&cand.bx[j]), cby = _mm256_loadu_pd(&cand.by[j]);
    __m256d best = sq_dist(qax, qay, cax, cay);
    __m256d sel = _mm256_setzero_pd();
    const __m256d d1 = sq_dist(qax, qay, cbx, cby);
    __m256d lt = _mm256_cmp_pd(d1, best, _CMP_LT_OQ);
    best = _mm256_blendv_pd(best, d1, lt);
    sel = _mm256_blendv_pd(sel, one, lt);
    const __m256d d2 = sq_dist(qbx, qby, cax, cay);
    lt = _mm256_cmp_pd(d2, best, _CMP_LT_OQ);
    best = _mm256_blendv_pd(best, d2, lt);
    sel = _mm256_blendv_pd(sel, two, lt);
    const __m256d d3 = sq_dist(qbx, qby, cbx, cby);
    lt = _mm256_cmp_pd(d3, best, _CMP_LT_OQ);
    best = _mm256_blendv_pd(best, d3, lt);
    sel = _mm256_blendv_pd(sel, three, lt);
    _mm256_storeu_pd(&dist[j], _mm256_sqrt_pd(best));
    alignas(32) double s[4];
    _mm256_store_pd(s, sel);
    for (int k = 0; k < 4; ++k) selector[j + static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(s[k]);
  }
  if (j < n) {
    const SegmentSoA tail{cand.ax.subspan(j), cand.ay.subspan(j), cand.bx.subspan(j), cand.by.subspan(j)};
    scalar::nearest_endpoints(qa, qb, tail, dist.subspan(j), selector.subspan(j));
  }
}

void contact_windows(const RelativeMotionSoA& m, double duration, double radius, std::span<double> enter,
                     std::span<double> exit) {
  const std::size_t n = m.rx.size();
  const __m256d zero = _mm256_setzero_pd();
  const __m256d dur = _mm256_set1_pd(duration);
  const __m256d r2 = _mm256_set1_pd(radius * radius);
  const __m256d inf = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  const __m256d ninf = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
  const __m256d sign = _mm256_set1_pd(-0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d rx = _mm256_loadu_pd(&m.rx[i]), ry = _mm256_loadu_pd(&m.ry[i]);
    const __m256d wx = _mm256_loadu_pd(&m.wx[i]), wy = _mm256_loadu_pd(&m.wy[i]);
    const __m256d c = _mm256_sub_pd(_mm256_add_pd(_mm256_mul_pd(rx, rx), _mm256_mul_pd(ry, ry)), r2);
    const __m256d a = _mm256_add_pd(_mm256_mul_pd(wx, wx), _mm256_mul_pd(wy, wy));
    const __m256d b = _mm256_add_pd(_mm256_mul_pd(rx, wx), _mm256_mul_pd(ry, wy));

    // Static lanes (a == 0): whole interval if already inside.
    const __m256d a_zero = _mm256_cmp_pd(a, zero, _CMP_EQ_OQ);
    const __m256d inside = _mm256_cmp_pd(c, zero, _CMP_LE_OQ);
    const __m256d static_hit = _mm256_and_pd(a_zero, inside);

    const __m256d disc = _mm256_sub_pd(_mm256_mul_pd(b, b), _mm256_mul_pd(a, c));
    const __m256d real = _mm256_andnot_pd(a_zero, _mm256_cmp_pd(disc, zero, _CMP_GE_OQ));
    const __m256d root = _mm256_sqrt_pd(_mm256_max_pd(disc, zero));
    const __m256d nb = _mm256_xor_pd(b, sign);
    const __m256d u0 = _mm256_div_pd(_mm256_sub_pd(nb, root), a);
    const __m256d u1 = _mm256_div_pd(_mm256_add_pd(nb, root), a);
    const __m256d l = _mm256_blendv_pd(zero, u0, _mm256_cmp_pd(u0, zero, _CMP_GT_OQ));
    const __m256d h = _mm256_blendv_pd(dur, u1, _mm256_cmp_pd(u1, dur, _CMP_LT_OQ));
    const __m256d moving_hit = _mm256_and_pd(real, _mm256_cmp_pd(l, h, _CMP_LE_OQ));

    __m256d lo = _mm256_blendv_pd(inf, l, moving_hit);
    __m256d hi = _mm256_blendv_pd(ninf, h, moving_hit);
    lo = _mm256_blendv_pd(lo, zero, static_hit);
    hi = _mm256_blendv_pd(hi, dur, static_hit);
    _mm256_storeu_pd(&enter[i], lo);
    _mm256_storeu_pd(&exit[i], hi);
  }
  if (i < n) {
    const RelativeMotionSoA tail{m.rx.subspan(i), m.ry.subspan(i), m.wx.subspan(i), m.wy.subspan(i)};
    scalar::contact_windows(tail, duration, radius, enter.subspan(i), exit.subspan(i));
  }
}

}  // namespace mule::kernels::avx2

#else

#include <stdexcept>

namespace mule::kernels::avx2 {

void nearest_endpoints(Point, Point, const SegmentSoA&, std::span<double>, std::span<std::uint8_t>) {
  throw std::logic_error("AVX2 kernels not compiled in");
}
void contact_windows(const RelativeMotionSoA&, double, double, std::span<double>, std::span<double>) {
  throw std::logic_error("AVX2 kernels not compiled in");
}

}  // namespace mule::kernels::avx2

#endif
