#pragma once

// Data-parallel inner loops with a scalar reference and vector variants.
// Every variant performs the same IEEE operations in the same order (no
// fused multiply-add), so results are bit-identical across variants.

#include <cstdint>
#include <span>
#include <string_view>

#include "mulepatrol/geometry.hpp"

namespace mule::kernels {

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view to_string(Isa isa);

/// Endpoints of `n` candidate segments in structure-of-arrays form.
struct SegmentSoA {
  std::span<const double> ax, ay, bx, by;
};

/// Encoding of which endpoint pair realised a nearest-endpoint distance:
/// bit 1 is the query segment's end, bit 0 the candidate's (0 = A, 1 = B).
/// Ties go to the smallest code, i.e. the order AA, AB, BA, BB.
using NearestEndpointsFn = void (*)(Point query_a, Point query_b, const SegmentSoA& cand,
                                    std::span<double> dist, std::span<std::uint8_t> selector);

/// Relative motion of `n` movers with respect to one target over an
/// interval of length `duration`: offset r(u) = r0 + w·u for u in
/// [0, duration].
struct RelativeMotionSoA {
  std::span<const double> rx, ry, wx, wy;
};

/// For each mover writes the sub-interval [enter, exit] of [0, duration]
/// during which |r(u)| <= radius, or enter = +inf, exit = -inf if none.
using ContactWindowsFn = void (*)(const RelativeMotionSoA& motion, double duration, double radius,
                                  std::span<double> enter, std::span<double> exit);

struct KernelTable {
  Isa isa;
  NearestEndpointsFn nearest_endpoints;
  ContactWindowsFn contact_windows;
};

/// Whether the variant is compiled in and supported by the running CPU.
bool available(Isa isa);

/// Throws std::invalid_argument if `isa` is not available.
const KernelTable& table(Isa isa);

/// Widest available variant, unless the MULEPATROL_ISA environment
/// variable names another available one ("scalar", "avx2", "neon").
const KernelTable& active();

namespace scalar {
void nearest_endpoints(Point query_a, Point query_b, const SegmentSoA& cand, std::span<double> dist,
                       std::span<std::uint8_t> selector);
void contact_windows(const RelativeMotionSoA& motion, double duration, double radius, std::span<double> enter,
                     std::span<double> exit);
}  // namespace scalar

namespace avx2 {
void nearest_endpoints(Point query_a, Point query_b, const SegmentSoA& cand, std::span<double> dist,
                       std::span<std::uint8_t> selector);
void contact_windows(const RelativeMotionSoA& motion, double duration, double radius, std::span<double> enter,
                     std::span<double> exit);
}  // namespace avx2

namespace neon {
void nearest_endpoints(Point query_a, Point query_b, const SegmentSoA& cand, std::span<double> dist,
                       std::span<std::uint8_t> selector);
void contact_windows(const RelativeMotionSoA& motion, double duration, double radius, std::span<double> enter,
                     std::span<double> exit);
}  // namespace neon

}  // namespace mule::kernels
