#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mulepatrol/geometry.hpp"

namespace mule {

struct RoadSegment {
  int id = 0;
  Point a;
  Point b;
  double length = 0.0;  // |a - b|, derived

  Point endpoint(int end) const { return end == 0 ? a : b; }
  Point at(double offset) const { return lerp(a, b, offset / length); }
};

enum class StrategyKind { kStationary, kWaypoint, kAdversarial };

std::string_view to_string(StrategyKind kind);

/// Motion rule of one sensor. Only the fields relevant to `kind` are
/// meaningful; the others are ignored and not serialized.
struct SensorStrategy {
  StrategyKind kind = StrategyKind::kStationary;
  std::uint64_t seed = 0;          // waypoint
  double v_max = 0.0;              // waypoint, adversarial (m/s)
  double pause_max = 0.0;          // waypoint (s)
  double decision_interval = 0.0;  // adversarial (s)

  static SensorStrategy stationary() { return {}; }
  static SensorStrategy waypoint(std::uint64_t seed, double v_max, double pause_max) {
    return {StrategyKind::kWaypoint, seed, v_max, pause_max, 0.0};
  }
  static SensorStrategy adversarial(double v_max, double decision_interval) {
    return {StrategyKind::kAdversarial, 0, v_max, 0.0, decision_interval};
  }

  friend bool operator==(const SensorStrategy&, const SensorStrategy&) = default;
};

struct SensorSpec {
  int id = 0;
  int segment_id = 0;
  double offset0 = 0.0;  // meters from endpoint a
  SensorStrategy strategy;
};

/// Validated problem input. Construct through make_instance, load_instance
/// or generate_instance; all three enforce the invariants.
struct Instance {
  std::vector<RoadSegment> segments;
  double speed = 1.0;   // V, m/s
  double period = 1.0;  // t, s
  std::vector<SensorSpec> sensors;

  std::size_t size() const { return segments.size(); }
  /// Distance a mule covers in one period.
  double reach() const { return speed * period; }
};

bool operator==(const RoadSegment& x, const RoadSegment& y);
bool operator==(const SensorSpec& x, const SensorSpec& y);
bool operator==(const Instance& x, const Instance& y);

/// Builds segment lengths and ids from endpoint pairs and validates.
Instance make_instance(const std::vector<std::pair<Point, Point>>& endpoints, double speed,
                       double period, std::vector<SensorSpec> sensors = {});

/// Throws ValidationError naming the first violated invariant.
void validate(const Instance& inst);

Instance parse_instance(std::string_view text);
std::string format_instance(const Instance& inst);

Instance load_instance(const std::filesystem::path& path);
void save_instance(const Instance& inst, const std::filesystem::path& path);

struct GeneratorParams {
  std::uint64_t seed = 0;
  int segments = 1;
  double width = 100.0;
  double height = 100.0;
  double min_length = 1.0;
  double max_length = 10.0;
  double speed = 1.0;
  double period = 10.0;
  int sensors = 0;
  /// Template for every generated sensor. A waypoint template's seed is
  /// replaced by a per-sensor derived seed.
  SensorStrategy strategy;
};

/// Coordinates and offsets are quantized to a micrometre grid so that
/// generated instances survive the canonical text format unchanged.
Instance generate_instance(const GeneratorParams& params);

/// 64-bit digest of the plan-relevant part of an instance (segments, speed,
/// period), hex encoded. Sensors are excluded.
std::string geometry_digest(const Instance& inst);

}  // namespace mule
