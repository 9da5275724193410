#include "mulepatrol/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>

#include "mulepatrol/canonical_json.hpp"
#include "mulepatrol/error.hpp"
#include "mulepatrol/rng.hpp"

namespace mule {

std::string_view to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::kStationary: return "stationary";
    case StrategyKind::kWaypoint: return "waypoint";
    case StrategyKind::kAdversarial: return "adversarial";
  }
  return "?";
}

bool operator==(const RoadSegment& x, const RoadSegment& y) {
  return x.id == y.id && x.a == y.a && x.b == y.b && x.length == y.length;
}

bool operator==(const SensorSpec& x, const SensorSpec& y) {
  return x.id == y.id && x.segment_id == y.segment_id && x.offset0 == y.offset0 &&
         x.strategy == y.strategy;
}

bool operator==(const Instance& x, const Instance& y) {
  return x.speed == y.speed && x.period == y.period && x.segments == y.segments &&
         x.sensors == y.sensors;
}

namespace {

std::string seg_label(int id) { return "segment " + std::to_string(id); }
std::string sensor_label(int id) { return "sensor " + std::to_string(id); }

void validate_strategy(const SensorSpec& s) {
  const auto& st = s.strategy;
  switch (st.kind) {
    case StrategyKind::kStationary:
      return;
    case StrategyKind::kWaypoint:
      if (!(st.v_max > 0.0) || !std::isfinite(st.v_max))
        throw ValidationError(sensor_label(s.id) + ": waypoint v_max must be > 0");
      if (!(st.pause_max >= 0.0) || !std::isfinite(st.pause_max))
        throw ValidationError(sensor_label(s.id) + ": waypoint pause_max must be >= 0");
      return;
    case StrategyKind::kAdversarial:
      if (!(st.v_max > 0.0) || !std::isfinite(st.v_max))
        throw ValidationError(sensor_label(s.id) + ": adversarial v_max must be > 0");
      if (!(st.decision_interval > 0.0) || !std::isfinite(st.decision_interval))
        throw ValidationError(sensor_label(s.id) + ": adversarial decision_interval must be > 0");
      return;
  }
}

}  // namespace

void validate(const Instance& inst) {
  if (!(inst.speed > 0.0) || !std::isfinite(inst.speed)) throw ValidationError("speed must be > 0");
  if (!(inst.period > 0.0) || !std::isfinite(inst.period)) throw ValidationError("period must be > 0");
  if (inst.segments.empty()) throw ValidationError("instance needs at least one segment");
  for (std::size_t i = 0; i < inst.segments.size(); ++i) {
    const auto& s = inst.segments[i];
    if (s.id != static_cast<int>(i))
      throw ValidationError("segment ids must be contiguous 0..M-1 (found id " + std::to_string(s.id) +
                            " at position " + std::to_string(i) + ")");
    if (!is_finite(s.a) || !is_finite(s.b)) throw ValidationError(seg_label(s.id) + ": non-finite coordinate");
    if (!(s.length >= kGeomEps)) throw ValidationError(seg_label(s.id) + ": zero-length segment");
  }
  std::set<int> sensor_ids;
  for (const auto& s : inst.sensors) {
    if (!sensor_ids.insert(s.id).second) throw ValidationError(sensor_label(s.id) + ": duplicate sensor id");
    if (s.segment_id < 0 || s.segment_id >= static_cast<int>(inst.segments.size()))
      throw ValidationError(sensor_label(s.id) + ": unknown segment_id " + std::to_string(s.segment_id));
    const double len = inst.segments[static_cast<std::size_t>(s.segment_id)].length;
    if (!(s.offset0 >= 0.0 && s.offset0 <= len))
      throw ValidationError(sensor_label(s.id) + ": offset0 outside [0, segment length]");
    validate_strategy(s);
  }
}

Instance make_instance(const std::vector<std::pair<Point, Point>>& endpoints, double speed, double period,
                       std::vector<SensorSpec> sensors) {
  Instance inst;
  inst.speed = speed;
  inst.period = period;
  inst.segments.reserve(endpoints.size());
  for (std::size_t i = 0; i < endpoints.size(); ++i) {
    const auto& [a, b] = endpoints[i];
    inst.segments.push_back({static_cast<int>(i), a, b, distance(a, b)});
  }
  std::sort(sensors.begin(), sensors.end(), [](const auto& x, const auto& y) { return x.id < y.id; });
  inst.sensors = std::move(sensors);
  validate(inst);
  return inst;
}

namespace {

SensorStrategy parse_strategy(const Json& obj) {
  const std::string name = get_string(obj, "name");
  if (name == "stationary") return SensorStrategy::stationary();
  if (name == "waypoint") {
    const Json& seed = obj.contains("seed") ? obj.at("seed") : Json();
    if (!seed.is_number_integer() || (seed.is_number_integer() && !seed.is_number_unsigned() && seed.get<long long>() < 0))
      throw ParseError("waypoint strategy needs a non-negative integer 'seed'");
    return SensorStrategy::waypoint(seed.get<std::uint64_t>(), get_number(obj, "v_max"),
                                    get_number(obj, "pause_max"));
  }
  if (name == "adversarial")
    return SensorStrategy::adversarial(get_number(obj, "v_max"), get_number(obj, "decision_interval"));
  throw ParseError("unknown sensor strategy '" + name + "'");
}

Json strategy_json(const SensorStrategy& st) {
  Json j = Json::object();
  j["name"] = std::string(to_string(st.kind));
  switch (st.kind) {
    case StrategyKind::kStationary:
      break;
    case StrategyKind::kWaypoint:
      j["seed"] = st.seed;
      j["v_max"] = st.v_max;
      j["pause_max"] = st.pause_max;
      break;
    case StrategyKind::kAdversarial:
      j["v_max"] = st.v_max;
      j["decision_interval"] = st.decision_interval;
      break;
  }
  return j;
}

int checked_int(long long v, std::string_view what) {
  if (v < 0 || v > 1'000'000'000) throw ParseError(std::string(what) + " out of range");
  return static_cast<int>(v);
}

Json segments_json(const Instance& inst) {
  Json segs = Json::array();
  for (const auto& s : inst.segments) {
    Json j = Json::object();
    j["id"] = s.id;
    j["ax"] = s.a.x;
    j["ay"] = s.a.y;
    j["bx"] = s.b.x;
    j["by"] = s.b.y;
    segs.push_back(std::move(j));
  }
  return segs;
}

}  // namespace

Instance parse_instance(std::string_view text) {
  const Json doc = parse_json(text);
  if (!doc.is_object()) throw ParseError("instance document must be an object");
  Instance inst;
  inst.speed = get_number(doc, "speed");
  inst.period = get_number(doc, "period");
  for (const auto& js : get_array(doc, "segments")) {
    RoadSegment s;
    s.id = checked_int(get_integer(js, "id"), "segment id");
    s.a = {get_number(js, "ax"), get_number(js, "ay")};
    s.b = {get_number(js, "bx"), get_number(js, "by")};
    s.length = distance(s.a, s.b);
    inst.segments.push_back(s);
  }
  std::sort(inst.segments.begin(), inst.segments.end(), [](const auto& x, const auto& y) { return x.id < y.id; });
  if (doc.contains("sensors")) {
    for (const auto& js : get_array(doc, "sensors")) {
      SensorSpec s;
      s.id = checked_int(get_integer(js, "id"), "sensor id");
      s.segment_id = checked_int(get_integer(js, "segment_id"), "segment_id");
      s.offset0 = get_number(js, "offset0");
      s.strategy = parse_strategy(get_object(js, "strategy"));
      inst.sensors.push_back(s);
    }
  }
  std::sort(inst.sensors.begin(), inst.sensors.end(), [](const auto& x, const auto& y) { return x.id < y.id; });
  validate(inst);
  return inst;
}

std::string format_instance(const Instance& inst) {
  Json doc = Json::object();
  doc["speed"] = inst.speed;
  doc["period"] = inst.period;
  doc["segments"] = segments_json(inst);
  Json sensors = Json::array();
  for (const auto& s : inst.sensors) {
    Json j = Json::object();
    j["id"] = s.id;
    j["segment_id"] = s.segment_id;
    j["offset0"] = s.offset0;
    j["strategy"] = strategy_json(s.strategy);
    sensors.push_back(std::move(j));
  }
  doc["sensors"] = std::move(sensors);
  return dump_canonical(doc);
}

Instance load_instance(const std::filesystem::path& path) { return parse_instance(read_file(path)); }

void save_instance(const Instance& inst, const std::filesystem::path& path) {
  validate(inst);
  write_file_atomic(path, format_instance(inst));
}

namespace {

// Grid steps per metre. Dividing an integral count by this is correctly
// rounded, so snapped values survive a decimal round trip.
constexpr double kGridPerMetre = 1e6;
// Worst-case length change from snapping both endpoints to the grid.
constexpr double kSnapSlack = 3e-6;

double snap(double v, double lo, double hi) {
  return std::clamp(std::round(v * kGridPerMetre) / kGridPerMetre, lo, hi);
}

void check_params(const GeneratorParams& p) {
  if (p.segments < 1) throw ValidationError("generator: segment count must be >= 1");
  if (p.sensors < 0) throw ValidationError("generator: sensor count must be >= 0");
  if (!(p.width > 0.0) || !(p.height > 0.0)) throw ValidationError("generator: bbox must be positive");
  if (!(p.min_length > 0.0) || !(p.min_length <= p.max_length))
    throw ValidationError("generator: need 0 < min length <= max length");
  if (p.max_length > std::min(p.width, p.height))
    throw ValidationError("generator: max length must fit inside the bbox (<= min(width, height))");
  if (!(p.speed > 0.0) || !(p.period > 0.0)) throw ValidationError("generator: speed and period must be > 0");
}

}  // namespace

Instance generate_instance(const GeneratorParams& p) {
  check_params(p);
  Instance inst;
  inst.speed = p.speed;
  inst.period = p.period;
  double lo = p.min_length;
  double hi = p.max_length;
  if (hi - lo > 4.0 * kSnapSlack) {
    lo += kSnapSlack;
    hi -= kSnapSlack;
  }
  for (int i = 0; i < p.segments; ++i) {
    Rng rng(derive_seed(p.seed, Stream::kSegment, static_cast<std::uint64_t>(i)));
    const double len = lo == hi ? lo : rng.uniform(lo, hi);
    const double theta = rng.uniform(0.0, std::numbers::pi);
    const double hx = 0.5 * len * std::abs(std::cos(theta));
    const double hy = 0.5 * len * std::sin(theta);
    const double mx = rng.uniform(hx, p.width - hx);
    const double my = rng.uniform(hy, p.height - hy);
    // Orientation sign of the x half-extent follows cos(theta).
    const double sx = std::cos(theta) < 0.0 ? -hx : hx;
    const Point a{snap(mx - sx, 0.0, p.width), snap(my - hy, 0.0, p.height)};
    const Point b{snap(mx + sx, 0.0, p.width), snap(my + hy, 0.0, p.height)};
    inst.segments.push_back({i, a, b, distance(a, b)});
  }
  for (int j = 0; j < p.sensors; ++j) {
    Rng rng(derive_seed(p.seed, Stream::kSensor, static_cast<std::uint64_t>(j)));
    SensorSpec s;
    s.id = j;
    s.segment_id = static_cast<int>(rng.below(static_cast<std::uint64_t>(p.segments)));
    const double len = inst.segments[static_cast<std::size_t>(s.segment_id)].length;
    s.offset0 = snap(rng.uniform(0.0, len), 0.0, std::floor(len * kGridPerMetre) / kGridPerMetre);
    s.strategy = p.strategy;
    if (s.strategy.kind == StrategyKind::kWaypoint)
      s.strategy.seed = derive_seed(p.seed ^ p.strategy.seed, Stream::kWaypoint, static_cast<std::uint64_t>(j));
    inst.sensors.push_back(s);
  }
  validate(inst);
  return inst;
}

std::string geometry_digest(const Instance& inst) {
  Json doc = Json::object();
  doc["speed"] = inst.speed;
  doc["period"] = inst.period;
  doc["segments"] = segments_json(inst);
  const std::string text = dump_canonical(doc);
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace mule
