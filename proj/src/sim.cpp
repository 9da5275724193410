#include "mulepatrol/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mulepatrol/canonical_json.hpp"
#include "mulepatrol/error.hpp"

namespace mule {

SimConfig SimConfig::defaults(double period) {
  SimConfig c;
  c.horizon = 5.0 * period;
  c.max_step = period / 1000.0;
  return c;
}

void validate(const SimConfig& c, double period) {
  if (!(c.horizon >= 2.0 * period)) throw ValidationError("simulation horizon must be at least twice the period");
  if (!(c.contact_radius > 0.0)) throw ValidationError("contact radius must be > 0");
  if (!(c.max_step > 0.0)) throw ValidationError("max step must be > 0");
  if (!(c.warmup >= 0.0 && c.warmup < c.horizon)) throw ValidationError("warmup must lie in [0, horizon)");
}

SensorState initial_state(const SensorSpec& sensor, const SimConfig& config) {
  SensorState st;
  st.offset = sensor.offset0;
  st.rng = Rng(splitmix64(sensor.strategy.seed ^ splitmix64(config.seed)) + static_cast<std::uint64_t>(sensor.id));
  return st;
}

namespace {

std::vector<OffsetKnot> step_waypoint(const SensorStrategy& st, double len, SensorState& s, double t, double t_end) {
  std::vector<OffsetKnot> knots;
  // Every leg draws fresh randomness; the cap only guards against a
  // pathological stream of zero-length legs.
  for (int guard = 0; t < t_end && guard < 1'000'000; ++guard) {
    switch (s.phase) {
      case SensorState::Phase::kIdle:
        s.target = s.rng.uniform(0.0, len);
        s.speed = st.v_max * (0.1 + 0.9 * s.rng.uniform());
        s.phase = SensorState::Phase::kMoving;
        s.phase_end = t + std::abs(s.target - s.offset) / s.speed;
        break;
      case SensorState::Phase::kMoving:
        if (s.phase_end <= t_end) {
          t = s.phase_end;
          s.offset = s.target;
          knots.push_back({t, s.offset});
          s.phase = SensorState::Phase::kPaused;
          s.phase_end = t + st.pause_max * s.rng.uniform();
        } else {
          const double dir = s.target > s.offset ? 1.0 : -1.0;
          s.offset = std::clamp(s.offset + dir * s.speed * (t_end - t), 0.0, len);
          t = t_end;
        }
        break;
      case SensorState::Phase::kPaused:
        if (s.phase_end <= t_end) {
          t = s.phase_end;
          s.phase = SensorState::Phase::kIdle;
        } else {
          t = t_end;
        }
        break;
    }
  }
  if (knots.empty() || knots.back().time < t_end) knots.push_back({t_end, s.offset});
  return knots;
}

std::vector<OffsetKnot> step_adversarial(const SensorStrategy& st, const RoadSegment& seg, SensorState& s,
                                         double t, double t_end, std::span<const Point> mules) {
  std::vector<OffsetKnot> knots;
  if (mules.empty()) {
    knots.push_back({t_end, s.offset});
    return knots;
  }
  const Point here = seg.at(s.offset);
  const Point* nearest = &mules.front();
  double best = std::numeric_limits<double>::infinity();
  for (const auto& m : mules) {
    const double d = distance(here, m);
    if (d < best) best = d, nearest = &m;
  }
  const Point axis = (1.0 / seg.length) * (seg.b - seg.a);
  const double dir = dot(here - *nearest, axis) >= 0.0 ? 1.0 : -1.0;
  const double bound = dir > 0.0 ? seg.length : 0.0;
  const double reach_time = t + std::abs(bound - s.offset) / st.v_max;
  if (reach_time < t_end) {
    s.offset = bound;
    knots.push_back({reach_time, s.offset});
  } else {
    s.offset = std::clamp(s.offset + dir * st.v_max * (t_end - t), 0.0, seg.length);
  }
  knots.push_back({t_end, s.offset});
  return knots;
}

}  // namespace

std::vector<OffsetKnot> step_strategy(const SensorSpec& sensor, const RoadSegment& segment, SensorState& state,
                                      double t_begin, double t_end, std::span<const Point> mules) {
  switch (sensor.strategy.kind) {
    case StrategyKind::kStationary:
      return {{t_end, state.offset}};
    case StrategyKind::kWaypoint:
      return step_waypoint(sensor.strategy, segment.length, state, t_begin, t_end);
    case StrategyKind::kAdversarial:
      return step_adversarial(sensor.strategy, segment, state, t_begin, t_end, mules);
  }
  return {{t_end, state.offset}};
}

namespace {

std::vector<Point> mule_points(const DeploymentPlan& plan, double tau) {
  std::vector<Point> out(2 * plan.pieces.size());
  for (std::size_t m = 0; m < out.size(); ++m) out[m] = mule_position(plan, static_cast<int>(m), tau).point;
  return out;
}

}  // namespace

std::vector<OffsetKnot> sensor_trajectory(const Instance& inst, const DeploymentPlan& plan, const SensorSpec& sensor,
                                          const SimConfig& config) {
  const auto& seg = inst.segments[static_cast<std::size_t>(sensor.segment_id)];
  SensorState state = initial_state(sensor, config);
  std::vector<OffsetKnot> knots{{0.0, sensor.offset0}};
  const auto append = [&knots](const std::vector<OffsetKnot>& more) {
    for (const auto& k : more)
      if (k.time > knots.back().time) knots.push_back(k);
  };
  if (sensor.strategy.kind == StrategyKind::kAdversarial) {
    const double dt = sensor.strategy.decision_interval;
    for (std::int64_t i = 0;; ++i) {
      const double t0 = static_cast<double>(i) * dt;
      if (t0 >= config.horizon) break;
      const double t1 = std::min(config.horizon, static_cast<double>(i + 1) * dt);
      append(step_strategy(sensor, seg, state, t0, t1, mule_points(plan, t0)));
    }
  } else {
    append(step_strategy(sensor, seg, state, 0.0, config.horizon, {}));
  }
  return knots;
}

std::vector<double> mule_breakpoints(const DeploymentPlan& plan, const SimConfig& config) {
  std::vector<double> times;
  const auto steps = static_cast<std::int64_t>(std::ceil(config.horizon / config.max_step));
  for (std::int64_t i = 0; i < steps; ++i) times.push_back(static_cast<double>(i) * config.max_step);
  times.push_back(config.horizon);

  std::vector<double> local;
  for (const auto& piece : plan.pieces) {
    const auto& poly = plan.trees[static_cast<std::size_t>(piece.tree_index)].path.polyline;
    const double period = piece.sweep_period;
    const double mid = piece.s_start + 0.5 * piece.length();
    local.assign({0.0, 0.5 * period});
    for (const auto& q : poly) {
      if (q.s <= piece.s_start || q.s >= piece.s_end || q.s == mid) continue;
      const double d = q.s < mid ? q.s - piece.s_start : piece.s_end - q.s;
      local.push_back(d / plan.speed);
      local.push_back(period - d / plan.speed);
    }
    for (std::int64_t n = 0;; ++n) {
      const double base = static_cast<double>(n) * period;
      if (base > config.horizon) break;
      for (double l : local)
        if (base + l <= config.horizon) times.push_back(base + l);
    }
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  return times;
}

namespace {

double offset_at(const std::vector<OffsetKnot>& knots, std::size_t& cursor, double t) {
  while (cursor + 1 < knots.size() && knots[cursor + 1].time <= t) ++cursor;
  if (cursor + 1 >= knots.size()) return knots.back().offset;
  const auto& a = knots[cursor];
  const auto& b = knots[cursor + 1];
  return a.offset + (b.offset - a.offset) * ((t - a.time) / (b.time - a.time));
}

void finish_report(SensorReport& r, std::vector<ContactWindow> raw, const SimConfig& config, double period) {
  std::sort(raw.begin(), raw.end(), [](const ContactWindow& x, const ContactWindow& y) { return x.start < y.start; });
  const double touch = 1e-9 * std::max(1.0, config.horizon);
  for (auto w : raw) {
    w.start = std::max(w.start, config.warmup);
    w.end = std::min(w.end, config.horizon);
    if (w.end < w.start) continue;
    if (!r.windows.empty() && w.start <= r.windows.back().end + touch)
      r.windows.back().end = std::max(r.windows.back().end, w.end);
    else
      r.windows.push_back(w);
  }
  double free_from = config.warmup;
  double gap = 0.0;
  for (const auto& w : r.windows) {
    r.visit_times.push_back(w.start);
    gap = std::max(gap, w.start - free_from);
    free_from = std::max(free_from, w.end);
  }
  gap = std::max(gap, config.horizon - free_from);
  if (!r.windows.empty()) r.first_visit = r.windows.front().start;
  r.max_gap = gap;
  r.pass = gap <= period + config.max_step;
}

}  // namespace

SimReport simulate(const Instance& inst, const DeploymentPlan& plan, const SimConfig& config) {
  return simulate(inst, plan, config, kernels::active());
}

SimReport simulate(const Instance& inst, const DeploymentPlan& plan, const SimConfig& config,
                   const kernels::KernelTable& kt) {
  check_plan_matches(plan, inst);
  validate(config, inst.period);
  SimReport report;
  report.config = config;
  report.period = inst.period;
  if (inst.sensors.empty()) return report;

  const std::size_t mules = 2 * plan.pieces.size();
  const std::vector<double> grid = mule_breakpoints(plan, config);
  // Mule positions at every shared breakpoint, row-major [time][mule].
  std::vector<Point> grid_points(grid.size() * mules);
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t m = 0; m < mules; ++m)
      grid_points[i * mules + m] = mule_position(plan, static_cast<int>(m), grid[i]).point;

  std::vector<double> rx(mules), ry(mules), wx(mules), wy(mules), enter(mules), exit(mules);
  std::vector<Point> prev(mules), next(mules);
  for (const auto& sensor : inst.sensors) {
    const auto& seg = inst.segments[static_cast<std::size_t>(sensor.segment_id)];
    const auto knots = sensor_trajectory(inst, plan, sensor, config);

    std::vector<ContactWindow> raw;
    std::size_t cursor = 0;
    std::size_t gi = 0;  // next grid index
    std::size_t ki = 0;  // next knot index
    double t_prev = 0.0;
    Point s_prev = seg.at(offset_at(knots, cursor, 0.0));
    std::copy_n(grid_points.begin(), mules, prev.begin());
    gi = 1;
    while (ki < knots.size() && knots[ki].time <= 0.0) ++ki;
    while (gi < grid.size() || ki < knots.size()) {
      double t_next;
      const bool from_grid = ki >= knots.size() || (gi < grid.size() && grid[gi] <= knots[ki].time);
      if (from_grid) {
        t_next = grid[gi];
        std::copy_n(grid_points.begin() + static_cast<std::ptrdiff_t>(gi * mules), mules, next.begin());
        if (ki < knots.size() && knots[ki].time == t_next) ++ki;
        ++gi;
      } else {
        t_next = knots[ki].time;
        for (std::size_t m = 0; m < mules; ++m) next[m] = mule_position(plan, static_cast<int>(m), t_next).point;
        ++ki;
      }
      if (t_next > config.horizon) break;
      const double h = t_next - t_prev;
      if (h <= 0.0) continue;
      const Point s_next = seg.at(offset_at(knots, cursor, t_next));
      for (std::size_t m = 0; m < mules; ++m) {
        const Point r0 = prev[m] - s_prev;
        const Point r1 = next[m] - s_next;
        rx[m] = r0.x;
        ry[m] = r0.y;
        wx[m] = (r1.x - r0.x) / h;
        wy[m] = (r1.y - r0.y) / h;
      }
      kt.contact_windows({rx, ry, wx, wy}, h, config.contact_radius, enter, exit);
      for (std::size_t m = 0; m < mules; ++m)
        if (enter[m] <= exit[m]) raw.push_back({t_prev + enter[m], t_prev + exit[m]});
      t_prev = t_next;
      s_prev = s_next;
      std::swap(prev, next);
    }

    SensorReport r;
    r.sensor_id = sensor.id;
    finish_report(r, std::move(raw), config, inst.period);
    if (!r.pass) ++report.violations;
    report.sensors.push_back(std::move(r));
  }
  report.pass = report.violations == 0;
  return report;
}

std::string format_sim_report(const SimReport& report) {
  Json doc = Json::object();
  Json cfg = Json::object();
  cfg["horizon"] = report.config.horizon;
  cfg["contact_radius"] = report.config.contact_radius;
  cfg["max_step"] = report.config.max_step;
  cfg["warmup"] = report.config.warmup;
  cfg["seed"] = report.config.seed;
  doc["config"] = std::move(cfg);
  doc["period"] = report.period;
  Json sensors = Json::array();
  for (const auto& s : report.sensors) {
    Json j = Json::object();
    j["id"] = s.sensor_id;
    j["first_visit"] = s.first_visit ? Json(*s.first_visit) : Json(nullptr);
    j["max_gap"] = s.max_gap;
    j["visits"] = s.visit_times.size();
    j["pass"] = s.pass;
    sensors.push_back(std::move(j));
  }
  doc["sensors"] = std::move(sensors);
  doc["violations"] = report.violations;
  doc["pass"] = report.pass;
  return dump_canonical(doc);
}

}  // namespace mule
