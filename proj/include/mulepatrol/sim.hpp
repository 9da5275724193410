#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mulepatrol/deploy.hpp"
#include "mulepatrol/kernels.hpp"
#include "mulepatrol/model.hpp"
#include "mulepatrol/rng.hpp"

namespace mule {

struct SimConfig {
  double horizon = 0.0;           // s
  double contact_radius = 1e-3;   // m
  double max_step = 0.0;          // s
  double warmup = 0.0;            // s
  std::uint64_t seed = 0;

  /// horizon = 5 t, max_step = t / 1000.
  static SimConfig defaults(double period);
};

void validate(const SimConfig& config, double period);

/// Sensor offset along its segment at a given time; trajectories are
/// piecewise linear between knots.
struct OffsetKnot {
  double time = 0.0;
  double offset = 0.0;
};

struct SensorState {
  enum class Phase { kIdle, kMoving, kPaused };

  double offset = 0.0;
  Rng rng{0};
  Phase phase = Phase::kIdle;
  double target = 0.0;
  double speed = 0.0;
  double phase_end = 0.0;
};

SensorState initial_state(const SensorSpec& sensor, const SimConfig& config);

/// Advances one sensor over (t_begin, t_end] and returns the knots of its
/// motion in that interval; the last knot is at t_end. `mules` are the
/// mule positions at t_begin (used by the adversarial rule only).
std::vector<OffsetKnot> step_strategy(const SensorSpec& sensor, const RoadSegment& segment, SensorState& state,
                                      double t_begin, double t_end, std::span<const Point> mules);

/// Full trajectory over [0, horizon], starting with (0, offset0).
std::vector<OffsetKnot> sensor_trajectory(const Instance& inst, const DeploymentPlan& plan,
                                          const SensorSpec& sensor, const SimConfig& config);

/// Times at which some mule turns around or passes an Euler polyline
/// vertex, merged with the max_step grid, over [0, horizon].
std::vector<double> mule_breakpoints(const DeploymentPlan& plan, const SimConfig& config);

struct ContactWindow {
  double start = 0.0;
  double end = 0.0;
};

struct SensorReport {
  int sensor_id = 0;
  std::vector<ContactWindow> windows;  // merged, within [warmup, horizon]
  std::vector<double> visit_times;     // window starts
  std::optional<double> first_visit;
  double max_gap = 0.0;  // longest contact-free stretch in [warmup, horizon]
  bool pass = false;
};

struct SimReport {
  SimConfig config;
  double period = 0.0;
  std::vector<SensorReport> sensors;
  int violations = 0;
  bool pass = true;
};

SimReport simulate(const Instance& inst, const DeploymentPlan& plan, const SimConfig& config);
SimReport simulate(const Instance& inst, const DeploymentPlan& plan, const SimConfig& config,
                   const kernels::KernelTable& kernels);

std::string format_sim_report(const SimReport& report);

}  // namespace mule
