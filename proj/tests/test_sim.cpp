#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "mulepatrol/sim.hpp"

using namespace mule;

namespace {

SensorSpec sensor(int id, int seg, double offset, SensorStrategy st = SensorStrategy::stationary()) {
  return SensorSpec{id, seg, offset, st};
}

double offset_at(const std::vector<OffsetKnot>& knots, double t) {
  for (std::size_t i = 1; i < knots.size(); ++i)
    if (t <= knots[i].time) {
      const double u = (t - knots[i - 1].time) / (knots[i].time - knots[i - 1].time);
      return knots[i - 1].offset + u * (knots[i].offset - knots[i - 1].offset);
    }
  return knots.back().offset;
}

}  // namespace

TEST_CASE("stationary sensor on the worked instance matches analytic visits") {
  const Instance inst = fixtures::collinear3({sensor(0, 0, 0.5)});
  const DeploymentPlan plan = make_plan(inst);
  const SimReport report = simulate(inst, plan, SimConfig::defaults(inst.period));
  REQUIRE(report.sensors.size() == 1);
  const auto& s = report.sensors[0];
  REQUIRE(s.first_visit.has_value());
  CHECK(*s.first_visit <= 5.0);
  CHECK(s.max_gap <= 5.0);
  CHECK(s.pass);

  // Analytic schedule at that point: the arc positions on the path.
  const auto arcs = segment_arc_positions(plan.trees[0].path, inst, 0, 0.5);
  const PointCoverage c = arc_coverage(plan, plan.trees[0], arcs);
  const double eps_time = 2 * report.config.contact_radius / inst.speed;
  CHECK(s.max_gap <= c.max_gap);
  CHECK(s.max_gap >= c.max_gap - eps_time - 1e-9);
}

TEST_CASE("zero sensors pass vacuously") {
  const Instance inst = fixtures::collinear3();
  const SimReport report = simulate(inst, make_plan(inst), SimConfig::defaults(inst.period));
  CHECK(report.sensors.empty());
  CHECK(report.pass);
  CHECK(report.violations == 0);
}

TEST_CASE("sim config validation") {
  SimConfig c = SimConfig::defaults(10.0);
  CHECK(c.horizon == 50.0);
  CHECK(c.max_step == 0.01);
  CHECK_NOTHROW(validate(c, 10.0));
  c.max_step = 0.0;
  CHECK_THROWS(validate(c, 10.0));
}

TEST_CASE("step_strategy behaviour") {
  const Instance inst = make_instance({{{0, 0}, {10, 0}}}, 1, 20);
  const auto& seg = inst.segments[0];

  SUBCASE("stationary holds its offset") {
    const SensorSpec s = sensor(0, 0, 4.0);
    SensorState st = initial_state(s, SimConfig::defaults(20));
    const auto knots = step_strategy(s, seg, st, 0.0, 7.0, {});
    CHECK(knots.back().time == 7.0);
    for (const auto& k : knots) CHECK(k.offset == 4.0);
  }
  SUBCASE("adversary runs away from a mule at lower offsets until clamped") {
    const SensorSpec s = sensor(0, 0, 3.0, SensorStrategy::adversarial(2.0, 1.0));
    SensorState st = initial_state(s, SimConfig::defaults(20));
    const std::vector<Point> mules{{0, 0}};
    auto knots = step_strategy(s, seg, st, 0.0, 1.0, mules);
    CHECK(knots.back().offset == 5.0);
    knots = step_strategy(s, seg, st, 1.0, 4.0, mules);
    CHECK(knots.front().time == doctest::Approx(3.5));
    CHECK(knots.front().offset == 10.0);
    CHECK(knots.back().offset == 10.0);
  }
  SUBCASE("waypoint is deterministic and confined") {
    const Instance winst = make_instance({{{0, 0}, {10, 0}}}, 1, 20,
                                         {sensor(0, 0, 2.0, SensorStrategy::waypoint(99, 2.0, 2.0))});
    const DeploymentPlan plan = make_plan(winst);
    const SimConfig cfg = SimConfig::defaults(20);
    const auto a = sensor_trajectory(winst, plan, winst.sensors[0], cfg);
    const auto b = sensor_trajectory(winst, plan, winst.sensors[0], cfg);
    REQUIRE(a.size() == b.size());
    CHECK(a.size() > 2);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].time == b[i].time);
      CHECK(a[i].offset == b[i].offset);
      CHECK(a[i].offset >= 0.0);
      CHECK(a[i].offset <= 10.0);
      if (i > 0) {
        CHECK(a[i].time > a[i - 1].time);
        CHECK(std::abs(a[i].offset - a[i - 1].offset) <= 2.0 * (a[i].time - a[i - 1].time) + 1e-9);
      }
    }
    CHECK(a.back().time == cfg.horizon);
  }
}

TEST_CASE("adversary at 10V cannot escape a single-piece plan") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    GeneratorParams p = fixtures::random_params(seed, 1, 3);
    p.min_length = 5.0;
    p.max_length = 35.0;
    p.strategy = SensorStrategy::adversarial(10.0, p.period / 100);
    const Instance inst = generate_instance(p);
    const DeploymentPlan plan = make_plan(inst);
    REQUIRE(plan.pieces.size() == 1);
    SimConfig cfg = SimConfig::defaults(inst.period);
    cfg.seed = seed;
    const SimReport r = simulate(inst, plan, cfg);
    CHECK(r.pass);
    for (const auto& s : r.sensors) CHECK(s.max_gap <= inst.period + cfg.max_step);
  }
}

TEST_CASE("halving max_step never loses a visit") {
  GeneratorParams p = fixtures::random_params(21, 6, 6);
  p.strategy = SensorStrategy::waypoint(0, 2.0, 4.0);
  const Instance inst = generate_instance(p);
  const DeploymentPlan plan = make_plan(inst);
  SimConfig coarse = SimConfig::defaults(inst.period);
  coarse.max_step = inst.period / 200;
  SimConfig fine = coarse;
  fine.max_step = coarse.max_step / 2;
  const SimReport a = simulate(inst, plan, coarse);
  const SimReport b = simulate(inst, plan, fine);
  REQUIRE(a.sensors.size() == b.sensors.size());
  for (std::size_t i = 0; i < a.sensors.size(); ++i)
    for (const auto& w : a.sensors[i].windows) {
      bool found = false;
      for (const auto& v : b.sensors[i].windows) found = found || (v.start <= w.end + 1e-9 && w.start <= v.end + 1e-9);
      CHECK(found);
    }
}

TEST_CASE("simulation is reproducible and kernel-independent") {
  for (auto kind : {StrategyKind::kStationary, StrategyKind::kWaypoint, StrategyKind::kAdversarial}) {
    GeneratorParams p = fixtures::random_params(33, 8, 5);
    p.strategy = kind == StrategyKind::kStationary ? SensorStrategy::stationary()
                 : kind == StrategyKind::kWaypoint ? SensorStrategy::waypoint(0, 2.0, 4.0)
                                                   : SensorStrategy::adversarial(10.0, 0.4);
    const Instance inst = generate_instance(p);
    const DeploymentPlan plan = make_plan(inst);
    const SimConfig cfg = SimConfig::defaults(inst.period);
    const std::string a = format_sim_report(simulate(inst, plan, cfg));
    const std::string b = format_sim_report(simulate(inst, plan, cfg));
    CHECK(a == b);
    for (auto isa : {kernels::Isa::kScalar, kernels::Isa::kAvx2, kernels::Isa::kNeon})
      if (kernels::available(isa)) CHECK(format_sim_report(simulate(inst, plan, cfg, kernels::table(isa))) == a);
    CHECK(simulate(inst, plan, cfg).pass);
  }
}

TEST_CASE("sensor offsets stay on the segment at every breakpoint") {
  GeneratorParams p = fixtures::random_params(44, 5, 8);
  p.strategy = SensorStrategy::adversarial(10.0, 0.4);
  const Instance inst = generate_instance(p);
  const DeploymentPlan plan = make_plan(inst);
  const SimConfig cfg = SimConfig::defaults(inst.period);
  for (const auto& s : inst.sensors) {
    const auto knots = sensor_trajectory(inst, plan, s, cfg);
    const double len = inst.segments[static_cast<std::size_t>(s.segment_id)].length;
    for (double t : mule_breakpoints(plan, cfg)) {
      const double o = offset_at(knots, t);
      CHECK(o >= 0.0);
      CHECK(o <= len);
    }
  }
}
