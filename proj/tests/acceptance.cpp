// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Each check reports its wall time against its budget.

#include <sys/resource.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "mulepatrol/canonical_json.hpp"
#include "mulepatrol/deploy.hpp"
#include "mulepatrol/render.hpp"
#include "mulepatrol/sim.hpp"
#include "oracles.hpp"

using namespace mule;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Instances shared by the ratio and Euler checks.
GeneratorParams ratio_params(std::uint64_t seed) {
  GeneratorParams p = fixtures::random_params(seed, 1 + static_cast<int>(seed % 40));
  p.period = 10.0 + static_cast<double>(seed % 7) * 10.0;
  return p;
}

Outcome ac1() {
  const Instance inst = fixtures::collinear3();
  const auto accepted = kruskal_order(inst, compute_connectors(inst));
  const auto counts = count_all_rounds(inst, accepted, CountMode::kTight);
  const DeploymentPlan plan = make_plan(inst, CountMode::kTight);
  const BoundReport b = approximation_report(plan);
  const bool ok = counts.size() == 3 && counts[0].n == 6 && counts[1].n == 4 && counts[2].n == 4 &&
                  plan.round_j == 2 && plan.mule_count == 4 && b.lower_bound == 2 && b.ratio == 2.0;
  return {ok, fmt("n=(%lld,%lld,%lld) J=%d N=%lld LB=%lld ratio=%.1f", static_cast<long long>(counts[0].n),
                  static_cast<long long>(counts[1].n), static_cast<long long>(counts[2].n), plan.round_j,
                  static_cast<long long>(plan.mule_count), static_cast<long long>(b.lower_bound), b.ratio)};
}

Outcome ac2() {
  int instances = 0, ratio_fail = 0, order_fail = 0, errors = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    try {
      const Instance inst = generate_instance(ratio_params(seed));
      const DeploymentPlan tight = make_plan(inst, CountMode::kTight);
      const DeploymentPlan step5 = make_plan(inst, CountMode::kStep5);
      for (const auto* p : {&tight, &step5}) {
        const double r = approximation_report(*p).ratio;
        worst = std::max(worst, r);
        if (!(r <= 4.0)) ++ratio_fail;
      }
      if (tight.mule_count > step5.mule_count) ++order_fail;
      ++instances;
    } catch (const std::exception&) {
      ++errors;
    }
  }
  return {ratio_fail == 0 && order_fail == 0 && errors == 0 && instances >= 500,
          fmt("instances=%d worst_ratio=%.3f ratio_fail=%d tight>step5=%d errors=%d", instances, worst, ratio_fail,
              order_fail, errors)};
}

Outcome ac3() {
  int instances = 0, failures = 0, bad_equality = 0, equality = 0, points = 0;
  auto check = [&](const Instance& inst) {
    const DeploymentPlan plan = make_plan(inst);
    const auto report = verify_point_coverage(plan, inst, 32);
    if (!report.pass) ++failures;
    for (const auto& p : report.points) {
      ++points;
      if (std::abs(p.max_gap - inst.period) <= kGapTolerance) {
        ++equality;
        if (!(p.at_station && p.full_length_piece)) ++bad_equality;
      }
    }
    ++instances;
  };
  // Full-length piece: a single segment of length exactly Vt.
  check(make_instance({{{0, 0}, {5, 0}}}, 1.0, 5.0));
  check(fixtures::collinear3());
  for (std::uint64_t seed = 0; seed < 120; ++seed) {
    GeneratorParams p = fixtures::random_params(seed + 10000, 1 + static_cast<int>(seed % 20));
    p.period = 15.0 + static_cast<double>(seed % 5) * 5.0;
    check(generate_instance(p));
  }
  return {failures == 0 && bad_equality == 0 && instances >= 100,
          fmt("instances=%d points=%d failures=%d gap==t:%d off-station:%d", instances, points, failures, equality,
              bad_equality)};
}

Outcome ac4() {
  int runs = 0, sensors = 0, violations = 0;
  double worst_excess = -1e300;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    for (int strat = 0; strat < 3; ++strat) {
      GeneratorParams p = fixtures::random_params(seed + 20000, 1 + static_cast<int>(seed % 8), 6);
      p.period = 10.0 + static_cast<double>(seed % 3) * 10.0;
      p.width = p.height = 60.0;
      p.strategy = strat == 0   ? SensorStrategy::stationary()
                   : strat == 1 ? SensorStrategy::waypoint(seed, 2.0 * p.speed, p.period / 10)
                                : SensorStrategy::adversarial(10.0 * p.speed, p.period / 100);
      const Instance inst = generate_instance(p);
      const DeploymentPlan plan = make_plan(inst);
      SimConfig cfg = SimConfig::defaults(inst.period);
      cfg.seed = seed;
      const SimReport r = simulate(inst, plan, cfg);
      for (const auto& s : r.sensors) {
        ++sensors;
        worst_excess = std::max(worst_excess, s.max_gap - inst.period);
        if (s.max_gap > inst.period + cfg.max_step) ++violations;
      }
      ++runs;
    }
  }
  return {violations == 0 && runs == 150,
          fmt("runs=%d sensors=%d violations=%d worst(max_gap - t)=%.4f", runs, sensors, violations, worst_excess)};
}

Outcome ac5() {
  int instances = 0, rounds = 0, mismatches = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Instance inst = generate_instance(fixtures::random_params(seed + 30000, 1 + static_cast<int>(seed % 6)));
    for (const auto& r : forest_rounds(inst, compute_connectors(inst))) {
      const double want = oracle::min_forest_weight(inst, r.k - 1);
      const double got = connector_weight(r);
      if (std::abs(want - got) > 1e-9 * std::max(1.0, want)) ++mismatches;
      ++rounds;
    }
    ++instances;
  }
  return {mismatches == 0 && instances == 100, fmt("instances=%d rounds=%d mismatches=%d", instances, rounds, mismatches)};
}

std::pair<int, int> ordered(int u, int v) { return {std::min(u, v), std::max(u, v)}; }

std::map<std::pair<int, int>, int> undirected(const std::vector<int>& walk) {
  std::map<std::pair<int, int>, int> out;
  for (std::size_t i = 1; i < walk.size(); ++i) ++out[ordered(walk[i - 1], walk[i])];
  return out;
}

bool euler_ok(const Tree& t, const Instance& inst) {
  const EulerPath p = build_euler_path(t, inst);
  const double expect = 2.0 * t.weight - p.removed_length;
  if (std::abs(p.total_length - expect) > 1e-9 * std::max(1.0, expect)) return false;
  std::map<std::pair<int, int>, int> want;
  std::pair<int, int> removed;
  for (int s : t.segment_ids) {
    const auto e = ordered(vertex_id(s, End::kA), vertex_id(s, End::kB));
    want[e] += 2;
    if (p.removed_edge.kind == EdgeKind::kSegment && p.removed_edge.source_a == s) removed = e;
  }
  for (const auto& c : t.connectors) {
    const auto e = ordered(vertex_id(c.seg_i, c.end_i), vertex_id(c.seg_j, c.end_j));
    want[e] += 2;
    if (p.removed_edge.kind == EdgeKind::kConnector && p.removed_edge.source_a == c.seg_i &&
        p.removed_edge.source_b == c.seg_j)
      removed = e;
  }
  if (--want[removed] == 0) want.erase(removed);
  if (undirected(p.vertex_walk) != want) return false;
  return ordered(p.vertex_walk.front(), p.vertex_walk.back()) == removed;
}

Outcome ac6() {
  int trees = 0, failures = 0;
  auto sweep = [&](const Instance& inst) {
    for (const auto& r : forest_rounds(inst, compute_connectors(inst)))
      for (const auto& t : r.trees) {
        ++trees;
        if (!euler_ok(t, inst)) ++failures;
      }
  };
  sweep(fixtures::collinear3());
  for (std::uint64_t seed = 0; seed < 500; ++seed) sweep(generate_instance(ratio_params(seed)));
  for (std::uint64_t seed = 0; seed < 100; ++seed)
    sweep(generate_instance(fixtures::random_params(seed + 30000, 1 + static_cast<int>(seed % 6))));
  return {failures == 0, fmt("trees=%d failures=%d", trees, failures)};
}

Outcome ac7() {
  auto time_plan = [](int m) {
    GeneratorParams p = fixtures::random_params(static_cast<std::uint64_t>(m), m);
    p.width = p.height = 1000.0;
    p.period = 60.0;
    const Instance inst = generate_instance(p);
    const auto t0 = Clock::now();
    const DeploymentPlan plan = make_plan(inst);
    const std::string text = format_plan(plan);
    const double dt = seconds_since(t0);
    return text.empty() ? 1e9 : dt;
  };
  const double t1000 = time_plan(1000);
  const double t2000 = time_plan(2000);
  rusage ru{};
  getrusage(RUSAGE_SELF, &ru);
  const double rss_mb = static_cast<double>(ru.ru_maxrss) / 1024.0;
  return {t1000 < 5.0 && t2000 < 30.0 && rss_mb < 1024.0,
          fmt("M=1000 %.3f s (<5)  M=2000 %.3f s (<30)  maxrss %.1f MB (<1024)", t1000, t2000, rss_mb)};
}

Outcome ac8() {
  int mismatches = 0;
  const auto dir = fixtures::temp_dir("acceptance");
  std::string first[4];
  for (int pass = 0; pass < 2; ++pass) {
    GeneratorParams p = fixtures::random_params(4242, 15, 5);
    p.strategy = SensorStrategy::waypoint(1, 2.0, 4.0);
    const Instance inst = generate_instance(p);
    save_instance(inst, dir / "inst.json");
    const DeploymentPlan plan = make_plan(load_instance(dir / "inst.json"));
    save_plan(plan, dir / "plan.json");
    write_file_atomic(dir / "render.svg", render_svg(inst, &plan));
    SimConfig cfg = SimConfig::defaults(inst.period);
    cfg.seed = 9;
    write_file_atomic(dir / "sim.json", format_sim_report(simulate(inst, plan, cfg)));
    const std::string cur[4] = {read_file(dir / "inst.json"), read_file(dir / "plan.json"),
                                read_file(dir / "render.svg"), read_file(dir / "sim.json")};
    for (int i = 0; i < 4; ++i) {
      if (pass == 1 && cur[i] != first[i]) ++mismatches;
      first[i] = cur[i];
    }
  }
  return {mismatches == 0, fmt("gen/plan/render/simulate byte mismatches=%d", mismatches)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"AC1 worked micro-instance", 1.0, ac1},
      {"AC2 ratio <= 4 and tight <= step5 (500 instances)", 30.0, ac2},
      {"AC3 analytic point coverage", 30.0, ac3},
      {"AC4 simulated coverage, 3 strategies x 50", 120.0, ac4},
      {"AC5 forest weight vs exhaustive oracle", 60.0, ac5},
      {"AC6 Euler path identities", 0.0, ac6},
      {"AC7 planning budget", 0.0, ac7},
      {"AC8 determinism", 0.0, ac8},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double dt = seconds_since(t0);
    const bool in_budget = c.budget_s <= 0.0 || dt < c.budget_s;
    const bool pass = o.pass && in_budget;
    if (!pass) ++failed;
    std::printf("[%s] %-52s %s (%.2f s%s)\n", pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), dt,
                in_budget ? "" : ", over budget");
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
