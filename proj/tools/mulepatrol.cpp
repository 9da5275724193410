// mulepatrol: plan, verify, simulate and render data-mule patrols over
// road segments. Run with --help for the subcommands.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mulepatrol/canonical_json.hpp"
#include "mulepatrol/deploy.hpp"
#include "mulepatrol/error.hpp"
#include "mulepatrol/model.hpp"
#include "mulepatrol/render.hpp"
#include "mulepatrol/sim.hpp"

namespace {

using namespace mule;

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

std::string fmt_ratio(double r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", r);
  std::string s(buf);
  while (s.size() > 1 && s.back() == '0' && s[s.size() - 2] != '.') s.pop_back();
  return s;
}

std::string fmt_num(double v) { return format_number(v); }

std::pair<double, double> parse_pair(const std::string& text, const char* flag) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw ValidationError(std::string(flag) + " expects two comma-separated numbers");
  try {
    std::size_t used = 0;
    const double a = std::stod(text.substr(0, comma), &used);
    if (used != comma) throw std::invalid_argument("trailing");
    const std::string rest = text.substr(comma + 1);
    const double b = std::stod(rest, &used);
    if (used != rest.size()) throw std::invalid_argument("trailing");
    return {a, b};
  } catch (const std::logic_error&) {
    throw ValidationError(std::string(flag) + " expects two comma-separated numbers");
  }
}

struct GenArgs {
  int segments = 1;
  std::uint64_t seed = 0;
  std::string bbox = "100,100";
  std::string len = "1,10";
  double speed = 1.0;
  double period = 10.0;
  int sensors = 0;
  std::string strategy = "stationary";
  double v_max = 0.0;
  double pause_max = 0.0;
  double decision_interval = 0.0;
  std::string out;
};

int cmd_gen(const GenArgs& a) {
  GeneratorParams p;
  p.seed = a.seed;
  p.segments = a.segments;
  std::tie(p.width, p.height) = parse_pair(a.bbox, "--bbox");
  std::tie(p.min_length, p.max_length) = parse_pair(a.len, "--len");
  p.speed = a.speed;
  p.period = a.period;
  p.sensors = a.sensors;
  const double v_max = a.v_max > 0.0 ? a.v_max : 2.0 * a.speed;
  if (a.strategy == "stationary")
    p.strategy = SensorStrategy::stationary();
  else if (a.strategy == "waypoint")
    p.strategy = SensorStrategy::waypoint(0, v_max, a.pause_max > 0.0 ? a.pause_max : 0.1 * a.period);
  else if (a.strategy == "adversarial")
    p.strategy = SensorStrategy::adversarial(v_max, a.decision_interval > 0.0 ? a.decision_interval : a.period / 100.0);
  else
    throw ValidationError("unknown --strategy '" + a.strategy + "'");
  const Instance inst = generate_instance(p);
  save_instance(inst, a.out);
  std::cout << "gen M=" << inst.size() << " sensors=" << inst.sensors.size() << " seed=" << a.seed
            << " out=" << a.out << "\n";
  return 0;
}

std::string plan_summary(const DeploymentPlan& plan) {
  const BoundReport b = approximation_report(plan);
  std::ostringstream os;
  os << "N=" << plan.mule_count << " J=" << plan.round_j << " LB=" << b.lower_bound << " ratio=" << fmt_ratio(b.ratio);
  return os.str();
}

int cmd_plan(const std::string& in, const std::string& mode, const std::string& out) {
  const Instance inst = load_instance(in);
  const DeploymentPlan plan = make_plan(inst, parse_count_mode(mode));
  save_plan(plan, out);
  std::cout << "plan mode=" << to_string(plan.mode) << " " << plan_summary(plan) << " trees=" << plan.trees.size()
            << " out=" << out << "\n";
  return 0;
}

int cmd_verify(const std::string& in, const std::string& plan_path, int samples, const std::string& out) {
  const Instance inst = load_instance(in);
  const DeploymentPlan plan = load_plan(plan_path, inst);
  const PointCoverageReport r = verify_point_coverage(plan, inst, samples);
  Json doc = Json::object();
  doc["samples_per_segment"] = r.samples_per_segment;
  doc["period"] = plan.period;
  doc["max_gap"] = r.max_gap;
  doc["violations"] = r.violations;
  doc["pass"] = r.pass;
  Json pts = Json::array();
  for (const auto& pc : r.points) {
    Json j = Json::object();
    j["segment_id"] = pc.segment_id;
    j["offset"] = pc.offset;
    j["max_gap"] = pc.max_gap;
    j["visits_per_period"] = pc.visits_per_period;
    j["at_station"] = pc.at_station;
    j["pass"] = pc.pass;
    pts.push_back(std::move(j));
  }
  doc["points"] = std::move(pts);
  write_file_atomic(out, dump_canonical(doc));
  std::cout << "verify " << plan_summary(plan) << " points=" << r.points.size() << " max_gap=" << fmt_num(r.max_gap)
            << " violations=" << r.violations << " pass=" << (r.pass ? "true" : "false") << "\n";
  return r.pass ? 0 : kExitFail;
}

int cmd_simulate(const std::string& in, const std::string& plan_path, double horizon_mult, double eps,
                 double max_step_div, std::uint64_t seed, const std::string& out) {
  const Instance inst = load_instance(in);
  const DeploymentPlan plan = load_plan(plan_path, inst);
  if (!(max_step_div > 0.0)) throw ValidationError("--max-step-div must be > 0");
  SimConfig cfg;
  cfg.horizon = horizon_mult * inst.period;
  cfg.contact_radius = eps;
  cfg.max_step = inst.period / max_step_div;
  cfg.seed = seed;
  const SimReport r = simulate(inst, plan, cfg);
  write_file_atomic(out, format_sim_report(r));
  double worst = 0.0;
  for (const auto& s : r.sensors) worst = std::max(worst, s.max_gap);
  std::cout << "simulate " << plan_summary(plan) << " sensors=" << r.sensors.size() << " max_gap=" << fmt_num(worst)
            << " violations=" << r.violations << " pass=" << (r.pass ? "true" : "false") << "\n";
  return r.pass ? 0 : kExitFail;
}

int cmd_bound(const std::string& plan_path) {
  const DeploymentPlan plan = load_plan(plan_path);
  const BoundReport b = approximation_report(plan);
  std::cout << "bound LB=" << b.lower_bound << " N=" << b.mule_count << " ratio=" << fmt_ratio(b.ratio)
            << " J=" << plan.round_j << " pass=" << (b.ratio <= 4.0 ? "true" : "false") << "\n";
  return 0;
}

int cmd_render(const std::string& in, const std::string& plan_path, const std::string& out) {
  const Instance inst = load_instance(in);
  std::string svg;
  if (plan_path.empty()) {
    svg = render_svg(inst, nullptr);
  } else {
    const DeploymentPlan plan = load_plan(plan_path, inst);
    svg = render_svg(inst, &plan);
  }
  write_file_atomic(out, svg);
  std::cout << "render M=" << inst.size() << " plan=" << (plan_path.empty() ? "none" : plan_path) << " out=" << out
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Plan and check data-mule patrols over road segments"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a seeded random instance");
  g->add_option("--segments", gen.segments, "Number of road segments")->required();
  g->add_option("--seed", gen.seed, "Generator seed")->required();
  g->add_option("--bbox", gen.bbox, "Bounding box W,H in metres");
  g->add_option("--len", gen.len, "Segment length range MIN,MAX in metres");
  g->add_option("--speed", gen.speed, "Mule speed V (m/s)");
  g->add_option("--period", gen.period, "Gathering period t (s)");
  g->add_option("--sensors", gen.sensors, "Number of sensors");
  g->add_option("--strategy", gen.strategy, "Sensor strategy: stationary|waypoint|adversarial");
  g->add_option("--vmax", gen.v_max, "Sensor speed bound (default 2V)");
  g->add_option("--pause-max", gen.pause_max, "Waypoint pause bound (default t/10)");
  g->add_option("--decision-interval", gen.decision_interval, "Adversary decision interval (default t/100)");
  g->add_option("-o,--out", gen.out, "Output instance file")->required();

  std::string in, plan_path, out, mode = "tight";
  int samples = 64;
  double horizon_mult = 5.0, eps = 1e-3, max_step_div = 1000.0;
  std::uint64_t sim_seed = 0;

  auto* p = app.add_subcommand("plan", "Compute a deployment plan");
  p->add_option("-i,--instance", in, "Instance file")->required();
  p->add_option("--mode", mode, "Count mode: tight|step5");
  p->add_option("-o,--out", out, "Output plan file")->required();

  auto* v = app.add_subcommand("verify", "Check analytic point coverage of a plan");
  v->add_option("-i,--instance", in, "Instance file")->required();
  v->add_option("-p,--plan", plan_path, "Plan file")->required();
  v->add_option("--samples", samples, "Interior samples per segment");
  v->add_option("-o,--out", out, "Output report file")->required();

  auto* s = app.add_subcommand("simulate", "Simulate mules against the instance's sensors");
  s->add_option("-i,--instance", in, "Instance file")->required();
  s->add_option("-p,--plan", plan_path, "Plan file")->required();
  s->add_option("--horizon-mult", horizon_mult, "Horizon as a multiple of t");
  s->add_option("--eps", eps, "Contact radius in metres");
  s->add_option("--max-step-div", max_step_div, "max_step = t / this");
  s->add_option("--seed", sim_seed, "Simulation seed");
  s->add_option("-o,--out", out, "Output report file")->required();

  auto* b = app.add_subcommand("bound", "Report the lower bound and approximation ratio of a plan");
  b->add_option("-p,--plan", plan_path, "Plan file")->required();

  auto* r = app.add_subcommand("render", "Render an instance (and plan) as SVG");
  r->add_option("-i,--instance", in, "Instance file")->required();
  r->add_option("-p,--plan", plan_path, "Plan file");
  r->add_option("-o,--out", out, "Output SVG file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (g->parsed()) return cmd_gen(gen);
    if (p->parsed()) return cmd_plan(in, mode, out);
    if (v->parsed()) return cmd_verify(in, plan_path, samples, out);
    if (s->parsed()) return cmd_simulate(in, plan_path, horizon_mult, eps, max_step_div, sim_seed, out);
    if (b->parsed()) return cmd_bound(plan_path);
    if (r->parsed()) return cmd_render(in, plan_path, out);
  } catch (const mule::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
