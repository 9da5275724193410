#include "mulepatrol/deploy.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <map>
#include <stdexcept>

#include "mulepatrol/canonical_json.hpp"
#include "mulepatrol/error.hpp"

namespace mule {

std::string_view to_string(CountMode mode) { return mode == CountMode::kTight ? "tight" : "step5"; }

CountMode parse_count_mode(std::string_view text) {
  if (text == "tight") return CountMode::kTight;
  if (text == "step5") return CountMode::kStep5;
  throw ValidationError("unknown count mode '" + std::string(text) + "' (expected tight or step5)");
}

namespace {

std::int64_t ceil_div(double length, double reach) { return static_cast<std::int64_t>(std::ceil(length / reach)); }

std::int64_t pieces_for(double weight, double removed_length, double reach, CountMode mode) {
  return mode == CountMode::kTight ? ceil_div(2.0 * weight - removed_length, reach) : ceil_div(2.0 * weight, reach);
}

}  // namespace

std::int64_t piece_count(const Tree& tree, const Instance& inst, CountMode mode) {
  const Connector* c = tree.heaviest_connector();
  const double removed =
      c != nullptr ? c->length : inst.segments[static_cast<std::size_t>(tree.segment_ids.front())].length;
  return pieces_for(tree.weight, removed, inst.reach(), mode);
}

std::int64_t count_round(ForestRound& round, const Instance& inst, CountMode mode) {
  std::int64_t n = 0;
  for (const auto& t : round.trees) n += 2 * piece_count(t, inst, mode);
  round.n_k = n;
  return n;
}

std::vector<RoundCount> count_all_rounds(const Instance& inst, std::span<const Connector> accepted, CountMode mode) {
  ForestSweep sweep(inst);
  const double reach = inst.reach();
  const auto term = [&](int root) {
    const Connector* h = sweep.heaviest(root);
    const double removed = h != nullptr ? h->length : inst.segments[static_cast<std::size_t>(root)].length;
    return 2 * pieces_for(sweep.weight(root), removed, reach, mode);
  };
  std::int64_t n = 0;
  for (int s = 0; s < static_cast<int>(inst.size()); ++s) n += term(s);
  std::vector<RoundCount> out;
  out.reserve(inst.size());
  out.push_back({1, n});
  for (std::size_t i = 0; i < accepted.size(); ++i) {
    const auto& c = accepted[i];
    const int ri = sweep.find(c.seg_i);
    const int rj = sweep.find(c.seg_j);
    if (ri == rj) throw InternalError("acceptance order contains a cycle-forming connector");
    n -= term(ri) + term(rj);
    sweep.accept(c);
    n += term(sweep.find(c.seg_i));
    out.push_back({static_cast<int>(i) + 2, n});
  }
  return out;
}

int select_round(std::span<const RoundCount> counts) {
  if (counts.empty()) throw std::invalid_argument("no rounds to select from");
  const RoundCount* best = &counts.front();
  for (const auto& c : counts)
    if (c.n < best->n) best = &c;
  return best->k;
}

namespace {

void add_pieces(DeploymentPlan& plan, PlannedTree& pt, int tree_index, std::int64_t count) {
  pt.first_piece = static_cast<int>(plan.pieces.size());
  pt.piece_count = static_cast<int>(count);
  const double total = pt.path.total_length;
  const double len = total / static_cast<double>(count);
  for (std::int64_t i = 0; i < count; ++i) {
    PatrolPiece p;
    p.tree_index = tree_index;
    p.s_start = static_cast<double>(i) * len;
    p.s_end = i + 1 == count ? total : static_cast<double>(i + 1) * len;
    const int id = static_cast<int>(plan.pieces.size());
    p.mule_left = 2 * id;
    p.mule_right = 2 * id + 1;
    p.sweep_period = p.length() / plan.speed;
    plan.pieces.push_back(p);
  }
}

}  // namespace

DeploymentPlan make_plan(const Instance& inst, CountMode mode) {
  validate(inst);
  const auto connectors = compute_connectors(inst);
  const auto accepted = kruskal_order(inst, connectors);

  DeploymentPlan plan;
  plan.instance_digest = geometry_digest(inst);
  plan.speed = inst.speed;
  plan.period = inst.period;
  plan.mode = mode;
  plan.all_rounds_n = count_all_rounds(inst, accepted, mode);
  plan.round_j = select_round(plan.all_rounds_n);

  ForestRound round = forest_round(inst, accepted, plan.round_j);
  count_round(round, inst, mode);
  plan.trees.reserve(round.trees.size());
  for (auto& tree : round.trees) {
    PlannedTree pt;
    pt.path = build_euler_path(tree, inst);
    const std::int64_t st = piece_count(tree, inst, mode);
    pt.tree = std::move(tree);
    add_pieces(plan, pt, static_cast<int>(plan.trees.size()), st);
    plan.trees.push_back(std::move(pt));
  }
  plan.mule_count = 2 * static_cast<std::int64_t>(plan.pieces.size());
  if (plan.mule_count != round.n_k) throw InternalError("deployed mule count disagrees with round estimate");
  return plan;
}

MulePosition mule_position(const DeploymentPlan& plan, int mule_id, double tau) {
  if (mule_id < 0 || static_cast<std::size_t>(mule_id) >= 2 * plan.pieces.size())
    throw std::out_of_range("unknown mule id " + std::to_string(mule_id));
  if (!(tau >= 0.0)) throw std::invalid_argument("negative time");
  const auto& piece = plan.pieces[static_cast<std::size_t>(mule_id / 2)];
  const double period = piece.sweep_period;
  const double phase = std::fmod(tau, period);
  const double half = 0.5 * piece.length();
  const double excursion = std::min(half, plan.speed * (phase <= 0.5 * period ? phase : period - phase));
  const double arc = mule_id % 2 == 0 ? piece.s_start + excursion : piece.s_end - excursion;
  const auto& path = plan.trees[static_cast<std::size_t>(piece.tree_index)].path;
  return {arc, point_at(path, arc)};
}

PointCoverage arc_coverage(const DeploymentPlan& plan, const PlannedTree& tree, std::span<const double> arcs) {
  const double total = tree.path.total_length;
  const double tol = 1e-9 * std::max(1.0, total);
  std::vector<double> times;
  PointCoverage pc;
  double period = 0.0;
  double piece_len = 0.0;
  const auto pieces = plan.pieces_of(tree);
  for (double arc : arcs) {
    // Pieces are sorted by s_start; only the neighbours of the containing
    // piece can match within tolerance.
    auto it = std::upper_bound(pieces.begin(), pieces.end(), arc,
                               [](double v, const PatrolPiece& p) { return v < p.s_start; });
    const auto first = it == pieces.begin() ? it : std::prev(it, std::min<std::ptrdiff_t>(2, it - pieces.begin()));
    const auto last = it == pieces.end() ? it : std::next(it);
    for (auto pit = first; pit != last; ++pit) {
      const auto& piece = *pit;
      if (arc < piece.s_start - tol || arc > piece.s_end + tol) continue;
      const double len = piece.length();
      period = piece.sweep_period;
      piece_len = len;
      if (std::abs(arc - piece.s_start) <= tol || std::abs(arc - piece.s_end) <= tol) pc.at_station = true;
      double d = std::clamp(arc - piece.s_start, 0.0, len);
      if (d > 0.5 * len) d = len - d;  // right mule's half, mirrored
      times.push_back(std::fmod(d / plan.speed, period));
      times.push_back(std::fmod((len - d) / plan.speed, period));
    }
  }
  if (times.empty()) throw InternalError("arc position not covered by any piece");
  std::sort(times.begin(), times.end());
  const double merge = 1e-12 * std::max(1.0, period);
  std::vector<double> unique;
  for (double t : times)
    if (unique.empty() || t - unique.back() > merge) unique.push_back(t);
  if (unique.size() > 1 && period - unique.back() + unique.front() <= merge) unique.pop_back();
  double gap = period - unique.back() + unique.front();
  for (std::size_t i = 1; i < unique.size(); ++i) gap = std::max(gap, unique[i] - unique[i - 1]);
  pc.max_gap = gap;
  pc.visits_per_period = static_cast<int>(unique.size());
  pc.full_length_piece = std::abs(piece_len - plan.reach()) <= 1e-9 * std::max(1.0, plan.reach());
  pc.pass = gap <= plan.period + kGapTolerance;
  return pc;
}

PointCoverageReport verify_point_coverage(const DeploymentPlan& plan, const Instance& inst,
                                          int samples_per_segment) {
  check_plan_matches(plan, inst);
  if (samples_per_segment < 0) throw std::invalid_argument("negative sample count");
  PointCoverageReport report;
  report.samples_per_segment = samples_per_segment;
  for (const auto& tree : plan.trees) {
    const auto& path = tree.path;
    if (path.steps.empty()) throw InternalError("plan is not bound to instance geometry");
    std::vector<double> boundaries;
    for (const auto& piece : plan.pieces_of(tree)) boundaries.push_back(piece.s_start);
    boundaries.push_back(path.total_length);

    // Traversals of each segment: (s_begin, forward).
    std::map<int, std::vector<std::pair<double, bool>>> traversals;
    std::map<int, std::vector<double>> offsets;
    for (const auto& step : path.steps) {
      if (step.edge.kind != EdgeKind::kSegment) continue;
      const int seg = step.edge.source_a;
      const bool forward = vertex_end(step.from) == End::kA;
      traversals[seg].push_back({step.s_begin, forward});
      const double len = inst.segments[static_cast<std::size_t>(seg)].length;
      auto it = std::lower_bound(boundaries.begin(), boundaries.end(), step.s_begin);
      for (; it != boundaries.end() && *it <= step.s_end; ++it) {
        const double along = std::clamp(*it - step.s_begin, 0.0, len);
        offsets[seg].push_back(forward ? along : len - along);
      }
    }
    for (int seg : tree.tree.segment_ids) {
      const double len = inst.segments[static_cast<std::size_t>(seg)].length;
      auto& offs = offsets[seg];
      offs.push_back(0.0);
      offs.push_back(len);
      for (int k = 1; k <= samples_per_segment; ++k)
        offs.push_back(len * static_cast<double>(k) / static_cast<double>(samples_per_segment + 1));
      std::sort(offs.begin(), offs.end());
      offs.erase(std::unique(offs.begin(), offs.end()), offs.end());
      const auto& trav = traversals[seg];
      std::vector<double> arcs;
      for (double off : offs) {
        arcs.clear();
        for (const auto& [begin, forward] : trav) arcs.push_back(begin + (forward ? off : len - off));
        PointCoverage pc = arc_coverage(plan, tree, arcs);
        pc.segment_id = seg;
        pc.offset = off;
        report.points.push_back(pc);
      }
    }
  }
  std::sort(report.points.begin(), report.points.end(), [](const PointCoverage& x, const PointCoverage& y) {
    return x.segment_id != y.segment_id ? x.segment_id < y.segment_id : x.offset < y.offset;
  });
  for (const auto& pc : report.points) {
    report.max_gap = std::max(report.max_gap, pc.max_gap);
    if (!pc.pass) ++report.violations;
  }
  report.pass = report.violations == 0;
  return report;
}

BoundReport approximation_report(const DeploymentPlan& plan) {
  BoundReport r;
  for (const auto& t : plan.trees) r.lower_bound += ceil_div(t.tree.weight, plan.reach());
  r.mule_count = plan.mule_count;
  r.ratio = r.lower_bound > 0 ? static_cast<double>(r.mule_count) / static_cast<double>(r.lower_bound) : 0.0;
  return r;
}

void check_plan_matches(const DeploymentPlan& plan, const Instance& inst) {
  if (plan.instance_digest != geometry_digest(inst))
    throw ValidationError("plan does not match instance (digest " + plan.instance_digest + " vs " +
                          geometry_digest(inst) + ")");
}

// ---------------------------------------------------------------------------
// Plan file

namespace {

Json point_json(Point p) {
  Json j = Json::object();
  j["x"] = p.x;
  j["y"] = p.y;
  return j;
}

Json edge_json(const EdgeTag& e) {
  Json j = Json::object();
  j["kind"] = e.kind == EdgeKind::kSegment ? "segment" : "connector";
  j["source_a"] = e.source_a;
  j["source_b"] = e.source_b;
  j["copy"] = e.copy;
  return j;
}

EdgeTag parse_edge(const Json& j) {
  EdgeTag e;
  const std::string kind = get_string(j, "kind");
  if (kind == "segment")
    e.kind = EdgeKind::kSegment;
  else if (kind == "connector")
    e.kind = EdgeKind::kConnector;
  else
    throw ParseError("unknown edge kind '" + kind + "'");
  e.source_a = static_cast<int>(get_integer(j, "source_a"));
  e.source_b = static_cast<int>(get_integer(j, "source_b"));
  e.copy = static_cast<int>(get_integer(j, "copy"));
  return e;
}

End parse_end(const std::string& s) {
  if (s == "A") return End::kA;
  if (s == "B") return End::kB;
  throw ParseError("endpoint selector must be \"A\" or \"B\"");
}

}  // namespace

std::string format_plan(const DeploymentPlan& plan) {
  Json doc = Json::object();
  doc["count_mode"] = std::string(to_string(plan.mode));
  doc["round_j"] = plan.round_j;
  doc["mule_count"] = plan.mule_count;
  doc["speed"] = plan.speed;
  doc["period"] = plan.period;
  doc["instance_digest"] = plan.instance_digest;
  Json rounds = Json::array();
  for (const auto& rc : plan.all_rounds_n) {
    Json j = Json::object();
    j["k"] = rc.k;
    j["n"] = rc.n;
    rounds.push_back(std::move(j));
  }
  doc["all_rounds_n"] = std::move(rounds);
  Json trees = Json::array();
  for (const auto& pt : plan.trees) {
    Json t = Json::object();
    t["segment_ids"] = pt.tree.segment_ids;
    t["weight"] = pt.tree.weight;
    Json conns = Json::array();
    for (const auto& c : pt.tree.connectors) {
      Json j = Json::object();
      j["seg_i"] = c.seg_i;
      j["end_i"] = std::string(1, end_char(c.end_i));
      j["seg_j"] = c.seg_j;
      j["end_j"] = std::string(1, end_char(c.end_j));
      j["length"] = c.length;
      conns.push_back(std::move(j));
    }
    t["connectors"] = std::move(conns);
    Json euler = Json::object();
    euler["removed_edge"] = edge_json(pt.path.removed_edge);
    euler["removed_length"] = pt.path.removed_length;
    euler["total_length"] = pt.path.total_length;
    euler["vertex_walk"] = pt.path.vertex_walk;
    Json poly = Json::array();
    for (const auto& q : pt.path.polyline) {
      Json j = point_json(q.p);
      j["s"] = q.s;
      poly.push_back(std::move(j));
    }
    euler["polyline"] = std::move(poly);
    t["euler"] = std::move(euler);
    Json pieces = Json::array();
    for (const auto& p : plan.pieces_of(pt)) {
      Json j = Json::object();
      j["s_start"] = p.s_start;
      j["s_end"] = p.s_end;
      j["mule_left"] = p.mule_left;
      j["mule_right"] = p.mule_right;
      j["station_left"] = point_json(pt.path.polyline.empty() ? Point{} : point_at(pt.path, p.s_start));
      j["station_right"] = point_json(pt.path.polyline.empty() ? Point{} : point_at(pt.path, p.s_end));
      j["sweep_period"] = p.sweep_period;
      pieces.push_back(std::move(j));
    }
    t["pieces"] = std::move(pieces);
    trees.push_back(std::move(t));
  }
  doc["trees"] = std::move(trees);
  return dump_canonical(doc);
}

DeploymentPlan parse_plan(std::string_view text) {
  const Json doc = parse_json(text);
  if (!doc.is_object()) throw ParseError("plan document must be an object");
  DeploymentPlan plan;
  plan.mode = parse_count_mode(get_string(doc, "count_mode"));
  plan.round_j = static_cast<int>(get_integer(doc, "round_j"));
  plan.mule_count = get_integer(doc, "mule_count");
  plan.speed = get_number(doc, "speed");
  plan.period = get_number(doc, "period");
  if (!(plan.speed > 0.0) || !(plan.period > 0.0)) throw ValidationError("plan speed and period must be > 0");
  plan.instance_digest = get_string(doc, "instance_digest");
  for (const auto& j : get_array(doc, "all_rounds_n"))
    plan.all_rounds_n.push_back({static_cast<int>(get_integer(j, "k")), get_integer(j, "n")});
  for (const auto& jt : get_array(doc, "trees")) {
    PlannedTree pt;
    for (const auto& s : get_array(jt, "segment_ids")) {
      if (!s.is_number_integer()) throw ParseError("segment_ids must be integers");
      pt.tree.segment_ids.push_back(s.get<int>());
    }
    if (pt.tree.segment_ids.empty()) throw ValidationError("plan tree without segments");
    if (!std::is_sorted(pt.tree.segment_ids.begin(), pt.tree.segment_ids.end()))
      throw ValidationError("plan tree segment_ids must be ascending");
    pt.tree.weight = get_number(jt, "weight");
    for (const auto& jc : get_array(jt, "connectors")) {
      Connector c;
      c.seg_i = static_cast<int>(get_integer(jc, "seg_i"));
      c.end_i = parse_end(get_string(jc, "end_i"));
      c.seg_j = static_cast<int>(get_integer(jc, "seg_j"));
      c.end_j = parse_end(get_string(jc, "end_j"));
      c.length = get_number(jc, "length");
      pt.tree.connectors.push_back(c);
    }
    if (pt.tree.connectors.size() + 1 != pt.tree.segment_ids.size())
      throw ValidationError("plan tree must have one connector fewer than segments");
    const Json& je = get_object(jt, "euler");
    pt.path.segment_ids = pt.tree.segment_ids;
    pt.path.removed_edge = parse_edge(get_object(je, "removed_edge"));
    pt.path.removed_length = get_number(je, "removed_length");
    pt.path.total_length = get_number(je, "total_length");
    for (const auto& v : get_array(je, "vertex_walk")) {
      if (!v.is_number_integer()) throw ParseError("vertex_walk must hold integers");
      pt.path.vertex_walk.push_back(v.get<int>());
    }
    for (const auto& q : get_array(je, "polyline"))
      pt.path.polyline.push_back({{get_number(q, "x"), get_number(q, "y")}, get_number(q, "s")});
    if (pt.path.polyline.empty()) throw ValidationError("empty euler polyline");

    const int tree_index = static_cast<int>(plan.trees.size());
    pt.first_piece = static_cast<int>(plan.pieces.size());
    for (const auto& jp : get_array(jt, "pieces")) {
      PatrolPiece p;
      p.tree_index = tree_index;
      p.s_start = get_number(jp, "s_start");
      p.s_end = get_number(jp, "s_end");
      p.mule_left = static_cast<int>(get_integer(jp, "mule_left"));
      p.mule_right = static_cast<int>(get_integer(jp, "mule_right"));
      const int id = static_cast<int>(plan.pieces.size());
      if (p.mule_left != 2 * id || p.mule_right != 2 * id + 1)
        throw ValidationError("piece " + std::to_string(id) + " has non-sequential mule ids");
      if (!(p.s_end > p.s_start)) throw ValidationError("piece " + std::to_string(id) + " is empty");
      p.sweep_period = p.length() / plan.speed;
      plan.pieces.push_back(p);
    }
    pt.piece_count = static_cast<int>(plan.pieces.size()) - pt.first_piece;
    if (pt.piece_count == 0) throw ValidationError("plan tree without pieces");
    plan.trees.push_back(std::move(pt));
  }
  if (plan.mule_count != 2 * static_cast<std::int64_t>(plan.pieces.size()))
    throw ValidationError("mule_count must equal twice the number of pieces");
  return plan;
}

DeploymentPlan parse_plan(std::string_view text, const Instance& inst) {
  DeploymentPlan plan = parse_plan(text);
  check_plan_matches(plan, inst);
  std::vector<bool> seen(inst.size(), false);
  for (auto& pt : plan.trees) {
    for (int s : pt.tree.segment_ids) {
      if (s < 0 || static_cast<std::size_t>(s) >= inst.size() || seen[static_cast<std::size_t>(s)])
        throw ValidationError("plan trees do not partition the instance segments");
      seen[static_cast<std::size_t>(s)] = true;
    }
    const double stored = pt.path.total_length;
    pt.path = path_from_walk(pt.tree, inst, pt.path.removed_edge, std::move(pt.path.vertex_walk));
    const double total = pt.path.total_length;
    if (std::abs(stored - total) > 1e-9 * std::max(1.0, total))
      throw ValidationError("euler path length in plan does not match instance geometry");
    // Stored arc lengths carry 12 significant digits; pin the path ends.
    auto& first = plan.pieces[static_cast<std::size_t>(pt.first_piece)];
    auto& last = plan.pieces[static_cast<std::size_t>(pt.first_piece + pt.piece_count - 1)];
    first.s_start = 0.0;
    last.s_end = total;
    first.sweep_period = first.length() / plan.speed;
    last.sweep_period = last.length() / plan.speed;
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end())
    throw ValidationError("plan trees do not cover every instance segment");
  return plan;
}

DeploymentPlan load_plan(const std::filesystem::path& path) { return parse_plan(read_file(path)); }

DeploymentPlan load_plan(const std::filesystem::path& path, const Instance& inst) {
  return parse_plan(read_file(path), inst);
}

void save_plan(const DeploymentPlan& plan, const std::filesystem::path& path) {
  write_file_atomic(path, format_plan(plan));
}

}  // namespace mule
