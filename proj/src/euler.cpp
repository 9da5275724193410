#include "mulepatrol/euler.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>
#include <string>

#include "mulepatrol/error.hpp"

namespace mule {

Point vertex_point(const Instance& inst, int v) {
  return inst.segments[static_cast<std::size_t>(vertex_segment(v))].endpoint(static_cast<int>(vertex_end(v)));
}

double euler_length(const Tree& tree, const Instance& inst) {
  const Connector* c = tree.heaviest_connector();
  const double removed =
      c != nullptr ? c->length : inst.segments[static_cast<std::size_t>(tree.segment_ids.front())].length;
  return 2.0 * tree.weight - removed;
}

namespace {

struct Edge {
  EdgeTag tag;
  int u = 0;  // local vertex indices
  int v = 0;
  double length = 0.0;
};

// Maps global vertex ids of a tree to dense local indices.
class VertexIndex {
 public:
  explicit VertexIndex(const std::vector<int>& segment_ids) {
    ids_.reserve(2 * segment_ids.size());
    for (int s : segment_ids) {
      ids_.push_back(vertex_id(s, End::kA));
      ids_.push_back(vertex_id(s, End::kB));
    }
    std::sort(ids_.begin(), ids_.end());
  }
  int local(int global) const {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), global);
    if (it == ids_.end() || *it != global) throw InternalError("vertex outside tree: " + std::to_string(global));
    return static_cast<int>(it - ids_.begin());
  }
  int global(int local) const { return ids_[static_cast<std::size_t>(local)]; }
  std::size_t size() const { return ids_.size(); }

 private:
  std::vector<int> ids_;
};

EdgeTag segment_tag(int seg, int copy) { return {EdgeKind::kSegment, seg, -1, copy}; }
EdgeTag connector_tag(const Connector& c, int copy) { return {EdgeKind::kConnector, c.seg_i, c.seg_j, copy}; }

// Both copies of every tree edge, sorted by tag.
std::vector<Edge> doubled_edges(const Tree& tree, const Instance& inst, const VertexIndex& index) {
  std::vector<Edge> edges;
  edges.reserve(2 * (tree.segment_ids.size() + tree.connectors.size()));
  for (int s : tree.segment_ids) {
    const auto& seg = inst.segments[static_cast<std::size_t>(s)];
    for (int copy = 0; copy < 2; ++copy)
      edges.push_back({segment_tag(s, copy), index.local(vertex_id(s, End::kA)), index.local(vertex_id(s, End::kB)),
                       seg.length});
  }
  for (const auto& c : tree.connectors) {
    for (int copy = 0; copy < 2; ++copy)
      edges.push_back({connector_tag(c, copy), index.local(vertex_id(c.seg_i, c.end_i)),
                       index.local(vertex_id(c.seg_j, c.end_j)), c.length});
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) { return x.tag < y.tag; });
  return edges;
}

void fill_geometry(EulerPath& path, const Instance& inst) {
  path.polyline.clear();
  path.polyline.push_back({vertex_point(inst, path.vertex_walk.front()), 0.0});
  double s = 0.0;
  for (auto& step : path.steps) {
    const Point from = vertex_point(inst, step.from);
    const Point to = vertex_point(inst, step.to);
    const double len = distance(from, to);
    step.s_begin = s;
    s += len;
    step.s_end = s;
    if (s > path.polyline.back().s) path.polyline.push_back({to, s});
  }
  path.total_length = s;
}

}  // namespace

EulerPath build_euler_path(const Tree& tree, const Instance& inst) {
  if (tree.segment_ids.empty()) throw InternalError("empty tree");
  const VertexIndex index(tree.segment_ids);
  std::vector<Edge> edges = doubled_edges(tree, inst, index);

  EulerPath path;
  path.segment_ids = tree.segment_ids;
  if (const Connector* c = tree.heaviest_connector()) {
    path.removed_edge = connector_tag(*c, 1);
    path.removed_length = c->length;
  } else {
    const int s = tree.segment_ids.front();
    path.removed_edge = segment_tag(s, 1);
    path.removed_length = inst.segments[static_cast<std::size_t>(s)].length;
  }
  const auto removed_it = std::find_if(edges.begin(), edges.end(), [&](const Edge& e) { return e.tag == path.removed_edge; });
  const int end_u = removed_it->u;
  const int end_v = removed_it->v;
  edges.erase(removed_it);

  const std::size_t nv = index.size();
  std::vector<std::vector<int>> adjacency(nv);
  std::vector<int> degree(nv, 0);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    adjacency[static_cast<std::size_t>(edges[e].u)].push_back(static_cast<int>(e));
    adjacency[static_cast<std::size_t>(edges[e].v)].push_back(static_cast<int>(e));
    ++degree[static_cast<std::size_t>(edges[e].u)];
    ++degree[static_cast<std::size_t>(edges[e].v)];
  }
  for (std::size_t v = 0; v < nv; ++v) {
    const bool odd_expected = static_cast<int>(v) == end_u || static_cast<int>(v) == end_v;
    if ((degree[v] % 2 == 1) != odd_expected) throw InternalError("doubled multigraph has unexpected odd vertex");
  }

  // Start at the removed edge's endpoint with the smaller vertex id; local
  // order follows global order.
  const int start = std::min(end_u, end_v);

  // Iterative Hierholzer. Adjacency lists are in ascending tag order, so
  // the walk is a pure function of the tree.
  std::vector<std::size_t> next(nv, 0);
  std::vector<bool> used(edges.size(), false);
  struct Frame {
    int vertex;
    int via;  // edge index used to arrive, -1 for the start
  };
  std::vector<Frame> stack{{start, -1}};
  std::vector<Frame> circuit;
  circuit.reserve(edges.size() + 1);
  while (!stack.empty()) {
    const int v = stack.back().vertex;
    auto& adj = adjacency[static_cast<std::size_t>(v)];
    auto& pos = next[static_cast<std::size_t>(v)];
    while (pos < adj.size() && used[static_cast<std::size_t>(adj[pos])]) ++pos;
    if (pos == adj.size()) {
      circuit.push_back(stack.back());
      stack.pop_back();
    } else {
      const int e = adj[pos];
      used[static_cast<std::size_t>(e)] = true;
      const Edge& edge = edges[static_cast<std::size_t>(e)];
      stack.push_back({edge.u == v ? edge.v : edge.u, e});
    }
  }
  if (circuit.size() != edges.size() + 1) throw InternalError("doubled multigraph is not connected");
  std::reverse(circuit.begin(), circuit.end());

  path.vertex_walk.reserve(circuit.size());
  path.steps.reserve(edges.size());
  for (std::size_t i = 0; i < circuit.size(); ++i) {
    path.vertex_walk.push_back(index.global(circuit[i].vertex));
    if (i > 0) {
      const Edge& e = edges[static_cast<std::size_t>(circuit[i].via)];
      path.steps.push_back({e.tag, path.vertex_walk[i - 1], path.vertex_walk[i], 0.0, 0.0});
    }
  }
  if (circuit.back().vertex != std::max(end_u, end_v)) throw InternalError("walk does not end at removed edge");
  fill_geometry(path, inst);
  return path;
}

EulerPath path_from_walk(const Tree& tree, const Instance& inst, EdgeTag removed, std::vector<int> vertex_walk) {
  if (vertex_walk.size() < 2) throw ValidationError("euler walk needs at least two vertices");
  const VertexIndex index(tree.segment_ids);
  std::vector<Edge> edges = doubled_edges(tree, inst, index);
  const auto removed_it = std::find_if(edges.begin(), edges.end(), [&](const Edge& e) { return e.tag == removed; });
  if (removed_it == edges.end()) throw ValidationError("removed edge is not an edge of the tree");
  edges.erase(removed_it);

  EulerPath path;
  path.segment_ids = tree.segment_ids;
  path.removed_edge = removed;
  path.removed_length = removed.kind == EdgeKind::kSegment
                            ? inst.segments[static_cast<std::size_t>(removed.source_a)].length
                            : [&] {
                                for (const auto& c : tree.connectors)
                                  if (c.seg_i == removed.source_a && c.seg_j == removed.source_b) return c.length;
                                return 0.0;
                              }();
  for (int v : vertex_walk) {
    if (v < 0) throw ValidationError("negative vertex id in euler walk");
    (void)index.local(v);
  }
  path.vertex_walk = std::move(vertex_walk);
  // Unused copies per vertex pair, smallest tag first.
  std::map<std::pair<int, int>, std::deque<std::size_t>> by_pair;
  for (std::size_t e = 0; e < edges.size(); ++e)
    by_pair[std::minmax(edges[e].u, edges[e].v)].push_back(e);
  for (std::size_t i = 1; i < path.vertex_walk.size(); ++i) {
    const int a = index.local(path.vertex_walk[i - 1]);
    const int b = index.local(path.vertex_walk[i]);
    std::size_t pick = edges.size();
    if (auto it = by_pair.find(std::minmax(a, b)); it != by_pair.end() && !it->second.empty()) {
      pick = it->second.front();
      it->second.pop_front();
    }
    if (pick == edges.size())
      throw ValidationError("euler walk step " + std::to_string(i) + " does not follow an unused tree edge");
    path.steps.push_back({edges[pick].tag, path.vertex_walk[i - 1], path.vertex_walk[i], 0.0, 0.0});
  }
  if (path.steps.size() != edges.size()) throw ValidationError("euler walk does not use every edge copy");
  fill_geometry(path, inst);
  return path;
}

Point point_at(const EulerPath& path, double s) {
  const double slack = 1e-9 * std::max(1.0, path.total_length);
  if (!(s >= -slack && s <= path.total_length + slack)) throw std::out_of_range("arc length outside euler path");
  const auto& pl = path.polyline;
  if (s <= 0.0) return pl.front().p;
  if (s >= pl.back().s) return pl.back().p;
  auto it = std::upper_bound(pl.begin(), pl.end(), s, [](double v, const PolylinePoint& q) { return v < q.s; });
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  return lerp(lo.p, hi.p, (s - lo.s) / (hi.s - lo.s));
}

std::vector<double> segment_arc_positions(const EulerPath& path, const Instance& inst, int segment_id,
                                          double offset) {
  if (!std::binary_search(path.segment_ids.begin(), path.segment_ids.end(), segment_id))
    throw std::invalid_argument("segment " + std::to_string(segment_id) + " is not in this tree");
  const double len = inst.segments[static_cast<std::size_t>(segment_id)].length;
  std::vector<double> out;
  for (const auto& step : path.steps) {
    if (step.edge.kind != EdgeKind::kSegment || step.edge.source_a != segment_id) continue;
    const bool forward = vertex_end(step.from) == End::kA;
    out.push_back(step.s_begin + (forward ? offset : len - offset));
  }
  return out;
}

}  // namespace mule
