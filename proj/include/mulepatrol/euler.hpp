#pragma once

#include <compare>
#include <vector>

#include "mulepatrol/forest.hpp"
#include "mulepatrol/model.hpp"

namespace mule {

/// Global vertex id of a segment endpoint: 2 * segment id + end.
inline int vertex_id(int seg, End end) { return 2 * seg + static_cast<int>(end); }
inline int vertex_segment(int v) { return v / 2; }
inline End vertex_end(int v) { return static_cast<End>(v % 2); }

Point vertex_point(const Instance& inst, int v);

enum class EdgeKind : int { kSegment = 0, kConnector = 1 };

/// Identity of one copy of a doubled tree edge. Segments use (id, -1) as
/// source, connectors (seg_i, seg_j). Ordered lexicographically.
struct EdgeTag {
  EdgeKind kind = EdgeKind::kSegment;
  int source_a = 0;
  int source_b = -1;
  int copy = 0;

  auto operator<=>(const EdgeTag&) const = default;
};

struct WalkStep {
  EdgeTag edge;
  int from = 0;  // vertex ids
  int to = 0;
  double s_begin = 0.0;
  double s_end = 0.0;
};

struct PolylinePoint {
  Point p;
  double s = 0.0;  // cumulative arc length
};

/// Open walk over a tree's doubled edges minus one copy of `removed_edge`.
/// `polyline` drops zero-length steps so its arc lengths strictly increase;
/// `vertex_walk` and `steps` keep every traversal.
struct EulerPath {
  std::vector<int> segment_ids;
  EdgeTag removed_edge;
  double removed_length = 0.0;
  std::vector<int> vertex_walk;
  std::vector<WalkStep> steps;
  std::vector<PolylinePoint> polyline;
  double total_length = 0.0;
};

/// 2 * L(T) - removed edge length, from the tree's recorded weight.
double euler_length(const Tree& tree, const Instance& inst);

EulerPath build_euler_path(const Tree& tree, const Instance& inst);

/// Rebuilds `steps` and `polyline` for a walk read from a file. Throws
/// ValidationError if consecutive vertices are not joined by a tree edge or
/// an edge copy is used more often than the doubled multigraph allows.
EulerPath path_from_walk(const Tree& tree, const Instance& inst, EdgeTag removed, std::vector<int> vertex_walk);

/// Position at arc length `s`. Throws std::out_of_range outside
/// [0, total_length], allowing a relative slack of 1e-9 that is clamped.
Point point_at(const EulerPath& path, double s);

/// Arc positions at which the walk passes the point `offset` metres from
/// endpoint A of `segment_id`; one per traversal of that segment.
/// Throws std::invalid_argument if the segment is not in the path's tree.
std::vector<double> segment_arc_positions(const EulerPath& path, const Instance& inst, int segment_id,
                                          double offset);

}  // namespace mule
