#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mulepatrol/euler.hpp"
#include "mulepatrol/forest.hpp"
#include "mulepatrol/model.hpp"

namespace mule {

/// kTight counts ceil(L(E) / Vt) pieces per tree, where L(E) is the actual
/// walk length. kStep5 counts ceil(2 L(T) / Vt), the looser estimate that
/// ignores the removed connector. Tight never exceeds step5.
enum class CountMode { kTight, kStep5 };

std::string_view to_string(CountMode mode);
CountMode parse_count_mode(std::string_view text);

/// Sub-interval of one Euler path patrolled by a pair of mules that start at
/// its two ends, meet in the middle and return.
struct PatrolPiece {
  int tree_index = 0;
  double s_start = 0.0;
  double s_end = 0.0;
  int mule_left = 0;
  int mule_right = 0;
  double sweep_period = 0.0;  // (s_end - s_start) / V

  double length() const { return s_end - s_start; }
};

struct PlannedTree {
  Tree tree;
  EulerPath path;
  int first_piece = 0;
  int piece_count = 0;
};

struct RoundCount {
  int k = 1;
  std::int64_t n = 0;
};

struct DeploymentPlan {
  std::string instance_digest;
  double speed = 1.0;
  double period = 1.0;
  CountMode mode = CountMode::kTight;
  int round_j = 1;
  std::int64_t mule_count = 0;
  std::vector<RoundCount> all_rounds_n;
  std::vector<PlannedTree> trees;
  /// All pieces, grouped by tree. Piece p owns mules 2p (left) and 2p+1.
  std::vector<PatrolPiece> pieces;

  double reach() const { return speed * period; }
  std::span<const PatrolPiece> pieces_of(const PlannedTree& t) const {
    return std::span(pieces).subspan(static_cast<std::size_t>(t.first_piece), static_cast<std::size_t>(t.piece_count));
  }
};

/// Number of equal pieces a tree's walk is split into under `mode`.
std::int64_t piece_count(const Tree& tree, const Instance& inst, CountMode mode);

/// Mule estimate of one round: twice the total piece count. Also stores the
/// result in round.n_k.
std::int64_t count_round(ForestRound& round, const Instance& inst, CountMode mode);

/// n_k for k = 1..M in one incremental union-find pass over the Kruskal
/// acceptance order.
std::vector<RoundCount> count_all_rounds(const Instance& inst, std::span<const Connector> accepted, CountMode mode);

/// Smallest k attaining the minimum n_k.
int select_round(std::span<const RoundCount> counts);

DeploymentPlan make_plan(const Instance& inst, CountMode mode = CountMode::kTight);

struct MulePosition {
  double arc = 0.0;  // arc length along the mule's Euler path
  Point point;
};

/// Position of a mule at time tau >= 0. Each mule runs a triangle wave of
/// period P = piece length / V over its half of the piece.
MulePosition mule_position(const DeploymentPlan& plan, int mule_id, double tau);

struct PointCoverage {
  int segment_id = 0;
  double offset = 0.0;
  double max_gap = 0.0;  // seconds
  int visits_per_period = 0;
  bool at_station = false;       // coincides with a piece boundary
  bool full_length_piece = false;  // covering piece length equals V t
  bool pass = false;
};

struct PointCoverageReport {
  int samples_per_segment = 0;
  std::vector<PointCoverage> points;
  double max_gap = 0.0;
  int violations = 0;
  bool pass = true;
};

inline constexpr double kGapTolerance = 1e-9;

/// Exact visit schedule of sampled road points from the triangle waves.
/// Samples per segment: `samples_per_segment` interior points, both
/// endpoints, and every point that maps to a piece boundary.
PointCoverageReport verify_point_coverage(const DeploymentPlan& plan, const Instance& inst,
                                          int samples_per_segment = 64);

/// Largest circular gap between the visit times of one arc position set
/// on a single path. Exposed for tests.
PointCoverage arc_coverage(const DeploymentPlan& plan, const PlannedTree& tree, std::span<const double> arcs);

struct BoundReport {
  std::int64_t lower_bound = 0;  // sum over selected trees of ceil(L(T) / Vt)
  std::int64_t mule_count = 0;
  double ratio = 0.0;
};

BoundReport approximation_report(const DeploymentPlan& plan);

std::string format_plan(const DeploymentPlan& plan);
/// Reads a plan without geometry: paths carry walks and polylines but no
/// steps. Enough for approximation_report and inspection.
DeploymentPlan parse_plan(std::string_view text);
/// Reads a plan and binds it to `inst`, rebuilding walk steps from the
/// instance geometry. Throws ValidationError on digest or walk mismatch.
DeploymentPlan parse_plan(std::string_view text, const Instance& inst);

DeploymentPlan load_plan(const std::filesystem::path& path);
DeploymentPlan load_plan(const std::filesystem::path& path, const Instance& inst);
void save_plan(const DeploymentPlan& plan, const std::filesystem::path& path);

/// Throws ValidationError if `plan` was not built for `inst`.
void check_plan_matches(const DeploymentPlan& plan, const Instance& inst);

}  // namespace mule
