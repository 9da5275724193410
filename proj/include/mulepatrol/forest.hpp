#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mulepatrol/kernels.hpp"
#include "mulepatrol/model.hpp"

namespace mule {

enum class End : std::uint8_t { kA = 0, kB = 1 };

inline char end_char(End e) { return e == End::kA ? 'A' : 'B'; }

/// Shortest endpoint-to-endpoint link between two segments, seg_i < seg_j.
struct Connector {
  int seg_i = 0;
  int seg_j = 0;
  End end_i = End::kA;
  End end_j = End::kA;
  double length = 0.0;

  Point point_i(const Instance& inst) const;
  Point point_j(const Instance& inst) const;

  friend bool operator==(const Connector&, const Connector&) = default;
};

/// Greedy processing order: ascending (length, seg_i, seg_j).
bool connector_less(const Connector& x, const Connector& y);

/// True if `x` outranks `y` as the connector to drop from a doubled tree:
/// longer wins, ties go to the smaller (seg_i, seg_j).
bool heavier(const Connector& x, const Connector& y);

struct Tree {
  std::vector<int> segment_ids;       // ascending
  std::vector<Connector> connectors;  // ascending (seg_i, seg_j)
  double weight = 0.0;                // segment lengths + connector lengths

  /// Connector removed when turning the doubled tree into a path; nullptr
  /// for a singleton tree.
  const Connector* heaviest_connector() const;
};

struct ForestRound {
  int k = 1;                // number of connectors used is k - 1
  std::vector<Tree> trees;  // ordered by smallest segment id
  std::int64_t n_k = 0;     // mule-count estimate, filled by count_round
};

/// All M(M-1)/2 connectors in (seg_i, seg_j) order.
std::vector<Connector> compute_connectors(const Instance& inst);
std::vector<Connector> compute_connectors(const Instance& inst, const kernels::KernelTable& kernels);

/// Union-find over segments that also tracks each component's tree weight
/// and heaviest connector. All forest and count computations merge through
/// this class so they agree bit for bit on tree weights.
class ForestSweep {
 public:
  explicit ForestSweep(const Instance& inst);

  int find(int seg);
  /// Returns false (and changes nothing) if both segments share a component.
  bool accept(const Connector& c);

  double weight(int root) const { return weight_[static_cast<std::size_t>(root)]; }
  /// Heaviest connector of the component, or nullptr for a singleton.
  const Connector* heaviest(int root) const;
  int components() const { return components_; }

 private:
  std::vector<int> parent_;
  std::vector<int> rank_;
  std::vector<double> weight_;
  std::vector<Connector> heaviest_;
  std::vector<bool> has_connector_;
  int components_ = 0;
};

/// The M-1 connectors accepted by Kruskal's algorithm, in acceptance order.
/// Round k uses the first k-1 of them.
std::vector<Connector> kruskal_order(const Instance& inst, std::span<const Connector> connectors);

/// Materializes round k (1-based) from an acceptance order.
ForestRound forest_round(const Instance& inst, std::span<const Connector> accepted, int k);

/// All M rounds. Memory is quadratic in M; intended for inspection and
/// tests, the planner materializes only the selected round.
std::vector<ForestRound> forest_rounds(const Instance& inst, std::span<const Connector> connectors);

/// Sum of connector lengths in a round.
double connector_weight(const ForestRound& round);

}  // namespace mule
