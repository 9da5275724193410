#include "mulepatrol/forest.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace mule {

Point Connector::point_i(const Instance& inst) const {
  return inst.segments[static_cast<std::size_t>(seg_i)].endpoint(static_cast<int>(end_i));
}

Point Connector::point_j(const Instance& inst) const {
  return inst.segments[static_cast<std::size_t>(seg_j)].endpoint(static_cast<int>(end_j));
}

bool connector_less(const Connector& x, const Connector& y) {
  return std::tie(x.length, x.seg_i, x.seg_j) < std::tie(y.length, y.seg_i, y.seg_j);
}

bool heavier(const Connector& x, const Connector& y) {
  if (x.length != y.length) return x.length > y.length;
  return std::tie(x.seg_i, x.seg_j) < std::tie(y.seg_i, y.seg_j);
}

const Connector* Tree::heaviest_connector() const {
  const Connector* best = nullptr;
  for (const auto& c : connectors)
    if (best == nullptr || heavier(c, *best)) best = &c;
  return best;
}

std::vector<Connector> compute_connectors(const Instance& inst) {
  return compute_connectors(inst, kernels::active());
}

std::vector<Connector> compute_connectors(const Instance& inst, const kernels::KernelTable& kt) {
  const std::size_t m = inst.size();
  std::vector<double> ax(m), ay(m), bx(m), by(m);
  for (std::size_t i = 0; i < m; ++i) {
    ax[i] = inst.segments[i].a.x;
    ay[i] = inst.segments[i].a.y;
    bx[i] = inst.segments[i].b.x;
    by[i] = inst.segments[i].b.y;
  }
  std::vector<Connector> out;
  out.reserve(m * (m - 1) / 2);
  std::vector<double> dist(m);
  std::vector<std::uint8_t> sel(m);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const std::size_t n = m - i - 1;
    const kernels::SegmentSoA cand{std::span(ax).subspan(i + 1), std::span(ay).subspan(i + 1),
                                   std::span(bx).subspan(i + 1), std::span(by).subspan(i + 1)};
    kt.nearest_endpoints(inst.segments[i].a, inst.segments[i].b, cand, std::span(dist).first(n),
                         std::span(sel).first(n));
    for (std::size_t j = 0; j < n; ++j) {
      out.push_back({static_cast<int>(i), static_cast<int>(i + 1 + j), static_cast<End>((sel[j] >> 1) & 1),
                     static_cast<End>(sel[j] & 1), dist[j]});
    }
  }
  return out;
}

ForestSweep::ForestSweep(const Instance& inst)
    : parent_(inst.size()),
      rank_(inst.size(), 0),
      weight_(inst.size()),
      heaviest_(inst.size()),
      has_connector_(inst.size(), false),
      components_(static_cast<int>(inst.size())) {
  std::iota(parent_.begin(), parent_.end(), 0);
  for (std::size_t i = 0; i < inst.size(); ++i) weight_[i] = inst.segments[i].length;
}

int ForestSweep::find(int seg) {
  int root = seg;
  while (parent_[static_cast<std::size_t>(root)] != root) root = parent_[static_cast<std::size_t>(root)];
  while (parent_[static_cast<std::size_t>(seg)] != root) {
    const int next = parent_[static_cast<std::size_t>(seg)];
    parent_[static_cast<std::size_t>(seg)] = root;
    seg = next;
  }
  return root;
}

bool ForestSweep::accept(const Connector& c) {
  const int ri = find(c.seg_i);
  const int rj = find(c.seg_j);
  if (ri == rj) return false;
  const auto ui = static_cast<std::size_t>(ri);
  const auto uj = static_cast<std::size_t>(rj);
  // Weight of the merged tree, always summed in connector-endpoint order.
  const double w = weight_[ui] + weight_[uj] + c.length;
  Connector h = c;
  if (has_connector_[ui] && heavier(heaviest_[ui], h)) h = heaviest_[ui];
  if (has_connector_[uj] && heavier(heaviest_[uj], h)) h = heaviest_[uj];

  std::size_t root = ui;
  std::size_t child = uj;
  if (rank_[ui] < rank_[uj]) std::swap(root, child);
  if (rank_[root] == rank_[child]) ++rank_[root];
  parent_[child] = static_cast<int>(root);
  weight_[root] = w;
  heaviest_[root] = h;
  has_connector_[root] = true;
  --components_;
  return true;
}

const Connector* ForestSweep::heaviest(int root) const {
  const auto r = static_cast<std::size_t>(root);
  return has_connector_[r] ? &heaviest_[r] : nullptr;
}

std::vector<Connector> kruskal_order(const Instance& inst, std::span<const Connector> connectors) {
  std::vector<Connector> sorted(connectors.begin(), connectors.end());
  std::sort(sorted.begin(), sorted.end(), connector_less);
  ForestSweep sweep(inst);
  std::vector<Connector> accepted;
  accepted.reserve(inst.size() > 0 ? inst.size() - 1 : 0);
  for (const auto& c : sorted) {
    if (sweep.components() == 1) break;
    if (sweep.accept(c)) accepted.push_back(c);
  }
  return accepted;
}

ForestRound forest_round(const Instance& inst, std::span<const Connector> accepted, int k) {
  const int m = static_cast<int>(inst.size());
  if (k < 1 || k > m || static_cast<std::size_t>(k - 1) > accepted.size())
    throw std::out_of_range("forest round index out of range");
  ForestSweep sweep(inst);
  for (int i = 0; i < k - 1; ++i) sweep.accept(accepted[static_cast<std::size_t>(i)]);

  // Trees ordered by their smallest segment id; segment ids visited in
  // ascending order give that ordering directly.
  std::vector<int> tree_of_root(static_cast<std::size_t>(m), -1);
  ForestRound round;
  round.k = k;
  for (int s = 0; s < m; ++s) {
    const int r = sweep.find(s);
    int& idx = tree_of_root[static_cast<std::size_t>(r)];
    if (idx < 0) {
      idx = static_cast<int>(round.trees.size());
      round.trees.emplace_back();
      round.trees.back().weight = sweep.weight(r);
    }
    round.trees[static_cast<std::size_t>(idx)].segment_ids.push_back(s);
  }
  for (int i = 0; i < k - 1; ++i) {
    const auto& c = accepted[static_cast<std::size_t>(i)];
    const int idx = tree_of_root[static_cast<std::size_t>(sweep.find(c.seg_i))];
    round.trees[static_cast<std::size_t>(idx)].connectors.push_back(c);
  }
  for (auto& t : round.trees)
    std::sort(t.connectors.begin(), t.connectors.end(),
              [](const Connector& x, const Connector& y) { return std::tie(x.seg_i, x.seg_j) < std::tie(y.seg_i, y.seg_j); });
  return round;
}

std::vector<ForestRound> forest_rounds(const Instance& inst, std::span<const Connector> connectors) {
  const auto accepted = kruskal_order(inst, connectors);
  std::vector<ForestRound> rounds;
  rounds.reserve(inst.size());
  for (int k = 1; k <= static_cast<int>(inst.size()); ++k) rounds.push_back(forest_round(inst, accepted, k));
  return rounds;
}

double connector_weight(const ForestRound& round) {
  double w = 0.0;
  for (const auto& t : round.trees)
    for (const auto& c : t.connectors) w += c.length;
  return w;
}

}  // namespace mule
