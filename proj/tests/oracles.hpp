#pragma once

// Independent reference computations used only by tests. Nothing here calls
// into the planner's forest, Euler or count code paths.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <tuple>
#include <vector>

#include "mulepatrol/model.hpp"

namespace oracle {

struct Link {
  int i, j;
  double length;
};

/// Nearest endpoint distance for every segment pair by direct evaluation.
inline std::vector<Link> all_links(const mule::Instance& inst) {
  std::vector<Link> out;
  for (std::size_t i = 0; i < inst.size(); ++i)
    for (std::size_t j = i + 1; j < inst.size(); ++j) {
      const auto& a = inst.segments[i];
      const auto& b = inst.segments[j];
      const double d = std::min({mule::distance(a.a, b.a), mule::distance(a.a, b.b), mule::distance(a.b, b.a),
                                 mule::distance(a.b, b.b)});
      out.push_back({static_cast<int>(i), static_cast<int>(j), d});
    }
  return out;
}

inline int root(std::vector<int>& p, int x) {
  while (p[static_cast<std::size_t>(x)] != x) x = p[static_cast<std::size_t>(x)];
  return x;
}

/// Minimum total connector length over all spanning forests that use
/// exactly `edges` links, by exhaustive subset enumeration. M <= 7.
inline double min_forest_weight(const mule::Instance& inst, int edges) {
  const auto links = all_links(inst);
  const std::size_t n = links.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != edges) continue;
    std::vector<int> parent(inst.size());
    std::iota(parent.begin(), parent.end(), 0);
    double w = 0.0;
    bool acyclic = true;
    for (std::size_t e = 0; e < n && acyclic; ++e) {
      if (!(mask & (1u << e))) continue;
      const int a = root(parent, links[e].i);
      const int b = root(parent, links[e].j);
      if (a == b) acyclic = false;
      parent[static_cast<std::size_t>(a)] = b;
      w += links[e].length;
    }
    if (acyclic) best = std::min(best, w);
  }
  return best;
}

/// Mule estimate of a forest given as explicit tree membership: each tree
/// weight and heaviest link recomputed from scratch.
struct TreeSpec {
  std::vector<int> segments;
  std::vector<Link> links;
};

inline double tree_weight(const mule::Instance& inst, const TreeSpec& t) {
  double w = 0.0;
  for (int s : t.segments) w += inst.segments[static_cast<std::size_t>(s)].length;
  for (const auto& l : t.links) w += l.length;
  return w;
}

inline std::int64_t tight_count(const mule::Instance& inst, const TreeSpec& t) {
  double removed = inst.segments[static_cast<std::size_t>(t.segments.front())].length;
  if (!t.links.empty()) {
    removed = 0.0;
    for (const auto& l : t.links) removed = std::max(removed, l.length);
  }
  return 2 * static_cast<std::int64_t>(std::ceil((2.0 * tree_weight(inst, t) - removed) / inst.reach()));
}

inline std::int64_t step5_count(const mule::Instance& inst, const TreeSpec& t) {
  return 2 * static_cast<std::int64_t>(std::ceil(2.0 * tree_weight(inst, t) / inst.reach()));
}

/// Visit times within one period of a point at distance d from a piece's
/// left end, by stepping the triangle waves of both mules at resolution dt
/// and recording sign changes of (mule - point).
inline std::vector<double> triangle_visits(double piece_len, double speed, double d, double dt) {
  const double period = piece_len / speed;
  std::vector<double> out;
  auto left = [&](double t) {
    const double ph = std::fmod(t, period);
    return speed * (ph <= period / 2 ? ph : period - ph);
  };
  auto right = [&](double t) { return piece_len - left(t); };
  double prev_l = left(0.0) - d, prev_r = right(0.0) - d;
  if (prev_l == 0.0 || prev_r == 0.0) out.push_back(0.0);
  for (double t = dt; t < period; t += dt) {
    const double l = left(t) - d, r = right(t) - d;
    if ((l == 0.0) || (prev_l < 0.0) != (l < 0.0) || (r == 0.0) || (prev_r < 0.0) != (r < 0.0)) {
      if (out.empty() || t - out.back() > 2 * dt) out.push_back(t);
    }
    prev_l = l, prev_r = r;
  }
  return out;
}

}  // namespace oracle
