#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "wsnsim/geometry.hpp"
#include "wsnsim/rng.hpp"

namespace wsnsim {

using NodeId = std::uint32_t;

class InvalidKError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotAssignedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Converged k-means division: per-id cluster indices, centers equal to the
// mean of their assigned points, and the SSE trajectory of the Lloyd run.
struct ClusterLayout {
  std::uint32_t k = 0;
  std::vector<NodeId> ids;                 // ascending
  std::vector<std::uint32_t> assignment;   // parallel to ids
  std::vector<Point2D> centers;
  std::uint32_t iterations = 0;
  double sse = 0.0;
  std::vector<double> sse_history;

  std::uint32_t cluster_of(NodeId id) const {
    auto it = std::lower_bound(ids.begin(), ids.end(), id);
    if (it == ids.end() || *it != id)
      throw NotAssignedError("node " + std::to_string(id) + " is not in the layout");
    return assignment[static_cast<std::size_t>(it - ids.begin())];
  }

  bool contains(NodeId id) const {
    return std::binary_search(ids.begin(), ids.end(), id);
  }
};

namespace detail {

inline std::size_t nearest_center(Point2D p, std::span<const Point2D> centers) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centers.size(); ++c) {
    const double d = squared_distance(p, centers[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

// One k-means++ seeded Lloyd run over points already sorted by id.
inline ClusterLayout kmeans_once(std::span<const std::pair<NodeId, Point2D>> sorted,
                                 std::uint32_t k, Rng& rng) {
  const std::size_t n = sorted.size();
  ClusterLayout layout;
  layout.k = k;
  layout.ids.reserve(n);
  for (const auto& p : sorted) layout.ids.push_back(p.first);

  // k-means++ seeding
  std::vector<Point2D> centers;
  centers.reserve(k);
  std::vector<char> chosen(n, 0);
  {
    const std::size_t first = rng.uniform_index(n);
    centers.push_back(sorted[first].second);
    chosen[first] = 1;
  }
  std::vector<double> d2(n, 0.0);
  while (centers.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = chosen[i] ? 0.0
                        : squared_distance(sorted[i].second,
                                           centers[detail::nearest_center(
                                               sorted[i].second, centers)]);
      total += d2[i];
    }
    std::size_t pick = n;
    if (total > 0.0) {
      const double target = rng.uniform01() * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc > target && !chosen[i]) {
          pick = i;
          break;
        }
      }
    }
    if (pick == n) {  // all remaining points coincide with a center
      for (std::size_t i = 0; i < n; ++i)
        if (!chosen[i]) {
          pick = i;
          break;
        }
    }
    chosen[pick] = 1;
    centers.push_back(sorted[pick].second);
  }

  std::vector<std::uint32_t> assign(n, 0);
  std::vector<std::uint32_t> counts(k, 0);

  constexpr std::uint32_t kMaxIterations = 100;
  for (std::uint32_t iter = 1; iter <= kMaxIterations; ++iter) {
    std::vector<std::uint32_t> next(n);
    for (std::size_t i = 0; i < n; ++i)
      next[i] = static_cast<std::uint32_t>(
          detail::nearest_center(sorted[i].second, centers));

    if (iter > 1 && next == assign) break;
    assign = std::move(next);
    layout.iterations = iter;

    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < n; ++i) ++counts[assign[i]];

    // empty-cluster repair: donate the point farthest from its center
    for (std::uint32_t c = 0; c < k; ++c) {
      if (counts[c] != 0) continue;
      std::size_t worst = n;
      double worst_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (counts[assign[i]] < 2) continue;
        const double d = squared_distance(sorted[i].second, centers[assign[i]]);
        if (d > worst_d) {
          worst_d = d;
          worst = i;
        }
      }
      --counts[assign[worst]];
      assign[worst] = c;
      ++counts[c];
    }

    for (std::uint32_t c = 0; c < k; ++c) centers[c] = {0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
      centers[assign[i]].x += sorted[i].second.x;
      centers[assign[i]].y += sorted[i].second.y;
    }
    for (std::uint32_t c = 0; c < k; ++c) {
      centers[c].x /= static_cast<double>(counts[c]);
      centers[c].y /= static_cast<double>(counts[c]);
    }

    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      sse += squared_distance(sorted[i].second, centers[assign[i]]);
    layout.sse_history.push_back(sse);
    layout.sse = sse;
  }

  layout.assignment = std::move(assign);
  layout.centers = std::move(centers);
  return layout;
}

}  // namespace detail

// Divides the points into k clusters: Lloyd's algorithm over the best of ten
// k-means++ seedings, which keeps tiny instances near the global optimum.
// All draws and iteration run over points in ascending id order, so the
// result depends only on the id/point pairs and the rng state, never on
// input order. Empty clusters are repaired by moving in the point farthest
// from its current center.
inline ClusterLayout kmeans(std::span<const std::pair<NodeId, Point2D>> points,
                            std::uint32_t k, Rng& rng) {
  const std::size_t n = points.size();
  if (k < 1 || n == 0 || k > n)
    throw InvalidKError("kmeans needs 1 <= k <= number of points");

  std::vector<std::pair<NodeId, Point2D>> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  constexpr int kRestarts = 10;
  ClusterLayout best = detail::kmeans_once(sorted, k, rng);
  for (int r = 1; r < kRestarts; ++r) {
    ClusterLayout candidate = detail::kmeans_once(sorted, k, rng);
    if (candidate.sse < best.sse) best = std::move(candidate);
  }
  return best;
}

// Distance from a node to the center of its cluster.
inline double centrality(Point2D position, NodeId id, const ClusterLayout& layout) {
  return euclidean(position, layout.centers[layout.cluster_of(id)]);
}

}  // namespace wsnsim
