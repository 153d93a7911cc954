#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "wsnsim/geometry.hpp"
#include "wsnsim/kmeans.hpp"
#include "wsnsim/rng.hpp"

using namespace wsnsim;

namespace {

using IdPoint = std::pair<NodeId, Point2D>;

std::vector<IdPoint> with_ids(const std::vector<Point2D>& pts) {
  std::vector<IdPoint> out;
  for (std::size_t i = 0; i < pts.size(); ++i)
    out.push_back({static_cast<NodeId>(i), pts[i]});
  return out;
}

// Exact optimum over every assignment of n points to k non-empty groups.
// Test-side oracle, independent of the Lloyd implementation.
double brute_force_sse(const std::vector<Point2D>& pts, std::uint32_t k) {
  const std::size_t n = pts.size();
  REQUIRE(k == 2);  // bitmask enumeration below is for two groups
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
    Point2D mean[2] = {{0, 0}, {0, 0}};
    int count[2] = {0, 0};
    for (std::size_t i = 0; i < n; ++i) {
      const int g = (mask >> i) & 1;
      mean[g].x += pts[i].x;
      mean[g].y += pts[i].y;
      ++count[g];
    }
    if (count[0] == 0 || count[1] == 0) continue;
    for (int g = 0; g < 2; ++g) {
      mean[g].x /= count[g];
      mean[g].y /= count[g];
    }
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) sse += squared_distance(pts[i], mean[(mask >> i) & 1]);
    best = std::min(best, sse);
  }
  return best;
}

}  // namespace

TEST_CASE("euclidean distance") {
  CHECK(euclidean({0, 0}, {3, 4}) == 5.0);
  CHECK(euclidean({17.5, -2.25}, {17.5, -2.25}) == 0.0);
  // far field corner to the default sink position
  const double d = euclidean({5, 95}, {100, 0});
  CHECK(d == std::sqrt(18050.0));
  CHECK(std::fabs(d - 134.3503) < 1e-4);
}

TEST_CASE("euclidean is symmetric and satisfies the triangle inequality") {
  Rng rng(11);
  for (int i = 0; i < 300; ++i) {
    const Point2D a{rng.uniform(-50, 150), rng.uniform(-50, 150)};
    const Point2D b{rng.uniform(-50, 150), rng.uniform(-50, 150)};
    const Point2D c{rng.uniform(-50, 150), rng.uniform(-50, 150)};
    CHECK(euclidean(a, b) == euclidean(b, a));
    CHECK(euclidean(a, c) <= euclidean(a, b) + euclidean(b, c) + 1e-9);
  }
}

TEST_CASE("k=1 yields the centroid") {
  const std::vector<Point2D> pts{{0, 0}, {2, 0}, {4, 6}, {10, 10}};
  Rng rng(1);
  const auto layout = kmeans(with_ids(pts), 1, rng);
  CHECK(layout.k == 1);
  CHECK(std::fabs(layout.centers[0].x - 4.0) < 1e-12);
  CHECK(std::fabs(layout.centers[0].y - 4.0) < 1e-12);
  for (auto a : layout.assignment) CHECK(a == 0);
}

TEST_CASE("two well-separated blobs are recovered exactly") {
  const std::vector<Point2D> pts{{0, 0}, {1, 0}, {0, 1}, {50, 50}, {51, 50}, {50, 51}};
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed);
    const auto layout = kmeans(with_ids(pts), 2, rng);
    // blob membership: ids 0..2 together, ids 3..5 together
    CHECK(layout.assignment[0] == layout.assignment[1]);
    CHECK(layout.assignment[0] == layout.assignment[2]);
    CHECK(layout.assignment[3] == layout.assignment[4]);
    CHECK(layout.assignment[3] == layout.assignment[5]);
    CHECK(layout.assignment[0] != layout.assignment[3]);
    CHECK(std::fabs(layout.sse - brute_force_sse(pts, 2)) < 1e-9);
  }
}

TEST_CASE("k equal to the point count gives singletons with zero SSE") {
  const std::vector<Point2D> pts{{0, 0}, {3, 1}, {7, 2}, {1, 9}, {4, 4}};
  Rng rng(3);
  const auto layout = kmeans(with_ids(pts), 5, rng);
  std::vector<std::uint32_t> sorted(layout.assignment);
  std::sort(sorted.begin(), sorted.end());
  for (std::uint32_t c = 0; c < 5; ++c) CHECK(sorted[c] == c);
  CHECK(layout.sse == 0.0);
}

TEST_CASE("result does not depend on input order") {
  Rng gen(99);
  std::vector<IdPoint> pts;
  for (NodeId id = 0; id < 40; ++id)
    pts.push_back({id, {gen.uniform(0, 100), gen.uniform(0, 100)}});

  Rng r1(42);
  const auto a = kmeans(pts, 4, r1);

  std::vector<IdPoint> shuffled = pts;
  for (std::size_t i = shuffled.size(); i > 1; --i)
    std::swap(shuffled[i - 1], shuffled[gen.uniform_index(i)]);
  Rng r2(42);
  const auto b = kmeans(shuffled, 4, r2);

  CHECK(a.ids == b.ids);
  CHECK(a.assignment == b.assignment);
  REQUIRE(a.centers.size() == b.centers.size());
  for (std::size_t c = 0; c < a.centers.size(); ++c) {
    CHECK(a.centers[c].x == b.centers[c].x);
    CHECK(a.centers[c].y == b.centers[c].y);
  }
}

TEST_CASE("SSE never increases across Lloyd iterations") {
  Rng gen(5);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    std::vector<IdPoint> pts;
    for (NodeId id = 0; id < 60; ++id)
      pts.push_back({id, {gen.uniform(0, 100), gen.uniform(0, 100)}});
    Rng rng(seed);
    const auto layout = kmeans(pts, 5, rng);
    for (std::size_t i = 1; i < layout.sse_history.size(); ++i)
      CHECK(layout.sse_history[i] <= layout.sse_history[i - 1] + 1e-9);
  }
}

TEST_CASE("duplicate points leave no cluster empty") {
  const std::vector<Point2D> pts{{5, 5}, {5, 5}, {5, 5}, {5, 5}};
  Rng rng(2);
  const auto layout = kmeans(with_ids(pts), 2, rng);
  std::vector<int> count(2, 0);
  for (auto a : layout.assignment) ++count[a];
  CHECK(count[0] > 0);
  CHECK(count[1] > 0);
}

TEST_CASE("invalid k is rejected") {
  const std::vector<Point2D> pts{{0, 0}, {1, 1}};
  Rng rng(1);
  CHECK_THROWS_AS(kmeans(with_ids(pts), 0, rng), InvalidKError);
  CHECK_THROWS_AS(kmeans(with_ids(pts), 3, rng), InvalidKError);
  CHECK_THROWS_AS(kmeans(std::span<const IdPoint>{}, 1, rng), InvalidKError);
}

TEST_CASE("converged SSE is near the exhaustive optimum") {
  Rng gen(123);
  int good = 0;
  const int instances = 100;
  for (int t = 0; t < instances; ++t) {
    std::vector<Point2D> pts;
    for (int i = 0; i < 8; ++i) pts.push_back({gen.uniform(0, 100), gen.uniform(0, 100)});
    Rng rng(static_cast<std::uint64_t>(t) + 1);
    const auto layout = kmeans(with_ids(pts), 2, rng);
    const double best = brute_force_sse(pts, 2);
    if (layout.sse <= best * 1.01 + 1e-12) ++good;
  }
  CHECK(good >= 95);
}

TEST_CASE("centrality is the distance to the assigned center") {
  ClusterLayout layout;
  layout.k = 2;
  layout.ids = {3, 7, 9};
  layout.assignment = {0, 1, 0};
  layout.centers = {{13, 14}, {50, 50}};

  CHECK(centrality({13, 14}, 3, layout) == 0.0);            // node at its center
  CHECK(centrality({10, 10}, 3, layout) == 5.0);            // 3-4-5 triangle
  CHECK_THROWS_AS(centrality({0, 0}, 4, layout), NotAssignedError);

  // a singleton cluster's center is the point itself
  const std::vector<Point2D> one{{42.5, 17.0}};
  Rng rng(1);
  const auto single = kmeans(with_ids(one), 1, rng);
  CHECK(centrality(one[0], 0, single) == 0.0);
}
