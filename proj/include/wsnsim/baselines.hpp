#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "wsnsim/network.hpp"
#include "wsnsim/protocol_common.hpp"
#include "wsnsim/rng.hpp"

namespace wsnsim {

struct LeachParams {
  double p_opt = 0.05;  // desired head fraction per round
};

struct EdeecParams {
  double p_opt = 0.05;
  double a = 0.5;  // advanced-class weight increment
  double b = 2.0;  // super-class weight increment
  std::uint32_t rounds_estimate = 5000;  // lifetime estimate behind the average-energy model
};

// Head-service history for the rotation rules; indexed by node id.
struct RotationState {
  std::vector<std::int64_t> last_head_round;  // 0-based round of last service, -1 = never

  explicit RotationState(std::size_t n) : last_head_round(n, -1) {}
};

// Classic rotating-threshold election. Rounds are grouped into epochs of
// floor(1/p) rounds; a node that served within the current epoch is out, and
// the threshold p/(1 - p*(r mod 1/p)) escalates to 1 by epoch end so every
// alive node serves exactly once per epoch.
inline std::vector<NodeId> leach_elect(std::uint32_t round0,
                                       std::span<const Node> nodes,
                                       std::span<const NodeId> alive,
                                       const LeachParams& params, RotationState& rotation,
                                       Rng& rng) {
  const double p = params.p_opt;
  const auto epoch = static_cast<std::uint32_t>(std::max(1.0, std::floor(1.0 / p)));
  const std::uint32_t phase = round0 % epoch;
  const std::int64_t epoch_start = static_cast<std::int64_t>(round0) - phase;
  const double threshold = p / (1.0 - p * static_cast<double>(phase));
  std::vector<NodeId> heads;
  for (NodeId id : alive) {
    (void)nodes;
    if (rotation.last_head_round[id] >= epoch_start) continue;
    if (rng.uniform01() < threshold) {
      rotation.last_head_round[id] = round0;
      heads.push_back(id);
    }
  }
  return heads;
}

// Average residual energy the sink assumes at 0-based round r: a linear
// decline of the initial per-node average over the configured lifetime
// estimate, floored at a small positive value.
inline double edeec_average_energy(double total_initial, std::uint32_t n,
                                   std::uint32_t round0, const EdeecParams& params) {
  const double avg0 = total_initial / static_cast<double>(n);
  const double frac = 1.0 - static_cast<double>(round0) /
                                static_cast<double>(params.rounds_estimate);
  return std::max(avg0 * frac, 1e-9);
}

inline double edeec_class_weight(NodeClass cls, const EdeecParams& params) {
  switch (cls) {
    case NodeClass::Normal: return 1.0;
    case NodeClass::Advanced: return 1.0 + params.a;
    default: return 1.0 + params.b;
  }
}

// Election probability of one node: p_opt scaled by its class weight and by
// residual energy relative to the assumed network average.
inline double edeec_probability(const Node& node, double average_energy,
                                const EdeecParams& params, const HeterogeneityConfig& het) {
  const double denom = 1.0 + het.mf * (params.a + het.mp * params.b);
  const double p = params.p_opt * edeec_class_weight(node.node_class(), params) *
                   node.energy() / (denom * average_energy);
  return std::clamp(p, 0.0, 0.999);
}

// Residual-energy-aware rotating election: per-node probability p_i drives
// both the threshold and that node's rotation epoch floor(1/p_i). The
// threshold phase runs on the node's own rounds-since-service, so service
// periods stay close to 1/p_i instead of bunching on a global phase.
inline std::vector<NodeId> edeec_elect(std::uint32_t round0,
                                       std::span<const Node> nodes,
                                       std::span<const NodeId> alive,
                                       const EdeecParams& params,
                                       const HeterogeneityConfig& het,
                                       double total_initial, RotationState& rotation,
                                       Rng& rng) {
  const double avg = edeec_average_energy(total_initial, het.n, round0, params);
  std::vector<NodeId> heads;
  for (NodeId id : alive) {
    const double p = edeec_probability(nodes[id], avg, params, het);
    if (p <= 0.0) continue;
    const auto epoch = static_cast<std::int64_t>(std::max(1.0, std::floor(1.0 / p)));
    const std::int64_t last = rotation.last_head_round[id];
    std::int64_t waited;  // rounds spent eligible since the window expired
    if (last < 0) {
      waited = round0;
    } else {
      const std::int64_t since = static_cast<std::int64_t>(round0) - last;
      if (since < epoch) continue;
      waited = since - epoch;
    }
    const double denom = 1.0 - p * static_cast<double>(waited % epoch);
    const double threshold = denom > p ? p / denom : 1.0;
    if (rng.uniform01() < threshold) {
      rotation.last_head_round[id] = round0;
      heads.push_back(id);
    }
  }
  return heads;
}

// Non-head nodes join the nearest elected head (lowest id on exact ties).
inline std::vector<ClusterGroup> join_nearest_head(std::span<const Node> nodes,
                                                   std::span<const NodeId> alive,
                                                   std::span<const NodeId> heads) {
  std::vector<NodeId> ordered(heads.begin(), heads.end());
  std::sort(ordered.begin(), ordered.end());
  std::vector<ClusterGroup> clusters;
  clusters.reserve(ordered.size());
  for (NodeId h : ordered) clusters.push_back({h, {}});
  for (NodeId id : alive) {
    if (std::binary_search(ordered.begin(), ordered.end(), id)) continue;
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < ordered.size(); ++c) {
      const double d = squared_distance(nodes[id].position(), nodes[ordered[c]].position());
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    clusters[best].members.push_back(id);
  }
  return clusters;
}

}  // namespace wsnsim
