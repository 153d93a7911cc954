#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "wsnsim/fuzzy.hpp"
#include "wsnsim/kmeans.hpp"
#include "wsnsim/network.hpp"
#include "wsnsim/protocol_common.hpp"

namespace wsnsim {

// Crisp inputs scoring one head candidate.
struct ElectionInputs {
  double battery = 0.0;     // residual energy, J
  double centrality = 0.0;  // distance to its cluster center, m
  double dist_bs = 0.0;     // distance to the base station, m
};

// Crisp inputs scoring one relay candidate for an over-threshold head.
struct RelayInputs {
  double battery_ch = 0.0;   // candidate head's residual energy, J
  double distance_mh = 0.0;  // candidate head -> over-threshold head, m
};

struct CandidateScore {
  NodeId id = 0;
  double score = 0.0;
};

struct ElectionResult {
  // per cluster index; a cluster with no alive member has no head
  std::vector<std::optional<NodeId>> head_by_cluster;
  std::vector<std::vector<CandidateScore>> scores;
};

struct RelayResult {
  std::vector<std::pair<NodeId, NodeId>> relay_map;  // over-threshold head -> relay
  std::vector<NodeId> unrelayed;  // past the threshold but no other head existed
  std::vector<std::pair<NodeId, std::vector<CandidateScore>>> scores;
};

// Everything the sink decides for one round.
struct RoundPlan {
  ClusterLayout layout;
  std::vector<ClusterGroup> clusters;
  ElectionResult election;
  RelayResult relays;
};

inline double election_score(const RuleBase& rb, const ElectionInputs& in) {
  const double values[3] = {in.centrality, in.battery, in.dist_bs};
  return rb.infer(values);
}

inline double relay_score(const RuleBase& rb, const RelayInputs& in) {
  const double values[2] = {in.battery_ch, in.distance_mh};
  return rb.infer(values);
}

// Scores every alive member of every cluster and elects the highest crisp
// value per cluster; ties go to the lowest id. Energies are read as they
// stand, so callers invoke this before the round's debits.
inline ElectionResult elect_cluster_heads(std::span<const Node> nodes,
                                          const ClusterLayout& layout,
                                          const BaseStation& bs,
                                          const RuleBase& election_rb) {
  ElectionResult result;
  result.head_by_cluster.assign(layout.k, std::nullopt);
  result.scores.resize(layout.k);
  std::vector<double> best(layout.k, -std::numeric_limits<double>::infinity());
  // layout ids are ascending, so a strict > keeps the lowest id on ties
  for (std::size_t i = 0; i < layout.ids.size(); ++i) {
    const NodeId id = layout.ids[i];
    const Node& node = nodes[id];
    if (!node.alive()) continue;
    const std::uint32_t cluster = layout.assignment[i];
    const ElectionInputs in{node.energy(),
                            euclidean(node.position(), layout.centers[cluster]),
                            euclidean(node.position(), bs.position)};
    const double score = election_score(election_rb, in);
    result.scores[cluster].push_back({id, score});
    if (score > best[cluster]) {
      best[cluster] = score;
      result.head_by_cluster[cluster] = id;
    }
  }
  return result;
}

// For every head past the communication threshold, scores all other heads
// and picks the best relay; ties go to the lowest id. Candidates that keep
// both hops inside the threshold are preferred, so the forwarded traffic
// stays in the free-space regime whenever the geometry allows it; without
// such a candidate the best-scoring head wins and chaining takes over.
// Heads with no other head at all transmit directly and are reported as
// unrelayed.
inline RelayResult select_relays(std::span<const Node> nodes,
                                 std::span<const NodeId> heads, const BaseStation& bs,
                                 const RuleBase& relay_rb, double d0) {
  RelayResult result;
  std::vector<NodeId> ordered(heads.begin(), heads.end());
  std::sort(ordered.begin(), ordered.end());
  for (NodeId over : ordered) {
    if (euclidean(nodes[over].position(), bs.position) < d0) continue;
    std::vector<CandidateScore> scores;
    std::optional<NodeId> best;
    std::optional<NodeId> best_free_space;
    double best_score = -std::numeric_limits<double>::infinity();
    double best_fs_score = -std::numeric_limits<double>::infinity();
    for (NodeId cand : ordered) {
      if (cand == over) continue;
      const double hop = euclidean(nodes[cand].position(), nodes[over].position());
      const RelayInputs in{nodes[cand].energy(), hop};
      const double score = relay_score(relay_rb, in);
      scores.push_back({cand, score});
      if (score > best_score) {
        best_score = score;
        best = cand;
      }
      if (hop < d0 && euclidean(nodes[cand].position(), bs.position) < d0 &&
          score > best_fs_score) {
        best_fs_score = score;
        best_free_space = cand;
      }
    }
    if (best_free_space)
      result.relay_map.push_back({over, *best_free_space});
    else if (best)
      result.relay_map.push_back({over, *best});
    else
      result.unrelayed.push_back(over);
    result.scores.push_back({over, std::move(scores)});
  }
  return result;
}

// Builds the full per-round plan: k-means division of the alive nodes,
// fuzzy head election, and fuzzy relay selection for over-threshold heads.
inline RoundPlan plan_round(std::span<const Node> nodes, std::span<const NodeId> alive,
                            std::uint32_t k, const BaseStation& bs,
                            const RuleBase& election_rb, const RuleBase& relay_rb,
                            double d0, Rng& rng) {
  RoundPlan plan;
  std::vector<std::pair<NodeId, Point2D>> points;
  points.reserve(alive.size());
  for (NodeId id : alive) points.push_back({id, nodes[id].position()});
  const auto k_eff = static_cast<std::uint32_t>(
      std::min<std::size_t>(k, points.size()));
  plan.layout = kmeans(points, k_eff, rng);
  plan.election = elect_cluster_heads(nodes, plan.layout, bs, election_rb);

  plan.clusters.reserve(k_eff);
  std::vector<NodeId> heads;
  for (std::uint32_t c = 0; c < k_eff; ++c) {
    if (!plan.election.head_by_cluster[c]) continue;  // no alive member
    ClusterGroup g;
    g.ch = *plan.election.head_by_cluster[c];
    for (std::size_t i = 0; i < plan.layout.ids.size(); ++i)
      if (plan.layout.assignment[i] == c && plan.layout.ids[i] != g.ch)
        g.members.push_back(plan.layout.ids[i]);
    heads.push_back(g.ch);
    plan.clusters.push_back(std::move(g));
  }
  plan.relays = select_relays(nodes, heads, bs, relay_rb, d0);
  return plan;
}

}  // namespace wsnsim
