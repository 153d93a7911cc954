#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "wsnsim/baselines.hpp"
#include "wsnsim/network.hpp"
#include "wsnsim/protocol_common.hpp"
#include "wsnsim/protocol_fuzzy.hpp"
#include "wsnsim/radio.hpp"
#include "wsnsim/rng.hpp"
#include "wsnsim/rule_bases.hpp"

namespace wsnsim {

class SimError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ProtocolId { Fuzzy, Leach, Edeec };

inline std::string_view protocol_name(ProtocolId p) {
  switch (p) {
    case ProtocolId::Fuzzy: return "fuzzy";
    case ProtocolId::Leach: return "leach";
    default: return "edeec";
  }
}

struct SimConfig {
  ProtocolId protocol = ProtocolId::Fuzzy;
  std::uint64_t seed = 1;
  std::uint32_t rounds = 5000;
  std::uint32_t clusters = 5;
  FieldSize field;
  BaseStation bs{{5.0, 95.0}};
  RadioParams radio;
  HeterogeneityConfig het;
  ClassEnergies energies;
  double compression_ratio = 0.05;
  LeachParams leach;
  EdeecParams edeec;
  RuleBase election_rb = election_rule_base(1.5);
  RuleBase relay_rb = relay_rule_base(1.5);
};

inline void validate_config(const SimConfig& cfg) {
  auto fail = [](const std::string& what) { throw SimError("invalid config: " + what); };
  if (cfg.rounds < 1) fail("rounds must be >= 1");
  if (cfg.het.n < 1) fail("nodes must be >= 1");
  if (cfg.clusters < 1) fail("clusters must be >= 1");
  if (cfg.clusters > cfg.het.n) fail("clusters must not exceed nodes");
  if (!(cfg.field.width > 0.0) || !(cfg.field.height > 0.0)) fail("field must be positive");
  if (!(cfg.het.mf >= 0.0 && cfg.het.mf <= 1.0)) fail("mf must be in [0,1]");
  if (!(cfg.het.mp >= 0.0 && cfg.het.mp <= 1.0)) fail("mp must be in [0,1]");
  if (!(cfg.het.e >= 0.0)) fail("e must be >= 0");
  if (!(cfg.het.e_o > 0.0)) fail("e_o must be > 0");
  if (!(cfg.energies.normal > 0.0 && cfg.energies.advanced > 0.0 && cfg.energies.super > 0.0))
    fail("class energies must be > 0");
  if (!(cfg.energies.normal <= cfg.energies.advanced &&
        cfg.energies.advanced <= cfg.energies.super))
    fail("class energies must be ordered normal <= advanced <= super");
  if (!(cfg.radio.e_elec > 0.0 && cfg.radio.eps_fs > 0.0 && cfg.radio.eps_amp > 0.0 &&
        cfg.radio.e_da > 0.0))
    fail("radio parameters must be > 0");
  if (cfg.radio.data_bits == 0 || cfg.radio.info_bits == 0) fail("message sizes must be > 0");
  if (!(cfg.compression_ratio > 0.0 && cfg.compression_ratio <= 1.0))
    fail("compression ratio must be in (0,1]");
  if (!(cfg.leach.p_opt > 0.0 && cfg.leach.p_opt < 1.0)) fail("leach p_opt must be in (0,1)");
  if (!(cfg.edeec.p_opt > 0.0 && cfg.edeec.p_opt < 1.0)) fail("edeec p_opt must be in (0,1)");
  if (!(cfg.edeec.a >= 0.0 && cfg.edeec.b >= 0.0 && cfg.edeec.a <= cfg.edeec.b))
    fail("edeec weights must satisfy 0 <= a <= b");
  if (cfg.edeec.rounds_estimate < 1) fail("edeec rounds_estimate must be >= 1");
  if (!(std::isfinite(cfg.bs.position.x) && std::isfinite(cfg.bs.position.y)))
    fail("base station position must be finite");
}

// Per-round lifecycle metrics. Rounds are numbered from 1; `alive` counts the
// round's participants (alive at round start), `residual_j` is the network
// total after the round's debits.
struct RoundMetrics {
  std::uint32_t round = 0;
  std::uint32_t alive = 0;
  double residual_j = 0.0;
  std::uint32_t ch_count = 0;
  std::uint32_t relay_count = 0;
  std::vector<NodeId> dead_this_round;
  DebitBreakdown debits;
};

// Detail record for trace output.
struct RoundTrace {
  std::uint32_t round = 0;
  std::vector<NodeId> ch_ids;
  std::vector<std::pair<NodeId, NodeId>> relay_map;
  std::vector<std::uint32_t> cluster_sizes;  // head included
  DebitBreakdown debits;
};

struct RunSummary {
  std::uint32_t fnd = 0;  // round of the first death; 0 = none within the horizon
  std::uint32_t rounds_simulated = 0;
  std::uint32_t final_alive = 0;
  std::vector<RoundMetrics> series;  // length == config.rounds, zero-padded after die-off
};

struct SimHooks {
  std::function<void(const RoundTrace&)> trace;
  std::function<void(std::uint32_t round, std::span<const Node>)> snapshot;
};

namespace detail {

inline std::vector<NodeId> alive_ids(std::span<const Node> nodes) {
  std::vector<NodeId> ids;
  ids.reserve(nodes.size());
  for (const auto& n : nodes)
    if (n.alive()) ids.push_back(n.id());
  return ids;
}

// The ledger must close every round: initial total minus cumulative debits
// equals the residual total.
inline void check_conservation(std::span<const Node> nodes, double initial_total) {
  long double spent = 0.0L, residual = 0.0L;
  for (const auto& n : nodes) {
    spent += n.cumulative_debit();
    residual += n.energy();
  }
  const double gap = static_cast<double>(
      std::fabs(static_cast<long double>(initial_total) - spent - residual));
  if (gap > 1e-12)
    throw SimError("energy ledger failed to close: gap " + std::to_string(gap) + " J");
}

}  // namespace detail

// Runs one deterministic simulation. The deployment stream depends only on
// the seed, the protocol stream on seed and protocol, so different protocols
// see identical node placements for a given seed.
inline RunSummary simulate(const SimConfig& cfg, const SimHooks& hooks = {}) {
  validate_config(cfg);

  Rng deploy_rng(derive_seed(cfg.seed, "deploy"));
  std::vector<Node> nodes = deploy(cfg.het, cfg.energies, cfg.field, deploy_rng);
  Rng protocol_rng(derive_seed(
      cfg.seed, std::string("protocol/") + std::string(protocol_name(cfg.protocol))));

  const double initial_total = total_initial_energy(nodes, cfg.het).actual;
  formation_cost(nodes, cfg.bs, cfg.radio);
  detail::check_conservation(nodes, initial_total);

  RotationState rotation(nodes.size());
  const double d0 = cfg.radio.d0();

  RunSummary summary;
  summary.series.reserve(cfg.rounds);

  for (std::uint32_t round = 1; round <= cfg.rounds; ++round) {
    const std::vector<NodeId> alive = detail::alive_ids(nodes);
    if (alive.empty()) break;

    RoundMetrics metrics;
    metrics.round = round;
    metrics.alive = static_cast<std::uint32_t>(alive.size());

    RoundTrace trace;
    trace.round = round;

    const std::uint32_t round0 = round - 1;
    if (cfg.protocol == ProtocolId::Fuzzy) {
      RoundPlan plan = plan_round(nodes, alive, cfg.clusters, cfg.bs, cfg.election_rb,
                                  cfg.relay_rb, d0, protocol_rng);
      metrics.debits = charge_round(nodes, plan.clusters, plan.relays.relay_map, alive,
                                    cfg.bs, cfg.radio, cfg.compression_ratio,
                                    AnnouncementModel::SinkBroadcast);
      metrics.ch_count = static_cast<std::uint32_t>(plan.clusters.size());
      metrics.relay_count = static_cast<std::uint32_t>(plan.relays.relay_map.size());
      for (const auto& g : plan.clusters) {
        trace.ch_ids.push_back(g.ch);
        trace.cluster_sizes.push_back(static_cast<std::uint32_t>(g.members.size()) + 1);
      }
      trace.relay_map = plan.relays.relay_map;
    } else {
      std::vector<NodeId> heads =
          cfg.protocol == ProtocolId::Leach
              ? leach_elect(round0, nodes, alive, cfg.leach, rotation, protocol_rng)
              : edeec_elect(round0, nodes, alive, cfg.edeec, cfg.het, initial_total,
                            rotation, protocol_rng);
      if (heads.empty()) {
        metrics.debits = charge_direct_round(nodes, alive, cfg.bs, cfg.radio);
      } else {
        const auto clusters = join_nearest_head(nodes, alive, heads);
        metrics.debits =
            charge_round(nodes, clusters, {}, alive, cfg.bs, cfg.radio,
                         cfg.compression_ratio, AnnouncementModel::HeadBroadcast);
        metrics.ch_count = static_cast<std::uint32_t>(clusters.size());
        for (const auto& g : clusters) {
          trace.ch_ids.push_back(g.ch);
          trace.cluster_sizes.push_back(static_cast<std::uint32_t>(g.members.size()) + 1);
        }
      }
    }

    for (NodeId id : alive)
      if (!nodes[id].alive()) metrics.dead_this_round.push_back(id);
    if (summary.fnd == 0 && !metrics.dead_this_round.empty()) summary.fnd = round;

    metrics.residual_j = total_residual_energy(nodes);
    detail::check_conservation(nodes, initial_total);

    summary.rounds_simulated = round;
    trace.debits = metrics.debits;
    if (hooks.trace) hooks.trace(trace);
    if (hooks.snapshot) hooks.snapshot(round, nodes);
    summary.series.push_back(std::move(metrics));
  }

  summary.final_alive = static_cast<std::uint32_t>(detail::alive_ids(nodes).size());
  // zero rows keep series from different runs aligned
  for (std::uint32_t round = summary.rounds_simulated + 1; round <= cfg.rounds; ++round) {
    RoundMetrics zero;
    zero.round = round;
    summary.series.push_back(std::move(zero));
  }
  return summary;
}

struct CompareRun {
  ProtocolId protocol = ProtocolId::Fuzzy;
  std::uint64_t seed = 0;
  RunSummary summary;
};

struct CompareResult {
  std::vector<CompareRun> runs;  // protocol-major, seeds ascending
  std::vector<std::pair<ProtocolId, double>> median_fnd;
};

// Median with no-death runs (fnd == 0) censored high.
inline double median_fnd(std::vector<std::uint32_t> fnds, std::uint32_t horizon) {
  std::vector<double> v;
  v.reserve(fnds.size());
  for (auto f : fnds) v.push_back(f == 0 ? static_cast<double>(horizon) + 1.0 : f);
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Runs every (protocol, seed) pair, seeds 1..n_seeds. Pairs execute on up to
// `jobs` threads; results are keyed by pair, so output order and content do
// not depend on the thread count.
inline CompareResult compare(const SimConfig& base, std::span<const ProtocolId> protocols,
                             std::uint32_t n_seeds, unsigned jobs = 0) {
  if (protocols.empty()) throw SimError("compare needs at least one protocol");
  if (n_seeds < 1) throw SimError("compare needs at least one seed");
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());

  CompareResult result;
  result.runs.resize(protocols.size() * n_seeds);
  std::vector<SimConfig> tasks;
  tasks.reserve(result.runs.size());
  for (std::size_t p = 0; p < protocols.size(); ++p)
    for (std::uint32_t s = 1; s <= n_seeds; ++s) {
      SimConfig cfg = base;
      cfg.protocol = protocols[p];
      cfg.seed = s;
      tasks.push_back(std::move(cfg));
    }

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      try {
        result.runs[i] = {tasks[i].protocol, tasks[i].seed, simulate(tasks[i])};
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  if (jobs == 1 || tasks.size() == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < std::min<std::size_t>(jobs, tasks.size()); ++t)
      pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  for (std::size_t p = 0; p < protocols.size(); ++p) {
    std::vector<std::uint32_t> fnds;
    for (std::uint32_t s = 0; s < n_seeds; ++s)
      fnds.push_back(result.runs[p * n_seeds + s].summary.fnd);
    result.median_fnd.push_back({protocols[p], median_fnd(std::move(fnds), base.rounds)});
  }
  return result;
}

}  // namespace wsnsim
