#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <vector>

#include "wsnsim/csv.hpp"
#include "wsnsim/sim.hpp"

using namespace wsnsim;

namespace {

SimConfig small_config(ProtocolId protocol, std::uint32_t rounds, std::uint64_t seed = 1) {
  SimConfig cfg;
  cfg.protocol = protocol;
  cfg.rounds = rounds;
  cfg.seed = seed;
  cfg.het.n = 40;
  cfg.clusters = 4;
  return cfg;
}

}  // namespace

TEST_CASE("config validation rejects broken setups before simulating") {
  SimConfig cfg = small_config(ProtocolId::Fuzzy, 10);
  cfg.rounds = 0;
  CHECK_THROWS_AS(simulate(cfg), SimError);

  cfg = small_config(ProtocolId::Fuzzy, 10);
  cfg.clusters = 41;
  CHECK_THROWS_AS(simulate(cfg), SimError);

  cfg = small_config(ProtocolId::Fuzzy, 10);
  cfg.compression_ratio = 0.0;
  CHECK_THROWS_AS(simulate(cfg), SimError);

  cfg = small_config(ProtocolId::Fuzzy, 10);
  cfg.energies = {1.0, 0.5, 1.5};  // out of order
  CHECK_THROWS_AS(simulate(cfg), SimError);
}

TEST_CASE("a one-round run produces exactly one live metrics row") {
  const auto summary = simulate(small_config(ProtocolId::Fuzzy, 1));
  CHECK(summary.rounds_simulated == 1);
  REQUIRE(summary.series.size() == 1);
  CHECK(summary.series[0].round == 1);
  CHECK(summary.series[0].alive == 40);
  CHECK(summary.series[0].ch_count == 4);
}

TEST_CASE("starving nodes die in round one and the run halts") {
  SimConfig cfg = small_config(ProtocolId::Fuzzy, 10);
  cfg.het.n = 2;
  cfg.clusters = 1;
  cfg.het.mf = 0.0;  // all normal
  cfg.bs.position = {50.0, 50.0};
  // survives the formation report (~1e-5 J) but not a data round (~2e-4 J)
  cfg.energies = {1e-4, 1e-4, 1e-4};
  const auto summary = simulate(cfg);
  CHECK(summary.fnd == 1);
  CHECK(summary.rounds_simulated == 1);
  CHECK(summary.final_alive == 0);
  REQUIRE(summary.series.size() == 10);  // zero-padded tail
  CHECK(summary.series[1].alive == 0);
  CHECK(summary.series[1].residual_j == 0.0);
  CHECK(summary.series[9].round == 10);
}

TEST_CASE("alive and residual series never increase") {
  for (ProtocolId p : {ProtocolId::Fuzzy, ProtocolId::Leach, ProtocolId::Edeec}) {
    for (std::uint64_t seed : {1ull, 2ull}) {
      SimConfig cfg = small_config(p, 150, seed);
      cfg.energies = {0.02, 0.03, 0.05};  // force deaths inside the horizon
      const auto summary = simulate(cfg);  // ledger is checked every round inside
      for (std::size_t i = 1; i < summary.series.size(); ++i) {
        CHECK(summary.series[i].alive <= summary.series[i - 1].alive);
        CHECK(summary.series[i].residual_j <= summary.series[i - 1].residual_j + 1e-15);
      }
      CHECK(summary.fnd > 0);
    }
  }
}

TEST_CASE("identical config and seed reproduce the run bit for bit") {
  for (ProtocolId p : {ProtocolId::Fuzzy, ProtocolId::Leach, ProtocolId::Edeec}) {
    const SimConfig cfg = small_config(p, 80, 7);
    const auto a = simulate(cfg);
    const auto b = simulate(cfg);
    REQUIRE(a.series.size() == b.series.size());
    for (std::size_t i = 0; i < a.series.size(); ++i) {
      CHECK(a.series[i].alive == b.series[i].alive);
      CHECK(a.series[i].residual_j == b.series[i].residual_j);
      CHECK(a.series[i].ch_count == b.series[i].ch_count);
      CHECK(a.series[i].relay_count == b.series[i].relay_count);
    }
    CHECK(rounds_csv(a) == rounds_csv(b));
    CHECK(a.fnd == b.fnd);
  }
}

TEST_CASE("protocols share the deployment for a given seed") {
  std::map<int, std::vector<Point2D>> positions;
  for (ProtocolId p : {ProtocolId::Fuzzy, ProtocolId::Leach}) {
    SimConfig cfg = small_config(p, 1, 5);
    SimHooks hooks;
    auto& stored = positions[static_cast<int>(p)];
    hooks.snapshot = [&stored](std::uint32_t, std::span<const Node> nodes) {
      for (const auto& n : nodes) stored.push_back(n.position());
    };
    simulate(cfg, hooks);
  }
  const auto& a = positions[static_cast<int>(ProtocolId::Fuzzy)];
  const auto& b = positions[static_cast<int>(ProtocolId::Leach)];
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].x == b[i].x);
    CHECK(a[i].y == b[i].y);
  }
}

TEST_CASE("degenerate compare equals a plain run") {
  const SimConfig cfg = small_config(ProtocolId::Leach, 60, 1);
  const ProtocolId protos[] = {ProtocolId::Leach};
  const auto result = compare(cfg, protos, 1, 1);
  REQUIRE(result.runs.size() == 1);
  const auto direct = simulate(cfg);
  CHECK(rounds_csv(result.runs[0].summary, true) == rounds_csv(direct, true));
  CHECK(result.median_fnd[0].second ==
        (direct.fnd == 0 ? static_cast<double>(cfg.rounds) + 1.0 : direct.fnd));
}

TEST_CASE("compare output does not depend on the thread count") {
  SimConfig cfg = small_config(ProtocolId::Fuzzy, 50, 1);
  const ProtocolId protos[] = {ProtocolId::Fuzzy, ProtocolId::Leach, ProtocolId::Edeec};
  const auto serial = compare(cfg, protos, 3, 1);
  const auto parallel = compare(cfg, protos, 3, 4);
  REQUIRE(serial.runs.size() == parallel.runs.size());
  for (std::size_t i = 0; i < serial.runs.size(); ++i) {
    CHECK(serial.runs[i].protocol == parallel.runs[i].protocol);
    CHECK(serial.runs[i].seed == parallel.runs[i].seed);
    CHECK(rounds_csv(serial.runs[i].summary, true) ==
          rounds_csv(parallel.runs[i].summary, true));
  }
  CHECK(serial.median_fnd == parallel.median_fnd);
}

TEST_CASE("median of first-death rounds censors survivors high") {
  CHECK(median_fnd({5, 1, 3}, 100) == 3.0);
  CHECK(median_fnd({5, 1, 3, 7}, 100) == 4.0);
  // a run with no death sorts above every real death round
  CHECK(median_fnd({0, 1, 3}, 100) == 3.0);
  CHECK(median_fnd({0, 0, 3}, 100) == 101.0);
}

TEST_CASE("the default scenario keeps everyone alive through an early prefix") {
  SimConfig cfg;  // shipped defaults: 100 nodes, k=5, fuzzy
  cfg.rounds = 300;
  const auto summary = simulate(cfg);
  CHECK(summary.rounds_simulated == 300);
  for (const auto& m : summary.series) {
    CHECK(m.alive == 100);
    CHECK(m.ch_count == 5);
  }
  CHECK(summary.fnd == 0);
}
