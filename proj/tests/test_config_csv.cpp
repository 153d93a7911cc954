#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>

#include "wsnsim/config.hpp"
#include "wsnsim/csv.hpp"
#include "wsnsim/rng.hpp"

using namespace wsnsim;

TEST_CASE("an empty document yields the shipped defaults") {
  const SimConfig cfg = parse_config("{}", "inline");
  CHECK(cfg.protocol == ProtocolId::Fuzzy);
  CHECK(cfg.seed == 1);
  CHECK(cfg.rounds == 5000);
  CHECK(cfg.het.n == 100);
  CHECK(cfg.clusters == 5);
  CHECK(cfg.compression_ratio == 0.05);
  CHECK(cfg.field.width == 100.0);
  CHECK(cfg.bs.position.x == 5.0);
  CHECK(cfg.bs.position.y == 95.0);
  CHECK(cfg.radio.e_elec == 50e-9);
  CHECK(cfg.radio.data_bits == 4000);
  CHECK(cfg.radio.info_bits == 100);
  CHECK(cfg.energies.super == 1.5);
  CHECK(cfg.election_rb.rule_count() == 27);
  CHECK(cfg.relay_rb.rule_count() == 9);
}

TEST_CASE("the shipped scenario file parses") {
  const SimConfig cfg = load_config_file(WSNSIM_PAPER_CFG);
  CHECK(cfg.het.n == 100);
  CHECK(cfg.rounds == 5000);
  CHECK(cfg.clusters == 5);
  CHECK(std::fabs(cfg.radio.eps_amp - 0.0013e-12) < 1e-30);
  CHECK(cfg.het.mf == 1.0);
  CHECK(cfg.het.mp == 0.6);
}

TEST_CASE("radio units convert from table figures to joules") {
  const SimConfig cfg = parse_config(
      R"({"radio": {"e_elec_nj_per_bit": 50.0, "eps_fs_pj_per_bit_m2": 10.0,
                    "eps_amp_pj_per_bit_m4": 0.0013, "e_da_nj_per_bit_signal": 5.0,
                    "data_bits": 4000, "info_bits": 100}})",
      "inline");
  CHECK(cfg.radio.e_elec == 50e-9);
  CHECK(cfg.radio.eps_fs == 10e-12);
  CHECK(std::fabs(cfg.radio.eps_amp - 1.3e-15) < 1e-30);
  CHECK(cfg.radio.e_da == 5e-9);
}

TEST_CASE("unknown keys are rejected with their path") {
  CHECK_THROWS_WITH(parse_config(R"({"radio": {"bogus": 1}})", "inline"),
                    Catch::Matchers::ContainsSubstring("radio.bogus"));
  CHECK_THROWS_WITH(parse_config(R"({"speling": 1})", "inline"),
                    Catch::Matchers::ContainsSubstring("speling"));
}

TEST_CASE("parse errors come with a line anchor") {
  try {
    parse_config("{\n  \"protocol\": fuzzy\n}", "broken.cfg");
    FAIL("expected a parse error");
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    CHECK(what.find("broken.cfg") != std::string::npos);
    CHECK(what.find("line 2") != std::string::npos);
  }
}

TEST_CASE("invalid settings are rejected") {
  CHECK_THROWS_AS(parse_config(R"({"protocol": "aodv"})", "inline"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"clusters": 200, "nodes": 100})", "inline"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"compression_ratio": 0})", "inline"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"rounds": 0})", "inline"), ConfigError);
  CHECK_THROWS_AS(load_config_file("/nonexistent/path.cfg"), ConfigError);
}

TEST_CASE("membership overrides reshape the election base") {
  const char* doc = R"({
    "fuzzy_overrides": {
      "election": {
        "variables": {
          "Battery": {
            "universe": [0, 2.0],
            "sets": [
              {"label": "Low", "shape": "trapezoidal", "points": [0, 0, 0.5, 1.0]},
              {"label": "Moderate", "shape": "triangular", "points": [0.6, 1.0, 1.5]},
              {"label": "High", "shape": "trapezoidal", "points": [1.2, 1.6, 2.0, 2.0]}
            ]
          }
        }
      }
    }
  })";
  const SimConfig cfg = parse_config(doc, "inline");
  const auto& battery = cfg.election_rb.inputs()[1];
  CHECK(battery.hi() == 2.0);
  CHECK(battery.degree(battery.label_index("High"), 1.6) == 1.0);
}

TEST_CASE("rule overrides must stay total and use known labels") {
  // 8 of 9 relay rules
  const char* partial = R"({
    "fuzzy_overrides": { "relay": { "rules": [
      {"if": ["Low", "Small"], "then": "Medium"},
      {"if": ["Low", "Medium"], "then": "Weak"},
      {"if": ["Low", "Big"], "then": "Weak"},
      {"if": ["Moderate", "Small"], "then": "Strong"},
      {"if": ["Moderate", "Medium"], "then": "Medium"},
      {"if": ["Moderate", "Big"], "then": "Weak"},
      {"if": ["High", "Small"], "then": "Strong"},
      {"if": ["High", "Medium"], "then": "Medium"}
    ]}}})";
  CHECK_THROWS_AS(parse_config(partial, "inline"), ConfigError);

  const char* bad_label = R"({
    "fuzzy_overrides": { "relay": { "rules": [
      {"if": ["Low", "Small"], "then": "Colossal"},
      {"if": ["Low", "Medium"], "then": "Weak"},
      {"if": ["Low", "Big"], "then": "Weak"},
      {"if": ["Moderate", "Small"], "then": "Strong"},
      {"if": ["Moderate", "Medium"], "then": "Medium"},
      {"if": ["Moderate", "Big"], "then": "Weak"},
      {"if": ["High", "Small"], "then": "Strong"},
      {"if": ["High", "Medium"], "then": "Medium"},
      {"if": ["High", "Big"], "then": "Weak"}
    ]}}})";
  CHECK_THROWS_AS(parse_config(bad_label, "inline"), ConfigError);
}

TEST_CASE("doubles rendered for CSV parse back exactly") {
  Rng rng(3);
  for (int i = 0; i < 2000; ++i) {
    double v = (rng.uniform01() - 0.5) * std::pow(10.0, rng.uniform(-20, 20));
    const std::string text = format_double(v);
    CHECK(std::strtod(text.c_str(), nullptr) == v);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(std::strtod(format_double(1.3e-15).c_str(), nullptr) == 1.3e-15);
  CHECK(std::strtod(format_double(0.0).c_str(), nullptr) == 0.0);
}

TEST_CASE("round series CSV round-trips") {
  RunSummary summary;
  summary.rounds_simulated = 2;
  RoundMetrics a;
  a.round = 1;
  a.alive = 100;
  a.residual_j = 129.97603174604254;
  a.ch_count = 5;
  a.relay_count = 1;
  RoundMetrics b = a;
  b.round = 2;
  b.alive = 99;
  b.residual_j = 129.93;
  summary.series = {a, b};

  const std::string csv = rounds_csv(summary);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "round,alive,residual_j,ch_count,relay_count");
  std::getline(in, line);
  std::istringstream row(line);
  std::string cell;
  std::getline(row, cell, ',');
  CHECK(cell == "1");
  std::getline(row, cell, ',');
  CHECK(cell == "100");
  std::getline(row, cell, ',');
  CHECK(std::strtod(cell.c_str(), nullptr) == a.residual_j);
  std::getline(row, cell, ',');
  CHECK(cell == "5");
  std::getline(row, cell, ',');
  CHECK(cell == "1");
}

TEST_CASE("summary, compare and population CSV carry stable headers") {
  const SummaryRow row{"fuzzy", 7, 2412, 0};
  const std::string s = summary_csv({&row, 1});
  CHECK(s == "protocol,seed,fnd,final_alive\nfuzzy,7,2412,0\n");

  std::vector<Node> nodes;
  nodes.emplace_back(0, Point2D{1.5, 2.5}, NodeClass::Advanced, 1.0);
  const std::string pop = population_csv(nodes);
  CHECK(pop == "id,x,y,class,energy,alive\n0,1.5,2.5,advanced,1,1\n");

  RoundTrace trace;
  trace.round = 3;
  trace.ch_ids = {4, 9};
  trace.relay_map = {{9, 4}};
  trace.cluster_sizes = {21, 19};
  const std::string t = trace_csv_row(trace);
  CHECK(t.rfind("3,4;9,9:4,21;19,", 0) == 0);
}
