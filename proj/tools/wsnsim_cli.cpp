#include <array>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wsnsim/config.hpp"
#include "wsnsim/csv.hpp"
#include "wsnsim/sim.hpp"

namespace fs = std::filesystem;

namespace {

// --out beats WSNSIM_OUT beats the working directory
fs::path resolve_out_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("WSNSIM_OUT"); env != nullptr && *env != '\0') return env;
  return ".";
}

bool write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  out.flush();
  if (!out.good()) {
    std::cerr << "error: cannot write " << path << "\n";
    return false;
  }
  return true;
}

wsnsim::ProtocolId parse_protocol(const std::string& name) {
  if (name == "fuzzy") return wsnsim::ProtocolId::Fuzzy;
  if (name == "leach") return wsnsim::ProtocolId::Leach;
  if (name == "edeec") return wsnsim::ProtocolId::Edeec;
  throw wsnsim::ConfigError("unknown protocol '" + name + "' (expected fuzzy|leach|edeec)");
}

int cmd_run(const std::string& config_path, std::uint64_t seed, bool seed_given,
            const std::string& out_flag, bool trace, bool snapshots) {
  wsnsim::SimConfig cfg = wsnsim::load_config_file(config_path);
  if (seed_given) cfg.seed = seed;

  const fs::path out_dir = resolve_out_dir(out_flag);
  fs::create_directories(out_dir);

  std::string trace_content = wsnsim::kTraceCsvHeader;
  std::string snapshot_content = "round," + std::string(wsnsim::kPopulationCsvHeader);
  wsnsim::SimHooks hooks;
  if (trace)
    hooks.trace = [&](const wsnsim::RoundTrace& t) { trace_content += wsnsim::trace_csv_row(t); };
  if (snapshots)
    hooks.snapshot = [&](std::uint32_t round, std::span<const wsnsim::Node> nodes) {
      const std::string rows = wsnsim::population_csv(nodes);
      const std::size_t body = rows.find('\n') + 1;  // drop the per-snapshot header
      std::istringstream lines(rows.substr(body));
      for (std::string line; std::getline(lines, line);)
        snapshot_content += std::to_string(round) + "," + line + "\n";
    };

  const wsnsim::RunSummary summary = wsnsim::simulate(cfg, hooks);

  const wsnsim::SummaryRow row{std::string(wsnsim::protocol_name(cfg.protocol)), cfg.seed,
                               summary.fnd, summary.final_alive};
  bool ok = write_file(out_dir / "rounds.csv", wsnsim::rounds_csv(summary)) &&
            write_file(out_dir / "summary.csv", wsnsim::summary_csv({&row, 1}));
  if (ok && trace) ok = write_file(out_dir / "trace.csv", trace_content);
  if (ok && snapshots) ok = write_file(out_dir / "snapshots.csv", snapshot_content);
  if (!ok) return 1;

  std::cout << "protocol=" << wsnsim::protocol_name(cfg.protocol) << " seed=" << cfg.seed
            << " rounds=" << summary.rounds_simulated << " fnd=" << summary.fnd
            << " final_alive=" << summary.final_alive << "\n";
  return 0;
}

int cmd_compare(const std::string& config_path, const std::vector<std::string>& protocol_names,
                std::uint32_t seeds, unsigned jobs, const std::string& out_flag) {
  wsnsim::SimConfig cfg = wsnsim::load_config_file(config_path);
  std::vector<wsnsim::ProtocolId> protocols;
  for (const auto& name : protocol_names) protocols.push_back(parse_protocol(name));

  const fs::path out_dir = resolve_out_dir(out_flag);
  fs::create_directories(out_dir);

  const wsnsim::CompareResult result = wsnsim::compare(cfg, protocols, seeds, jobs);

  std::vector<wsnsim::SummaryRow> rows;
  bool ok = true;
  for (const auto& run : result.runs) {
    rows.push_back({std::string(wsnsim::protocol_name(run.protocol)), run.seed,
                    run.summary.fnd, run.summary.final_alive});
    const std::string name = "rounds_" + std::string(wsnsim::protocol_name(run.protocol)) +
                             "_seed" + std::to_string(run.seed) + ".csv";
    ok = ok && write_file(out_dir / name, wsnsim::rounds_csv(run.summary, /*padded=*/true));
  }
  ok = ok && write_file(out_dir / "summary.csv", wsnsim::summary_csv(rows));
  ok = ok && write_file(out_dir / "compare.csv", wsnsim::compare_csv(result, seeds));
  if (!ok) return 1;

  for (const auto& [protocol, median] : result.median_fnd)
    std::cout << wsnsim::protocol_name(protocol) << " median_fnd=" << median << "\n";
  return 0;
}

int cmd_surface(const std::string& config_path, const std::string& rulebase,
                const std::string& fixed, std::size_t resolution, const std::string& out_flag) {
  wsnsim::SimConfig cfg = wsnsim::load_config_file(config_path);

  const wsnsim::RuleBase& rb =
      rulebase == "relay" ? cfg.relay_rb : cfg.election_rb;

  std::vector<std::array<double, 3>> rows;
  if (rb.inputs().size() == 2) {
    if (!fixed.empty())
      throw wsnsim::ConfigError("--fixed does not apply to the 2-input relay base");
    rows = rb.surface_grid(resolution);
  } else {
    if (fixed.empty())
      throw wsnsim::ConfigError("the 3-input election base needs exactly one --fixed VAR=VALUE");
    const auto eq = fixed.find('=');
    if (eq == std::string::npos)
      throw wsnsim::ConfigError("--fixed expects VAR=VALUE, got '" + fixed + "'");
    const std::string var = fixed.substr(0, eq);
    const double value = std::stod(fixed.substr(eq + 1));
    std::size_t index = rb.inputs().size();
    for (std::size_t i = 0; i < rb.inputs().size(); ++i)
      if (rb.inputs()[i].name() == var) index = i;
    if (index == rb.inputs().size())
      throw wsnsim::ConfigError("--fixed names unknown variable '" + var + "'");
    rows = rb.surface_grid(resolution, index, value);
  }

  const fs::path out_dir = resolve_out_dir(out_flag);
  fs::create_directories(out_dir);
  if (!write_file(out_dir / "surface.csv", wsnsim::surface_csv(rows))) return 1;
  std::cout << "wrote " << rows.size() << " grid rows\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Round-based simulator for fuzzy, LEACH and E-DEEC cluster-head protocols"};
  app.require_subcommand(1);

  std::string config_path, out_flag, fixed, rulebase = "election";
  std::uint64_t seed = 0;
  bool trace = false, snapshots = false;
  std::vector<std::string> protocol_names{"fuzzy", "leach", "edeec"};
  std::uint32_t seeds = 20;
  unsigned jobs = 0;
  std::size_t resolution = 21;

  auto* run = app.add_subcommand("run", "simulate one protocol and write rounds/summary CSV");
  run->add_option("config", config_path, "JSON config file")->required();
  auto* seed_opt = run->add_option("--seed", seed, "override the config seed");
  run->add_option("--out", out_flag, "output directory (default: $WSNSIM_OUT or .)");
  run->add_flag("--trace", trace, "also write per-round head/relay detail to trace.csv");
  run->add_flag("--snapshots", snapshots, "also write per-round node state to snapshots.csv");

  auto* cmp = app.add_subcommand("compare", "run a protocol x seed matrix and write medians");
  cmp->add_option("config", config_path, "JSON config file")->required();
  cmp->add_option("--protocols", protocol_names, "protocols to compare")
      ->delimiter(',');
  cmp->add_option("--seeds", seeds, "number of seeds (1..N)");
  cmp->add_option("--jobs", jobs, "worker threads (default: hardware)");
  cmp->add_option("--out", out_flag, "output directory (default: $WSNSIM_OUT or .)");

  auto* surf = app.add_subcommand("surface", "export an inference surface grid as CSV");
  surf->add_option("config", config_path, "JSON config file")->required();
  surf->add_option("--rulebase", rulebase, "election or relay")
      ->check(CLI::IsMember({"election", "relay"}));
  surf->add_option("--fixed", fixed, "VAR=VALUE held constant (3-input base only)");
  surf->add_option("--res", resolution, "grid resolution per axis");
  surf->add_option("--out", out_flag, "output directory (default: $WSNSIM_OUT or .)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed())
      return cmd_run(config_path, seed, seed_opt->count() > 0, out_flag, trace, snapshots);
    if (cmp->parsed()) return cmd_compare(config_path, protocol_names, seeds, jobs, out_flag);
    if (surf->parsed()) return cmd_surface(config_path, rulebase, fixed, resolution, out_flag);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
