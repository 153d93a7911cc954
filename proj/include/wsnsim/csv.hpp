#pragma once

#include <array>
#include <charconv>
#include <cstdint>
#include <span>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include "wsnsim/network.hpp"
#include "wsnsim/sim.hpp"

namespace wsnsim {

// Shortest decimal form that parses back to exactly the same double, with a
// period decimal separator regardless of locale.
inline std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

inline constexpr const char* kRoundsCsvHeader = "round,alive,residual_j,ch_count,relay_count\n";
inline constexpr const char* kSummaryCsvHeader = "protocol,seed,fnd,final_alive\n";
inline constexpr const char* kCompareCsvHeader = "protocol,seeds,median_fnd\n";
inline constexpr const char* kSurfaceCsvHeader = "x1,x2,output\n";
inline constexpr const char* kPopulationCsvHeader = "id,x,y,class,energy,alive\n";

// `padded` keeps the zero rows that align series across runs; without it the
// file ends at the last simulated round.
inline std::string rounds_csv(const RunSummary& summary, bool padded = false) {
  std::string out = kRoundsCsvHeader;
  const std::size_t limit = padded ? summary.series.size() : summary.rounds_simulated;
  for (std::size_t i = 0; i < limit; ++i) {
    const RoundMetrics& m = summary.series[i];
    out += std::to_string(m.round);
    out += ',';
    out += std::to_string(m.alive);
    out += ',';
    out += format_double(m.residual_j);
    out += ',';
    out += std::to_string(m.ch_count);
    out += ',';
    out += std::to_string(m.relay_count);
    out += '\n';
  }
  return out;
}

struct SummaryRow {
  std::string protocol;
  std::uint64_t seed = 0;
  std::uint32_t fnd = 0;
  std::uint32_t final_alive = 0;
};

inline std::string summary_csv(std::span<const SummaryRow> rows) {
  std::string out = kSummaryCsvHeader;
  for (const auto& r : rows) {
    out += r.protocol;
    out += ',';
    out += std::to_string(r.seed);
    out += ',';
    out += std::to_string(r.fnd);
    out += ',';
    out += std::to_string(r.final_alive);
    out += '\n';
  }
  return out;
}

inline std::string compare_csv(const CompareResult& result, std::uint32_t n_seeds) {
  std::string out = kCompareCsvHeader;
  for (const auto& [protocol, median] : result.median_fnd) {
    out += std::string(protocol_name(protocol));
    out += ',';
    out += std::to_string(n_seeds);
    out += ',';
    out += format_double(median);
    out += '\n';
  }
  return out;
}

inline std::string surface_csv(std::span<const std::array<double, 3>> rows) {
  std::string out = kSurfaceCsvHeader;
  for (const auto& r : rows) {
    out += format_double(r[0]);
    out += ',';
    out += format_double(r[1]);
    out += ',';
    out += format_double(r[2]);
    out += '\n';
  }
  return out;
}

inline std::string population_csv(std::span<const Node> nodes) {
  std::string out = kPopulationCsvHeader;
  for (const auto& n : nodes) {
    out += std::to_string(n.id());
    out += ',';
    out += format_double(n.position().x);
    out += ',';
    out += format_double(n.position().y);
    out += ',';
    out += std::string(node_class_name(n.node_class()));
    out += ',';
    out += format_double(n.energy());
    out += ',';
    out += n.alive() ? '1' : '0';
    out += '\n';
  }
  return out;
}

inline constexpr const char* kTraceCsvHeader =
    "round,ch_ids,relay_map,cluster_sizes,announcement_rx,announcement_tx,association,"
    "tdma,member_data,head_rx,aggregation,head_to_sink,relay_forward,direct_fallback\n";

// Lists inside a cell are ';'-separated, relay entries written as over:relay.
inline std::string trace_csv_row(const RoundTrace& t) {
  std::string out = std::to_string(t.round);
  out += ',';
  for (std::size_t i = 0; i < t.ch_ids.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(t.ch_ids[i]);
  }
  out += ',';
  for (std::size_t i = 0; i < t.relay_map.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(t.relay_map[i].first);
    out += ':';
    out += std::to_string(t.relay_map[i].second);
  }
  out += ',';
  for (std::size_t i = 0; i < t.cluster_sizes.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(t.cluster_sizes[i]);
  }
  for (double v : {t.debits.announcement_rx, t.debits.announcement_tx, t.debits.association,
                   t.debits.tdma, t.debits.member_data, t.debits.head_rx,
                   t.debits.aggregation, t.debits.head_to_sink, t.debits.relay_forward,
                   t.debits.direct_fallback}) {
    out += ',';
    out += format_double(v);
  }
  out += '\n';
  return out;
}

}  // namespace wsnsim
