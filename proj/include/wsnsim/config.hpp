#pragma once

#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "wsnsim/fuzzy.hpp"
#include "wsnsim/rule_bases.hpp"
#include "wsnsim/sim.hpp"

namespace wsnsim {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The shipped defaults: 100 nodes on a 100 m x 100 m field, BS at (5, 95),
// k = 5 clusters, 5000 rounds, 4000-bit data / 100-bit info messages, 5%
// compression, heterogeneity mf = 1, mp = 0.6, e = 1 with class energies
// 0.5 / 1.0 / 1.5 J.
inline SimConfig default_config() { return SimConfig{}; }

namespace cfgdetail {

using nlohmann::json;

inline std::string line_of_offset(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

[[noreturn]] inline void bail(const std::string& path, const std::string& what) {
  throw ConfigError("config error at '" + path + "': " + what);
}

inline void check_keys(const json& obj, const std::string& path,
                       std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) ok = true;
    if (!ok) bail(path.empty() ? key : path + "." + key, "unknown key");
  }
}

inline double get_number(const json& obj, const std::string& path, const char* key,
                         double fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) bail(path + "." + key, "expected a number");
  return v.get<double>();
}

inline std::uint64_t get_uint(const json& obj, const std::string& path, const char* key,
                              std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_unsigned()) bail(path + "." + key, "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

inline std::string get_string(const json& obj, const std::string& path, const char* key,
                              const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_string()) bail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

inline MembershipFunction parse_mf(const json& j, const std::string& path) {
  if (!j.is_object()) bail(path, "expected an object");
  check_keys(j, path, {"label", "shape", "points"});
  const std::string shape = get_string(j, path, "shape", "");
  if (!j.contains("points") || !j.at("points").is_array())
    bail(path + ".points", "expected an array of breakpoints");
  std::vector<double> pts;
  for (const auto& p : j.at("points")) {
    if (!p.is_number()) bail(path + ".points", "breakpoints must be numbers");
    pts.push_back(p.get<double>());
  }
  try {
    if (shape == "triangular") {
      if (pts.size() != 3) bail(path + ".points", "triangular needs 3 breakpoints");
      return MembershipFunction::triangular(pts[0], pts[1], pts[2]);
    }
    if (shape == "trapezoidal") {
      if (pts.size() != 4) bail(path + ".points", "trapezoidal needs 4 breakpoints");
      return MembershipFunction::trapezoidal(pts[0], pts[1], pts[2], pts[3]);
    }
  } catch (const FuzzyConfigError& e) {
    bail(path, e.what());
  }
  bail(path + ".shape", "expected 'triangular' or 'trapezoidal'");
}

inline LinguisticVariable parse_variable(const json& j, const std::string& name,
                                         const std::string& path) {
  if (!j.is_object()) bail(path, "expected an object");
  check_keys(j, path, {"universe", "sets"});
  if (!j.contains("universe") || !j.at("universe").is_array() || j.at("universe").size() != 2)
    bail(path + ".universe", "expected [lo, hi]");
  const double lo = j.at("universe")[0].get<double>();
  const double hi = j.at("universe")[1].get<double>();
  if (!j.contains("sets") || !j.at("sets").is_array())
    bail(path + ".sets", "expected an array of labeled sets");
  std::vector<FuzzySet> sets;
  std::size_t i = 0;
  for (const auto& s : j.at("sets")) {
    const std::string spath = path + ".sets[" + std::to_string(i++) + "]";
    const std::string label = get_string(s, spath, "label", "");
    if (label.empty()) bail(spath + ".label", "expected a label");
    sets.push_back({label, parse_mf(s, spath)});
  }
  try {
    return LinguisticVariable(name, lo, hi, std::move(sets));
  } catch (const FuzzyConfigError& e) {
    bail(path, e.what());
  }
}

inline OutputVariable parse_output(const json& j, const OutputVariable& fallback,
                                   const std::string& path) {
  if (!j.is_object()) bail(path, "expected an object");
  check_keys(j, path, {"universe", "labels", "centroids"});
  OutputVariable out = fallback;
  if (j.contains("universe")) {
    if (!j.at("universe").is_array() || j.at("universe").size() != 2)
      bail(path + ".universe", "expected [lo, hi]");
    out.lo = j.at("universe")[0].get<double>();
    out.hi = j.at("universe")[1].get<double>();
  }
  if (j.contains("labels")) {
    if (!j.at("labels").is_array()) bail(path + ".labels", "expected an array");
    out.labels.clear();
    for (const auto& l : j.at("labels")) out.labels.push_back(l.get<std::string>());
  }
  if (j.contains("centroids")) {
    if (!j.at("centroids").is_array()) bail(path + ".centroids", "expected an array");
    out.centroids.clear();
    for (const auto& c : j.at("centroids")) {
      if (!c.is_number()) bail(path + ".centroids", "centroids must be numbers");
      out.centroids.push_back(c.get<double>());
    }
  }
  return out;
}

inline std::vector<FuzzyRule> parse_rules(const json& j, const std::string& path) {
  if (!j.is_array()) bail(path, "expected an array of rules");
  std::vector<FuzzyRule> rules;
  std::size_t i = 0;
  for (const auto& r : j) {
    const std::string rpath = path + "[" + std::to_string(i++) + "]";
    if (!r.is_object()) bail(rpath, "expected an object");
    check_keys(r, rpath, {"if", "then"});
    if (!r.contains("if") || !r.at("if").is_array()) bail(rpath + ".if", "expected an array");
    FuzzyRule rule;
    for (const auto& a : r.at("if")) rule.antecedents.push_back(a.get<std::string>());
    rule.consequent = get_string(r, rpath, "then", "");
    if (rule.consequent.empty()) bail(rpath + ".then", "expected a consequent label");
    rules.push_back(std::move(rule));
  }
  return rules;
}

// Rebuilds one rule base from its defaults plus any overridden variables,
// output or rule list.
inline RuleBase apply_rule_base_override(const json& j, const std::string& path,
                                         std::vector<LinguisticVariable> vars,
                                         OutputVariable output, std::vector<FuzzyRule> rules) {
  check_keys(j, path, {"variables", "output", "rules"});
  if (j.contains("variables")) {
    const auto& vj = j.at("variables");
    if (!vj.is_object()) bail(path + ".variables", "expected an object keyed by variable name");
    for (const auto& [name, body] : vj.items()) {
      bool found = false;
      for (auto& v : vars) {
        if (v.name() != name) continue;
        v = parse_variable(body, name, path + ".variables." + name);
        found = true;
      }
      if (!found) bail(path + ".variables." + name, "unknown variable");
    }
  }
  if (j.contains("output"))
    output = parse_output(j.at("output"), output, path + ".output");
  if (j.contains("rules")) rules = parse_rules(j.at("rules"), path + ".rules");
  try {
    return RuleBase(std::move(vars), std::move(output), std::move(rules));
  } catch (const FuzzyConfigError& e) {
    bail(path, e.what());
  }
}

}  // namespace cfgdetail

inline SimConfig parse_config(const std::string& text, const std::string& origin) {
  using cfgdetail::bail;
  using cfgdetail::check_keys;
  using nlohmann::json;

  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(origin + ": parse error at " +
                      cfgdetail::line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0) + ": " +
                      e.what());
  }
  if (!root.is_object()) throw ConfigError(origin + ": top level must be an object");

  check_keys(root, "",
             {"protocol", "seed", "rounds", "nodes", "clusters", "compression_ratio",
              "field", "base_station", "radio", "heterogeneity", "leach", "edeec",
              "fuzzy_overrides"});

  SimConfig cfg = default_config();

  const std::string proto = cfgdetail::get_string(root, "", "protocol", "fuzzy");
  if (proto == "fuzzy")
    cfg.protocol = ProtocolId::Fuzzy;
  else if (proto == "leach")
    cfg.protocol = ProtocolId::Leach;
  else if (proto == "edeec")
    cfg.protocol = ProtocolId::Edeec;
  else
    bail("protocol", "expected one of fuzzy|leach|edeec, got '" + proto + "'");

  cfg.seed = cfgdetail::get_uint(root, "", "seed", cfg.seed);
  cfg.rounds = static_cast<std::uint32_t>(cfgdetail::get_uint(root, "", "rounds", cfg.rounds));
  cfg.het.n = static_cast<std::uint32_t>(cfgdetail::get_uint(root, "", "nodes", cfg.het.n));
  cfg.clusters =
      static_cast<std::uint32_t>(cfgdetail::get_uint(root, "", "clusters", cfg.clusters));
  cfg.compression_ratio =
      cfgdetail::get_number(root, "", "compression_ratio", cfg.compression_ratio);

  if (root.contains("field")) {
    const auto& f = root.at("field");
    check_keys(f, "field", {"width_m", "height_m"});
    cfg.field.width = cfgdetail::get_number(f, "field", "width_m", cfg.field.width);
    cfg.field.height = cfgdetail::get_number(f, "field", "height_m", cfg.field.height);
  }
  if (root.contains("base_station")) {
    const auto& b = root.at("base_station");
    check_keys(b, "base_station", {"x_m", "y_m"});
    cfg.bs.position.x = cfgdetail::get_number(b, "base_station", "x_m", cfg.bs.position.x);
    cfg.bs.position.y = cfgdetail::get_number(b, "base_station", "y_m", cfg.bs.position.y);
  }
  if (root.contains("radio")) {
    const auto& r = root.at("radio");
    check_keys(r, "radio",
               {"e_elec_nj_per_bit", "eps_fs_pj_per_bit_m2", "eps_amp_pj_per_bit_m4",
                "e_da_nj_per_bit_signal", "data_bits", "info_bits"});
    // nano/pico figures as quoted in radio tables; converted to joules with a
    // long-double intermediate so table values match their double literals
    auto nano = [](double v) { return static_cast<double>(static_cast<long double>(v) * 1e-9L); };
    auto pico = [](double v) { return static_cast<double>(static_cast<long double>(v) * 1e-12L); };
    cfg.radio.e_elec = nano(cfgdetail::get_number(r, "radio", "e_elec_nj_per_bit", 50.0));
    cfg.radio.eps_fs = pico(cfgdetail::get_number(r, "radio", "eps_fs_pj_per_bit_m2", 10.0));
    cfg.radio.eps_amp =
        pico(cfgdetail::get_number(r, "radio", "eps_amp_pj_per_bit_m4", 0.0013));
    cfg.radio.e_da = nano(cfgdetail::get_number(r, "radio", "e_da_nj_per_bit_signal", 5.0));
    cfg.radio.data_bits =
        static_cast<std::uint32_t>(cfgdetail::get_uint(r, "radio", "data_bits", 4000));
    cfg.radio.info_bits =
        static_cast<std::uint32_t>(cfgdetail::get_uint(r, "radio", "info_bits", 100));
  }
  if (root.contains("heterogeneity")) {
    const auto& h = root.at("heterogeneity");
    check_keys(h, "heterogeneity",
               {"mf", "mp", "e", "energy_normal_j", "energy_advanced_j", "energy_super_j"});
    cfg.het.mf = cfgdetail::get_number(h, "heterogeneity", "mf", cfg.het.mf);
    cfg.het.mp = cfgdetail::get_number(h, "heterogeneity", "mp", cfg.het.mp);
    cfg.het.e = cfgdetail::get_number(h, "heterogeneity", "e", cfg.het.e);
    cfg.energies.normal =
        cfgdetail::get_number(h, "heterogeneity", "energy_normal_j", cfg.energies.normal);
    cfg.energies.advanced =
        cfgdetail::get_number(h, "heterogeneity", "energy_advanced_j", cfg.energies.advanced);
    cfg.energies.super =
        cfgdetail::get_number(h, "heterogeneity", "energy_super_j", cfg.energies.super);
    cfg.het.e_o = cfg.energies.normal;
  }
  if (root.contains("leach")) {
    const auto& l = root.at("leach");
    check_keys(l, "leach", {"p_opt"});
    cfg.leach.p_opt = cfgdetail::get_number(l, "leach", "p_opt", cfg.leach.p_opt);
  }
  if (root.contains("edeec")) {
    const auto& e = root.at("edeec");
    check_keys(e, "edeec", {"p_opt", "a", "b", "rounds_estimate"});
    cfg.edeec.p_opt = cfgdetail::get_number(e, "edeec", "p_opt", cfg.edeec.p_opt);
    cfg.edeec.a = cfgdetail::get_number(e, "edeec", "a", cfg.edeec.a);
    cfg.edeec.b = cfgdetail::get_number(e, "edeec", "b", cfg.edeec.b);
    cfg.edeec.rounds_estimate = static_cast<std::uint32_t>(
        cfgdetail::get_uint(e, "edeec", "rounds_estimate", cfg.edeec.rounds_estimate));
  }

  // default rule bases scale their battery universes with the richest class
  cfg.election_rb = election_rule_base(cfg.energies.super);
  cfg.relay_rb = relay_rule_base(cfg.energies.super);

  if (root.contains("fuzzy_overrides")) {
    const auto& fo = root.at("fuzzy_overrides");
    check_keys(fo, "fuzzy_overrides", {"election", "relay"});
    if (fo.contains("election"))
      cfg.election_rb = cfgdetail::apply_rule_base_override(
          fo.at("election"), "fuzzy_overrides.election",
          {centrality_variable(), battery_variable("Battery", cfg.energies.super),
           dist_bs_variable()},
          election_output_variable(), election_rules());
    if (fo.contains("relay"))
      cfg.relay_rb = cfgdetail::apply_rule_base_override(
          fo.at("relay"), "fuzzy_overrides.relay",
          {battery_variable("BatteryCH", cfg.energies.super), distance_mh_variable()},
          relay_output_variable(), relay_rules());
  }

  try {
    validate_config(cfg);
  } catch (const SimError& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  return cfg;
}

inline SimConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

}  // namespace wsnsim
