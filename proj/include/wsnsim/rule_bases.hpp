#pragma once

#include <string>
#include <vector>

#include "wsnsim/fuzzy.hpp"

namespace wsnsim {

// Default linguistic variables and the two shipped rule bases: the 27-rule
// cluster-head election base and the 9-rule relay selection base. Battery
// universes scale with the richest node class; all breakpoints are
// config-overridable.

// Adjacent labels overlap across almost the whole scale, so residual energy
// keeps separating candidates from a full battery down to a nearly empty
// one; only short plateaus at the extremes leave ties to position.
inline LinguisticVariable battery_variable(std::string name, double e_max) {
  return LinguisticVariable(
      std::move(name), 0.0, e_max,
      {{"Low", MembershipFunction::trapezoidal(0.0, 0.0, 0.05 * e_max, 0.5 * e_max)},
       {"Moderate", MembershipFunction::triangular(0.1 * e_max, 0.5 * e_max, 0.95 * e_max)},
       {"High", MembershipFunction::trapezoidal(0.5 * e_max, 0.95 * e_max, e_max, e_max)}});
}

// Positional labels are broad relative to a typical cluster radius, so a
// candidate's residual energy stays the deciding factor among cluster peers
// and placement only breaks ties between comparable batteries.
inline LinguisticVariable centrality_variable() {
  return LinguisticVariable(
      "Centrality", 0.0, 75.0,
      {{"Near", MembershipFunction::trapezoidal(0, 0, 15, 40)},
       {"Moderate", MembershipFunction::triangular(25, 45, 65)},
       {"Far", MembershipFunction::trapezoidal(50, 65, 75, 75)}});
}

inline LinguisticVariable dist_bs_variable() {
  return LinguisticVariable(
      "DistBS", 0.0, 150.0,
      {{"Near", MembershipFunction::trapezoidal(0, 0, 40, 75)},
       {"Moderate", MembershipFunction::triangular(60, 90, 120)},
       {"Far", MembershipFunction::trapezoidal(105, 135, 150, 150)}});
}

// Big starts at the 83 m communication threshold; Medium's right foot sits
// at 84 m so the two overlap and the universe stays fully covered.
inline LinguisticVariable distance_mh_variable() {
  return LinguisticVariable(
      "DistanceMH", 0.0, 100.0,
      {{"Small", MembershipFunction::trapezoidal(0, 0, 25, 50)},
       {"Medium", MembershipFunction::triangular(40, 62, 84)},
       {"Big", MembershipFunction::trapezoidal(83, 90, 100, 100)}});
}

inline OutputVariable election_output_variable() {
  return {"ElectionCH",
          0.0,
          100.0,
          {"Very weak", "Weak", "Medium", "Strong", "Very strong"},
          {10.0, 30.0, 50.0, 70.0, 90.0}};
}

inline OutputVariable relay_output_variable() {
  return {"Relay", 0.0, 100.0, {"Weak", "Medium", "Strong"}, {20.0, 50.0, 80.0}};
}

// The 27-rule election table, row for row. Antecedent order is
// (Centrality, Battery, DistBS).
inline std::vector<FuzzyRule> election_rules() {
  return {
      {{"Far", "High", "Far"}, "Weak"},              // 1
      {{"Far", "High", "Moderate"}, "Weak"},         // 2
      {{"Far", "High", "Near"}, "Medium"},           // 3
      {{"Far", "Low", "Far"}, "Very weak"},          // 4
      {{"Far", "Low", "Moderate"}, "Very weak"},     // 5
      {{"Far", "Low", "Near"}, "Very weak"},         // 6
      {{"Far", "Moderate", "Far"}, "Very weak"},     // 7
      {{"Far", "Moderate", "Moderate"}, "Weak"},     // 8
      {{"Far", "Moderate", "Near"}, "Very weak"},    // 9
      {{"Moderate", "High", "Far"}, "Medium"},       // 10
      {{"Moderate", "High", "Moderate"}, "Strong"},  // 11
      {{"Moderate", "High", "Near"}, "Strong"},      // 12
      {{"Moderate", "Low", "Far"}, "Very weak"},     // 13
      {{"Moderate", "Low", "Moderate"}, "Weak"},     // 14
      {{"Moderate", "Low", "Near"}, "Very weak"},    // 15
      {{"Moderate", "Moderate", "Far"}, "Weak"},     // 16
      {{"Moderate", "Moderate", "Moderate"}, "Strong"},  // 17
      {{"Moderate", "Moderate", "Near"}, "Medium"},  // 18
      {{"Near", "High", "Near"}, "Very strong"},     // 19
      {{"Near", "High", "Far"}, "Strong"},           // 20
      {{"Near", "High", "Moderate"}, "Very strong"}, // 21
      {{"Near", "Low", "Far"}, "Very weak"},         // 22
      {{"Near", "Low", "Moderate"}, "Very weak"},    // 23
      {{"Near", "Low", "Near"}, "Very weak"},        // 24
      {{"Near", "Moderate", "Far"}, "Medium"},       // 25
      {{"Near", "Moderate", "Moderate"}, "Strong"},  // 26
      {{"Near", "Moderate", "Near"}, "Strong"},      // 27
  };
}

// Relay table, antecedent order (BatteryCH, DistanceMH). Strongest case is a
// short hop to a high-battery head, weakest a long hop to a drained one;
// the table is monotone along both axes and strictly ordered in distance for
// a high-battery head, so near-equal-energy candidates rank by distance.
inline std::vector<FuzzyRule> relay_rules() {
  return {
      {{"Low", "Small"}, "Medium"},   {{"Low", "Medium"}, "Weak"},
      {{"Low", "Big"}, "Weak"},       {{"Moderate", "Small"}, "Strong"},
      {{"Moderate", "Medium"}, "Medium"}, {{"Moderate", "Big"}, "Weak"},
      {{"High", "Small"}, "Strong"},  {{"High", "Medium"}, "Medium"},
      {{"High", "Big"}, "Weak"},
  };
}

inline RuleBase election_rule_base(double battery_max) {
  return RuleBase({centrality_variable(), battery_variable("Battery", battery_max),
                   dist_bs_variable()},
                  election_output_variable(), election_rules());
}

inline RuleBase relay_rule_base(double battery_max) {
  return RuleBase({battery_variable("BatteryCH", battery_max), distance_mh_variable()},
                  relay_output_variable(), relay_rules());
}

}  // namespace wsnsim
