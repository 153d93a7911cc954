#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wsnsim {

// Invalid fuzzy-system description (bad breakpoints, unknown labels,
// incomplete rule tables, ...).
class FuzzyConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// No rule fired with positive strength. Unreachable when every input
// variable fully covers its universe and the rule table is total.
class NoRuleFiredError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Triangular or trapezoidal membership function, piecewise linear over its
// breakpoints. degree() is exactly 1 on the plateau [b, c] and exactly 0
// outside the support [a, d].
class MembershipFunction {
 public:
  enum class Shape { Triangular, Trapezoidal };

  static MembershipFunction triangular(double a, double b, double c) {
    return MembershipFunction(Shape::Triangular, a, b, b, c);
  }

  static MembershipFunction trapezoidal(double a, double b, double c, double d) {
    return MembershipFunction(Shape::Trapezoidal, a, b, c, d);
  }

  double degree(double x) const {
    if (!(x >= a_) || !(x <= d_)) return 0.0;
    if (x < b_) return (x - a_) / (b_ - a_);
    if (x <= c_) return 1.0;
    return (d_ - x) / (d_ - c_);
  }

  Shape shape() const { return shape_; }
  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }
  double d() const { return d_; }

 private:
  MembershipFunction(Shape shape, double a, double b, double c, double d)
      : shape_(shape), a_(a), b_(b), c_(c), d_(d) {
    if (!(std::isfinite(a) && std::isfinite(b) && std::isfinite(c) && std::isfinite(d)))
      throw FuzzyConfigError("membership breakpoints must be finite");
    if (!(a <= b && b <= c && c <= d))
      throw FuzzyConfigError("membership breakpoints must be non-decreasing");
  }

  Shape shape_;
  double a_, b_, c_, d_;
};

struct FuzzySet {
  std::string label;
  MembershipFunction mf;
};

// An input variable: a closed universe plus an ordered list of labeled sets.
// Label order encodes the semantic ordering (e.g. Low < Moderate < High).
// Construction verifies that the sets jointly cover the whole universe.
class LinguisticVariable {
 public:
  LinguisticVariable(std::string name, double lo, double hi, std::vector<FuzzySet> sets)
      : name_(std::move(name)), lo_(lo), hi_(hi), sets_(std::move(sets)) {
    if (!(std::isfinite(lo_) && std::isfinite(hi_) && lo_ < hi_))
      throw FuzzyConfigError("variable '" + name_ + "': universe must be a finite interval");
    if (sets_.empty())
      throw FuzzyConfigError("variable '" + name_ + "': needs at least one set");
    std::set<std::string_view> seen;
    for (const auto& s : sets_)
      if (!seen.insert(s.label).second)
        throw FuzzyConfigError("variable '" + name_ + "': duplicate label '" + s.label + "'");
    check_coverage();
  }

  const std::string& name() const { return name_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  std::size_t size() const { return sets_.size(); }
  const FuzzySet& set(std::size_t i) const { return sets_[i]; }
  const std::string& label(std::size_t i) const { return sets_[i].label; }

  std::size_t label_index(std::string_view label) const {
    for (std::size_t i = 0; i < sets_.size(); ++i)
      if (sets_[i].label == label) return i;
    throw FuzzyConfigError("variable '" + name_ + "': unknown label '" + std::string(label) + "'");
  }

  double clamp(double x) const { return std::clamp(x, lo_, hi_); }

  double degree(std::size_t set_index, double x) const {
    return sets_[set_index].mf.degree(x);
  }

 private:
  // Membership functions are linear between adjacent breakpoints, so the
  // pointwise maximum over sets is convex on each such segment and attains
  // its minimum at a segment endpoint. Checking universe ends plus every
  // breakpoint is therefore exact.
  void check_coverage() const {
    std::vector<double> probes{lo_, hi_};
    for (const auto& s : sets_)
      for (double p : {s.mf.a(), s.mf.b(), s.mf.c(), s.mf.d()})
        if (p >= lo_ && p <= hi_) probes.push_back(p);
    for (double x : probes) {
      double best = 0.0;
      for (const auto& s : sets_) best = std::max(best, s.mf.degree(x));
      if (!(best > 0.0))
        throw FuzzyConfigError("variable '" + name_ + "': sets do not cover x=" +
                               std::to_string(x));
    }
  }

  std::string name_;
  double lo_, hi_;
  std::vector<FuzzySet> sets_;
};

// One rule: an antecedent label per input variable and a consequent label.
struct FuzzyRule {
  std::vector<std::string> antecedents;
  std::string consequent;
};

// Output side of a rule base: ordered labels (weakest to strongest) with one
// crisp representative value each on the output universe.
struct OutputVariable {
  std::string name;
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::string> labels;
  std::vector<double> centroids;

  std::size_t label_index(std::string_view label) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == label) return i;
    throw FuzzyConfigError("output '" + name + "': unknown label '" + std::string(label) + "'");
  }
};

// A total Mamdani rule base evaluated with product inference and
// center-average defuzzification: the crisp output is
//   sum_l strength_l * centroid_l / sum_l strength_l
// where strength_l is the product of the rule's antecedent degrees.
class RuleBase {
 public:
  RuleBase(std::vector<LinguisticVariable> inputs, OutputVariable output,
           std::vector<FuzzyRule> rules)
      : inputs_(std::move(inputs)), output_(std::move(output)), rules_(std::move(rules)) {
    if (inputs_.empty()) throw FuzzyConfigError("rule base needs at least one input variable");
    if (output_.labels.empty() || output_.labels.size() != output_.centroids.size())
      throw FuzzyConfigError("output labels and centroids must match and be non-empty");
    if (!(output_.lo < output_.hi))
      throw FuzzyConfigError("output universe must be a finite interval");
    {
      std::set<std::string_view> seen;
      for (const auto& l : output_.labels)
        if (!seen.insert(l).second)
          throw FuzzyConfigError("output '" + output_.name + "': duplicate label '" + l + "'");
    }
    for (double c : output_.centroids)
      if (!(c >= output_.lo && c <= output_.hi))
        throw FuzzyConfigError("output centroid outside the output universe");

    std::size_t expected = 1;
    for (const auto& v : inputs_) expected *= v.size();
    if (rules_.size() != expected)
      throw FuzzyConfigError("rule base must be total: expected " + std::to_string(expected) +
                             " rules, got " + std::to_string(rules_.size()));

    resolved_.reserve(rules_.size());
    std::set<std::vector<std::uint32_t>> combos;
    for (const auto& r : rules_) {
      if (r.antecedents.size() != inputs_.size())
        throw FuzzyConfigError("rule has " + std::to_string(r.antecedents.size()) +
                               " antecedents, expected " + std::to_string(inputs_.size()));
      ResolvedRule rr;
      for (std::size_t i = 0; i < inputs_.size(); ++i)
        rr.antecedents.push_back(
            static_cast<std::uint32_t>(inputs_[i].label_index(r.antecedents[i])));
      rr.consequent = static_cast<std::uint32_t>(output_.label_index(r.consequent));
      if (!combos.insert(rr.antecedents).second)
        throw FuzzyConfigError("duplicate rule antecedent combination");
      resolved_.push_back(std::move(rr));
    }
  }

  const std::vector<LinguisticVariable>& inputs() const { return inputs_; }
  const OutputVariable& output() const { return output_; }
  const std::vector<FuzzyRule>& rules() const { return rules_; }
  std::size_t rule_count() const { return rules_.size(); }

  // antecedent/consequent label indices of rule `r` (paper-table order)
  std::span<const std::uint32_t> rule_antecedents(std::size_t r) const {
    return resolved_[r].antecedents;
  }
  std::uint32_t rule_consequent(std::size_t r) const { return resolved_[r].consequent; }

  // Firing strength of an arbitrary rule against crisp inputs (clamped to
  // each variable's universe): the product of its antecedent degrees.
  double fire_rule(const FuzzyRule& rule, std::span<const double> values) const {
    if (rule.antecedents.size() != inputs_.size() || values.size() != inputs_.size())
      throw FuzzyConfigError("rule/input arity mismatch");
    double strength = 1.0;
    for (std::size_t i = 0; i < inputs_.size(); ++i) {
      const std::size_t li = inputs_[i].label_index(rule.antecedents[i]);
      strength *= inputs_[i].degree(li, inputs_[i].clamp(values[i]));
    }
    return strength;
  }

  struct Evaluation {
    std::vector<double> strengths;  // per rule, table order
    double output = 0.0;
  };

  double infer(std::span<const double> values) const { return evaluate(values).output; }

  Evaluation evaluate(std::span<const double> values) const {
    if (values.size() != inputs_.size())
      throw FuzzyConfigError("expected " + std::to_string(inputs_.size()) + " inputs");
    // one degree table per variable, then per-rule products
    std::vector<std::vector<double>> degrees(inputs_.size());
    for (std::size_t i = 0; i < inputs_.size(); ++i) {
      const double x = inputs_[i].clamp(values[i]);
      degrees[i].resize(inputs_[i].size());
      for (std::size_t l = 0; l < inputs_[i].size(); ++l)
        degrees[i][l] = inputs_[i].degree(l, x);
    }
    Evaluation ev;
    ev.strengths.resize(resolved_.size());
    double num = 0.0, den = 0.0;
    for (std::size_t r = 0; r < resolved_.size(); ++r) {
      double s = 1.0;
      for (std::size_t i = 0; i < inputs_.size(); ++i)
        s *= degrees[i][resolved_[r].antecedents[i]];
      ev.strengths[r] = s;
      num += s * output_.centroids[resolved_[r].consequent];
      den += s;
    }
    if (!(den > 0.0))
      throw NoRuleFiredError("no rule fired; input variables do not cover the given point");
    ev.output = num / den;
    return ev;
  }

  // Regular lattice of infer() values over two input universes. Rows are
  // (x1, x2, output) with x1 varying slowest. Two-input bases only.
  std::vector<std::array<double, 3>> surface_grid(std::size_t resolution) const {
    if (inputs_.size() != 2)
      throw FuzzyConfigError("surface_grid without a fixed input needs a 2-input base");
    return grid_impl(resolution, 0, 1, std::size_t(-1), 0.0);
  }

  // Same for a 3-input base with one input held at `fixed_value`.
  std::vector<std::array<double, 3>> surface_grid(std::size_t resolution,
                                                  std::size_t fixed_input,
                                                  double fixed_value) const {
    if (inputs_.size() != 3)
      throw FuzzyConfigError("surface_grid with a fixed input needs a 3-input base");
    if (fixed_input >= 3) throw FuzzyConfigError("fixed input index out of range");
    std::size_t free1 = fixed_input == 0 ? 1 : 0;
    std::size_t free2 = fixed_input == 2 ? 1 : 2;
    return grid_impl(resolution, free1, free2, fixed_input, fixed_value);
  }

 private:
  struct ResolvedRule {
    std::vector<std::uint32_t> antecedents;
    std::uint32_t consequent = 0;
  };

  std::vector<std::array<double, 3>> grid_impl(std::size_t resolution, std::size_t i1,
                                               std::size_t i2, std::size_t fixed,
                                               double fixed_value) const {
    if (resolution < 2) throw FuzzyConfigError("surface resolution must be at least 2");
    const auto& v1 = inputs_[i1];
    const auto& v2 = inputs_[i2];
    const double step1 = (v1.hi() - v1.lo()) / static_cast<double>(resolution - 1);
    const double step2 = (v2.hi() - v2.lo()) / static_cast<double>(resolution - 1);
    std::vector<std::array<double, 3>> rows;
    rows.reserve(resolution * resolution);
    std::vector<double> values(inputs_.size(), 0.0);
    if (fixed != std::size_t(-1)) values[fixed] = fixed_value;
    for (std::size_t a = 0; a < resolution; ++a) {
      values[i1] = v1.lo() + step1 * static_cast<double>(a);
      for (std::size_t b = 0; b < resolution; ++b) {
        values[i2] = v2.lo() + step2 * static_cast<double>(b);
        rows.push_back({values[i1], values[i2], infer(values)});
      }
    }
    return rows;
  }

  std::vector<LinguisticVariable> inputs_;
  OutputVariable output_;
  std::vector<FuzzyRule> rules_;
  std::vector<ResolvedRule> resolved_;
};

// True when consequent rank is monotone along input `axis` for every fixed
// combination of the other antecedents. Requires a total base. Label order
// within each variable provides the ranking.
inline bool rule_table_monotone(const RuleBase& rb, std::size_t axis, bool non_decreasing) {
  const std::size_t n_axis = rb.inputs()[axis].size();
  const std::size_t n_rules = rb.rule_count();
  // group rules by the non-axis antecedents
  std::vector<std::pair<std::vector<std::uint32_t>, std::pair<std::uint32_t, std::uint32_t>>> cells;
  cells.reserve(n_rules);
  for (std::size_t r = 0; r < n_rules; ++r) {
    auto ants = rb.rule_antecedents(r);
    std::vector<std::uint32_t> key;
    for (std::size_t i = 0; i < ants.size(); ++i)
      if (i != axis) key.push_back(ants[i]);
    cells.push_back({std::move(key), {ants[axis], rb.rule_consequent(r)}});
  }
  std::sort(cells.begin(), cells.end());
  for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
    if (cells[i].first != cells[i + 1].first) continue;
    // same cell, consecutive axis labels after the sort
    const auto lo = cells[i].second;
    const auto hi = cells[i + 1].second;
    (void)n_axis;
    if (non_decreasing ? hi.second < lo.second : hi.second > lo.second) return false;
  }
  return true;
}

}  // namespace wsnsim
