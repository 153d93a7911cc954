#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "wsnsim/geometry.hpp"
#include "wsnsim/kmeans.hpp"
#include "wsnsim/radio.hpp"
#include "wsnsim/rng.hpp"

namespace wsnsim {

enum class NodeClass : std::uint8_t { Normal, Advanced, Super };

inline std::string_view node_class_name(NodeClass c) {
  switch (c) {
    case NodeClass::Normal: return "normal";
    case NodeClass::Advanced: return "advanced";
    default: return "super";
  }
}

// Initial energies per class, joules. Normal <= Advanced <= Super.
struct ClassEnergies {
  double normal = 0.5;
  double advanced = 1.0;
  double super = 1.5;

  double of(NodeClass c) const {
    switch (c) {
      case NodeClass::Normal: return normal;
      case NodeClass::Advanced: return advanced;
      default: return super;
    }
  }
};

// Three-level heterogeneity: mf is the fraction of nodes with extra energy,
// mp the fraction of those that are super. e is the extra-energy multiplier
// used by the closed-form total; per-class energies are set explicitly.
struct HeterogeneityConfig {
  std::uint32_t n = 100;
  double mf = 1.0;
  double mp = 0.6;
  double e = 1.0;
  double e_o = 0.5;
};

struct ClassCounts {
  std::uint32_t normal = 0;
  std::uint32_t advanced = 0;
  std::uint32_t super = 0;
};

// Class sizes: floor the normal and advanced counts, give the remainder to
// the super class so the three always sum to n.
inline ClassCounts partition(const HeterogeneityConfig& cfg) {
  ClassCounts c;
  const double n = static_cast<double>(cfg.n);
  c.normal = static_cast<std::uint32_t>(std::floor(n * (1.0 - cfg.mf)));
  c.advanced = static_cast<std::uint32_t>(std::floor(n * cfg.mf * (1.0 - cfg.mp)));
  c.super = cfg.n - c.normal - c.advanced;
  return c;
}

// A sensor node. Residual energy is kept as initial minus the cumulative
// debit so the conservation ledger closes exactly; a debit that would
// overdraw the budget clamps at empty and the node counts as dead from the
// next round on.
class Node {
 public:
  Node(NodeId id, Point2D position, NodeClass cls, double initial_energy)
      : id_(id), position_(position), cls_(cls), initial_(initial_energy) {}

  NodeId id() const { return id_; }
  Point2D position() const { return position_; }
  NodeClass node_class() const { return cls_; }
  double initial_energy() const { return initial_; }
  double energy() const { return std::max(0.0, initial_ - spent_); }
  bool alive() const { return energy() > 0.0; }
  double cumulative_debit() const { return spent_; }

  // Drains up to `amount` joules; returns what was actually drained.
  double debit(double amount) {
    assert(amount >= 0.0);
    const double available = initial_ - spent_;
    if (available <= 0.0) return 0.0;
    if (amount >= available) {
      spent_ = initial_;
      return available;
    }
    spent_ += amount;
    return amount;
  }

 private:
  NodeId id_;
  Point2D position_;
  NodeClass cls_;
  double initial_;
  double spent_ = 0.0;
};

struct BaseStation {
  Point2D position;
};

struct FieldSize {
  double width = 100.0;
  double height = 100.0;
};

// Uniform random deployment; node ids are 0..n-1 and classes follow the
// partition in id order (normal first, then advanced, then super).
inline std::vector<Node> deploy(const HeterogeneityConfig& het, const ClassEnergies& energies,
                                FieldSize field, Rng& rng) {
  const ClassCounts counts = partition(het);
  std::vector<Node> nodes;
  nodes.reserve(het.n);
  for (std::uint32_t i = 0; i < het.n; ++i) {
    const double x = rng.uniform(0.0, field.width);
    const double y = rng.uniform(0.0, field.height);
    NodeClass cls = NodeClass::Super;
    if (i < counts.normal)
      cls = NodeClass::Normal;
    else if (i < counts.normal + counts.advanced)
      cls = NodeClass::Advanced;
    nodes.emplace_back(i, Point2D{x, y}, cls, energies.of(cls));
  }
  return nodes;
}

struct TotalEnergy {
  double actual = 0.0;       // sum over deployed nodes
  double closed_form = 0.0;  // N*E_o*(1 + mf*(2 + mp*e)), for comparison
};

inline TotalEnergy total_initial_energy(std::span<const Node> nodes,
                                        const HeterogeneityConfig& het) {
  TotalEnergy t;
  long double sum = 0.0L;
  for (const auto& n : nodes) sum += n.initial_energy();
  t.actual = static_cast<double>(sum);
  t.closed_form = static_cast<double>(het.n) * het.e_o * (1.0 + het.mf * (2.0 + het.mp * het.e));
  return t;
}

inline double total_residual_energy(std::span<const Node> nodes) {
  long double sum = 0.0L;
  for (const auto& n : nodes) sum += n.energy();
  return static_cast<double>(sum);
}

inline double total_cumulative_debit(std::span<const Node> nodes) {
  long double sum = 0.0L;
  for (const auto& n : nodes) sum += n.cumulative_debit();
  return static_cast<double>(sum);
}

// One-off network-formation report: every node sends an info message with
// its position and energy level to the base station. Returns the total
// energy drained.
inline double formation_cost(std::vector<Node>& nodes, const BaseStation& bs,
                             const RadioParams& radio) {
  double total = 0.0;
  for (auto& n : nodes)
    total += n.debit(tx_energy(radio, radio.info_bits, euclidean(n.position(), bs.position)));
  return total;
}

}  // namespace wsnsim
