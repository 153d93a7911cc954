#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "wsnsim/geometry.hpp"
#include "wsnsim/network.hpp"
#include "wsnsim/radio.hpp"

namespace wsnsim {

// One cluster for one round; members never include the head.
struct ClusterGroup {
  NodeId ch = 0;
  std::vector<NodeId> members;
};

// Per-round energy drain split by accounting category, joules.
struct DebitBreakdown {
  double announcement_rx = 0.0;  // every alive node hearing the round's broadcasts
  double announcement_tx = 0.0;  // head-announced protocols only
  double association = 0.0;      // membership requests + head receptions
  double tdma = 0.0;             // slot-schedule broadcast per head
  double member_data = 0.0;      // member -> head data transmissions
  double head_rx = 0.0;          // head receptions of member data
  double aggregation = 0.0;
  double head_to_sink = 0.0;     // aggregated payload, head -> BS or head -> relay
  double relay_forward = 0.0;    // store-and-forward rx+tx at relays
  double direct_fallback = 0.0;  // rounds with no head at all

  double total() const {
    return announcement_rx + announcement_tx + association + tdma + member_data +
           head_rx + aggregation + head_to_sink + relay_forward + direct_fallback;
  }
};

enum class AnnouncementModel {
  SinkBroadcast,  // BS announces the heads; one rx per alive node
  HeadBroadcast,  // each head announces itself; heads pay tx, all alive nodes hear each
};

// Size of the aggregated payload a head forwards for itself plus n_members
// member signals, floored at one whole packet.
inline std::uint64_t compressed_bits(std::uint32_t n_members, std::uint32_t data_bits,
                                     double ratio) {
  const double raw = ratio * (static_cast<double>(n_members) + 1.0) * data_bits;
  // tiny slack so exact products like 0.05*22*4000 do not ceil one bit up
  const auto bits = static_cast<std::uint64_t>(std::ceil(raw - 1e-9));
  return std::max<std::uint64_t>(bits, data_bits);
}

namespace detail {

inline const std::pair<NodeId, NodeId>* find_relay(
    std::span<const std::pair<NodeId, NodeId>> relay_map, NodeId ch) {
  for (const auto& e : relay_map)
    if (e.first == ch) return &e;
  return nullptr;
}

}  // namespace detail

// Shared association + data-phase ledger. `clusters` and `relay_map` are
// fixed for the round; debits follow cluster order, members in ascending id.
// Baseline protocols pass an empty relay map and HeadBroadcast.
inline DebitBreakdown charge_round(std::vector<Node>& nodes,
                                   std::span<const ClusterGroup> clusters,
                                   std::span<const std::pair<NodeId, NodeId>> relay_map,
                                   std::span<const NodeId> participants,
                                   const BaseStation& bs, const RadioParams& radio,
                                   double compression_ratio, AnnouncementModel model) {
  DebitBreakdown d;
  const double d0 = radio.d0();

  // announcement
  const double bcasts =
      model == AnnouncementModel::SinkBroadcast ? 1.0 : static_cast<double>(clusters.size());
  for (NodeId id : participants)
    d.announcement_rx += nodes[id].debit(bcasts * rx_energy(radio, radio.info_bits));
  if (model == AnnouncementModel::HeadBroadcast) {
    for (const auto& g : clusters) {
      double reach = 0.0;
      for (NodeId m : g.members)
        reach = std::max(reach, euclidean(nodes[m].position(), nodes[g.ch].position()));
      d.announcement_tx += nodes[g.ch].debit(tx_energy(radio, radio.info_bits, reach));
    }
  }

  // association: members request membership, the head receives each request
  for (const auto& g : clusters) {
    const Point2D ch_pos = nodes[g.ch].position();
    for (NodeId m : g.members) {
      d.association += nodes[m].debit(
          tx_energy(radio, radio.info_bits, euclidean(nodes[m].position(), ch_pos)));
      d.association += nodes[g.ch].debit(rx_energy(radio, radio.info_bits));
    }
  }

  // TDMA schedule, one broadcast per head at its cluster radius
  for (const auto& g : clusters) {
    if (g.members.empty()) continue;
    double radius = 0.0;
    for (NodeId m : g.members)
      radius = std::max(radius, euclidean(nodes[m].position(), nodes[g.ch].position()));
    d.tdma += nodes[g.ch].debit(tx_energy(radio, radio.info_bits, radius));
  }

  // data phase
  for (const auto& g : clusters) {
    const Point2D ch_pos = nodes[g.ch].position();
    for (NodeId m : g.members) {
      d.member_data += nodes[m].debit(
          tx_energy(radio, radio.data_bits, euclidean(nodes[m].position(), ch_pos)));
      d.head_rx += nodes[g.ch].debit(rx_energy(radio, radio.data_bits));
    }
    d.aggregation += nodes[g.ch].debit(aggregation_energy(
        radio, radio.data_bits, static_cast<double>(g.members.size()) + 1.0));

    const auto fwd_bits = static_cast<double>(
        compressed_bits(static_cast<std::uint32_t>(g.members.size()), radio.data_bits,
                        compression_ratio));
    const auto* relay = detail::find_relay(relay_map, g.ch);
    if (relay == nullptr) {
      d.head_to_sink +=
          nodes[g.ch].debit(tx_energy(radio, fwd_bits, euclidean(ch_pos, bs.position)));
      continue;
    }

    // first hop to the relay, then store-and-forward; a relay that is itself
    // past the threshold chains one level deeper, cycle-checked, and the
    // final carrier always transmits to the BS
    NodeId carrier = relay->second;
    d.head_to_sink += nodes[g.ch].debit(
        tx_energy(radio, fwd_bits, euclidean(ch_pos, nodes[carrier].position())));
    d.relay_forward += nodes[carrier].debit(rx_energy(radio, fwd_bits));
    const auto* next = detail::find_relay(relay_map, carrier);
    if (next != nullptr && next->second != g.ch &&
        euclidean(nodes[carrier].position(), bs.position) >= d0) {
      const NodeId second = next->second;
      d.relay_forward += nodes[carrier].debit(tx_energy(
          radio, fwd_bits,
          euclidean(nodes[carrier].position(), nodes[second].position())));
      d.relay_forward += nodes[second].debit(rx_energy(radio, fwd_bits));
      d.relay_forward += nodes[second].debit(
          tx_energy(radio, fwd_bits, euclidean(nodes[second].position(), bs.position)));
    } else {
      d.relay_forward += nodes[carrier].debit(
          tx_energy(radio, fwd_bits, euclidean(nodes[carrier].position(), bs.position)));
    }
  }

  return d;
}

// Fallback for head-less rounds: every alive node sends its packet straight
// to the base station.
inline DebitBreakdown charge_direct_round(std::vector<Node>& nodes,
                                          std::span<const NodeId> participants,
                                          const BaseStation& bs, const RadioParams& radio) {
  DebitBreakdown d;
  for (NodeId id : participants)
    d.direct_fallback += nodes[id].debit(
        tx_energy(radio, radio.data_bits, euclidean(nodes[id].position(), bs.position)));
  return d;
}

}  // namespace wsnsim
