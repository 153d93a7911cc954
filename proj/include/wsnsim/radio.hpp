#pragma once

#include <cmath>
#include <cstdint>

namespace wsnsim {

// First-order radio dissipation model with a free-space (d^2) amplifier below
// the crossover distance d0 and a multipath (d^4) amplifier at or above it.
// All energies are joules, distances meters, message sizes bits.
struct RadioParams {
  double e_elec = 50e-9;       // J/bit, transmit/receive electronics
  double eps_fs = 10e-12;      // J/bit/m^2, free-space amplifier
  double eps_amp = 0.0013e-12; // J/bit/m^4, multipath amplifier
  double e_da = 5e-9;          // J/bit/signal, aggregation cost
  std::uint32_t data_bits = 4000;
  std::uint32_t info_bits = 100;

  double d0() const { return std::sqrt(eps_fs / eps_amp); }
};

inline double threshold_d0(const RadioParams& p) { return p.d0(); }

// Energy to transmit `bits` over distance `d`. The two amplifier regimes
// agree at d0 (eps_fs*d0^2 == eps_amp*d0^4), so the curve is continuous.
inline double tx_energy(const RadioParams& p, double bits, double d) {
  const double d2 = d * d;
  const double amp = d < p.d0() ? p.eps_fs * d2 : p.eps_amp * d2 * d2;
  return (p.e_elec + amp) * bits;
}

inline double rx_energy(const RadioParams& p, double bits) {
  return p.e_elec * bits;
}

inline double aggregation_energy(const RadioParams& p, double bits, double n_signals) {
  return p.e_da * bits * n_signals;
}

}  // namespace wsnsim
