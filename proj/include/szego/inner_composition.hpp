#ifndef SZEGO_INNER_COMPOSITION_HPP
#define SZEGO_INNER_COMPOSITION_HPP

#include "szego/dynamics.hpp"
#include "szego/hardy.hpp"

#include <cstddef>

namespace szego {

/// u(z) -> u(z^N): mode k moves to kN, trunc becomes (trunc - 1) N + 1.
HardyCoefficients compose_zN(const HardyCoefficients& u, std::size_t n);

///
/// Integrates from u0 and from compose_zN(u0, N) and returns the largest L^2
/// gap between compose_zN(u(t), N) and the second solution over the shared
/// snapshots. cfg.trunc is the truncation of the undilated run; the dilated
/// run uses (cfg.trunc - 1) N + 1.
///
double verify_flow_commutation(const HardyCoefficients& u0, std::size_t n, const SimulationConfig& cfg);

} // namespace szego

#endif
