#ifndef SZEGO_DYNAMICS_HPP
#define SZEGO_DYNAMICS_HPP

#include "szego/hardy.hpp"

#include <cstddef>
#include <limits>
#include <vector>

namespace szego {

struct SimulationConfig {
    double dt = 1e-3; ///< step size, > 0
    double t_final = 1.0; ///< negative values integrate backwards
    std::size_t trunc = 256;
    std::size_t monitor_stride = 100; ///< snapshot every n steps
    double tol_drift = std::numeric_limits<double>::infinity();
    bool monitor_spectrum = true; ///< record K_u^2 eigenvalues at snapshots
    std::size_t spectrum_block = 0; ///< leading modes used for K_u^2 (0 = trunc)

    void validate() const;
};

/// Max relative deviation from t = 0 over the snapshots.
struct DriftReport {
    double Q = 0.0;
    double M = 0.0;
    double E = 0.0;

    double max() const noexcept;
};

struct TrajectoryRecord {
    std::vector<double> times; ///< strictly monotone, in the direction of t_final
    std::vector<HardyCoefficients> states;
    std::vector<ConservedTriple> invariants;
    std::vector<std::vector<double>> k2_spectra; ///< descending, empty if not monitored
    DriftReport drift;
    std::size_t steps = 0;
    double step = 0.0; ///< signed step actually used
};

/// du/dt = -i (2 J Pi(|u|^2) + conj(J) u^2), cut to trunc(u).
HardyCoefficients rhs(const HardyCoefficients& u);

/// Fixed-step classical RK4. The step is shrunk slightly so that an integer
/// number of steps lands on t_final. Throws DRIFT_EXCEEDED or NONFINITE.
TrajectoryRecord integrate(const HardyCoefficients& u0, const SimulationConfig& cfg);

/// One RK4 step of size h, keeping trunc(u).
HardyCoefficients rk4_step(const HardyCoefficients& u, double h);

/// Ranks (rank H_u, rank K_u) of the class V(d).
struct RankPair {
    std::size_t h = 0;
    std::size_t k = 0;
};

RankPair ranks_of_class(std::size_t d) noexcept;

/// True iff every snapshot has exactly the ranks of V(d): the leading
/// eigenvalues stay above `tol` and the rest stay below it (absolute).
/// `block` limits the eigen-solves to the leading modes (0 = all).
bool rank_conservation_check(const TrajectoryRecord& traj, std::size_t d, double tol = 1e-8,
                             std::size_t block = 0);

} // namespace szego

#endif
