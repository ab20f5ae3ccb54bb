#include "szego/inner_composition.hpp"

#include "szego/error.hpp"

#include <algorithm>

namespace szego {

HardyCoefficients compose_zN(const HardyCoefficients& u, std::size_t n)
{
    if (n == 0) {
        throw SzegoError(ErrorCode::InvalidArgument, "N must be positive");
    }
    std::vector<cplx> out((u.trunc() - 1) * n + 1);
    for (std::size_t k = 0; k < u.trunc(); ++k) {
        out[k * n] = u[k];
    }
    return HardyCoefficients(std::move(out));
}

double verify_flow_commutation(const HardyCoefficients& u0, std::size_t n, const SimulationConfig& cfg)
{
    SimulationConfig base = cfg;
    base.monitor_spectrum = false;
    SimulationConfig dilated = base;
    dilated.trunc = (cfg.trunc - 1) * n + 1;

    const TrajectoryRecord a = integrate(u0, base);
    const TrajectoryRecord b = integrate(compose_zN(u0, n), dilated);
    const std::size_t count = std::min(a.states.size(), b.states.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        worst = std::max(worst, l2_norm(compose_zN(a.states[i], n) - b.states[i]));
    }
    return worst;
}

} // namespace szego
