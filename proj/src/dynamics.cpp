#include "szego/dynamics.hpp"

#include "fft_products.hpp"
#include "szego/error.hpp"
#include "szego/operators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace szego {

namespace {

constexpr cplx kI{0.0, 1.0};

void rhs_into(std::span<const cplx> u, std::vector<cplx>& out, std::vector<cplx>& abs2,
              std::vector<cplx>& square)
{
    detail::quadratic_terms(u, abs2, square);
    cplx j{};
    for (std::size_t k = 0; k < u.size(); ++k) {
        j += square[k] * std::conj(u[k]);
    }
    out.resize(u.size());
    const cplx two_j = 2.0 * j;
    const cplx j_bar = std::conj(j);
    for (std::size_t k = 0; k < u.size(); ++k) {
        out[k] = -kI * (two_j * abs2[k] + j_bar * square[k]);
    }
}

// Scratch buffers for one trajectory.
class Rk4 {
public:
    explicit Rk4(std::size_t n) : k1_(n), k2_(n), k3_(n), k4_(n), stage_(n) {}

    void step(std::vector<cplx>& u, double h)
    {
        const std::size_t n = u.size();
        rhs_into(u, k1_, abs2_, square_);
        for (std::size_t i = 0; i < n; ++i) {
            stage_[i] = u[i] + 0.5 * h * k1_[i];
        }
        rhs_into(stage_, k2_, abs2_, square_);
        for (std::size_t i = 0; i < n; ++i) {
            stage_[i] = u[i] + 0.5 * h * k2_[i];
        }
        rhs_into(stage_, k3_, abs2_, square_);
        for (std::size_t i = 0; i < n; ++i) {
            stage_[i] = u[i] + h * k3_[i];
        }
        rhs_into(stage_, k4_, abs2_, square_);
        for (std::size_t i = 0; i < n; ++i) {
            u[i] += h / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
        }
    }

private:
    std::vector<cplx> k1_, k2_, k3_, k4_, stage_, abs2_, square_;
};

double relative_change(double now, double start)
{
    const double ref = std::abs(start);
    return ref > 0.0 ? std::abs(now - start) / ref : std::abs(now - start);
}

} // namespace

void SimulationConfig::validate() const
{
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw SzegoError(ErrorCode::InvalidArgument, "dt must be positive");
    }
    if (!std::isfinite(t_final)) {
        throw SzegoError(ErrorCode::InvalidArgument, "t_final must be finite");
    }
    if (trunc == 0) {
        throw SzegoError(ErrorCode::InvalidArgument, "trunc must be positive");
    }
    if (monitor_stride < 1) {
        throw SzegoError(ErrorCode::InvalidArgument, "monitor_stride must be at least 1");
    }
}

double DriftReport::max() const noexcept { return std::max({Q, M, E}); }

HardyCoefficients rhs(const HardyCoefficients& u)
{
    std::vector<cplx> out;
    std::vector<cplx> abs2;
    std::vector<cplx> square;
    rhs_into(u.coeffs(), out, abs2, square);
    return HardyCoefficients(std::move(out));
}

HardyCoefficients rk4_step(const HardyCoefficients& u, double h)
{
    std::vector<cplx> state(u.coeffs().begin(), u.coeffs().end());
    Rk4 stepper(state.size());
    stepper.step(state, h);
    return HardyCoefficients(std::move(state));
}

TrajectoryRecord integrate(const HardyCoefficients& u0, const SimulationConfig& cfg)
{
    cfg.validate();
    if (u0.tail_max(cfg.trunc) > 0.0) {
        throw SzegoError(ErrorCode::TruncTooSmall,
                         "initial state has modes beyond the simulation truncation");
    }
    std::vector<cplx> state(cfg.trunc);
    std::copy(u0.coeffs().begin(), u0.coeffs().begin() + static_cast<std::ptrdiff_t>(std::min(u0.trunc(), cfg.trunc)),
              state.begin());

    const double span = std::abs(cfg.t_final);
    const auto steps = static_cast<std::size_t>(std::ceil(span / cfg.dt - 1e-9));
    const double h = steps == 0 ? 0.0 : cfg.t_final / static_cast<double>(steps);

    TrajectoryRecord record;
    record.steps = steps;
    record.step = h;

    ConservedTriple start;
    auto snapshot = [&](std::size_t n) {
        HardyCoefficients u(state);
        const ConservedTriple inv = conserved(u);
        if (record.times.empty()) {
            start = inv;
        }
        record.drift.Q = std::max(record.drift.Q, relative_change(inv.Q, start.Q));
        record.drift.M = std::max(record.drift.M, relative_change(inv.M, start.M));
        record.drift.E = std::max(record.drift.E, relative_change(inv.E, start.E));
        record.times.push_back(static_cast<double>(n) * h);
        if (cfg.monitor_spectrum && cfg.trunc >= 2) {
            record.k2_spectra.push_back(k2_eigenvalues(u, cfg.spectrum_block));
        }
        record.invariants.push_back(inv);
        record.states.push_back(std::move(u));
        if (record.drift.max() > cfg.tol_drift) {
            throw SzegoError(ErrorCode::DriftExceeded,
                             "invariant drift " + std::to_string(record.drift.max()) +
                                 " exceeds " + std::to_string(cfg.tol_drift) + " at t = " +
                                 std::to_string(record.times.back()));
        }
    };

    snapshot(0);
    Rk4 stepper(cfg.trunc);
    for (std::size_t n = 1; n <= steps; ++n) {
        stepper.step(state, h);
        const bool finite = std::all_of(state.begin(), state.end(), [](const cplx& c) {
            return std::isfinite(c.real()) && std::isfinite(c.imag());
        });
        if (!finite) {
            throw SzegoError(ErrorCode::NonFinite,
                             "state became non-finite at t = " + std::to_string(static_cast<double>(n) * h));
        }
        if (n % cfg.monitor_stride == 0 || n == steps) {
            snapshot(n);
        }
    }
    return record;
}

RankPair ranks_of_class(std::size_t d) noexcept
{
    const std::size_t half = d / 2;
    return d % 2 == 0 ? RankPair{half, half} : RankPair{half + 1, half};
}

bool rank_conservation_check(const TrajectoryRecord& traj, std::size_t d, double tol,
                             std::size_t block)
{
    const RankPair expected = ranks_of_class(d);
    auto matches = [&](const std::vector<double>& eigs, std::size_t rank) {
        for (std::size_t i = 0; i < eigs.size(); ++i) {
            const bool above = eigs[i] > tol;
            if (above != (i < rank)) {
                return false;
            }
        }
        return eigs.size() >= rank;
    };
    for (const auto& state : traj.states) {
        const HardyCoefficients padded = state.trunc() < 2 ? state.resized(2) : state;
        if (!matches(h2_eigenvalues(padded, block), expected.h) ||
            !matches(k2_eigenvalues(padded, block), expected.k)) {
            return false;
        }
    }
    return true;
}

} // namespace szego
