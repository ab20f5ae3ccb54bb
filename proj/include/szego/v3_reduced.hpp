#ifndef SZEGO_V3_REDUCED_HPP
#define SZEGO_V3_REDUCED_HPP

#include "szego/hardy.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstddef>
#include <optional>
#include <vector>

namespace szego {

/// u(z) = b + c z / (1 - p z), with |p| < 1, c != 0, c - b p != 0.
struct V3State {
    cplx b{};
    cplx c{1.0, 0.0};
    cplx p{};

    /// Throws INVALID_ARGUMENT outside the invariant set.
    void validate() const;
};

struct V3Derived {
    double Q = 0.0;
    double M = 0.0;
    cplx J{}; ///< (Q + |c| sqrt M) b + M c conj(p)
    cplx J_expanded{}; ///< the same quantity summed term by term
    double x = 0.0; ///< |c| sqrt M
    double psi = 0.0; ///< arg(b conj(c) p), 0 when b p = 0
    double Ecal = 0.0; ///< |J|^2
    double Ecal_angle = 0.0; ///< the same from (Q, M, x, psi)
    double dxdt = 0.0; ///< 2 x (Q+x) sqrt((Q-x)(M-x)) sin psi
};

V3Derived derive(const V3State& s);

/// (Q+x)^2 (Q-x) + x^2 (M-x) + 2 x (Q+x) sqrt((Q-x)(M-x)) cos psi.
double energy_from_angle(double Q, double M, double x, double psi);

/// Right side of the x-evolution law:
/// 4 x^2 (Q+x)^2 (Q-x)(M-x) - [(Q+x)^2 (Q-x) + x^2 (M-x) - E]^2.
double evolx_rhs(double Q, double M, double x, double Ecal);

/// Coefficients b, c p^{k-1}.
HardyCoefficients embed(const V3State& s, std::size_t trunc);

/// Reads (b, c, p) off the first three modes of u.
V3State v3_from_hardy(const HardyCoefficients& u);

/// (db/dt, dc/dt, dp/dt). Throws DEGENERATE if |p| > 1 - 1e-10 or |c| < 1e-14.
V3State v3_rhs(const V3State& s);

struct V3Trajectory {
    std::vector<double> times;
    std::vector<V3State> states;
    std::vector<V3Derived> derived;
    double step = 0.0; ///< signed step
    std::size_t stride = 1;
};

/// Classical RK4, snapshots every `stride` steps plus the last one.
/// Negative t_final integrates backwards.
V3Trajectory v3_integrate(const V3State& s0, double dt, double t_final, std::size_t stride = 1);

/// Max over interior snapshots of |(dx/dt)^2 - evolx_rhs| with dx/dt by
/// centered differences. Needs equally spaced snapshots.
double evolx_residual(const V3Trajectory& traj);

/// v_r: b = -2r/(1-r), c = p = sqrt r.
V3State v_r(double r);

/// u0^gamma: v_r with b rotated by exp(i gamma).
V3State v_r_perturbed(double r, double gamma);

struct InstabilityConfig {
    double r = 0.25;
    double gamma = 1e-2;
    double eps0 = 1e-2; ///< escape threshold is eps0 sqrt(M_r)
    double ball = 1e-2; ///< fixed radius reported next to the threshold
    double dt = 1e-4;
    double t_final = 50.0;
};

struct EscapeRecord {
    std::optional<double> exit_threshold; ///< |t| where |y| first exceeds eps0 sqrt(M_r)
    std::optional<double> exit_ball; ///< |t| where |y| first exceeds ball
    bool monotone = false; ///< |y| nondecreasing up to the last exit seen
    double max_abs_y = 0.0; ///< over the whole run
    double y_end = 0.0;
    double t_end = 0.0;
};

struct InstabilityReport {
    InstabilityConfig config;
    double Q_r = 0.0;
    double M_r = 0.0;
    double x_r = 0.0;
    cplx J_r{};
    double Ecal_r = 0.0;
    double delta_E = 0.0; ///< cancellation-free
    double delta_E_direct = 0.0; ///< E(u0^gamma) - E_r
    double coefficient = 0.0; ///< 16 r^4 (1+r)/(1-r)^5
    double second_coefficient = 0.0; ///< -64 r^7 (1+r)^2/(1-r)^9
    double predicted_dy2 = 0.0; ///< delta_E (coefficient - delta_E)
    double measured_dy = 0.0; ///< one-sided 5-point stencil
    double measured_dy2 = 0.0;
    double relative_error = 0.0;
    double threshold = 0.0; ///< eps0 sqrt(M_r)
    /// Roots of (dy/dt)^2 = G(y) nearest to 0 at the perturbed energy; |y|
    /// cannot leave [turning_low, turning_high] while Q, M, E are conserved.
    double turning_low = 0.0;
    double turning_high = 0.0;
    double linear_term_model = 0.0; ///< G'(0) at the perturbed energy
    double linear_term_fit = 0.0; ///< y-coefficient fitted on the simulated forward run
    EscapeRecord forward;
    EscapeRecord backward;
    bool escaped = false; ///< threshold crossed in some direction
};

/// Perturbs v_r, integrates both time directions and measures the growth of
/// y = x - x_r. Never throws NO_ESCAPE; see `escaped`.
InstabilityReport instability_probe(const InstabilityConfig& cfg);

/// instability_probe, throwing NO_ESCAPE if |y| stays below the threshold
/// both ways.
InstabilityReport instability_experiment(const InstabilityConfig& cfg);

/// G(y) = evolx_rhs(Q_r, M_r, x_r + y, E_r + delta_E) for u0^gamma.
double escape_potential(double r, double gamma, double y);

/// Measured (dy/dt)^2(0) at the given gamma and dt (no escape search).
double measured_initial_rate(double r, double gamma, double dt);

/// delta_E for u0^gamma, computed without cancellation.
double delta_energy(double r, double gamma);

struct GammaRefinement {
    double gamma = 0.0;
    double delta_E = 0.0;
    double delta_E_half = 0.0;
    double order = 0.0; ///< log2(delta_E / delta_E_half)
    double measured_ratio = 0.0; ///< (dy/dt)^2 at gamma over gamma/2
    double mismatch = 0.0; ///< |measured_ratio / (delta_E / delta_E_half) - 1|
};

GammaRefinement gamma_refinement(double r, double gamma, double dt);

void to_json(nlohmann::json& j, const V3State& s);
void from_json(const nlohmann::json& j, V3State& s);
void to_json(nlohmann::json& j, const InstabilityReport& report);
void to_json(nlohmann::json& j, const GammaRefinement& g);

} // namespace szego

#endif
