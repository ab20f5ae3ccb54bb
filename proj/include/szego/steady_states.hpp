#ifndef SZEGO_STEADY_STATES_HPP
#define SZEGO_STEADY_STATES_HPP

#include "szego/hardy.hpp"
#include "szego/v3_reduced.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstddef>
#include <vector>

namespace szego {

/// lambda e^{ia} (-(2 sqrt3 / 3) sin theta + C z e^{ib} / (1 - P z e^{ib})).
struct SteadyV3Params {
    double lambda = 1.0;
    double a = 0.0;
    double b_angle = 0.0;
    double theta = 0.0; ///< in [0, pi/3)

    void validate() const;
};

/// The three real constants of the family at a given theta.
struct SteadyConstants {
    double constant = 0.0; ///< -(2 sqrt3 / 3) sin theta
    double C = 0.0; ///< (1 + 2cos2t)^2 / (3 sqrt(9 + 2cos2t - 2cos4t))
    double P = 0.0; ///< 4 (2 + cos2t) sin t / (sqrt3 sqrt(9 + 2cos2t - 2cos4t))
    double one_minus_P2 = 0.0; ///< (1 + 2cos2t)^3 / (3 (9 + 2cos2t - 2cos4t)), no cancellation
};

SteadyConstants steady_constants(double theta);

V3State steady_state_v3(const SteadyV3Params& params);

/// Coefficients of the steady state. Throws POLE_OUTSIDE if |P| >= 1 and
/// TRUNC_TOO_SMALL if |P|^(trunc-1) >= 1e-16.
HardyCoefficients build_steady(const SteadyV3Params& params, std::size_t trunc);

struct SteadyCheck {
    double j_abs = 0.0;
    double rhs_norm = 0.0;
    double scale = 0.0; ///< 2 |Pi(|u|^2)| + |u^2|
    bool steady_j = false; ///< |J| < tol
    bool steady_rhs = false; ///< |rhs| <= tol * scale
    bool agree = false;
};

SteadyCheck steady_check(const HardyCoefficients& u, double tol);

/// |J(u)| < tol.
bool is_steady(const HardyCoefficients& u, double tol);

struct SteadyGridPoint {
    double theta = 0.0;
    double P = 0.0;
    double j_abs = 0.0; ///< closed form, extended precision
    double rhs_norm = 0.0; ///< exact L^2 norm of du/dt, extended precision
    double j_abs_coeffs = -1.0; ///< from coefficients when resolvable, else -1
    double rhs_norm_coeffs = -1.0;
};

/// |J| and |rhs| for one member, evaluated on the reduced V(3) coordinates in
/// long double. Near theta = pi/3 the pole approaches the circle and no
/// affordable truncation resolves u; this path stays exact there.
SteadyGridPoint steady_point(const SteadyV3Params& params, std::size_t max_trunc = 1 << 14);

/// theta_k = k (pi/3) / n, k = 0..n-1.
std::vector<SteadyGridPoint> steady_grid(std::size_t n, const SteadyV3Params& base,
                                         std::size_t max_trunc = 1 << 14);

void to_json(nlohmann::json& j, const SteadyGridPoint& p);
void to_json(nlohmann::json& j, const SteadyCheck& c);

} // namespace szego

#endif
