#include "szego/steady_states.hpp"

#include "szego/dynamics.hpp"
#include "szego/error.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <complex>
#include <numbers>

namespace szego {

namespace {

using ld = long double;
using lcplx = std::complex<long double>;

constexpr double kTailTolerance = 1e-16;
constexpr ld kPi = std::numbers::pi_v<long double>;

struct ConstantsL {
    ld constant;
    ld C;
    ld P;
    ld one_minus_P2;
};

// Transcribed as printed; the radicand 9 + 2cos2t - 2cos4t is >= 9 - 2 - 2.
ConstantsL constants_l(ld t)
{
    const ld c2 = std::cos(2 * t);
    const ld c4 = std::cos(4 * t);
    const ld s2 = 9 + 2 * c2 - 2 * c4;
    const ld s = std::sqrt(s2);
    const ld sqrt3 = std::sqrt(ld{3});
    const ld w = 1 + 2 * c2;
    return {-(2 * sqrt3 / 3) * std::sin(t), w * w / (3 * s), 4 * (2 + c2) * std::sin(t) / (sqrt3 * s),
            w * w * w / (3 * s2)};
}

} // namespace

void SteadyV3Params::validate() const
{
    if (!(theta >= 0.0) || !(theta < std::numbers::pi / 3.0)) {
        throw SzegoError(ErrorCode::InvalidArgument, "theta must lie in [0, pi/3)");
    }
    if (!std::isfinite(lambda) || !std::isfinite(a) || !std::isfinite(b_angle)) {
        throw SzegoError(ErrorCode::InvalidArgument, "non-finite steady parameters");
    }
}

SteadyConstants steady_constants(double theta)
{
    const ConstantsL k = constants_l(theta);
    return {static_cast<double>(k.constant), static_cast<double>(k.C), static_cast<double>(k.P),
            static_cast<double>(k.one_minus_P2)};
}

V3State steady_state_v3(const SteadyV3Params& params)
{
    params.validate();
    const SteadyConstants k = steady_constants(params.theta);
    if (!(std::abs(k.P) < 1.0)) {
        throw SzegoError(ErrorCode::PoleOutside, "|P| >= 1 at theta = " + std::to_string(params.theta));
    }
    const cplx phase_a = params.lambda * std::polar(1.0, params.a);
    const cplx phase_b = std::polar(1.0, params.b_angle);
    return {phase_a * k.constant, phase_a * k.C * phase_b, k.P * phase_b};
}

HardyCoefficients build_steady(const SteadyV3Params& params, std::size_t trunc)
{
    const V3State s = steady_state_v3(params);
    if (trunc < 2) {
        throw SzegoError(ErrorCode::TruncTooSmall, "steady states need at least two modes");
    }
    if (!(std::pow(std::abs(s.p), static_cast<double>(trunc - 1)) < kTailTolerance)) {
        throw SzegoError(ErrorCode::TruncTooSmall,
                         "pole modulus " + std::to_string(std::abs(s.p)) + " is not resolved by " +
                             std::to_string(trunc) + " modes");
    }
    return embed(s, trunc);
}

SteadyCheck steady_check(const HardyCoefficients& u, double tol)
{
    SteadyCheck out;
    const auto terms = nonlinear_terms(u);
    const cplx j = inner_product(terms.square, u);
    out.j_abs = std::abs(j);
    out.rhs_norm = l2_norm(rhs(u));
    out.scale = 2.0 * l2_norm(terms.abs2) + l2_norm(terms.square);
    out.steady_j = out.j_abs < tol;
    out.steady_rhs = out.rhs_norm <= tol * out.scale;
    out.agree = out.steady_j == out.steady_rhs;
    return out;
}

bool is_steady(const HardyCoefficients& u, double tol) { return steady_check(u, tol).steady_j; }

SteadyGridPoint steady_point(const SteadyV3Params& params, std::size_t max_trunc)
{
    params.validate();
    const ConstantsL k = constants_l(params.theta);
    if (!(std::abs(k.P) < 1)) {
        throw SzegoError(ErrorCode::PoleOutside, "|P| >= 1 at theta = " + std::to_string(params.theta));
    }
    const lcplx phase_a = static_cast<ld>(params.lambda) * std::polar(ld{1}, static_cast<ld>(params.a));
    const lcplx phase_b = std::polar(ld{1}, static_cast<ld>(params.b_angle));
    const lcplx b = phase_a * k.constant;
    const lcplx c = phase_a * k.C * phase_b;
    const lcplx p = k.P * phase_b;
    const ld q = k.one_minus_P2;
    const ld c2 = std::norm(c);

    const ld two = 2;
    const lcplx j = (std::norm(b) + two * c2 / q) * b + c2 / (q * q) * c * std::conj(p);
    const lcplx jb = std::conj(j);
    const lcplx i{0, 1};
    const lcplx db = -i * (b * b * jb + two * std::norm(b) * j + two * j * c2 / q);
    const lcplx dc = -i * (two * b * c * jb + two * std::conj(b) * c * j + two * j * p * c2 / q);
    const lcplx dp = -i * (c * jb);

    // du/dt = db + dc g1 + c dp g2 with g1 = z/(1-pz), g2 = z^2/(1-pz)^2:
    // (g1|g1) = 1/q, (g1|g2) = p/q^2, (g2|g2) = (1+|p|^2)/q^3, both orthogonal to 1.
    const lcplx e = c * dp;
    const ld norm2 = std::norm(db) + std::norm(dc) / q + 2 * std::real(dc * std::conj(e) * p) / (q * q) +
                     std::norm(e) * (1 + std::norm(p)) / (q * q * q);

    SteadyGridPoint out;
    out.theta = params.theta;
    out.P = static_cast<double>(k.P);
    out.j_abs = static_cast<double>(std::abs(j));
    out.rhs_norm = static_cast<double>(std::sqrt(std::max(norm2, ld{0})));

    const double abs_p = static_cast<double>(std::abs(p));
    std::size_t trunc = 2;
    if (abs_p > 0.0) {
        trunc = static_cast<std::size_t>(std::ceil(std::log(kTailTolerance) / std::log(abs_p))) + 2;
    }
    if (trunc <= max_trunc) {
        const SteadyCheck check = steady_check(build_steady(params, trunc), 0.0);
        out.j_abs_coeffs = check.j_abs;
        out.rhs_norm_coeffs = check.rhs_norm;
    }
    return out;
}

std::vector<SteadyGridPoint> steady_grid(std::size_t n, const SteadyV3Params& base, std::size_t max_trunc)
{
    std::vector<SteadyGridPoint> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        SteadyV3Params params = base;
        params.theta = static_cast<double>(static_cast<ld>(k) * (kPi / 3) / static_cast<ld>(n));
        out.push_back(steady_point(params, max_trunc));
    }
    return out;
}

void to_json(nlohmann::json& j, const SteadyGridPoint& p)
{
    j = nlohmann::json{{"theta", p.theta},
                       {"P", p.P},
                       {"J_abs", p.j_abs},
                       {"rhs_norm", p.rhs_norm},
                       {"J_abs_coeffs", p.j_abs_coeffs < 0 ? nlohmann::json(nullptr) : nlohmann::json(p.j_abs_coeffs)},
                       {"rhs_norm_coeffs",
                        p.rhs_norm_coeffs < 0 ? nlohmann::json(nullptr) : nlohmann::json(p.rhs_norm_coeffs)}};
}

void to_json(nlohmann::json& j, const SteadyCheck& c)
{
    j = nlohmann::json{{"J_abs", c.j_abs},        {"rhs_norm", c.rhs_norm},     {"scale", c.scale},
                       {"steady_J", c.steady_j}, {"steady_rhs", c.steady_rhs}, {"agree", c.agree}};
}

} // namespace szego
