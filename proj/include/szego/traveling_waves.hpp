#ifndef SZEGO_TRAVELING_WAVES_HPP
#define SZEGO_TRAVELING_WAVES_HPP

#include "szego/hardy.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstddef>
#include <utility>
#include <vector>

namespace szego {

enum class WaveFamily { I, II };

///
/// A traveling wave v(t, z) = exp(-i omega t) v0(z exp(-i c t)).
///
/// Family I:  v0 = lambda / (1 - p z^N)
/// Family II: v0 = -lambda (1+|p|^2)/(1-|p|^2) + lambda / (1 - p z^N)
///
/// omega and c are derived from (lambda, p, N) on construction and
/// never supplied by hand.
///
class TravelingWaveSpec {
public:
    /// Requires lambda != 0, 0 < |p| < 1, N >= 1.
    TravelingWaveSpec(WaveFamily family, cplx lambda, cplx p, std::size_t n);

    WaveFamily family() const noexcept { return family_; }
    cplx lambda() const noexcept { return lambda_; }
    cplx p() const noexcept { return p_; }
    std::size_t n() const noexcept { return n_; }
    double omega() const noexcept { return omega_; }
    double c() const noexcept { return c_; }

private:
    WaveFamily family_;
    cplx lambda_;
    cplx p_;
    std::size_t n_;
    double omega_ = 0.0;
    double c_ = 0.0;
};

/// Coefficients of v0. Throws TRUNC_TOO_SMALL unless the dropped geometric
/// tail |p|^(number of kept terms) is below 1e-16.
HardyCoefficients build_profile(const TravelingWaveSpec& spec, std::size_t trunc);

/// Smallest truncation accepted by build_profile.
std::size_t minimal_profile_trunc(const TravelingWaveSpec& spec);

/// L^2 norm of omega v0 + c D v0 - 2 J Pi(|v0|^2) - conj(J) v0^2, J = J(v0).
double residual_traveling(const HardyCoefficients& v0, double omega, double c);

/// L^2 norm of varpi u + D u - 2 Pi(|u|^2) - u^2.
double residual_profile(const HardyCoefficients& u, double varpi);

/// Coefficients u(k) exp(-i (omega + c k) t) of the exact orbit.
HardyCoefficients exact_orbit(const HardyCoefficients& v0, double omega, double c, double t);

/// u = N / (1 - alpha z^N), the normalized N-pole profile.
HardyCoefficients normalized_profile(cplx alpha, std::size_t n, std::size_t trunc);

/// varpi = N (3 - |alpha|^2) / (1 - |alpha|^2) for the normalized profile.
double normalized_varpi(cplx alpha, std::size_t n);

/// The N poles p with p^N = alpha: principal root times the N-th roots of
/// unity. Only alpha enters the profile, so the branch is immaterial.
std::vector<cplx> nth_roots(cplx alpha, std::size_t n);

/// An arc [begin, end) of the circle, angles in radians.
struct Arc {
    double begin = 0.0;
    double end = 0.0;
};

/// theta = 2 r / (1 - 4 r) for r in (0, 1/6).
double standing_theta(double r_minus);

/// Pi(1_B) / (1 + 2 theta) for B a finite union of disjoint arcs of total
/// normalized measure theta in (0, 1). Exact coefficients, no quadrature.
/// Throws MEASURE_MISMATCH if the arcs do not add up to theta within 1e-12.
HardyCoefficients standing_wave_arc(double theta, const std::vector<Arc>& arcs, std::size_t trunc);

/// max_{k < modes} |u(k) - [2 Pi(|u|^2) + u^2](k)|; modes <= trunc(u) / 4.
double verify_standing(const HardyCoefficients& u, std::size_t modes);

void to_json(nlohmann::json& j, const TravelingWaveSpec& spec);
TravelingWaveSpec traveling_wave_from_json(const nlohmann::json& j);

} // namespace szego

#endif
