#include "oracles.hpp"

#include "szego/error.hpp"
#include "szego/traveling_waves.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <numbers>
#include <random>

using namespace szego;

namespace {

constexpr double kPi = std::numbers::pi;

// Coefficient k of a function known on the circle, by trapezoid quadrature.
template <class F>
cplx quadrature_coeff(F f, long k, std::size_t n = 4096)
{
    std::vector<cplx> values(n);
    for (std::size_t j = 0; j < n; ++j) {
        values[j] = f(std::polar(1.0, 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n)));
    }
    return oracle::fourier(values, k);
}

// Residual of omega v + c D v - 2 J Pi(|v|^2) - conj(J) v^2 computed from
// grid values of v only (no coefficient products).
double grid_residual(const HardyCoefficients& v, double omega, double c, std::size_t n = 2048)
{
    const auto vals = oracle::grid(v, n);
    std::vector<cplx> mod2(n);
    std::vector<cplx> sq(n);
    for (std::size_t j = 0; j < n; ++j) {
        mod2[j] = std::norm(vals[j]);
        sq[j] = vals[j] * vals[j];
    }
    // J = (v^2 | v) as a mean over the circle.
    cplx j{};
    for (std::size_t i = 0; i < n; ++i) j += sq[i] * std::conj(vals[i]);
    j /= static_cast<double>(n);
    double acc = 0.0;
    for (std::size_t k = 0; k < v.trunc(); ++k) {
        const long kk = static_cast<long>(k);
        const cplx r = (omega + c * static_cast<double>(k)) * v[k] - 2.0 * j * oracle::fourier(mod2, kk) -
                       std::conj(j) * oracle::fourier(sq, kk);
        acc += std::norm(r);
    }
    return std::sqrt(acc);
}

} // namespace

TEST(WaveSpec, ClosedForms)
{
    const TravelingWaveSpec one(WaveFamily::I, 1.0, 0.5, 1);
    EXPECT_NEAR(one.omega(), 2.75 / (0.75 * 0.75 * 0.75), 1e-12);
    EXPECT_NEAR(one.omega(), 6.518519, 1e-6);
    EXPECT_NEAR(one.c(), 1.0 / (0.75 * 0.75), 1e-12);
    EXPECT_NEAR(one.c(), 1.777778, 1e-6);

    const TravelingWaveSpec two(WaveFamily::II, 2.0, cplx(0.0, 0.5), 3);
    const double p2 = 0.25;
    EXPECT_NEAR(two.omega(), 16.0 * p2 * p2 * (1 + 5 * p2) * (3 + 5 * p2) / std::pow(1 - p2, 4), 1e-12);
    EXPECT_NEAR(two.c(), -16.0 * p2 * p2 * (3 + 5 * p2) / (3.0 * std::pow(1 - p2, 3)), 1e-12);
    EXPECT_LT(two.c(), 0.0);
}

TEST(WaveSpec, Validation)
{
    EXPECT_THROW(TravelingWaveSpec(WaveFamily::I, 1.0, 0.0, 1), SzegoError);
    EXPECT_THROW(TravelingWaveSpec(WaveFamily::I, 1.0, 1.0, 1), SzegoError);
    EXPECT_THROW(TravelingWaveSpec(WaveFamily::I, 1.0, 0.5, 0), SzegoError);
    EXPECT_THROW(TravelingWaveSpec(WaveFamily::II, 0.0, 0.5, 1), SzegoError);
}

TEST(WaveSpec, JsonRoundTrip)
{
    const TravelingWaveSpec s(WaveFamily::II, cplx(1.0, -0.5), cplx(0.2, 0.3), 2);
    const nlohmann::json j = s;
    EXPECT_EQ(j.at("family"), "II");
    const auto back = traveling_wave_from_json(nlohmann::json::parse(j.dump()));
    EXPECT_EQ(back.family(), WaveFamily::II);
    EXPECT_EQ(back.lambda(), s.lambda());
    EXPECT_EQ(back.p(), s.p());
    EXPECT_EQ(back.n(), 2u);
    EXPECT_EQ(back.omega(), s.omega());
    nlohmann::json bad = j;
    bad["family"] = "III";
    EXPECT_THROW(traveling_wave_from_json(bad), SzegoError);
}

TEST(BuildProfile, FamilyIGeometric)
{
    const auto u = build_profile(TravelingWaveSpec(WaveFamily::I, 1.0, 0.5, 1), 64);
    for (std::size_t k = 0; k < 64; ++k) {
        EXPECT_DOUBLE_EQ(u[k].real(), std::pow(0.5, static_cast<double>(k)));
    }
}

TEST(BuildProfile, FamilyIIShiftsMean)
{
    const auto u = build_profile(TravelingWaveSpec(WaveFamily::II, 1.0, 0.5, 1), 64);
    EXPECT_NEAR(u[0].real(), -2.0 / 3.0, 1e-15);
    for (std::size_t k = 1; k < 64; ++k) {
        EXPECT_DOUBLE_EQ(u[k].real(), std::pow(0.5, static_cast<double>(k)));
    }
    // Quadrature of v0(z) = -(1+|p|^2)/(1-|p|^2) + 1/(1 - p z).
    for (long k = 0; k < 6; ++k) {
        const cplx expected = quadrature_coeff([](cplx z) { return -5.0 / 3.0 + 1.0 / (1.0 - 0.5 * z); }, k);
        EXPECT_NEAR(std::abs(u[static_cast<std::size_t>(k)] - expected), 0.0, 1e-13);
    }
}

TEST(BuildProfile, DilatedSupport)
{
    const auto u = build_profile(TravelingWaveSpec(WaveFamily::I, 1.0, 0.5, 3), 256);
    for (std::size_t k = 0; k < 256; ++k) {
        if (k % 3 != 0) {
            EXPECT_EQ(u[k], cplx{});
        } else {
            EXPECT_DOUBLE_EQ(u[k].real(), std::pow(0.5, static_cast<double>(k / 3)));
        }
    }
}

TEST(BuildProfile, TruncTooSmall)
{
    const TravelingWaveSpec s(WaveFamily::I, 1.0, 0.8, 3);
    try {
        build_profile(s, 256);
        FAIL();
    } catch (const SzegoError& e) {
        EXPECT_EQ(e.code(), ErrorCode::TruncTooSmall);
    }
    const std::size_t m = minimal_profile_trunc(s);
    EXPECT_NO_THROW(build_profile(s, m));
    EXPECT_THROW(build_profile(s, m - 1), SzegoError);
}

TEST(ResidualTraveling, BothFamiliesAgainstGridOracle)
{
    for (auto family : {WaveFamily::I, WaveFamily::II}) {
        for (std::size_t n : {1u, 2u}) {
            const TravelingWaveSpec s(family, 1.0, 0.5, n);
            const auto v0 = build_profile(s, 256);
            EXPECT_LT(residual_traveling(v0, s.omega(), s.c()), 1e-10);
            EXPECT_LT(grid_residual(v0.resized(96), s.omega(), s.c()), 1e-10);
        }
    }
}

TEST(ResidualTraveling, ConstantAndAntiTest)
{
    EXPECT_EQ(residual_traveling({1.0}, 3.0, 17.0), 0.0);
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 5; ++trial) {
        const auto v = oracle::random_state(rng, 32);
        const double r = residual_traveling(v, 1.0, 1.0);
        EXPECT_GT(r, 0.1);
        EXPECT_NEAR(r, grid_residual(v, 1.0, 1.0, 256), 1e-10 * std::max(1.0, r));
    }
}

TEST(ResidualTraveling, ParameterSweep)
{
    for (auto family : {WaveFamily::I, WaveFamily::II}) {
        for (double lambda : {0.5, 1.0, 2.0}) {
            for (double p : {0.2, 0.5, 0.8}) {
                for (std::size_t n : {1u, 2u, 3u}) {
                    const TravelingWaveSpec s(family, lambda, p, n);
                    const auto v0 = build_profile(s, std::max<std::size_t>(256, minimal_profile_trunc(s)));
                    const double scale = std::max(1.0, std::abs(s.omega()) * l2_norm(v0));
                    EXPECT_LT(residual_traveling(v0, s.omega(), s.c()), 1e-9 * scale)
                        << (family == WaveFamily::I ? "I" : "II") << " " << lambda << " " << p << " " << n;
                }
            }
        }
    }
}

TEST(ResidualTraveling, SmallPoleLimit)
{
    const TravelingWaveSpec s(WaveFamily::I, cplx(0.6, 0.3), 1e-8, 1);
    const auto v0 = build_profile(s, 8);
    EXPECT_LT(residual_traveling(v0, s.omega(), s.c()), 1e-12);
    EXPECT_NEAR(std::abs(v0[0] - cplx(0.6, 0.3)), 0.0, 0.0);
}

TEST(ResidualProfile, Examples)
{
    EXPECT_LT(residual_profile(oracle::geometric(1.0, 0.6, 256), 4.125), 1e-12);
    // beta + 1/(1 - z/2) with beta = -5/3, varpi = -3.
    auto u = oracle::geometric(1.0, 0.5, 256);
    u += HardyCoefficients{-5.0 / 3.0};
    EXPECT_LT(residual_profile(u, -3.0), 1e-12);
    EXPECT_EQ(residual_profile(HardyCoefficients(4), 1.7), 0.0);
    // (beta) relation: beta = (varpi - 2N)/3 with N = 1.
    EXPECT_NEAR(-5.0 / 3.0, (-3.0 - 2.0) / 3.0, 1e-15);
}

TEST(NormalizedProfile, MeanAndVarpi)
{
    for (std::size_t n : {1u, 2u, 3u}) {
        const cplx alpha{0.3, 0.2};
        const auto u = normalized_profile(alpha, n, 256);
        EXPECT_EQ(u[0], cplx(static_cast<double>(n)));
        const double varpi = normalized_varpi(alpha, n);
        EXPECT_LT(residual_profile(u, varpi), 1e-12);
        const auto c = conserved(u);
        const double nn = static_cast<double>(n);
        EXPECT_NEAR(varpi * nn, 2.0 * c.Q + nn * nn, 1e-10);
    }
}

TEST(NthRoots, PowersGiveAlpha)
{
    const cplx alpha{-0.2, 0.35};
    const auto roots = nth_roots(alpha, 4);
    ASSERT_EQ(roots.size(), 4u);
    for (const auto& r : roots) {
        EXPECT_NEAR(std::abs(std::pow(r, 4) - alpha), 0.0, 1e-15);
    }
    EXPECT_THROW(nth_roots(alpha, 0), SzegoError);
}

TEST(ExactOrbit, PhaseLaw)
{
    const auto v0 = oracle::geometric(1.0, 0.5, 4);
    const auto v = exact_orbit(v0, 2.0, 0.5, 1.5);
    for (std::size_t k = 0; k < 4; ++k) {
        EXPECT_NEAR(std::abs(v[k] - v0[k] * std::polar(1.0, -(2.0 + 0.5 * static_cast<double>(k)) * 1.5)), 0.0,
                    1e-15);
    }
}

TEST(Standing, ThetaFromRadius)
{
    EXPECT_NEAR(standing_theta(0.1), 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(standing_theta(0.125), 0.5, 1e-15);
    EXPECT_THROW(standing_theta(1.0 / 6.0), SzegoError);
    EXPECT_THROW(standing_theta(0.0), SzegoError);
}

TEST(Standing, SingleArcCoefficients)
{
    const double theta = 0.25;
    const auto u = standing_wave_arc(theta, {Arc{0.0, 2.0 * kPi * theta}}, 64);
    EXPECT_NEAR(u[0].real(), 1.0 / 6.0, 1e-15);
    for (std::size_t k = 1; k < 64; ++k) {
        const double kk = static_cast<double>(k);
        const cplx expected = (1.0 - std::polar(1.0, -2.0 * kPi * kk * theta)) / (cplx(0.0, 2.0 * kPi * kk) * 1.5);
        EXPECT_NEAR(std::abs(u[k] - expected), 0.0, 1e-15);
    }
    // Quadrature of the indicator at arc-aligned nodes (midpoint values at the ends).
    const std::size_t n = 1 << 14;
    std::vector<cplx> ind(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double x = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n);
        ind[j] = x < 2.0 * kPi * theta ? 1.0 : 0.0;
    }
    ind[0] = 0.5;
    ind[n / 4] = 0.5;
    for (long k = 1; k < 6; ++k) {
        EXPECT_NEAR(std::abs(u[static_cast<std::size_t>(k)] - oracle::fourier(ind, k) / 1.5), 0.0, 1e-8);
    }
}

TEST(Standing, TwoArcsAreLinear)
{
    const std::vector<Arc> both{{0.1, 0.1 + kPi * 0.2}, {3.0, 3.0 + kPi * 0.3}};
    const auto u = standing_wave_arc(0.25, both, 32);
    const auto a = standing_wave_arc(0.1, {both[0]}, 32);
    const auto b = standing_wave_arc(0.15, {both[1]}, 32);
    // Single-arc outputs carry their own 1/(1+2 theta); undo the scaling.
    for (std::size_t k = 0; k < 32; ++k) {
        const cplx sum = a[k] * 1.2 + b[k] * 1.3;
        EXPECT_NEAR(std::abs(u[k] * 1.5 - sum), 0.0, 1e-15);
    }
}

TEST(Standing, Validation)
{
    const auto measure_error = [] {
        try {
            standing_wave_arc(0.25, {Arc{0.0, 1.0}}, 16);
        } catch (const SzegoError& e) {
            return e.code();
        }
        return ErrorCode::InvalidArgument;
    };
    EXPECT_EQ(measure_error(), ErrorCode::MeasureMismatch);
    EXPECT_THROW(standing_wave_arc(1.0, {Arc{0.0, 2.0 * kPi}}, 16), SzegoError);
    EXPECT_THROW(standing_wave_arc(0.2, {Arc{0.0, 0.8 * kPi}, Arc{0.5, 0.5 + 0.2 * kPi}}, 16), SzegoError);
}

TEST(Standing, ResidualSmallAndHalving)
{
    const std::vector<Arc> arc{{0.0, 2.0 * kPi * 0.25}};
    const double r8 = verify_standing(standing_wave_arc(0.25, arc, 8192), 16);
    const double r16 = verify_standing(standing_wave_arc(0.25, arc, 16384), 16);
    EXPECT_LT(r8, 1e-3);
    EXPECT_GT(r8 / r16, 1.8);
}

TEST(Standing, TrivialCases)
{
    EXPECT_EQ(verify_standing({0.0}, 1), 0.0);
    EXPECT_NEAR(verify_standing({1.0 / 3.0}, 1), 0.0, 1e-16);
    EXPECT_THROW(verify_standing(HardyCoefficients(16), 5), SzegoError);
}
