#include "oracles.hpp"

#include "szego/error.hpp"
#include "szego/inner_composition.hpp"
#include "szego/v3_reduced.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace szego;

TEST(Compose, ModesMove)
{
    const HardyCoefficients u({1.0, 2.0, 3.0});
    const auto v = compose_zN(u, 3);
    ASSERT_EQ(v.trunc(), 7u);
    EXPECT_EQ(v[0], cplx(1.0));
    EXPECT_EQ(v[3], cplx(2.0));
    EXPECT_EQ(v[6], cplx(3.0));
    EXPECT_EQ(v[1], cplx{});
    EXPECT_TRUE(approx_equal(compose_zN(u, 1), u, 0.0));
    EXPECT_THROW(compose_zN(u, 0), SzegoError);
}

TEST(Compose, PointwiseOnCircle)
{
    std::mt19937_64 rng(103);
    const auto u = oracle::random_state(rng, 12);
    const auto v = compose_zN(u, 2);
    for (double x : {0.1, 1.3, 2.9}) {
        const cplx z = std::polar(1.0, x);
        EXPECT_NEAR(std::abs(evaluate(v, z) - evaluate(u, z * z)), 0.0, 1e-13);
    }
}

TEST(Compose, IsometryAndFunctionals)
{
    std::mt19937_64 rng(107);
    for (std::size_t n : {2u, 3u, 5u}) {
        const auto u = oracle::random_state(rng, 20);
        const auto v = compose_zN(u, n);
        const auto cu = conserved(u);
        const auto cv = conserved(v);
        EXPECT_NEAR(cv.Q, cu.Q, 1e-14 * cu.Q);
        EXPECT_NEAR(cv.M, static_cast<double>(n) * cu.M, 1e-13 * cv.M);
        EXPECT_NEAR(std::abs(cv.J - cu.J), 0.0, 1e-13 * std::abs(cu.J));
        EXPECT_NEAR(std::abs(oracle::functional_j(v) - cu.J), 0.0, 1e-12 * std::abs(cu.J));
    }
}

TEST(Compose, RhsCommutes)
{
    std::mt19937_64 rng(109);
    const auto u = oracle::random_state(rng, 16);
    const auto lhs = rhs(compose_zN(u, 3));
    const auto rhs_composed = compose_zN(rhs(u), 3);
    EXPECT_LT(l2_norm(lhs - rhs_composed), 1e-13 * l2_norm(lhs));
}

TEST(Compose, FlowCommutes)
{
    SimulationConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_final = 1.0;
    cfg.trunc = 128;
    cfg.monitor_stride = 100;
    const auto u0 = embed({cplx(0.3, 0.1), 1.0, 0.4}, 128);
    EXPECT_LT(verify_flow_commutation(u0, 2, cfg), 1e-10);
    EXPECT_LT(verify_flow_commutation(u0, 3, cfg), 1e-10);
}
