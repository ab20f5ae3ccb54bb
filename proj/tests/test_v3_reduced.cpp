#include "oracles.hpp"

#include "szego/dynamics.hpp"
#include "szego/error.hpp"
#include "szego/v3_reduced.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace szego;

namespace {

V3State random_admissible(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> radius(0.0, 0.9);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    V3State s;
    s.b = {unit(rng), unit(rng)};
    s.c = {unit(rng), unit(rng)};
    s.p = std::polar(radius(rng), angle(rng));
    return s;
}

} // namespace

TEST(V3State, Validation)
{
    EXPECT_NO_THROW((V3State{0.0, 1.0, 0.5}.validate()));
    EXPECT_THROW((V3State{0.0, 1.0, 1.0}.validate()), SzegoError);
    EXPECT_THROW((V3State{0.0, 0.0, 0.5}.validate()), SzegoError);
    EXPECT_THROW((V3State{2.0, 1.0, 0.5}.validate()), SzegoError); // c = b p
}

TEST(Derived, MatchesHardyRepresentation)
{
    std::mt19937_64 rng(81);
    for (int trial = 0; trial < 20; ++trial) {
        const V3State s = random_admissible(rng);
        const V3Derived d = derive(s);
        const auto u = embed(s, 512);
        const auto c = conserved(u);
        EXPECT_NEAR(d.Q, c.Q, 1e-12 * c.Q);
        EXPECT_NEAR(d.M, c.M, 1e-12 * std::max(1.0, c.M));
        EXPECT_NEAR(std::abs(d.J - c.J), 0.0, 1e-12 * std::max(1.0, std::abs(c.J)));
        EXPECT_NEAR(std::abs(d.J - oracle::functional_j(u.resized(160))), 0.0, 1e-9 * std::max(1.0, std::abs(c.J)));
    }
}

TEST(Derived, EnergyIdentityOnManyStates)
{
    std::mt19937_64 rng(83);
    for (int trial = 0; trial < 10000; ++trial) {
        const V3State s = random_admissible(rng);
        const V3Derived d = derive(s);
        const double scale = std::max(1.0, d.Ecal);
        ASSERT_NEAR(d.Ecal, d.Ecal_angle, 1e-12 * scale);
        ASSERT_NEAR(std::abs(d.J - d.J_expanded), 0.0, 1e-12 * std::max(1.0, std::abs(d.J)));
        ASSERT_GE(d.x, 0.0);
        ASSERT_LE(d.x, std::min(d.Q, d.M) * (1.0 + 1e-14));
    }
}

TEST(Derived, PsiConvention)
{
    EXPECT_EQ(derive({0.0, 1.0, 0.5}).psi, 0.0);
    EXPECT_EQ(derive({1.0, 1.0, 0.0}).psi, 0.0);
    EXPECT_NEAR(derive(v_r(0.25)).psi, std::numbers::pi, 1e-15);
}

TEST(Embed, RoundTrip)
{
    const V3State s{cplx(0.3, 0.1), cplx(1.0, -0.2), cplx(0.4, 0.1)};
    const auto u = embed(s, 32);
    EXPECT_EQ(u[0], s.b);
    EXPECT_EQ(u[1], s.c);
    EXPECT_NEAR(std::abs(u[3] - s.c * s.p * s.p), 0.0, 1e-16);
    const V3State back = v3_from_hardy(u);
    EXPECT_NEAR(std::abs(back.p - s.p), 0.0, 1e-15);
    EXPECT_THROW(v3_from_hardy({1.0, 0.0, 0.0}), SzegoError);
}

TEST(Rhs, MonomialIsSteady)
{
    const V3State d = v3_rhs({0.0, 1.0, 0.0});
    EXPECT_EQ(d.b, cplx{});
    EXPECT_EQ(d.c, cplx{});
    EXPECT_EQ(d.p, cplx{});
}

TEST(Rhs, VrPoleSpeed)
{
    const V3State s = v_r(0.25);
    EXPECT_NEAR(s.b.real(), -2.0 / 3.0, 1e-15);
    EXPECT_NEAR(s.c.real(), 0.5, 1e-15);
    const V3State d = v3_rhs(s);
    EXPECT_NEAR(std::abs(d.p), 0.314815, 1e-6);
    EXPECT_NEAR(std::abs(d.p), 0.5 * 17.0 / 27.0, 1e-14); // |c| |J_r|, J_r = -17/27
}

TEST(Rhs, MatchesFullFlowThroughEmbedding)
{
    // d/dt embed(s) = rhs(embed(s)) coefficientwise, using the chain rule:
    // mode 0: db, mode k >= 1: dc p^{k-1} + c (k-1) p^{k-2} dp.
    std::mt19937_64 rng(89);
    for (int trial = 0; trial < 10; ++trial) {
        const V3State s = random_admissible(rng);
        const V3State d = v3_rhs(s);
        const auto full = rhs(embed(s, 400));
        EXPECT_NEAR(std::abs(full[0] - d.b), 0.0, 1e-11);
        for (std::size_t k = 1; k < 20; ++k) {
            const double kk = static_cast<double>(k);
            const cplx chain = d.c * std::pow(s.p, kk - 1.0) +
                               (k >= 2 ? s.c * (kk - 1.0) * std::pow(s.p, kk - 2.0) * d.p : cplx{});
            EXPECT_NEAR(std::abs(full[k] - chain), 0.0, 1e-10) << k;
        }
    }
}

TEST(Rhs, Degenerate)
{
    try {
        v3_rhs({0.0, 1.0, 1.0 - 1e-12});
        FAIL();
    } catch (const SzegoError& e) {
        EXPECT_EQ(e.code(), ErrorCode::Degenerate);
    }
    EXPECT_THROW(v3_rhs({1.0, 1e-15, 0.2}), SzegoError);
}

TEST(Integrate, TravelingWaveKeepsXAndPsi)
{
    const auto traj = v3_integrate(v_r(0.25), 1e-3, 10.0, 100);
    for (const auto& d : traj.derived) {
        EXPECT_NEAR(d.x, 1.0 / 3.0, 1e-8);
        EXPECT_NEAR(std::abs(d.psi), std::numbers::pi, 1e-6);
    }
}

TEST(Integrate, MonomialFixedPoint)
{
    const auto traj = v3_integrate({0.0, 1.0, 0.0}, 1e-2, 1.0);
    EXPECT_EQ(traj.states.back().c, cplx(1.0));
    EXPECT_EQ(traj.states.back().p, cplx{});
}

TEST(Integrate, ConservationOverLongRun)
{
    const V3State s{cplx(0.3, 0.1), 1.0, 0.4};
    const auto traj = v3_integrate(s, 1e-4, 10.0, 1000);
    const auto& d0 = traj.derived.front();
    for (const auto& d : traj.derived) {
        EXPECT_NEAR(d.Q, d0.Q, 1e-10 * d0.Q);
        EXPECT_NEAR(d.M, d0.M, 1e-10 * d0.M);
        EXPECT_NEAR(d.Ecal, d0.Ecal, 1e-10 * d0.Ecal);
    }
}

TEST(Integrate, AgreesWithFullFlow)
{
    const V3State s{cplx(0.3, 0.1), 1.0, 0.4};
    SimulationConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_final = 2.0;
    cfg.trunc = 256;
    cfg.monitor_stride = 100;
    cfg.monitor_spectrum = false;
    const auto pde = integrate(embed(s, 256), cfg);
    const auto ode = v3_integrate(s, 1e-3, 2.0, 100);
    ASSERT_EQ(pde.states.size(), ode.states.size());
    for (std::size_t i = 0; i < ode.states.size(); ++i) {
        EXPECT_LT(l2_norm(pde.states[i] - embed(ode.states[i], 256)), 1e-6);
    }
}

TEST(Integrate, DxdtFormulaMatchesDifferences)
{
    const V3State s{cplx(0.3, 0.1), 1.0, 0.4};
    const auto traj = v3_integrate(s, 1e-4, 0.5, 1);
    for (std::size_t i = 1; i + 1 < traj.derived.size(); i += 500) {
        const double fd = (traj.derived[i + 1].x - traj.derived[i - 1].x) / 2e-4;
        EXPECT_NEAR(fd, traj.derived[i].dxdt, 1e-7);
    }
}

TEST(EvolX, ResidualAndScaling)
{
    const V3State s{cplx(0.3, 0.1), 1.0, 0.4};
    const double fine = evolx_residual(v3_integrate(s, 1e-4, 2.0));
    const double coarse = evolx_residual(v3_integrate(s, 2e-4, 2.0));
    EXPECT_LT(fine, 1e-5);
    EXPECT_NEAR(coarse / fine, 4.0, 0.4);
}

TEST(EvolX, TravelingWaveAndSteady)
{
    EXPECT_LT(evolx_residual(v3_integrate(v_r(0.25), 1e-4, 1.0, 10)), 1e-6);
    EXPECT_LT(evolx_residual(v3_integrate({0.0, 1.0, 0.0}, 1e-3, 0.1)), 1e-10);
    EXPECT_THROW(evolx_residual(v3_integrate(v_r(0.25), 1e-3, 1e-3)), SzegoError);
}

TEST(Instability, PerturbationKeepsQAndM)
{
    const V3Derived a = derive(v_r(0.25));
    const V3Derived b = derive(v_r_perturbed(0.25, 0.3));
    EXPECT_NEAR(a.Q, b.Q, 1e-15);
    EXPECT_NEAR(a.M, b.M, 1e-15);
    EXPECT_NEAR(a.Q, 7.0 / 9.0, 1e-15);
    EXPECT_NEAR(a.M, 4.0 / 9.0, 1e-15);
    EXPECT_NEAR(a.J.real(), -17.0 / 27.0, 1e-15);
    for (double g : {1e-3, 0.1, 1.0, 1.5}) {
        EXPECT_GT(delta_energy(0.25, g), 0.0);
        EXPECT_NEAR(delta_energy(0.25, g), derive(v_r_perturbed(0.25, g)).Ecal - a.Ecal, 1e-12);
    }
}

TEST(Instability, InitialRateMatchesPrediction)
{
    InstabilityConfig cfg;
    cfg.gamma = 1e-2;
    cfg.t_final = 5.0;
    const auto rep = instability_probe(cfg);
    EXPECT_NEAR(rep.coefficient, 0.329218, 1e-6);
    EXPECT_NEAR(rep.second_coefficient, -64.0 * std::pow(0.25, 7) * 1.5625 / std::pow(0.75, 9), 1e-15);
    EXPECT_GT(rep.delta_E, 0.0);
    EXPECT_LT(rep.relative_error, 0.05);
    EXPECT_LT(rep.measured_dy, 0.0); // psi starts just past pi, so x decreases forward
}

TEST(Instability, BoundedOscillationBetweenTurningPoints)
{
    // Q, M and E fix x on the level set (dx/dt)^2 = G(x); x oscillates between
    // the two roots of G around x_r, whose distance to x_r shrinks with gamma.
    InstabilityConfig cfg;
    cfg.gamma = 1e-2;
    cfg.t_final = 20.0;
    cfg.dt = 1e-3;
    const auto rep = instability_probe(cfg);
    EXPECT_FALSE(rep.escaped);
    EXPECT_LT(rep.turning_low, 0.0);
    EXPECT_GT(rep.turning_high, 0.0);
    EXPECT_NEAR(rep.forward.max_abs_y, -rep.turning_low, 1e-6);
    EXPECT_NEAR(escape_potential(0.25, 1e-2, rep.turning_low), 0.0, 1e-12);
    // The y-linear term is proportional to delta_E, not the constant of the
    // leading-order expansion.
    EXPECT_NEAR(rep.linear_term_fit, rep.linear_term_model, 1e-3 * std::abs(rep.linear_term_model));
    EXPECT_LT(std::abs(rep.linear_term_model), 1e-3 * std::abs(rep.second_coefficient));
    try {
        instability_experiment(cfg);
        FAIL() << "expected NO_ESCAPE";
    } catch (const SzegoError& e) {
        EXPECT_EQ(e.code(), ErrorCode::NoEscape);
    }
}

TEST(Instability, LargerPerturbationEscapesMonotonically)
{
    InstabilityConfig cfg;
    cfg.gamma = 0.1;
    cfg.t_final = 10.0;
    cfg.dt = 1e-3;
    const auto rep = instability_experiment(cfg);
    ASSERT_TRUE(rep.forward.exit_ball.has_value());
    EXPECT_TRUE(rep.forward.monotone);
    EXPECT_LT(*rep.forward.exit_threshold, *rep.forward.exit_ball);
    EXPECT_LT(rep.forward.y_end, 0.0);
}

TEST(Instability, GammaRefinementOrderTwo)
{
    const auto g = gamma_refinement(0.25, 1e-2, 1e-4);
    EXPECT_NEAR(g.order, 2.0, 1e-3);
    EXPECT_LT(g.mismatch, 0.05);
}

TEST(Instability, ZeroPerturbationStaysPut)
{
    const auto traj = v3_integrate(v_r_perturbed(0.25, 0.0), 1e-3, 5.0, 100);
    for (const auto& d : traj.derived) {
        EXPECT_NEAR(d.x, 1.0 / 3.0, 1e-10);
    }
    EXPECT_EQ(delta_energy(0.25, 0.0), 0.0);
    InstabilityConfig cfg;
    cfg.gamma = 0.0;
    EXPECT_THROW(instability_probe(cfg), SzegoError);
}

TEST(Json, V3StateRoundTrip)
{
    const V3State s{cplx(0.3, 0.1), cplx(1.0, -2.0), cplx(0.4, 0.2)};
    const nlohmann::json j = s;
    const auto back = j.get<V3State>();
    EXPECT_EQ(back.b, s.b);
    EXPECT_EQ(back.c, s.c);
    EXPECT_EQ(back.p, s.p);
}
