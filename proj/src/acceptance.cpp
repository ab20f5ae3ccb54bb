#include "szego/acceptance.hpp"

#include "szego/dynamics.hpp"
#include "szego/error.hpp"
#include "szego/hardy.hpp"
#include "szego/inner_composition.hpp"
#include "szego/io.hpp"
#include "szego/operators.hpp"
#include "szego/parallel.hpp"
#include "szego/steady_states.hpp"
#include "szego/traveling_waves.hpp"
#include "szego/v3_reduced.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <utility>

namespace szego {

namespace {

using Json = nlohmann::json;

struct Outcome {
    bool pass = false;
    std::string detail;
    Json metrics = Json::object();
};

std::string fmt(const char* format, double a)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, format, a);
    return buf;
}

std::string sci(double a)
{
    return fmt("%.2e", a);
}

/// c0 + sum a_i p_i^k.
HardyCoefficients rational(const std::vector<std::pair<cplx, cplx>>& terms, cplx c0, std::size_t trunc)
{
    std::vector<cplx> v(trunc);
    v[0] = c0;
    for (const auto& [a, p] : terms) {
        cplx t = a;
        for (auto& x : v) {
            x += t;
            t *= p;
        }
    }
    return HardyCoefficients(std::move(v));
}

SimulationConfig config(double dt, double t_final, std::size_t trunc, std::size_t stride)
{
    SimulationConfig cfg;
    cfg.dt = dt;
    cfg.t_final = t_final;
    cfg.trunc = trunc;
    cfg.monitor_stride = stride;
    cfg.monitor_spectrum = false;
    return cfg;
}

const V3State kV3Data{cplx(0.3, 0.1), 1.0, 0.4};

// Closed forms written out again so the check does not reuse the library's.
std::pair<double, double> closed_form(WaveFamily f, double lam, double p, double n)
{
    const double l4 = std::pow(lam, 4);
    const double q = 1.0 - p * p;
    if (f == WaveFamily::I) {
        return {l4 * (3.0 - p * p) / (q * q * q), l4 / (n * q * q)};
    }
    const double p2 = p * p;
    const double p4 = p2 * p2;
    return {l4 * p4 * (1.0 + 5.0 * p2) * (3.0 + 5.0 * p2) / (q * q * q * q),
            -l4 * p4 * (3.0 + 5.0 * p2) / (n * q * q * q)};
}

Outcome traveling_waves(const AcceptanceOptions&)
{
    Outcome o;
    double worst_res = 0.0;
    double worst_rel = 0.0;
    double worst_form = 0.0;
    std::size_t cases = 0;
    for (WaveFamily f : {WaveFamily::I, WaveFamily::II}) {
        for (double lam : {0.5, 1.0}) {
            for (double p : {0.2, 0.5, 0.8}) {
                for (std::size_t n : {1u, 2u, 3u}) {
                    const TravelingWaveSpec spec(f, lam, p, n);
                    const std::size_t trunc = p >= 0.8 ? 1024 : 256;
                    const auto v0 = build_profile(spec, trunc);
                    const double res = residual_traveling(v0, spec.omega(), spec.c());
                    const auto [w, c] = closed_form(f, lam, p, static_cast<double>(n));
                    worst_form = std::max({worst_form, std::abs(w - spec.omega()) / std::max(1.0, std::abs(w)),
                                           std::abs(c - spec.c()) / std::max(1.0, std::abs(c))});
                    worst_res = std::max(worst_res, res);
                    const double scale = (std::abs(spec.omega()) + std::abs(spec.c())) * l2_norm(v0);
                    worst_rel = std::max(worst_rel, res / scale);
                    ++cases;
                }
            }
        }
    }
    const TravelingWaveSpec ex(WaveFamily::I, 1.0, 0.5, 1);
    const bool example = std::abs(ex.omega() - 176.0 / 27.0) < 1e-12 && std::abs(ex.c() - 16.0 / 9.0) < 1e-12;
    o.pass = worst_res < 1e-9 && worst_form < 1e-12 && example;
    o.detail = std::to_string(cases) + " cases, max residual " + sci(worst_res) + ", closed forms " +
               sci(worst_form) + ", example omega=" + fmt("%.6f", ex.omega()) + " c=" + fmt("%.6f", ex.c());
    o.metrics = {{"cases", cases},
                 {"max_residual", worst_res},
                 {"max_relative_residual", worst_rel},
                 {"closed_form_error", worst_form},
                 {"example_omega", ex.omega()},
                 {"example_c", ex.c()}};
    return o;
}

Outcome exact_orbit_check(const AcceptanceOptions& opts)
{
    Outcome o;
    const double t_final = opts.quick ? 1.0 : 5.0;
    const TravelingWaveSpec spec(WaveFamily::I, 1.0, 0.5, 1);
    const auto v0 = build_profile(spec, 256);
    const auto traj = integrate(v0, config(1e-3, t_final, 256, 100));
    double gap = 0.0;
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        gap = std::max(gap, l2_norm(traj.states[i] - exact_orbit(v0, spec.omega(), spec.c(), traj.times[i])));
    }
    o.pass = gap < 1e-6;
    o.detail = "max L2 gap " + sci(gap) + " over [0, " + fmt("%g", t_final) + "]";
    o.metrics = {{"gap", gap}, {"t_final", t_final}, {"snapshots", traj.states.size()}};
    return o;
}

Outcome conservation(const AcceptanceOptions& opts)
{
    Outcome o;
    const double t_final = opts.quick ? 2.0 : 10.0;
    const auto traj = integrate(embed(kV3Data, 512), config(1e-3, t_final, 512, 100));
    o.pass = traj.drift.max() < 1e-8;
    o.detail = "relative drift Q " + sci(traj.drift.Q) + ", M " + sci(traj.drift.M) + ", E " +
               sci(traj.drift.E) + " over [0, " + fmt("%g", t_final) + "]";
    o.metrics = traj.drift;
    o.metrics["t_final"] = t_final;
    return o;
}

Outcome lax(const AcceptanceOptions&)
{
    Outcome o;
    const std::vector<std::vector<std::pair<cplx, cplx>>> symbols = {
        {{1.0, 0.9}},
        {{1.0, cplx(0.0, 0.92)}},
        {{0.5, 0.93}, {0.3, cplx(-0.2, 0.1)}},
        {{1.0, -0.94}},
        {{0.7, cplx(0.6, 0.7)}},
    };
    double worst_block = 0.0;
    double worst_ratio = std::numeric_limits<double>::infinity();
    bool decreasing = true;
    Json rows = Json::array();
    for (const auto& s : symbols) {
        const auto coarse = verify_lax(rational(s, 0.2, 256), 64);
        const auto fine = verify_lax(rational(s, 0.2, 512), 64);
        worst_block = std::max({worst_block, coarse.k_block, coarse.h_block});
        const double before = std::max(coarse.k_full, coarse.h_full);
        const double after = std::max(fine.k_full, fine.h_full);
        // Once the full residual sits at round-off there is nothing left to halve.
        const bool ok = after < 1e-12 || before >= 4.0 * after;
        decreasing = decreasing && ok;
        if (after >= 1e-12) {
            worst_ratio = std::min(worst_ratio, before / after);
        }
        rows.push_back({{"M256", coarse}, {"M512", fine}});
    }
    o.pass = worst_block < 1e-9 && decreasing;
    o.detail = "5 symbols, block residual " + sci(worst_block) + ", full residual shrink per doubling >= " +
               (std::isinf(worst_ratio) ? std::string("round-off") : fmt("%.3g", worst_ratio));
    o.metrics = {{"max_block_residual", worst_block}, {"symbols", rows}};
    return o;
}

Outcome integrability(const AcceptanceOptions& opts)
{
    Outcome o;
    const double t_final = opts.quick ? 1.0 : 5.0;
    const auto u = rational({{1.0, 0.5}, {cplx(0.4, 0.3), cplx(-0.3, 0.4)}}, 0.0, 512);
    SimulationConfig cfg = config(1e-3, t_final, 512, 250);
    cfg.monitor_spectrum = true;
    cfg.spectrum_block = 256;
    const auto traj = integrate(u, cfg);
    double drift = 0.0;
    double off = 0.0;
    const auto& first = traj.k2_spectra.front();
    for (const auto& s : traj.k2_spectra) {
        for (std::size_t i = 0; i < 2; ++i) {
            drift = std::max(drift, std::abs(s[i] - first[i]));
        }
        off = std::max(off, s[2]);
    }
    const bool ranks = rank_conservation_check(traj, 4, 1e-8, 256);
    o.pass = drift < 1e-6 && off < 1e-8 && ranks;
    o.detail = "V(4) K^2 eigenvalue drift " + sci(drift) + ", off-rank " + sci(off) + ", ranks " +
               (ranks ? "preserved" : "changed");
    o.metrics = {{"k2_drift", drift}, {"off_rank", off}, {"ranks_preserved", ranks},
                 {"k2_initial", {first[0], first[1]}}, {"t_final", t_final}};
    return o;
}

Outcome spectral(const AcceptanceOptions&)
{
    Outcome o;
    double worst = 0.0;
    bool ladders = true;
    Json rows = Json::array();
    for (std::size_t n : {1u, 2u, 3u}) {
        const cplx alpha = 0.4;
        const auto u = normalized_profile(alpha, n, 256);
        const double varpi = normalized_varpi(alpha, n);
        const auto rep = verify_au_minus_d(u, varpi, 1e-10);
        double r = std::max({rep.mass_identity_residual, residual_profile(u, varpi),
                             verify_syst_pl(nth_roots(alpha, n), varpi)});
        for (const auto& s : rep.sigmas) {
            r = std::max({r, s.eigen_residual, s.parallel_residual, s.mean_identity_residual});
            ladders = ladders && s.ladder_ok;
        }
        worst = std::max(worst, r);
        rows.push_back(rep);
    }
    o.pass = worst < 1e-10 && ladders;
    o.detail = "N=1,2,3 alpha=0.4, max residual " + sci(worst) + ", ladders " + (ladders ? "ok" : "broken");
    o.metrics = {{"max_residual", worst}, {"reports", rows}};
    return o;
}

Outcome gagliardo(const AcceptanceOptions& opts)
{
    Outcome o;
    const auto rep = gn_sweep(opts.quick ? 1000 : 10000, 100, opts.seed, 32, opts.jobs);
    o.pass = rep.violations == 0 && rep.equality_max_dev < 1e-12;
    o.detail = std::to_string(rep.samples) + " states, " + std::to_string(rep.violations) +
               " violations, max E/bound " + fmt("%.6f", rep.worst_ratio) + ", equality dev " +
               sci(rep.equality_max_dev) + " (seed " + std::to_string(rep.seed) + ")";
    o.metrics = rep;
    return o;
}

Outcome instability(const AcceptanceOptions& opts)
{
    Outcome o;
    InstabilityConfig cfg;
    cfg.t_final = opts.quick ? 10.0 : 50.0;
    const auto small = instability_probe(cfg);
    InstabilityConfig larger = cfg;
    larger.gamma = 0.1;
    larger.t_final = 10.0;
    const auto big = instability_probe(larger);
    const auto refine = gamma_refinement(cfg.r, cfg.gamma, cfg.dt);

    const bool rate = small.relative_error < 0.05;
    // At gamma = 1e-2 the conserved quantities pin x between two turning
    // points about 2e-3 from x_r, so |y| cannot reach 1e-2. Accept that case
    // only when the run shows exactly this bounded oscillation, and require
    // the exit at gamma = 0.1 instead.
    const bool bounded = !small.escaped &&
                         std::abs(small.forward.max_abs_y -
                                  std::max(-small.turning_low, small.turning_high)) < 1e-3 * small.threshold &&
                         std::max(-small.turning_low, small.turning_high) < cfg.ball;
    const bool big_exit = big.forward.exit_ball.has_value() || big.backward.exit_ball.has_value();
    const bool escape = small.escaped || (bounded && big_exit);
    const bool refined = refine.mismatch < 0.05 && std::abs(refine.order - 2.0) < 0.05;
    o.pass = rate && escape && refined;
    std::string esc;
    if (small.escaped) {
        esc = "exit at gamma=1e-2";
    } else {
        esc = "no exit at gamma=1e-2 (bounded, max|y| " + sci(small.forward.max_abs_y) + " = turning point)";
        if (big_exit) {
            const double t = big.forward.exit_ball ? *big.forward.exit_ball : *big.backward.exit_ball;
            esc += ", exit at gamma=0.1 t=" + fmt("%.3g", t);
        }
    }
    o.detail = "(dy/dt)^2(0) rel err " + sci(small.relative_error) + ", " + esc + ", delta_E order " +
               fmt("%.4f", refine.order) + " mismatch " + sci(refine.mismatch);
    o.metrics = {{"gamma_small", small}, {"gamma_large", big}, {"refinement", refine},
                 {"bounded_at_small_gamma", bounded}};
    return o;
}

Outcome v3_consistency(const AcceptanceOptions&)
{
    Outcome o;
    const auto pde = integrate(embed(kV3Data, 512), config(1e-3, 2.0, 512, 100));
    const auto ode = v3_integrate(kV3Data, 1e-3, 2.0, 100);
    double gap = 0.0;
    for (std::size_t i = 0; i < ode.states.size() && i < pde.states.size(); ++i) {
        gap = std::max(gap, l2_norm(pde.states[i] - embed(ode.states[i], 512)));
    }
    const double fine = evolx_residual(v3_integrate(kV3Data, 1e-4, 2.0));
    const double coarse = evolx_residual(v3_integrate(kV3Data, 2e-4, 2.0));
    const double ratio = coarse / fine;
    o.pass = pde.states.size() == ode.states.size() && gap < 1e-6 && fine < 1e-5 && ratio > 3.5 && ratio < 4.5;
    o.detail = "ODE vs PDE gap " + sci(gap) + ", evol-x residual " + sci(fine) + " at dt=1e-4, ratio " +
               fmt("%.3f", ratio) + " on doubling dt";
    o.metrics = {{"gap", gap}, {"evolx_residual", fine}, {"evolx_residual_2dt", coarse}, {"ratio", ratio}};
    return o;
}

Outcome steady(const AcceptanceOptions&)
{
    Outcome o;
    const auto grid = steady_grid(50, {});
    double j = 0.0;
    double r = 0.0;
    double jc = 0.0;
    double rc = 0.0;
    double pmax = 0.0;
    std::size_t resolved = 0;
    for (const auto& g : grid) {
        j = std::max(j, g.j_abs);
        r = std::max(r, g.rhs_norm);
        pmax = std::max(pmax, std::abs(g.P));
        if (g.j_abs_coeffs >= 0.0) {
            jc = std::max(jc, g.j_abs_coeffs);
            rc = std::max(rc, g.rhs_norm_coeffs);
            ++resolved;
        }
    }
    // The explicit member -sqrt3/3 + (4/(3 sqrt11)) z / (1 - (5/sqrt33) z), written
    // out directly rather than through build_steady.
    const auto u = embed({-std::sqrt(3.0) / 3.0, 4.0 / (3.0 * std::sqrt(11.0)), 5.0 / std::sqrt(33.0)}, 512);
    const double ex_j = std::abs(functional_j(u));
    const double ex_r = l2_norm(rhs(u));
    o.pass = pmax < 1.0 && j < 1e-11 && r < 1e-11 && jc < 1e-11 && rc < 1e-11 && ex_j < 1e-13;
    o.detail = "50 thetas, |J| " + sci(j) + ", |rhs| " + sci(r) + " (coefficients " + sci(jc) + ", " + sci(rc) +
               " on " + std::to_string(resolved) + "), max|P| " + fmt("%.9f", pmax) + ", example |J| " +
               sci(ex_j);
    o.metrics = {{"max_J", j}, {"max_rhs", r}, {"max_J_coeffs", jc}, {"max_rhs_coeffs", rc},
                 {"resolved", resolved}, {"max_P", pmax}, {"example_J", ex_j}, {"example_rhs", ex_r},
                 {"grid", grid}};
    return o;
}

Outcome composition(const AcceptanceOptions& opts)
{
    Outcome o;
    const double t_final = opts.quick ? 1.0 : 2.0;
    const auto u0 = embed(kV3Data, 512);
    double gap = 0.0;
    double iso = 0.0;
    double jinv = 0.0;
    for (std::size_t n : {2u, 3u}) {
        gap = std::max(gap, verify_flow_commutation(u0, n, config(1e-3, t_final, 512, 100)));
        const auto a = conserved(u0);
        const auto b = conserved(compose_zN(u0, n));
        iso = std::max(iso, std::abs(b.Q - a.Q) / a.Q);
        jinv = std::max(jinv, std::abs(b.J - a.J) / std::abs(a.J));
    }
    o.pass = gap < 1e-6 && iso < 1e-14 && jinv < 1e-13;
    o.detail = "N=2,3 flow gap " + sci(gap) + ", isometry " + sci(iso) + ", J invariance " + sci(jinv);
    o.metrics = {{"gap", gap}, {"isometry", iso}, {"j_invariance", jinv}, {"t_final", t_final}};
    return o;
}

Outcome standing(const AcceptanceOptions& opts)
{
    Outcome o;
    const std::size_t base = opts.quick ? 2048 : 8192;
    const double theta = 0.25;
    const std::vector<Arc> arcs{{0.0, 2.0 * std::numbers::pi * theta}};
    const double coarse = verify_standing(standing_wave_arc(theta, arcs, base), 16);
    const double fine = verify_standing(standing_wave_arc(theta, arcs, 2 * base), 16);
    const double ratio = coarse / fine;
    o.pass = coarse < 1e-3 && ratio > 1.8;
    o.detail = "theta=0.25 residual " + sci(coarse) + " at " + std::to_string(base) + ", " + sci(fine) + " at " +
               std::to_string(2 * base) + ", ratio " + fmt("%.3f", ratio);
    o.metrics = {{"trunc", base}, {"residual", coarse}, {"residual_double", fine}, {"ratio", ratio}};
    return o;
}

using Runner = Outcome (*)(const AcceptanceOptions&);

struct Entry {
    const char* name;
    Runner run;
};

constexpr Entry kEntries[kCriterionCount] = {
    {"traveling-waves", traveling_waves},
    {"exact-orbit", exact_orbit_check},
    {"conservation", conservation},
    {"lax", lax},
    {"integrability", integrability},
    {"spectral", spectral},
    {"gagliardo-nirenberg", gagliardo},
    {"instability", instability},
    {"v3-consistency", v3_consistency},
    {"steady-family", steady},
    {"composition", composition},
    {"standing-waves", standing},
};

} // namespace

CriterionResult run_criterion(int id, const AcceptanceOptions& opts)
{
    if (id < 1 || id > kCriterionCount) {
        throw SzegoError(ErrorCode::InvalidArgument, "criterion id must be in 1..12");
    }
    const Entry& e = kEntries[id - 1];
    CriterionResult r;
    r.id = id;
    r.name = e.name;
    const auto start = std::chrono::steady_clock::now();
    try {
        Outcome o = e.run(opts);
        r.pass = o.pass;
        r.detail = std::move(o.detail);
        r.metrics = std::move(o.metrics);
    } catch (const SzegoError& err) {
        r.pass = false;
        r.detail = err.what();
        r.metrics = {{"error", to_string(err.code())}};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts)
{
    AcceptanceOptions inner = opts;
    inner.jobs = 1;
    return parallel_map(kCriterionCount, opts.jobs,
                        [&](std::size_t i) { return run_criterion(static_cast<int>(i) + 1, inner); });
}

std::string format_line(const CriterionResult& r)
{
    char head[64];
    std::snprintf(head, sizeof head, "%s %2d %-20s ", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str());
    return head + r.detail + fmt(" [%.2fs]", r.seconds);
}

void to_json(nlohmann::json& j, const CriterionResult& r)
{
    j = {{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}, {"metrics", r.metrics}};
}

GnReport gn_sweep(std::size_t samples, std::size_t equality_samples, std::uint64_t seed, std::size_t max_trunc,
                  unsigned jobs)
{
    if (max_trunc < 2) {
        throw SzegoError(ErrorCode::InvalidArgument, "max_trunc must be at least 2");
    }
    struct Sample {
        double ratio = 0.0;
        bool violation = false;
    };
    // One generator per sample, seeded from (seed, index): the outcome does
    // not depend on how samples are spread over workers.
    const auto random = parallel_map(samples, jobs, [&](std::size_t i) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32)};
        std::mt19937_64 rng(seq);
        std::uniform_int_distribution<std::size_t> len(1, max_trunc);
        std::uniform_real_distribution<double> decay(0.2, 1.0);
        std::normal_distribution<double> g(0.0, 1.0);
        std::vector<cplx> c(len(rng));
        double env = 1.0;
        const double d = decay(rng);
        for (auto& x : c) {
            x = env * cplx(g(rng), g(rng));
            env *= d;
        }
        const auto t = conserved(HardyCoefficients(std::move(c)));
        const double bound = 0.5 * t.Q * t.Q * (t.Q + t.M);
        Sample s;
        s.ratio = bound > 0.0 ? t.E / bound : 0.0;
        s.violation = t.E - bound > 1e-12 * bound;
        return s;
    });
    const auto equality = parallel_map(equality_samples, jobs, [&](std::size_t i) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(i), 0xE9u};
        std::mt19937_64 rng(seq);
        std::uniform_real_distribution<double> rad(0.0, 0.9);
        std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
        std::uniform_real_distribution<double> mod(0.1, 2.0);
        const cplx lambda = std::polar(mod(rng), ang(rng));
        const cplx p = std::polar(rad(rng), ang(rng));
        std::size_t trunc = 2;
        while (std::pow(std::abs(p), static_cast<double>(trunc)) > 1e-18) {
            trunc *= 2;
        }
        std::vector<cplx> c(trunc);
        cplx t = lambda;
        for (auto& x : c) {
            x = t;
            t *= p;
        }
        const auto q = conserved(HardyCoefficients(std::move(c)));
        return std::abs(q.E / (0.5 * q.Q * q.Q * (q.Q + q.M)) - 1.0);
    });
    GnReport r;
    r.samples = samples;
    r.equality_samples = equality_samples;
    r.seed = seed;
    for (const auto& s : random) {
        r.worst_ratio = std::max(r.worst_ratio, s.ratio);
        r.violations += s.violation ? 1 : 0;
    }
    for (double d : equality) {
        r.equality_max_dev = std::max(r.equality_max_dev, d);
    }
    return r;
}

void to_json(nlohmann::json& j, const GnReport& r)
{
    j = {{"samples", r.samples},
         {"violations", r.violations},
         {"worst_ratio", r.worst_ratio},
         {"equality_samples", r.equality_samples},
         {"equality_max_dev", r.equality_max_dev},
         {"seed", r.seed}};
}

} // namespace szego
