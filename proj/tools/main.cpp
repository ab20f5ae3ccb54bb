// szego: command line front end for the quadratic Szego library.
// Exit codes: 0 all checks pass, 1 a check failed, 2 usage error.
#include "cli_support.hpp"

#include "szego/acceptance.hpp"
#include "szego/dynamics.hpp"
#include "szego/error.hpp"
#include "szego/inner_composition.hpp"
#include "szego/io.hpp"
#include "szego/operators.hpp"
#include "szego/parallel.hpp"
#include "szego/steady_states.hpp"
#include "szego/traveling_waves.hpp"
#include "szego/v3_reduced.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>

using namespace szego;
using namespace szego::cli;
using Json = nlohmann::json;

namespace {

std::string sci(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    StateInput state;
    double dt = 1e-3;
    double t_final = 1.0;
    std::size_t stride = 100;
    double tol_drift = 1e-8;
    bool no_spectrum = false;
    std::size_t spectrum_block = 0;
    std::size_t k2_columns = 8;
    std::string csv;
    std::string jsonl;
};

Report simulate(const SimulateArgs& a, const Globals& g)
{
    SimulationConfig cfg;
    cfg.dt = a.dt;
    cfg.t_final = a.t_final;
    cfg.trunc = a.state.trunc;
    cfg.monitor_stride = a.stride;
    cfg.monitor_spectrum = !a.no_spectrum;
    cfg.spectrum_block = a.spectrum_block;
    // Drift is judged after the run so the artifacts cover the whole horizon.
    const auto traj = integrate(a.state.load(), cfg);
    if (!a.csv.empty()) {
        std::ostringstream out;
        write_trajectory_csv(out, traj, a.no_spectrum ? 0 : a.k2_columns, g.seed);
        write_text_file(a.csv, out.str());
    }
    if (!a.jsonl.empty()) {
        std::ostringstream out;
        out << Json{{"header", artifact_header("simulate", g)}}.dump() << '\n';
        write_snapshots_jsonl(out, traj);
        write_text_file(a.jsonl, out.str());
    }
    Report r;
    r.body = {{"steps", traj.steps}, {"step", traj.step}, {"snapshots", traj.times.size()},
              {"drift", traj.drift}, {"tol_drift", a.tol_drift},
              {"final", traj.invariants.back()}};
    if (!traj.k2_spectra.empty()) {
        r.body["k2_final"] = traj.k2_spectra.back();
    }
    std::cout << "simulate: " << traj.steps << " steps, drift Q " << sci(traj.drift.Q) << " M "
              << sci(traj.drift.M) << " E " << sci(traj.drift.E) << '\n';
    if (traj.drift.max() > a.tol_drift) {
        r.failures.emplace_back(to_string(ErrorCode::DriftExceeded));
    }
    return r;
}

// ---------------------------------------------------------------- verify-tw

struct VerifyTwArgs {
    std::string family = "both";
    std::vector<double> lambda{1.0};
    std::vector<double> p{0.5};
    std::vector<std::size_t> n{1};
    std::size_t trunc = 0;
    double tol = 1e-9;
    std::string csv;
};

Report verify_tw(const VerifyTwArgs& a, const Globals& g)
{
    struct Case {
        WaveFamily family;
        double lambda;
        double p;
        std::size_t n;
    };
    std::vector<Case> cases;
    for (const auto f : {WaveFamily::I, WaveFamily::II}) {
        if ((a.family == "I" && f != WaveFamily::I) || (a.family == "II" && f != WaveFamily::II)) {
            continue;
        }
        for (double lam : a.lambda) {
            for (double p : a.p) {
                for (std::size_t n : a.n) {
                    cases.push_back({f, lam, p, n});
                }
            }
        }
    }
    const auto rows = parallel_map(cases.size(), g.jobs, [&](std::size_t i) {
        const Case& c = cases[i];
        const TravelingWaveSpec spec(c.family, c.lambda, c.p, c.n);
        std::size_t trunc = a.trunc;
        if (trunc == 0) {
            trunc = std::max<std::size_t>(std::abs(c.p) >= 0.8 ? 1024 : 256, minimal_profile_trunc(spec));
        }
        const double res = residual_traveling(build_profile(spec, trunc), spec.omega(), spec.c());
        Json row = spec;
        row["trunc"] = trunc;
        row["residual"] = res;
        row["pass"] = res < a.tol;
        return row;
    });
    Report r;
    r.body = {{"tol", a.tol}, {"cases", rows}};
    std::ostringstream csv;
    csv << "# seed=" << g.seed << "\nfamily,lambda,p,N,trunc,omega,c,residual\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        std::printf("verify-tw: family %s lambda %g p %g N %zu omega %.9g c %.9g residual %s %s\n",
                    row["family"].get<std::string>().c_str(), cases[i].lambda, cases[i].p, cases[i].n,
                    row["omega"].get<double>(), row["c"].get<double>(), sci(row["residual"].get<double>()).c_str(),
                    row["pass"].get<bool>() ? "ok" : "FAIL");
        csv << row["family"].get<std::string>() << ',' << cases[i].lambda << ',' << cases[i].p << ',' << cases[i].n
            << ',' << row["trunc"].get<std::size_t>() << ',' << row["omega"].dump() << ',' << row["c"].dump() << ','
            << row["residual"].dump() << '\n';
        if (!row["pass"].get<bool>()) {
            r.failures.push_back("RESIDUAL case " + std::to_string(i));
        }
    }
    if (!a.csv.empty()) {
        write_text_file(a.csv, csv.str());
    }
    return r;
}

// ---------------------------------------------------------------- spectral

struct SpectralArgs {
    StateInput state;
    std::size_t block = 64;
    double rank_tol = kRankTolerance;
    double lax_tol = 1e-9;
    double varpi = std::numeric_limits<double>::quiet_NaN();
};

Report spectral(const SpectralArgs& a, const Globals&)
{
    const auto u = a.state.load();
    const auto rep = spectral_report(u, a.rank_tol);
    const auto lax = verify_lax(u, std::min(a.block, u.trunc()));
    Report r;
    r.body = {{"spectral", rep}, {"lax", lax}};
    std::cout << "spectral: rank H " << rep.rank_H << ", rank K " << rep.rank_K << ", Lax block residuals K "
              << sci(lax.k_block) << " H " << sci(lax.h_block) << '\n';
    if (rep.unresolved) {
        r.body["warnings"] = Json::array({"UNRESOLVED"});
        std::cout << "spectral: warning, eigenvalues closer than the rank tolerance allows\n";
    }
    if (std::max(lax.k_block, lax.h_block) > a.lax_tol) {
        r.failures.push_back("LAX_RESIDUAL");
    }
    if (!std::isnan(a.varpi)) {
        try {
            const auto au = verify_au_minus_d(u, a.varpi);
            r.body["au_minus_d"] = au;
        } catch (const SzegoError& e) {
            r.failures.emplace_back(to_string(e.code()));
        }
    }
    return r;
}

// ---------------------------------------------------------------- instability

struct InstabilityArgs {
    InstabilityConfig cfg;
    std::vector<double> gammas{1e-2};
    bool refine = true;
};

Report instability(const InstabilityArgs& a, const Globals& g)
{
    const auto reports = parallel_map(a.gammas.size(), g.jobs, [&](std::size_t i) {
        InstabilityConfig cfg = a.cfg;
        cfg.gamma = a.gammas[i];
        return instability_probe(cfg);
    });
    Report r;
    r.body["runs"] = Json::array();
    for (const auto& rep : reports) {
        r.body["runs"].push_back(rep);
        std::printf("instability: gamma %g delta_E %s (dy/dt)^2(0) %s vs %s (rel %s), turning points [%s, %s], %s\n",
                    rep.config.gamma, sci(rep.delta_E).c_str(), sci(rep.measured_dy2).c_str(),
                    sci(rep.predicted_dy2).c_str(), sci(rep.relative_error).c_str(), sci(rep.turning_low).c_str(),
                    sci(rep.turning_high).c_str(), rep.escaped ? "escaped" : "no escape");
        if (!rep.escaped) {
            r.failures.push_back(std::string(to_string(ErrorCode::NoEscape)) + " gamma=" + Json(rep.config.gamma).dump());
        }
    }
    if (a.refine) {
        const auto ref = gamma_refinement(a.cfg.r, a.gammas.front(), a.cfg.dt);
        r.body["refinement"] = ref;
        std::printf("instability: delta_E order %.5f, rate ratio mismatch %s\n", ref.order, sci(ref.mismatch).c_str());
    }
    return r;
}

// ---------------------------------------------------------------- steady

struct SteadyArgs {
    std::size_t n = 50;
    SteadyV3Params base;
    std::size_t max_trunc = 1 << 14;
    double tol = 1e-11;
    std::string csv;
};

Report steady(const SteadyArgs& a, const Globals& g)
{
    if (a.n == 0) {
        throw UsageError("--n must be positive");
    }
    const auto points = parallel_map(a.n, g.jobs, [&](std::size_t k) {
        SteadyV3Params p = a.base;
        p.theta = static_cast<double>(k) * (M_PI / 3.0) / static_cast<double>(a.n);
        return steady_point(p, a.max_trunc);
    });
    Report r;
    r.body = {{"tol", a.tol}, {"grid", points}};
    std::ostringstream csv;
    csv << "# seed=" << g.seed << "\ntheta,P,J_abs,rhs_norm,J_abs_coeffs,rhs_norm_coeffs\n";
    double worst = 0.0;
    for (std::size_t k = 0; k < points.size(); ++k) {
        const auto& p = points[k];
        csv << Json(p.theta).dump() << ',' << Json(p.P).dump() << ',' << Json(p.j_abs).dump() << ','
            << Json(p.rhs_norm).dump() << ',' << Json(p.j_abs_coeffs).dump() << ',' << Json(p.rhs_norm_coeffs).dump()
            << '\n';
        const double m = std::max({p.j_abs, p.rhs_norm, p.j_abs_coeffs, p.rhs_norm_coeffs});
        worst = std::max(worst, m);
        if (m >= a.tol || std::abs(p.P) >= 1.0) {
            r.failures.push_back("NOT_STEADY theta=" + Json(p.theta).dump());
        }
    }
    std::cout << "steady: " << points.size() << " members, worst |J| or |rhs| " << sci(worst) << '\n';
    if (!a.csv.empty()) {
        write_text_file(a.csv, csv.str());
    }
    return r;
}

// ---------------------------------------------------------------- compose

struct ComposeCheckArgs {
    StateInput state;
    std::vector<std::size_t> n{2, 3};
    double dt = 1e-3;
    double t_final = 2.0;
    std::size_t stride = 100;
    double tol = 1e-6;
};

Report compose_check(const ComposeCheckArgs& a, const Globals& g)
{
    const auto u0 = a.state.load();
    SimulationConfig cfg;
    cfg.dt = a.dt;
    cfg.t_final = a.t_final;
    cfg.trunc = u0.trunc();
    cfg.monitor_stride = a.stride;
    cfg.monitor_spectrum = false;
    const auto gaps = parallel_map(a.n.size(), g.jobs, [&](std::size_t i) {
        return verify_flow_commutation(u0, a.n[i], cfg);
    });
    Report r;
    r.body["cases"] = Json::array();
    const auto base = conserved(u0);
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        const auto c = conserved(compose_zN(u0, a.n[i]));
        r.body["cases"].push_back({{"N", a.n[i]}, {"gap", gaps[i]}, {"Q_change", std::abs(c.Q - base.Q)},
                                   {"J_change", std::abs(c.J - base.J)}});
        std::printf("compose-check: N %zu flow gap %s\n", a.n[i], sci(gaps[i]).c_str());
        if (gaps[i] >= a.tol) {
            r.failures.push_back("FLOW_GAP N=" + std::to_string(a.n[i]));
        }
    }
    return r;
}

struct ComposeArgs {
    StateInput state;
    std::size_t n = 2;
    std::string out;
};

Report compose(const ComposeArgs& a, const Globals&)
{
    if (a.state.in.empty() || a.out.empty()) {
        throw UsageError("compose needs --in and --out");
    }
    const auto v = compose_zN(a.state.load(), a.n);
    write_text_file(a.out, Json(v).dump(2) + "\n");
    std::cout << "compose: wrote " << v.trunc() << " modes to " << a.out << '\n';
    Report r;
    r.body = {{"N", a.n}, {"trunc", v.trunc()}, {"Q", conserved(v).Q}};
    return r;
}

// ---------------------------------------------------------------- gn-check

struct GnArgs {
    std::size_t samples = 10000;
    std::size_t equality = 100;
    std::size_t max_trunc = 32;
    double tol = 1e-12;
};

Report gn_check(const GnArgs& a, const Globals& g)
{
    const auto rep = gn_sweep(a.samples, a.equality, g.seed, a.max_trunc, g.jobs);
    Report r;
    r.body = rep;
    std::printf("gn-check: %zu samples, %zu violations, max E/bound %.12f, equality deviation %s (seed %llu)\n",
                rep.samples, rep.violations, rep.worst_ratio, sci(rep.equality_max_dev).c_str(),
                static_cast<unsigned long long>(rep.seed));
    if (rep.violations > 0) {
        r.failures.push_back("GN_VIOLATION count=" + std::to_string(rep.violations));
    }
    if (rep.equality_max_dev >= a.tol) {
        r.failures.push_back("GN_EQUALITY");
    }
    return r;
}

// ---------------------------------------------------------------- certify

Report certify(bool quick, const Globals& g)
{
    AcceptanceOptions opts;
    opts.quick = quick;
    opts.seed = g.seed;
    opts.jobs = g.jobs;
    Report r;
    r.body = {{"quick", quick}, {"criteria", Json::array()}};
    for (const auto& c : run_acceptance(opts)) {
        std::cout << format_line(c) << '\n';
        r.body["criteria"].push_back(c);
        if (!c.pass) {
            r.failures.push_back("CRITERION " + std::to_string(c.id) + " " + c.name);
        }
    }
    return r;
}

int finish(const std::string& command, Report report, const std::string& out, const Globals& g)
{
    Json doc = artifact_header(command, g);
    doc["pass"] = report.failures.empty();
    doc["failures"] = report.failures;
    doc["result"] = std::move(report.body);
    if (!out.empty()) {
        write_text_file(out, doc.dump(2) + "\n");
        log(g, "wrote " + out);
    }
    if (!report.failures.empty()) {
        std::cerr << Json{{"failures", report.failures}}.dump() << '\n';
        return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Numerical experiments for the quadratic Szego equation"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    Globals g;
    app.add_option("--config", g.config, "JSON config file; flags override it");
    app.add_option("--seed", g.seed, "seed for random sampling")->capture_default_str();
    app.add_option("--jobs", g.jobs, "worker threads")->capture_default_str()->check(CLI::Range(1u, 256u));
    app.add_flag("--quiet", g.quiet, "no log lines on stderr");

    std::string out;
    auto add_out = [&](CLI::App* sub) { sub->add_option("--out", out, "JSON report path"); };

    SimulateArgs sim;
    auto* s_sim = app.add_subcommand("simulate", "integrate the flow and monitor invariants");
    sim.state.add_options(*s_sim, 256);
    s_sim->add_option("--dt", sim.dt)->capture_default_str()->check(CLI::PositiveNumber);
    s_sim->add_option("--t-final", sim.t_final)->capture_default_str();
    s_sim->add_option("--stride", sim.stride, "snapshot every n steps")->capture_default_str()->check(CLI::PositiveNumber);
    s_sim->add_option("--tol-drift", sim.tol_drift, "relative drift allowed for Q, M, E")->capture_default_str();
    s_sim->add_flag("--no-spectrum", sim.no_spectrum, "skip K_u^2 eigenvalues");
    s_sim->add_option("--spectrum-block", sim.spectrum_block, "leading modes for K_u^2 (0 = all)")->capture_default_str();
    s_sim->add_option("--k2-columns", sim.k2_columns)->capture_default_str();
    s_sim->add_option("--csv", sim.csv, "trajectory CSV path");
    s_sim->add_option("--jsonl", sim.jsonl, "snapshot JSONL path");
    add_out(s_sim);

    VerifyTwArgs tw;
    auto* s_tw = app.add_subcommand("verify-tw", "traveling wave residuals over a parameter grid");
    s_tw->add_option("--family", tw.family)->capture_default_str()->check(CLI::IsMember({"I", "II", "both"}));
    s_tw->add_option("--lambda", tw.lambda)->delimiter(',')->capture_default_str();
    s_tw->add_option("--p", tw.p)->delimiter(',')->capture_default_str();
    s_tw->add_option("--n-comp", tw.n, "N in z^N")->delimiter(',')->capture_default_str();
    s_tw->add_option("--trunc", tw.trunc, "0 picks 256, or 1024 for |p| >= 0.8")->capture_default_str();
    s_tw->add_option("--tol", tw.tol)->capture_default_str();
    s_tw->add_option("--csv", tw.csv);
    add_out(s_tw);

    SpectralArgs sp;
    auto* s_sp = app.add_subcommand("spectral", "H_u^2 and K_u^2 spectra and Lax residuals");
    sp.state.add_options(*s_sp, 256);
    s_sp->add_option("--block", sp.block)->capture_default_str()->check(CLI::Range(std::size_t{2}, std::size_t{1} << 16));
    s_sp->add_option("--rank-tol", sp.rank_tol)->capture_default_str();
    s_sp->add_option("--lax-tol", sp.lax_tol)->capture_default_str();
    s_sp->add_option("--varpi", sp.varpi, "also check the (A_u - D) eigen-ladder at this varpi");
    add_out(s_sp);

    InstabilityArgs ins;
    auto* s_ins = app.add_subcommand("instability", "perturbed traveling wave escape experiment on V(3)");
    s_ins->add_option("--r", ins.cfg.r)->capture_default_str();
    s_ins->add_option("--gamma", ins.gammas, "one or more perturbation angles")->delimiter(',')->capture_default_str();
    s_ins->add_option("--eps0", ins.cfg.eps0)->capture_default_str();
    s_ins->add_option("--ball", ins.cfg.ball)->capture_default_str();
    s_ins->add_option("--dt", ins.cfg.dt)->capture_default_str()->check(CLI::PositiveNumber);
    s_ins->add_option("--t-final", ins.cfg.t_final)->capture_default_str()->check(CLI::PositiveNumber);
    s_ins->add_option("--refine", ins.refine, "also run the gamma/2 refinement")->capture_default_str();
    add_out(s_ins);

    SteadyArgs st;
    auto* s_st = app.add_subcommand("steady", "steady family on a theta grid");
    s_st->add_option("--n", st.n, "grid points on [0, pi/3)")->capture_default_str();
    s_st->add_option("--lambda", st.base.lambda)->capture_default_str();
    s_st->add_option("--a", st.base.a)->capture_default_str();
    s_st->add_option("--b-angle", st.base.b_angle)->capture_default_str();
    s_st->add_option("--max-trunc", st.max_trunc, "largest truncation for the coefficient cross-check")->capture_default_str();
    s_st->add_option("--tol", st.tol)->capture_default_str();
    s_st->add_option("--csv", st.csv);
    add_out(s_st);

    ComposeCheckArgs cc;
    auto* s_cc = app.add_subcommand("compose-check", "flow commutes with u -> u(z^N)");
    cc.state.add_options(*s_cc, 512);
    s_cc->add_option("--n", cc.n)->delimiter(',')->capture_default_str();
    s_cc->add_option("--dt", cc.dt)->capture_default_str()->check(CLI::PositiveNumber);
    s_cc->add_option("--t-final", cc.t_final)->capture_default_str();
    s_cc->add_option("--stride", cc.stride)->capture_default_str()->check(CLI::PositiveNumber);
    s_cc->add_option("--tol", cc.tol)->capture_default_str();
    add_out(s_cc);

    ComposeArgs co;
    auto* s_co = app.add_subcommand("compose", "write u(z^N) for a state file");
    co.state.add_options(*s_co, 2);
    s_co->add_option("--n", co.n)->capture_default_str()->check(CLI::PositiveNumber);
    s_co->add_option("--out", co.out, "output state JSON");

    GnArgs gn;
    auto* s_gn = app.add_subcommand("gn-check", "Gagliardo-Nirenberg sweep on random states");
    s_gn->add_option("--samples", gn.samples)->capture_default_str();
    s_gn->add_option("--equality", gn.equality, "geometric states for the equality case")->capture_default_str();
    s_gn->add_option("--max-trunc", gn.max_trunc)->capture_default_str()->check(CLI::Range(std::size_t{2}, std::size_t{4096}));
    s_gn->add_option("--tol", gn.tol, "allowed deviation in the equality case")->capture_default_str();
    add_out(s_gn);

    bool quick = false;
    auto* s_ce = app.add_subcommand("certify", "run all acceptance checks");
    s_ce->add_flag("--quick", quick, "reduced horizons and sample counts");
    add_out(s_ce);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    try {
        if (!g.config.empty()) {
            apply_config(read_json_file(g.config), app, *sub);
        }
        log(g, name + " seed=" + std::to_string(g.seed) + " jobs=" + std::to_string(g.jobs));
        Report report;
        if (sub == s_sim) {
            report = simulate(sim, g);
        } else if (sub == s_tw) {
            report = verify_tw(tw, g);
        } else if (sub == s_sp) {
            report = spectral(sp, g);
        } else if (sub == s_ins) {
            report = instability(ins, g);
        } else if (sub == s_st) {
            report = steady(st, g);
        } else if (sub == s_cc) {
            report = compose_check(cc, g);
        } else if (sub == s_co) {
            return finish(name, compose(co, g), "", g);
        } else if (sub == s_gn) {
            report = gn_check(gn, g);
        } else {
            report = certify(quick, g);
        }
        return finish(name, std::move(report), out, g);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const SzegoError& e) {
        // Invalid parameters are the caller's mistake; anything else is a failed check.
        std::cerr << Json{{"failures", {to_string(e.code())}}, {"message", e.what()}}.dump() << '\n';
        return e.code() == ErrorCode::InvalidArgument ? 2 : 1;
    }
}
