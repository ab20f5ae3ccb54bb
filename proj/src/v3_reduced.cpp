#include "szego/v3_reduced.hpp"

#include "szego/error.hpp"

#include <nlohmann/json.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

namespace szego {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kPoleMargin = 1e-10;
constexpr double kMinC = 1e-14;

V3State axpy(const V3State& s, double h, const V3State& d)
{
    return {s.b + h * d.b, s.c + h * d.c, s.p + h * d.p};
}

V3State rk4(const V3State& s, double h)
{
    const V3State k1 = v3_rhs(s);
    const V3State k2 = v3_rhs(axpy(s, 0.5 * h, k1));
    const V3State k3 = v3_rhs(axpy(s, 0.5 * h, k2));
    const V3State k4 = v3_rhs(axpy(s, h, k3));
    return {s.b + h / 6.0 * (k1.b + 2.0 * k2.b + 2.0 * k3.b + k4.b),
            s.c + h / 6.0 * (k1.c + 2.0 * k2.c + 2.0 * k3.c + k4.c),
            s.p + h / 6.0 * (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p)};
}

double x_of(const V3State& s)
{
    const double q = 1.0 - std::norm(s.p);
    return std::norm(s.c) / q;
}

// Signed step landing exactly on t_final.
std::pair<std::size_t, double> plan_steps(double dt, double t_final)
{
    if (!(dt > 0.0) || !std::isfinite(dt) || !std::isfinite(t_final)) {
        throw SzegoError(ErrorCode::InvalidArgument, "need dt > 0 and finite t_final");
    }
    const auto steps = static_cast<std::size_t>(std::ceil(std::abs(t_final) / dt - 1e-9));
    return {steps, steps == 0 ? 0.0 : t_final / static_cast<double>(steps)};
}

struct EscapeRun {
    EscapeRecord record;
    std::vector<double> y; // samples up to the first turn of |y|
    std::vector<double> rate; // (dy/dt)^2 from the state at those samples
};

// |y| = |x - x_r| along one time direction until both radii are crossed.
EscapeRun escape(const V3State& s0, double x_r, double threshold, double ball, double dt,
                 double t_final)
{
    EscapeRun run;
    EscapeRecord& rec = run.record;
    const auto [steps, h] = plan_steps(dt, t_final);
    const double outer = std::max(threshold, ball);
    V3State s = s0;
    double last = 0.0;
    bool monotone = true;
    for (std::size_t n = 1; n <= steps; ++n) {
        s = rk4(s, h);
        const double t = std::abs(static_cast<double>(n) * h);
        const double y = x_of(s) - x_r;
        if (std::abs(y) < last) {
            monotone = false;
        }
        last = std::abs(y);
        if (monotone) {
            const double d = derive(s).dxdt;
            run.y.push_back(y);
            run.rate.push_back(d * d);
        }
        rec.max_abs_y = std::max(rec.max_abs_y, last);
        rec.y_end = y;
        rec.t_end = t;
        if (!rec.exit_threshold && last > threshold) {
            rec.exit_threshold = t;
            rec.monotone = monotone;
        }
        if (!rec.exit_ball && last > ball) {
            rec.exit_ball = t;
            rec.monotone = monotone;
        }
        if (last > outer) {
            break;
        }
    }
    return run;
}

// Coefficient of y in a least-squares fit rate = a0 + a1 y + ... + a4 y^4. The
// higher powers absorb curvature that would otherwise bias a1.
double fit_linear_term(const std::vector<double>& y, const std::vector<double>& rate)
{
    constexpr Eigen::Index kTerms = 5;
    if (y.size() < static_cast<std::size_t>(kTerms)) {
        return 0.0;
    }
    const double scale = std::max(std::abs(*std::max_element(y.begin(), y.end())),
                                  std::abs(*std::min_element(y.begin(), y.end())));
    Eigen::MatrixXd A(static_cast<Eigen::Index>(y.size()), kTerms);
    Eigen::VectorXd b(static_cast<Eigen::Index>(y.size()));
    for (std::size_t i = 0; i < y.size(); ++i) {
        const auto row = static_cast<Eigen::Index>(i);
        double power = 1.0;
        for (Eigen::Index k = 0; k < kTerms; ++k) {
            A(row, k) = power;
            power *= y[i] / scale;
        }
        b(row) = rate[i];
    }
    return A.colPivHouseholderQr().solve(b)(1) / scale;
}

// First sign change of f moving away from 0 in direction `dir`, refined by bisection.
double turning_point(const std::function<double(double)>& f, double dir, double limit)
{
    double inner = 0.0;
    double step = 1e-9;
    double outer = dir * step;
    while (f(outer) > 0.0) {
        inner = outer;
        step *= 2.0;
        if (step > limit) {
            return dir * limit;
        }
        outer = dir * step;
    }
    for (int i = 0; i < 200 && std::abs(outer - inner) > 1e-16; ++i) {
        const double mid = 0.5 * (inner + outer);
        (f(mid) > 0.0 ? inner : outer) = mid;
    }
    return 0.5 * (inner + outer);
}

// dy/dt at t = 0 from a one-sided 5-point stencil; y(0) = 0 by construction.
double initial_slope(double r, double gamma, double dt)
{
    if (!(dt > 0.0)) {
        throw SzegoError(ErrorCode::InvalidArgument, "dt must be positive");
    }
    const double x_r = x_of(v_r(r));
    V3State s = v_r_perturbed(r, gamma);
    double y[5];
    y[0] = x_of(s) - x_r;
    for (int k = 1; k < 5; ++k) {
        s = rk4(s, dt);
        y[k] = x_of(s) - x_r;
    }
    return (-25.0 * y[0] + 48.0 * y[1] - 36.0 * y[2] + 16.0 * y[3] - 3.0 * y[4]) / (12.0 * dt);
}

} // namespace

void V3State::validate() const
{
    if (!(std::abs(p) < 1.0)) {
        throw SzegoError(ErrorCode::InvalidArgument, "V(3) state needs |p| < 1");
    }
    if (c == cplx{}) {
        throw SzegoError(ErrorCode::InvalidArgument, "V(3) state needs c != 0");
    }
    if (c - b * p == cplx{}) {
        throw SzegoError(ErrorCode::InvalidArgument, "V(3) state needs c - b p != 0");
    }
}

double energy_from_angle(double Q, double M, double x, double psi)
{
    const double root = std::sqrt(std::max(0.0, (Q - x) * (M - x)));
    return (Q + x) * (Q + x) * (Q - x) + x * x * (M - x) + 2.0 * x * (Q + x) * root * std::cos(psi);
}

double evolx_rhs(double Q, double M, double x, double Ecal)
{
    const double bracket = (Q + x) * (Q + x) * (Q - x) + x * x * (M - x) - Ecal;
    return 4.0 * x * x * (Q + x) * (Q + x) * (Q - x) * (M - x) - bracket * bracket;
}

V3Derived derive(const V3State& s)
{
    V3Derived d;
    const double q = 1.0 - std::norm(s.p);
    const double c2 = std::norm(s.c);
    d.Q = std::norm(s.b) + c2 / q;
    d.M = c2 / (q * q);
    d.x = std::abs(s.c) * std::sqrt(d.M);
    d.J = (d.Q + d.x) * s.b + d.M * s.c * std::conj(s.p);
    d.J_expanded = std::norm(s.b) * s.b + 2.0 * s.b * c2 / q + c2 * s.c * std::conj(s.p) / (q * q);
    const cplx w = s.b * std::conj(s.c) * s.p;
    d.psi = (s.b == cplx{} || s.p == cplx{}) ? 0.0 : std::arg(w);
    d.Ecal = std::norm(d.J);
    d.Ecal_angle = energy_from_angle(d.Q, d.M, d.x, d.psi);
    d.dxdt = 2.0 * d.x * (d.Q + d.x) * std::sqrt(std::max(0.0, (d.Q - d.x) * (d.M - d.x))) *
             std::sin(d.psi);
    return d;
}

HardyCoefficients embed(const V3State& s, std::size_t trunc)
{
    if (trunc == 0) {
        throw SzegoError(ErrorCode::InvalidArgument, "truncation must be positive");
    }
    std::vector<cplx> out(trunc);
    out[0] = s.b;
    cplx term = s.c;
    for (std::size_t k = 1; k < trunc; ++k) {
        out[k] = term;
        term *= s.p;
    }
    return HardyCoefficients(std::move(out));
}

V3State v3_from_hardy(const HardyCoefficients& u)
{
    if (u[1] == cplx{}) {
        throw SzegoError(ErrorCode::InvalidArgument, "mode 1 vanishes, not a V(3) state");
    }
    V3State s{u[0], u[1], u[2] / u[1]};
    s.validate();
    return s;
}

V3State v3_rhs(const V3State& s)
{
    if (std::abs(s.p) > 1.0 - kPoleMargin) {
        throw SzegoError(ErrorCode::Degenerate, "pole reached the unit circle");
    }
    if (std::abs(s.c) < kMinC) {
        throw SzegoError(ErrorCode::Degenerate, "c vanished");
    }
    const double q = 1.0 - std::norm(s.p);
    const double c2 = std::norm(s.c);
    const cplx j = (std::norm(s.b) + 2.0 * c2 / q) * s.b + c2 / (q * q) * s.c * std::conj(s.p);
    const cplx jb = std::conj(j);
    const cplx ip = s.c * jb;
    const cplx ic = 2.0 * s.b * s.c * jb + 2.0 * std::conj(s.b) * s.c * j + 2.0 * j * s.p * c2 / q;
    const cplx ib = s.b * s.b * jb + 2.0 * std::norm(s.b) * j + 2.0 * j * c2 / q;
    return {-kI * ib, -kI * ic, -kI * ip};
}

V3Trajectory v3_integrate(const V3State& s0, double dt, double t_final, std::size_t stride)
{
    s0.validate();
    if (stride == 0) {
        throw SzegoError(ErrorCode::InvalidArgument, "stride must be at least 1");
    }
    const auto [steps, h] = plan_steps(dt, t_final);
    V3Trajectory traj;
    traj.step = h;
    traj.stride = stride;
    V3State s = s0;
    auto record = [&](std::size_t n) {
        traj.times.push_back(static_cast<double>(n) * h);
        traj.states.push_back(s);
        traj.derived.push_back(derive(s));
    };
    record(0);
    for (std::size_t n = 1; n <= steps; ++n) {
        s = rk4(s, h);
        if (!std::isfinite(std::abs(s.b) + std::abs(s.c) + std::abs(s.p))) {
            throw SzegoError(ErrorCode::NonFinite, "V(3) state became non-finite");
        }
        if (n % stride == 0 || n == steps) {
            record(n);
        }
    }
    return traj;
}

double evolx_residual(const V3Trajectory& traj)
{
    const std::size_t n = traj.times.size();
    if (n < 3) {
        throw SzegoError(ErrorCode::InvalidArgument, "need at least three snapshots");
    }
    const double spacing = traj.times[1] - traj.times[0];
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double left = traj.times[i] - traj.times[i - 1];
        const double right = traj.times[i + 1] - traj.times[i];
        if (std::abs(left - spacing) > 1e-9 * std::abs(spacing) ||
            std::abs(right - spacing) > 1e-9 * std::abs(spacing)) {
            continue; // the final snapshot may sit off the stride
        }
        const double dx = (traj.derived[i + 1].x - traj.derived[i - 1].x) / (2.0 * spacing);
        const auto& d = traj.derived[i];
        worst = std::max(worst, std::abs(dx * dx - evolx_rhs(d.Q, d.M, d.x, d.Ecal)));
    }
    return worst;
}

V3State v_r(double r)
{
    if (!(r > 0.0) || !(r < 1.0)) {
        throw SzegoError(ErrorCode::InvalidArgument, "r must lie in (0, 1)");
    }
    const double s = std::sqrt(r);
    return {-2.0 * r / (1.0 - r), s, s};
}

V3State v_r_perturbed(double r, double gamma)
{
    V3State s = v_r(r);
    s.b *= std::polar(1.0, gamma);
    return s;
}

double delta_energy(double r, double gamma)
{
    const V3Derived d = derive(v_r(r));
    const double root = std::sqrt(std::max(0.0, (d.Q - d.x) * (d.M - d.x)));
    const double half = std::sin(0.5 * gamma);
    return 2.0 * d.x * (d.Q + d.x) * root * 2.0 * half * half;
}

double measured_initial_rate(double r, double gamma, double dt)
{
    const double dy = initial_slope(r, gamma, dt);
    return dy * dy;
}

double escape_potential(double r, double gamma, double y)
{
    const V3Derived d = derive(v_r(r));
    return evolx_rhs(d.Q, d.M, d.x + y, d.Ecal + delta_energy(r, gamma));
}

InstabilityReport instability_probe(const InstabilityConfig& cfg)
{
    if (!(cfg.gamma > 0.0) || !(std::cos(std::numbers::pi + cfg.gamma) > -1.0)) {
        throw SzegoError(ErrorCode::InvalidArgument, "gamma must be positive and small");
    }
    if (!(cfg.eps0 > 0.0) || !(cfg.ball > 0.0)) {
        throw SzegoError(ErrorCode::InvalidArgument, "escape radii must be positive");
    }
    InstabilityReport rep;
    rep.config = cfg;
    const double r = cfg.r;
    const V3Derived d = derive(v_r(r));
    rep.Q_r = d.Q;
    rep.M_r = d.M;
    rep.x_r = d.x;
    rep.J_r = d.J;
    rep.Ecal_r = d.Ecal;

    const V3State start = v_r_perturbed(r, cfg.gamma);
    rep.delta_E_direct = derive(start).Ecal - d.Ecal;
    rep.delta_E = delta_energy(r, cfg.gamma);
    rep.coefficient = 16.0 * std::pow(r, 4) * (1.0 + r) / std::pow(1.0 - r, 5);
    rep.second_coefficient = -64.0 * std::pow(r, 7) * (1.0 + r) * (1.0 + r) / std::pow(1.0 - r, 9);
    rep.predicted_dy2 = rep.delta_E * (rep.coefficient - rep.delta_E);
    rep.measured_dy = initial_slope(r, cfg.gamma, cfg.dt);
    rep.measured_dy2 = rep.measured_dy * rep.measured_dy;
    rep.relative_error = std::abs(rep.measured_dy2 - rep.predicted_dy2) / rep.predicted_dy2;

    const auto potential = [&](double y) { return evolx_rhs(d.Q, d.M, d.x + y, d.Ecal + rep.delta_E); };
    rep.turning_low = turning_point(potential, -1.0, d.x);
    rep.turning_high = turning_point(potential, 1.0, std::min(d.Q, d.M) - d.x);
    const double h = 1e-6;
    rep.linear_term_model = (potential(h) - potential(-h)) / (2.0 * h);

    rep.threshold = cfg.eps0 * std::sqrt(d.M);
    const double span = std::abs(cfg.t_final);
    EscapeRun fwd = escape(start, d.x, rep.threshold, cfg.ball, cfg.dt, span);
    EscapeRun bwd = escape(start, d.x, rep.threshold, cfg.ball, cfg.dt, -span);
    rep.linear_term_fit = fit_linear_term(fwd.y, fwd.rate);
    rep.forward = fwd.record;
    rep.backward = bwd.record;
    rep.escaped = rep.forward.exit_threshold.has_value() || rep.backward.exit_threshold.has_value();
    return rep;
}

InstabilityReport instability_experiment(const InstabilityConfig& cfg)
{
    InstabilityReport rep = instability_probe(cfg);
    if (!rep.escaped) {
        throw SzegoError(ErrorCode::NoEscape,
                         "|y| stayed below " + std::to_string(rep.threshold) + " up to |t| = " +
                             std::to_string(std::abs(cfg.t_final)) + " (max |y| " +
                             std::to_string(std::max(rep.forward.max_abs_y, rep.backward.max_abs_y)) +
                             ")");
    }
    return rep;
}

GammaRefinement gamma_refinement(double r, double gamma, double dt)
{
    GammaRefinement g;
    g.gamma = gamma;
    g.delta_E = delta_energy(r, gamma);
    g.delta_E_half = delta_energy(r, 0.5 * gamma);
    g.order = std::log2(g.delta_E / g.delta_E_half);
    g.measured_ratio = measured_initial_rate(r, gamma, dt) / measured_initial_rate(r, 0.5 * gamma, dt);
    g.mismatch = std::abs(g.measured_ratio / (g.delta_E / g.delta_E_half) - 1.0);
    return g;
}

void to_json(nlohmann::json& j, const V3State& s)
{
    j = nlohmann::json{{"b_re", s.b.real()}, {"b_im", s.b.imag()}, {"c_re", s.c.real()},
                       {"c_im", s.c.imag()}, {"p_re", s.p.real()}, {"p_im", s.p.imag()}};
}

void from_json(const nlohmann::json& j, V3State& s)
{
    s.b = {j.value("b_re", 0.0), j.value("b_im", 0.0)};
    s.c = {j.value("c_re", 1.0), j.value("c_im", 0.0)};
    s.p = {j.value("p_re", 0.0), j.value("p_im", 0.0)};
}

namespace {

nlohmann::json optional_time(const std::optional<double>& t)
{
    return t ? nlohmann::json(*t) : nlohmann::json(nullptr);
}

nlohmann::json escape_json(const EscapeRecord& e)
{
    return {{"exit_threshold", optional_time(e.exit_threshold)},
            {"exit_ball", optional_time(e.exit_ball)},
            {"monotone", e.monotone},
            {"max_abs_y", e.max_abs_y},
            {"y_end", e.y_end},
            {"t_end", e.t_end}};
}

} // namespace

void to_json(nlohmann::json& j, const InstabilityReport& rep)
{
    j = nlohmann::json{
        {"r", rep.config.r},
        {"gamma", rep.config.gamma},
        {"eps0", rep.config.eps0},
        {"ball", rep.config.ball},
        {"dt", rep.config.dt},
        {"t_final", rep.config.t_final},
        {"Q_r", rep.Q_r},
        {"M_r", rep.M_r},
        {"x_r", rep.x_r},
        {"J_r_re", rep.J_r.real()},
        {"J_r_im", rep.J_r.imag()},
        {"Ecal_r", rep.Ecal_r},
        {"delta_E", rep.delta_E},
        {"delta_E_direct", rep.delta_E_direct},
        {"coefficient", rep.coefficient},
        {"second_coefficient", rep.second_coefficient},
        {"predicted_dy2", rep.predicted_dy2},
        {"measured_dy", rep.measured_dy},
        {"measured_dy2", rep.measured_dy2},
        {"relative_error", rep.relative_error},
        {"threshold", rep.threshold},
        {"turning_low", rep.turning_low},
        {"turning_high", rep.turning_high},
        {"linear_term_model", rep.linear_term_model},
        {"linear_term_fit", rep.linear_term_fit},
        {"escaped", rep.escaped},
        {"forward", escape_json(rep.forward)},
        {"backward", escape_json(rep.backward)},
    };
}

void to_json(nlohmann::json& j, const GammaRefinement& g)
{
    j = nlohmann::json{{"gamma", g.gamma},
                       {"delta_E", g.delta_E},
                       {"delta_E_half", g.delta_E_half},
                       {"order", g.order},
                       {"measured_ratio", g.measured_ratio},
                       {"mismatch", g.mismatch}};
}

} // namespace szego
