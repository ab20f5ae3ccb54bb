#include "szego/traveling_waves.hpp"

#include "szego/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace szego {

namespace {

constexpr double kTailTolerance = 1e-16;
constexpr double kMeasureTolerance = 1e-12;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::size_t kept_terms(std::size_t trunc, std::size_t n) { return (trunc - 1) / n + 1; }

double l2_norm_of(const std::vector<cplx>& v)
{
    double acc = 0.0;
    for (const auto& x : v) {
        acc += std::norm(x);
    }
    return std::sqrt(acc);
}

} // namespace

TravelingWaveSpec::TravelingWaveSpec(WaveFamily family, cplx lambda, cplx p, std::size_t n)
    : family_(family), lambda_(lambda), p_(p), n_(n)
{
    const double p2 = std::norm(p);
    if (!(p2 > 0.0) || !(p2 < 1.0)) {
        throw SzegoError(ErrorCode::InvalidArgument, "traveling waves need 0 < |p| < 1");
    }
    if (n == 0) {
        throw SzegoError(ErrorCode::InvalidArgument, "N must be positive");
    }
    if (lambda == cplx{}) {
        throw SzegoError(ErrorCode::InvalidArgument, "lambda must be nonzero");
    }
    const double l4 = std::norm(lambda) * std::norm(lambda);
    const double q = 1.0 - p2;
    const double nn = static_cast<double>(n);
    if (family == WaveFamily::I) {
        omega_ = l4 * (3.0 - p2) / (q * q * q);
        c_ = l4 / (nn * q * q);
    } else {
        const double p4 = p2 * p2;
        omega_ = l4 * p4 * (1.0 + 5.0 * p2) * (3.0 + 5.0 * p2) / (q * q * q * q);
        c_ = -l4 * p4 * (3.0 + 5.0 * p2) / (nn * q * q * q);
    }
}

std::size_t minimal_profile_trunc(const TravelingWaveSpec& spec)
{
    const double logp = std::log(std::abs(spec.p()));
    const auto count = static_cast<std::size_t>(std::floor(std::log(kTailTolerance) / logp)) + 1;
    return (count - 1) * spec.n() + 1;
}

HardyCoefficients build_profile(const TravelingWaveSpec& spec, std::size_t trunc)
{
    if (trunc == 0) {
        throw SzegoError(ErrorCode::InvalidArgument, "truncation must be positive");
    }
    const std::size_t count = kept_terms(trunc, spec.n());
    if (!(std::pow(std::abs(spec.p()), static_cast<double>(count)) < kTailTolerance)) {
        throw SzegoError(ErrorCode::TruncTooSmall,
                         "profile needs at least " + std::to_string(minimal_profile_trunc(spec)) +
                             " modes, got " + std::to_string(trunc));
    }
    std::vector<cplx> out(trunc);
    cplx term = spec.lambda();
    for (std::size_t k = 0; k < count; ++k) {
        out[k * spec.n()] = term;
        term *= spec.p();
    }
    if (spec.family() == WaveFamily::II) {
        const double p2 = std::norm(spec.p());
        out[0] -= spec.lambda() * (1.0 + p2) / (1.0 - p2);
    }
    return HardyCoefficients(std::move(out));
}

double residual_traveling(const HardyCoefficients& v0, double omega, double c)
{
    const auto terms = nonlinear_terms(v0);
    const cplx j = inner_product(terms.square, v0);
    std::vector<cplx> r(v0.trunc());
    for (std::size_t k = 0; k < v0.trunc(); ++k) {
        r[k] = (omega + c * static_cast<double>(k)) * v0[k] - 2.0 * j * terms.abs2[k] -
               std::conj(j) * terms.square[k];
    }
    return l2_norm_of(r);
}

double residual_profile(const HardyCoefficients& u, double varpi)
{
    const auto terms = nonlinear_terms(u);
    std::vector<cplx> r(u.trunc());
    for (std::size_t k = 0; k < u.trunc(); ++k) {
        r[k] = (varpi + static_cast<double>(k)) * u[k] - 2.0 * terms.abs2[k] - terms.square[k];
    }
    return l2_norm_of(r);
}

HardyCoefficients exact_orbit(const HardyCoefficients& v0, double omega, double c, double t)
{
    std::vector<cplx> out(v0.trunc());
    for (std::size_t k = 0; k < v0.trunc(); ++k) {
        out[k] = v0[k] * std::polar(1.0, -(omega + c * static_cast<double>(k)) * t);
    }
    return HardyCoefficients(std::move(out));
}

HardyCoefficients normalized_profile(cplx alpha, std::size_t n, std::size_t trunc)
{
    if (n == 0 || trunc == 0) {
        throw SzegoError(ErrorCode::InvalidArgument, "N and trunc must be positive");
    }
    if (!(std::abs(alpha) < 1.0)) {
        throw SzegoError(ErrorCode::InvalidArgument, "need |alpha| < 1");
    }
    const std::size_t count = kept_terms(trunc, n);
    if (alpha != cplx{} && !(std::pow(std::abs(alpha), static_cast<double>(count)) < kTailTolerance)) {
        throw SzegoError(ErrorCode::TruncTooSmall, "truncation does not resolve the profile");
    }
    std::vector<cplx> out(trunc);
    cplx term = static_cast<double>(n);
    for (std::size_t k = 0; k < count; ++k) {
        out[k * n] = term;
        term *= alpha;
    }
    return HardyCoefficients(std::move(out));
}

double normalized_varpi(cplx alpha, std::size_t n)
{
    const double a2 = std::norm(alpha);
    return static_cast<double>(n) * (3.0 - a2) / (1.0 - a2);
}

std::vector<cplx> nth_roots(cplx alpha, std::size_t n)
{
    if (n == 0) {
        throw SzegoError(ErrorCode::InvalidArgument, "N must be positive");
    }
    const double nn = static_cast<double>(n);
    const cplx principal = std::polar(std::pow(std::abs(alpha), 1.0 / nn), std::arg(alpha) / nn);
    std::vector<cplx> roots(n);
    for (std::size_t l = 0; l < n; ++l) {
        roots[l] = principal * std::polar(1.0, kTwoPi * static_cast<double>(l) / nn);
    }
    return roots;
}

double standing_theta(double r_minus)
{
    if (!(r_minus > 0.0) || !(r_minus < 1.0 / 6.0)) {
        throw SzegoError(ErrorCode::InvalidArgument, "r_minus must lie in (0, 1/6)");
    }
    return 2.0 * r_minus / (1.0 - 4.0 * r_minus);
}

HardyCoefficients standing_wave_arc(double theta, const std::vector<Arc>& arcs, std::size_t trunc)
{
    if (!(theta > 0.0) || !(theta < 1.0)) {
        throw SzegoError(ErrorCode::InvalidArgument, "theta must lie in (0, 1)");
    }
    if (arcs.empty() || trunc == 0) {
        throw SzegoError(ErrorCode::InvalidArgument, "need at least one arc and one mode");
    }
    std::vector<Arc> sorted = arcs;
    std::sort(sorted.begin(), sorted.end(), [](const Arc& a, const Arc& b) { return a.begin < b.begin; });
    double measure = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (!(sorted[i].end > sorted[i].begin)) {
            throw SzegoError(ErrorCode::InvalidArgument, "arc with non-positive length");
        }
        if (i + 1 < sorted.size() && sorted[i].end > sorted[i + 1].begin) {
            throw SzegoError(ErrorCode::InvalidArgument, "arcs overlap");
        }
        measure += (sorted[i].end - sorted[i].begin) / kTwoPi;
    }
    if (sorted.back().end - sorted.front().begin > kTwoPi) {
        throw SzegoError(ErrorCode::InvalidArgument, "arcs wrap around the circle");
    }
    if (std::abs(measure - theta) > kMeasureTolerance) {
        throw SzegoError(ErrorCode::MeasureMismatch,
                         "arcs have measure " + std::to_string(measure) + ", expected " +
                             std::to_string(theta));
    }

    const double scale = 1.0 / (1.0 + 2.0 * theta);
    std::vector<cplx> out(trunc);
    out[0] = theta * scale;
    for (std::size_t k = 1; k < trunc; ++k) {
        const double kk = static_cast<double>(k);
        cplx acc{};
        for (const auto& arc : sorted) {
            acc += std::polar(1.0, -kk * arc.begin) - std::polar(1.0, -kk * arc.end);
        }
        out[k] = acc * scale / cplx(0.0, kTwoPi * kk);
    }
    return HardyCoefficients(std::move(out));
}

double verify_standing(const HardyCoefficients& u, std::size_t modes)
{
    if (modes > std::max<std::size_t>(u.trunc() / 4, 1)) {
        throw SzegoError(ErrorCode::InvalidArgument, "modes checked must not exceed trunc / 4");
    }
    const auto terms = nonlinear_terms(u);
    double worst = 0.0;
    for (std::size_t k = 0; k < modes; ++k) {
        worst = std::max(worst, std::abs(u[k] - 2.0 * terms.abs2[k] - terms.square[k]));
    }
    return worst;
}

void to_json(nlohmann::json& j, const TravelingWaveSpec& spec)
{
    j = nlohmann::json{{"family", spec.family() == WaveFamily::I ? "I" : "II"},
                       {"lambda_re", spec.lambda().real()},
                       {"lambda_im", spec.lambda().imag()},
                       {"p_re", spec.p().real()},
                       {"p_im", spec.p().imag()},
                       {"N", spec.n()},
                       {"omega", spec.omega()},
                       {"c", spec.c()}};
}

TravelingWaveSpec traveling_wave_from_json(const nlohmann::json& j)
{
    const auto tag = j.at("family").get<std::string>();
    if (tag != "I" && tag != "II") {
        throw SzegoError(ErrorCode::InvalidArgument, "family must be \"I\" or \"II\"");
    }
    return TravelingWaveSpec(tag == "I" ? WaveFamily::I : WaveFamily::II,
                             {j.at("lambda_re").get<double>(), j.value("lambda_im", 0.0)},
                             {j.at("p_re").get<double>(), j.value("p_im", 0.0)},
                             j.at("N").get<std::size_t>());
}

} // namespace szego
