#include "szego/hardy.hpp"

#include "fft_products.hpp"
#include "szego/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace szego {

HardyCoefficients::HardyCoefficients(std::size_t trunc) : coeffs_(trunc)
{
    if (trunc == 0) {
        throw SzegoError(ErrorCode::InvalidArgument, "truncation must be positive");
    }
}

HardyCoefficients::HardyCoefficients(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs))
{
    if (coeffs_.empty()) {
        throw SzegoError(ErrorCode::InvalidArgument, "truncation must be positive");
    }
}

HardyCoefficients::HardyCoefficients(std::initializer_list<cplx> coeffs)
    : HardyCoefficients(std::vector<cplx>(coeffs))
{
}

HardyCoefficients HardyCoefficients::resized(std::size_t trunc) const
{
    std::vector<cplx> out(coeffs_.begin(),
                          coeffs_.begin() + static_cast<std::ptrdiff_t>(std::min(trunc, coeffs_.size())));
    out.resize(trunc);
    return HardyCoefficients(std::move(out));
}

double HardyCoefficients::tail_max(std::size_t from) const noexcept
{
    double worst = 0.0;
    for (std::size_t k = from; k < coeffs_.size(); ++k) {
        worst = std::max(worst, std::abs(coeffs_[k]));
    }
    return worst;
}

HardyCoefficients& HardyCoefficients::operator+=(const HardyCoefficients& other)
{
    if (other.trunc() > trunc()) {
        coeffs_.resize(other.trunc());
    }
    for (std::size_t k = 0; k < other.trunc(); ++k) {
        coeffs_[k] += other.coeffs_[k];
    }
    return *this;
}

HardyCoefficients& HardyCoefficients::operator-=(const HardyCoefficients& other)
{
    if (other.trunc() > trunc()) {
        coeffs_.resize(other.trunc());
    }
    for (std::size_t k = 0; k < other.trunc(); ++k) {
        coeffs_[k] -= other.coeffs_[k];
    }
    return *this;
}

HardyCoefficients& HardyCoefficients::operator*=(cplx scalar)
{
    for (auto& c : coeffs_) {
        c *= scalar;
    }
    return *this;
}

bool operator==(const HardyCoefficients& a, const HardyCoefficients& b) noexcept
{
    const std::size_t n = std::max(a.trunc(), b.trunc());
    for (std::size_t k = 0; k < n; ++k) {
        if (a[k] != b[k]) {
            return false;
        }
    }
    return true;
}

HardyCoefficients operator+(HardyCoefficients a, const HardyCoefficients& b)
{
    a += b;
    return a;
}

HardyCoefficients operator-(HardyCoefficients a, const HardyCoefficients& b)
{
    a -= b;
    return a;
}

HardyCoefficients operator*(cplx scalar, HardyCoefficients a)
{
    a *= scalar;
    return a;
}

bool approx_equal(const HardyCoefficients& a, const HardyCoefficients& b, double tol) noexcept
{
    const std::size_t n = std::max(a.trunc(), b.trunc());
    for (std::size_t k = 0; k < n; ++k) {
        if (std::abs(a[k] - b[k]) > tol) {
            return false;
        }
    }
    return true;
}

cplx TwoSidedSequence::at(std::ptrdiff_t k) const noexcept
{
    const std::ptrdiff_t i = k - min_index;
    if (i < 0 || i >= static_cast<std::ptrdiff_t>(coeffs.size())) {
        return {};
    }
    return coeffs[static_cast<std::size_t>(i)];
}

TwoSidedSequence TwoSidedSequence::symmetric(std::ptrdiff_t m)
{
    return TwoSidedSequence{-m, std::vector<cplx>(static_cast<std::size_t>(2 * m + 1))};
}

TwoSidedSequence to_two_sided(const HardyCoefficients& u)
{
    return TwoSidedSequence{0, std::vector<cplx>(u.coeffs().begin(), u.coeffs().end())};
}

TwoSidedSequence conjugate(const HardyCoefficients& u)
{
    const auto m = static_cast<std::ptrdiff_t>(u.trunc());
    TwoSidedSequence out{-(m - 1), std::vector<cplx>(u.trunc())};
    for (std::size_t k = 0; k < u.trunc(); ++k) {
        out.coeffs[u.trunc() - 1 - k] = std::conj(u[k]);
    }
    return out;
}

TwoSidedSequence multiply(const TwoSidedSequence& a, const TwoSidedSequence& b)
{
    if (a.coeffs.empty() || b.coeffs.empty()) {
        return {};
    }
    return TwoSidedSequence{a.min_index + b.min_index,
                            detail::linear_convolution(a.coeffs, b.coeffs)};
}

HardyCoefficients szego_project(const TwoSidedSequence& full)
{
    const std::ptrdiff_t top = full.max_index();
    if (full.coeffs.empty() || top < 0) {
        return HardyCoefficients{};
    }
    std::vector<cplx> out(static_cast<std::size_t>(top + 1));
    for (std::ptrdiff_t k = 0; k <= top; ++k) {
        out[static_cast<std::size_t>(k)] = full.at(k);
    }
    return HardyCoefficients(std::move(out));
}

cplx inner_product(const HardyCoefficients& u, const HardyCoefficients& v) noexcept
{
    const std::size_t n = std::min(u.trunc(), v.trunc());
    cplx acc{};
    for (std::size_t k = 0; k < n; ++k) {
        acc += u[k] * std::conj(v[k]);
    }
    return acc;
}

double l2_norm(const HardyCoefficients& u) noexcept
{
    double acc = 0.0;
    for (const auto& c : u.coeffs()) {
        acc += std::norm(c);
    }
    return std::sqrt(acc);
}

double sobolev_norm(const HardyCoefficients& u, double s)
{
    if (!(s >= 0.0)) {
        throw SzegoError(ErrorCode::InvalidArgument, "Sobolev index must be nonnegative");
    }
    double acc = 0.0;
    for (std::size_t k = 0; k < u.trunc(); ++k) {
        acc += std::pow(1.0 + static_cast<double>(k), 2.0 * s) * std::norm(u[k]);
    }
    return std::sqrt(acc);
}

HardyCoefficients apply_D(const HardyCoefficients& u)
{
    std::vector<cplx> out(u.trunc());
    for (std::size_t k = 0; k < u.trunc(); ++k) {
        out[k] = static_cast<double>(k) * u[k];
    }
    return HardyCoefficients(std::move(out));
}

HardyCoefficients shift(const HardyCoefficients& u)
{
    std::vector<cplx> out(u.trunc() + 1);
    std::copy(u.coeffs().begin(), u.coeffs().end(), out.begin() + 1);
    return HardyCoefficients(std::move(out));
}

HardyCoefficients coshift(const HardyCoefficients& u)
{
    if (u.trunc() == 1) {
        return HardyCoefficients{};
    }
    return HardyCoefficients(std::vector<cplx>(u.coeffs().begin() + 1, u.coeffs().end()));
}

HardyCoefficients multiply(const HardyCoefficients& u, const HardyCoefficients& v)
{
    return HardyCoefficients(detail::linear_convolution(u.coeffs(), v.coeffs()));
}

HardyCoefficients project_product_conj(const HardyCoefficients& u, const HardyCoefficients& v,
                                       std::size_t trunc)
{
    return HardyCoefficients(detail::correlation(u.coeffs(), v.coeffs(), std::max<std::size_t>(trunc, 1)));
}

NonlinearTerms nonlinear_terms(const HardyCoefficients& u)
{
    std::vector<cplx> abs2;
    std::vector<cplx> square;
    detail::quadratic_terms(u.coeffs(), abs2, square);
    return NonlinearTerms{HardyCoefficients(std::move(abs2)), HardyCoefficients(std::move(square))};
}

cplx functional_j(const HardyCoefficients& u)
{
    // Only modes below trunc(u) of u^2 pair with u.
    const auto terms = nonlinear_terms(u);
    return inner_product(terms.square, u);
}

ConservedTriple conserved(const HardyCoefficients& u)
{
    ConservedTriple out;
    for (std::size_t k = 0; k < u.trunc(); ++k) {
        const double w = std::norm(u[k]);
        out.Q += w;
        out.M += static_cast<double>(k) * w;
    }
    out.J = functional_j(u);
    out.E = 0.5 * std::norm(out.J);
    return out;
}

cplx evaluate(const HardyCoefficients& u, cplx z) noexcept
{
    cplx acc{};
    for (std::size_t k = u.trunc(); k-- > 0;) {
        acc = acc * z + u[k];
    }
    return acc;
}

std::vector<cplx> sample_on_circle(const HardyCoefficients& u, std::size_t n)
{
    if (n == 0) {
        return {};
    }
    if (n < u.trunc()) {
        throw SzegoError(ErrorCode::InvalidArgument, "grid coarser than the truncation aliases");
    }
    std::vector<cplx> grid(n);
    std::copy(u.coeffs().begin(), u.coeffs().end(), grid.begin());
    detail::dft_in_place(grid, +1);
    return grid;
}

void to_json(nlohmann::json& j, const HardyCoefficients& u)
{
    std::vector<double> re(u.trunc());
    std::vector<double> im(u.trunc());
    for (std::size_t k = 0; k < u.trunc(); ++k) {
        re[k] = u[k].real();
        im[k] = u[k].imag();
    }
    j = nlohmann::json{{"trunc", u.trunc()}, {"re", re}, {"im", im}};
}

void from_json(const nlohmann::json& j, HardyCoefficients& u)
{
    const auto trunc = j.at("trunc").get<std::size_t>();
    const auto re = j.at("re").get<std::vector<double>>();
    const auto im = j.at("im").get<std::vector<double>>();
    if (re.size() != trunc || im.size() != trunc) {
        throw SzegoError(ErrorCode::InvalidArgument, "coefficient arrays disagree with trunc");
    }
    std::vector<cplx> coeffs(trunc);
    for (std::size_t k = 0; k < trunc; ++k) {
        coeffs[k] = {re[k], im[k]};
    }
    u = HardyCoefficients(std::move(coeffs));
}

void to_json(nlohmann::json& j, const ConservedTriple& c)
{
    j = nlohmann::json{{"Q", c.Q}, {"M", c.M}, {"E", c.E}, {"J_re", c.J.real()}, {"J_im", c.J.imag()}};
}

} // namespace szego
