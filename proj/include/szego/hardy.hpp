#ifndef SZEGO_HARDY_HPP
#define SZEGO_HARDY_HPP

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace szego {

using cplx = std::complex<double>;

/// Per-mode tolerance used when comparing coefficient sequences.
inline constexpr double kCoefficientTolerance = 1e-12;

///
/// Truncated element of the Hardy space L^2_+ on the circle: the Fourier
/// modes u(k), k = 0..trunc-1. Values are immutable once built; every
/// operation returns a new sequence.
///
class HardyCoefficients {
public:
    /// The zero function with a single mode.
    HardyCoefficients() : coeffs_(1) {}

    /// The zero function with `trunc` modes (trunc >= 1).
    explicit HardyCoefficients(std::size_t trunc);

    /// Takes ownership of the modes; an empty vector is rejected.
    explicit HardyCoefficients(std::vector<cplx> coeffs);

    HardyCoefficients(std::initializer_list<cplx> coeffs);

    std::size_t trunc() const noexcept { return coeffs_.size(); }

    /// Mode k; zero beyond the truncation.
    cplx operator[](std::size_t k) const noexcept
    {
        return k < coeffs_.size() ? coeffs_[k] : cplx{};
    }

    std::span<const cplx> coeffs() const noexcept { return coeffs_; }

    /// Zero-pads or cuts to `trunc` modes.
    HardyCoefficients resized(std::size_t trunc) const;

    /// Largest |u(k)| over k >= from (0 if from >= trunc).
    double tail_max(std::size_t from) const noexcept;

    HardyCoefficients& operator+=(const HardyCoefficients& other);
    HardyCoefficients& operator-=(const HardyCoefficients& other);
    HardyCoefficients& operator*=(cplx scalar);

    /// Exact comparison after zero-padding to the larger truncation.
    friend bool operator==(const HardyCoefficients& a, const HardyCoefficients& b) noexcept;

private:
    std::vector<cplx> coeffs_;
};

HardyCoefficients operator+(HardyCoefficients a, const HardyCoefficients& b);
HardyCoefficients operator-(HardyCoefficients a, const HardyCoefficients& b);
HardyCoefficients operator*(cplx scalar, HardyCoefficients a);

/// Max per-mode difference after padding is at most `tol`.
bool approx_equal(const HardyCoefficients& a, const HardyCoefficients& b,
                  double tol = kCoefficientTolerance) noexcept;

///
/// Fourier sequence over an arbitrary index window [min_index, min_index + size).
/// Used as scratch space for conjugates and products with negative modes.
///
struct TwoSidedSequence {
    std::ptrdiff_t min_index = 0;
    std::vector<cplx> coeffs;

    std::ptrdiff_t max_index() const noexcept
    {
        return min_index + static_cast<std::ptrdiff_t>(coeffs.size()) - 1;
    }

    cplx at(std::ptrdiff_t k) const noexcept;

    /// Symmetric window -m..m.
    static TwoSidedSequence symmetric(std::ptrdiff_t m);
};

/// Embeds u as a two-sided sequence (indices 0..trunc-1).
TwoSidedSequence to_two_sided(const HardyCoefficients& u);

/// conj(u) as a sequence: u(k) at index k becomes conj(u(k)) at index -k.
TwoSidedSequence conjugate(const HardyCoefficients& u);

/// Exact product of two-sided sequences (full support, no wraparound).
TwoSidedSequence multiply(const TwoSidedSequence& a, const TwoSidedSequence& b);

/// Szego projector: keeps the nonnegative modes.
HardyCoefficients szego_project(const TwoSidedSequence& full);

/// (u|v) = sum_k u(k) conj(v(k)), normalized measure on the circle.
cplx inner_product(const HardyCoefficients& u, const HardyCoefficients& v) noexcept;

/// L^2 norm, sqrt((u|u)).
double l2_norm(const HardyCoefficients& u) noexcept;

/// sqrt(sum (1+k)^{2s} |u(k)|^2), s >= 0.
double sobolev_norm(const HardyCoefficients& u, double s);

/// D = z d/dz, u(k) -> k u(k).
HardyCoefficients apply_D(const HardyCoefficients& u);

/// S u: every mode moves up by one, trunc grows by one.
HardyCoefficients shift(const HardyCoefficients& u);

/// S* u: drops u(0), every other mode moves down by one.
HardyCoefficients coshift(const HardyCoefficients& u);

/// Exact product, length trunc(u) + trunc(v) - 1.
HardyCoefficients multiply(const HardyCoefficients& u, const HardyCoefficients& v);

/// Pi(u conj(v)) restricted to the first `trunc` modes, computed alias-free.
HardyCoefficients project_product_conj(const HardyCoefficients& u, const HardyCoefficients& v,
                                       std::size_t trunc);

/// The two quadratic terms of the flow, both cut to trunc(u).
struct NonlinearTerms {
    HardyCoefficients abs2; ///< Pi(|u|^2)
    HardyCoefficients square; ///< u^2
};

NonlinearTerms nonlinear_terms(const HardyCoefficients& u);

/// J(u) = (u^2|u) = sum_{k,l} u_k u_l conj(u_{k+l}).
cplx functional_j(const HardyCoefficients& u);

/// Conserved quantities of the flow. E = |J|^2 / 2.
struct ConservedTriple {
    double Q = 0.0;
    double M = 0.0;
    double E = 0.0;
    cplx J{};
};

ConservedTriple conserved(const HardyCoefficients& u);

/// u(z) evaluated on the closed unit disc.
cplx evaluate(const HardyCoefficients& u, cplx z) noexcept;

/// Samples u on n equispaced points of the circle (x_j = 2 pi j / n).
std::vector<cplx> sample_on_circle(const HardyCoefficients& u, std::size_t n);

void to_json(nlohmann::json& j, const HardyCoefficients& u);
void from_json(const nlohmann::json& j, HardyCoefficients& u);

void to_json(nlohmann::json& j, const ConservedTriple& c);

} // namespace szego

#endif
