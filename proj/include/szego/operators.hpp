#ifndef SZEGO_OPERATORS_HPP
#define SZEGO_OPERATORS_HPP

#include "szego/hardy.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace szego {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Default relative threshold separating finite-rank spectra from round-off.
inline constexpr double kRankTolerance = 1e-10;

Vector to_vector(const HardyCoefficients& u, std::size_t dim);
HardyCoefficients from_vector(const Vector& v);

///
/// Matrix of a Hankel operator: entries(j,k) = u(j+k+offset), offset 0 for
/// H_u and 1 for the shifted operator K_u = S* H_u.
///
/// The operator is antilinear: it acts as h -> entries * conj(h). Compositions
/// follow from that rule, e.g. H_u T h = entries * conj(T) * conj(h).
///
struct HankelMatrix {
    Matrix entries;
    std::size_t symbol_trunc = 0;
    std::size_t offset = 0;

    Vector apply(const Vector& h) const { return entries * h.conjugate(); }

    /// The C-linear square, h -> entries * entries^* h.
    Matrix square() const { return entries * entries.adjoint(); }
};

/// Matrix of T_b: entries(j,k) = b(j-k).
struct ToeplitzMatrix {
    Matrix entries;
    TwoSidedSequence symbol;

    Vector apply(const Vector& h) const { return entries * h; }
};

/// H_u restricted to the first `dim` modes (dim = 0 means trunc(u)); dim >= 2.
HankelMatrix hankel(const HardyCoefficients& u, std::size_t dim = 0);

/// K_u restricted to the first `dim` modes.
HankelMatrix shifted_hankel(const HardyCoefficients& u, std::size_t dim = 0);

/// T_b on the first `dim` modes.
ToeplitzMatrix toeplitz(const TwoSidedSequence& symbol, std::size_t dim);

/// A_u = T_u + T_{conj u}; Hermitian.
ToeplitzMatrix a_u(const HardyCoefficients& u, std::size_t dim = 0);

enum class Dominance { H, K };

struct DominanceEntry {
    double value = 0.0; ///< shared eigenvalue s^2
    Dominance label = Dominance::H;
    std::size_t dim_E = 0; ///< multiplicity in H_u^2
    std::size_t dim_F = 0; ///< multiplicity in K_u^2
    double overlap_E = 0.0; ///< max |(u|e)| over the E basis
    double overlap_F = 0.0; ///< max |(u|f)| over the F basis
    bool consistent = false; ///< dims differ by one, on the labelled side
};

/// One K-dominant eigenspace F_u(sigma) with the matching E_u(sigma).
struct KDominantSpace {
    double value = 0.0; ///< sigma^2
    Matrix basis_F; ///< orthonormal columns
    Matrix basis_E;
    HardyCoefficients projection; ///< u_sigma
};

struct SpectralReport {
    std::vector<double> h2_eigs; ///< descending
    std::vector<double> k2_eigs; ///< descending
    std::size_t rank_H = 0;
    std::size_t rank_K = 0;
    std::vector<DominanceEntry> dominance; ///< descending in value
    std::vector<KDominantSpace> k_spaces;
    HardyCoefficients kernel_projection; ///< projection of u onto ker K_u
    bool unresolved = false; ///< two distinct eigenvalues within 10 tol
    double tol = kRankTolerance;
};

/// Eigen-decomposition of H_u^2 and K_u^2 with dominance labels and u_sigma.
SpectralReport spectral_report(const HardyCoefficients& u, double tol = kRankTolerance);

/// Descending eigenvalues of K_u^2 on the first `block` modes (0 = trunc).
std::vector<double> k2_eigenvalues(const HardyCoefficients& u, std::size_t block = 0);

/// Descending eigenvalues of H_u^2 on the first `block` modes.
std::vector<double> h2_eigenvalues(const HardyCoefficients& u, std::size_t block = 0);

/// Count of eigenvalues above rel_tol times the largest one.
std::size_t numerical_rank(const std::vector<double>& eigs, double rel_tol = kRankTolerance);

///
/// Operator-norm residuals of
///   K_{X(u)} = A_u K_u + K_u A_u
///   H_{X(u)} = A_u H_u + H_u A_u - (u|.)u
/// with X(u) = 2 Pi(|u|^2) + u^2. The `*_block` values restrict to the
/// leading block; the `*_full` values are the whole truncated matrices and
/// carry the Galerkin truncation error.
///
struct LaxResidual {
    double k_block = 0.0;
    double h_block = 0.0;
    double k_full = 0.0;
    double h_full = 0.0;
    std::size_t block = 0;
};

LaxResidual verify_lax(const HardyCoefficients& u, std::size_t block = 64);

/// X(u) = 2 Pi(|u|^2) + u^2 on the modes of u.
HardyCoefficients lax_symbol(const HardyCoefficients& u);

/// Check of the (A_u - D) eigen-ladder on one K-dominant eigenspace.
struct SigmaCheck {
    double value = 0.0; ///< sigma^2
    std::size_t n_sigma = 0; ///< dim F_u(sigma)
    double eigenvalue = 0.0; ///< (varpi + n_sigma) / 2
    double eigen_residual = 0.0; ///< |(A_u - D)u_s - eigenvalue u_s| / |u_s|
    cplx zeta{}; ///< K_u(u_s) = zeta z^{n-1} u_s
    double parallel_residual = 0.0; ///< relative
    std::vector<double> ladder; ///< ascending spectrum of (A_u - D) on F
    double ladder_bottom = 0.0; ///< (varpi + 2 - n_sigma) / 2
    bool ladder_ok = false; ///< simple, unit spacing, expected bottom
    cplx mean{}; ///< (u_s|1)
    double norm2 = 0.0; ///< |u_s|^2
    double mean_identity_residual = 0.0; ///< |(varpi + n - 2N)(u_s|1) - 2|u_s|^2|
};

struct AuMinusDReport {
    double varpi = 0.0;
    std::size_t n_poles = 0; ///< rank K_u
    double mass_identity_residual = 0.0; ///< |varpi N - 2Q - N^2|
    std::vector<SigmaCheck> sigmas;
};

/// Throws NOT_EIGENVECTOR when a u_sigma misses its eigenvalue by more than tol.
AuMinusDReport verify_au_minus_d(const HardyCoefficients& u, double varpi, double tol = 1e-8,
                                 double rank_tol = kRankTolerance);

/// Max over l of |(varpi-1)/2 - sum_k 1/(1 - p_l conj p_k) - sum_{k != l} p_l/(p_l - p_k)|.
double verify_syst_pl(const std::vector<cplx>& points, double varpi);

} // namespace szego

#endif
