#include "szego/operators.hpp"

#include "szego/error.hpp"

#include <algorithm>
#include <cmath>

namespace szego {

namespace {

std::size_t resolve_dim(const HardyCoefficients& u, std::size_t dim)
{
    const std::size_t n = dim == 0 ? u.trunc() : dim;
    if (n < 2) {
        throw SzegoError(ErrorCode::InvalidArgument,
                         "operator matrices need at least two modes");
    }
    return n;
}

HankelMatrix make_hankel(const HardyCoefficients& u, std::size_t dim, std::size_t offset)
{
    const std::size_t n = resolve_dim(u, dim);
    HankelMatrix out{Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)),
                     u.trunc(), offset};
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; j + k + offset < u.trunc() && k < n; ++k) {
            out.entries(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) =
                u[j + k + offset];
        }
    }
    return out;
}

double operator_norm(const Matrix& m)
{
    if (m.size() == 0) {
        return 0.0;
    }
    Eigen::BDCSVD<Matrix> svd(m);
    return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
}

std::vector<double> descending(const Eigen::VectorXd& ascending)
{
    std::vector<double> out(static_cast<std::size_t>(ascending.size()));
    for (Eigen::Index i = 0; i < ascending.size(); ++i) {
        out[static_cast<std::size_t>(ascending.size() - 1 - i)] = ascending(i);
    }
    return out;
}

Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

struct TaggedEig {
    double value;
    bool from_h;
    Eigen::Index index;
};

} // namespace

Vector to_vector(const HardyCoefficients& u, std::size_t dim)
{
    Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
    for (std::size_t k = 0; k < std::min(dim, u.trunc()); ++k) {
        v(static_cast<Eigen::Index>(k)) = u[k];
    }
    return v;
}

HardyCoefficients from_vector(const Vector& v)
{
    return HardyCoefficients(std::vector<cplx>(v.data(), v.data() + v.size()));
}

HankelMatrix hankel(const HardyCoefficients& u, std::size_t dim) { return make_hankel(u, dim, 0); }

HankelMatrix shifted_hankel(const HardyCoefficients& u, std::size_t dim)
{
    return make_hankel(u, dim, 1);
}

ToeplitzMatrix toeplitz(const TwoSidedSequence& symbol, std::size_t dim)
{
    if (dim < 2) {
        throw SzegoError(ErrorCode::InvalidArgument, "operator matrices need at least two modes");
    }
    const auto n = static_cast<Eigen::Index>(dim);
    ToeplitzMatrix out{Matrix::Zero(n, n), symbol};
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = 0; k < n; ++k) {
            out.entries(j, k) = symbol.at(j - k);
        }
    }
    return out;
}

ToeplitzMatrix a_u(const HardyCoefficients& u, std::size_t dim)
{
    const std::size_t n = resolve_dim(u, dim);
    const auto m = static_cast<std::ptrdiff_t>(u.trunc());
    TwoSidedSequence symbol{-(m - 1), std::vector<cplx>(2 * u.trunc() - 1)};
    for (std::size_t k = 0; k < u.trunc(); ++k) {
        symbol.coeffs[u.trunc() - 1 + k] += u[k];
        symbol.coeffs[u.trunc() - 1 - k] += std::conj(u[k]);
    }
    return toeplitz(symbol, n);
}

std::vector<double> k2_eigenvalues(const HardyCoefficients& u, std::size_t block)
{
    const auto k = shifted_hankel(u, block == 0 ? 0 : std::min(block, u.trunc()));
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(k.square()),
                                                 Eigen::EigenvaluesOnly);
    return descending(solver.eigenvalues());
}

std::vector<double> h2_eigenvalues(const HardyCoefficients& u, std::size_t block)
{
    const auto h = hankel(u, block == 0 ? 0 : std::min(block, u.trunc()));
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(h.square()),
                                                 Eigen::EigenvaluesOnly);
    return descending(solver.eigenvalues());
}

std::size_t numerical_rank(const std::vector<double>& eigs, double rel_tol)
{
    const double top = eigs.empty() ? 0.0 : *std::max_element(eigs.begin(), eigs.end());
    if (top <= 0.0) {
        return 0;
    }
    return static_cast<std::size_t>(
        std::count_if(eigs.begin(), eigs.end(), [&](double e) { return e > rel_tol * top; }));
}

SpectralReport spectral_report(const HardyCoefficients& u, double tol)
{
    if (!(tol > 0.0)) {
        throw SzegoError(ErrorCode::InvalidArgument, "rank tolerance must be positive");
    }
    const std::size_t dim = resolve_dim(u, 0);
    const Vector uvec = to_vector(u, dim);
    const double unorm = uvec.norm();

    Eigen::SelfAdjointEigenSolver<Matrix> h_solver(hermitian_part(hankel(u).square()));
    Eigen::SelfAdjointEigenSolver<Matrix> k_solver(hermitian_part(shifted_hankel(u).square()));
    const Eigen::VectorXd& h_vals = h_solver.eigenvalues();
    const Eigen::VectorXd& k_vals = k_solver.eigenvalues();

    SpectralReport report;
    report.tol = tol;
    report.h2_eigs = descending(h_vals);
    report.k2_eigs = descending(k_vals);

    // H_u^2 = K_u^2 + (.|u)u dominates K_u^2, so its top eigenvalue sets the scale.
    const double scale = std::max(h_vals.maxCoeff(), k_vals.maxCoeff());
    const double floor = tol * scale;
    report.rank_H = scale > 0.0 ? numerical_rank(report.h2_eigs, tol) : 0;
    report.rank_K = scale > 0.0 ? numerical_rank(report.k2_eigs, tol) : 0;

    Matrix kernel_basis(static_cast<Eigen::Index>(dim), 0);
    std::vector<Eigen::Index> kernel_cols;
    std::vector<TaggedEig> pool;
    for (Eigen::Index i = 0; i < h_vals.size(); ++i) {
        if (scale > 0.0 && h_vals(i) > floor) {
            pool.push_back({h_vals(i), true, i});
        }
    }
    for (Eigen::Index i = 0; i < k_vals.size(); ++i) {
        if (scale > 0.0 && k_vals(i) > floor) {
            pool.push_back({k_vals(i), false, i});
        } else {
            kernel_cols.push_back(i);
        }
    }
    std::sort(pool.begin(), pool.end(),
              [](const TaggedEig& a, const TaggedEig& b) { return a.value > b.value; });

    // Group equal eigenvalues (gap <= tol * scale); flag distinct but close pairs.
    std::size_t begin = 0;
    while (begin < pool.size()) {
        std::size_t end = begin + 1;
        while (end < pool.size() && pool[end - 1].value - pool[end].value <= floor) {
            ++end;
        }
        if (end < pool.size() && pool[end - 1].value - pool[end].value < 10.0 * floor) {
            report.unresolved = true;
        }

        std::vector<Eigen::Index> e_cols;
        std::vector<Eigen::Index> f_cols;
        double sum = 0.0;
        for (std::size_t i = begin; i < end; ++i) {
            (pool[i].from_h ? e_cols : f_cols).push_back(pool[i].index);
            sum += pool[i].value;
        }
        Matrix basis_E(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(e_cols.size()));
        Matrix basis_F(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(f_cols.size()));
        for (std::size_t c = 0; c < e_cols.size(); ++c) {
            basis_E.col(static_cast<Eigen::Index>(c)) = h_solver.eigenvectors().col(e_cols[c]);
        }
        for (std::size_t c = 0; c < f_cols.size(); ++c) {
            basis_F.col(static_cast<Eigen::Index>(c)) = k_solver.eigenvectors().col(f_cols[c]);
        }

        DominanceEntry entry;
        entry.value = sum / static_cast<double>(end - begin);
        entry.dim_E = e_cols.size();
        entry.dim_F = f_cols.size();
        // (u|e) = e^* u
        entry.overlap_E = e_cols.empty() ? 0.0 : (basis_E.adjoint() * uvec).cwiseAbs().maxCoeff();
        entry.overlap_F = f_cols.empty() ? 0.0 : (basis_F.adjoint() * uvec).cwiseAbs().maxCoeff();
        const double threshold = std::sqrt(tol) * unorm;
        const bool u_meets_F = entry.overlap_F > threshold;
        const bool u_meets_E = entry.overlap_E > threshold;
        entry.label = u_meets_F && !u_meets_E ? Dominance::K
                      : u_meets_E            ? Dominance::H
                      : (entry.dim_F > entry.dim_E ? Dominance::K : Dominance::H);
        entry.consistent = entry.label == Dominance::K
                               ? (entry.dim_F == entry.dim_E + 1 && u_meets_F && !u_meets_E)
                               : (entry.dim_E == entry.dim_F + 1 && u_meets_E && !u_meets_F);
        report.dominance.push_back(entry);

        if (entry.label == Dominance::K) {
            KDominantSpace space;
            space.value = entry.value;
            space.basis_F = basis_F;
            space.basis_E = basis_E;
            space.projection = from_vector(basis_F * (basis_F.adjoint() * uvec));
            report.k_spaces.push_back(std::move(space));
        }
        begin = end;
    }

    kernel_basis.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(kernel_cols.size()));
    for (std::size_t c = 0; c < kernel_cols.size(); ++c) {
        kernel_basis.col(static_cast<Eigen::Index>(c)) = k_solver.eigenvectors().col(kernel_cols[c]);
    }
    report.kernel_projection = from_vector(kernel_basis * (kernel_basis.adjoint() * uvec));
    return report;
}

HardyCoefficients lax_symbol(const HardyCoefficients& u)
{
    const auto terms = nonlinear_terms(u);
    return 2.0 * terms.abs2 + terms.square;
}

LaxResidual verify_lax(const HardyCoefficients& u, std::size_t block)
{
    const std::size_t dim = resolve_dim(u, 0);
    const Matrix a = a_u(u).entries;
    const Matrix h = hankel(u).entries;
    const Matrix k = shifted_hankel(u).entries;
    const HardyCoefficients x = lax_symbol(u);
    const Vector uvec = to_vector(u, dim);

    // Antilinear composition: H A h = H conj(A) conj(h); (u|h)u = u u^T conj(h).
    const Matrix res_h = hankel(x).entries - (a * h + h * a.conjugate() - uvec * uvec.transpose());
    const Matrix res_k = shifted_hankel(x).entries - (a * k + k * a.conjugate());

    LaxResidual out;
    out.block = std::min(block, dim);
    const auto b = static_cast<Eigen::Index>(out.block);
    out.h_block = operator_norm(res_h.topLeftCorner(b, b));
    out.k_block = operator_norm(res_k.topLeftCorner(b, b));
    out.h_full = operator_norm(res_h);
    out.k_full = operator_norm(res_k);
    return out;
}

AuMinusDReport verify_au_minus_d(const HardyCoefficients& u, double varpi, double tol,
                                 double rank_tol)
{
    const std::size_t dim = resolve_dim(u, 0);
    const auto n = static_cast<Eigen::Index>(dim);
    const SpectralReport spectra = spectral_report(u, rank_tol);

    Matrix a_minus_d = a_u(u).entries;
    for (Eigen::Index j = 0; j < n; ++j) {
        a_minus_d(j, j) -= static_cast<double>(j);
    }
    const HankelMatrix k_u = shifted_hankel(u);

    AuMinusDReport report;
    report.varpi = varpi;
    report.n_poles = spectra.rank_K;
    const double big_n = static_cast<double>(spectra.rank_K);
    report.mass_identity_residual =
        std::abs(varpi * big_n - 2.0 * conserved(u).Q - big_n * big_n);

    for (const auto& space : spectra.k_spaces) {
        SigmaCheck check;
        check.value = space.value;
        check.n_sigma = static_cast<std::size_t>(space.basis_F.cols());
        const double n_sigma = static_cast<double>(check.n_sigma);
        check.eigenvalue = 0.5 * (varpi + n_sigma);
        check.ladder_bottom = 0.5 * (varpi + 2.0 - n_sigma);

        const Vector us = to_vector(space.projection, dim);
        const double us_norm = us.norm();
        check.eigen_residual = (a_minus_d * us - check.eigenvalue * us).norm() / us_norm;
        if (check.eigen_residual > tol) {
            throw SzegoError(ErrorCode::NotEigenvector,
                             "u_sigma is not an eigenvector of A_u - D (relative residual " +
                                 std::to_string(check.eigen_residual) + ")");
        }

        HardyCoefficients lifted = space.projection;
        for (std::size_t s = 1; s < check.n_sigma; ++s) {
            lifted = shift(lifted);
        }
        const Vector w = to_vector(lifted, dim);
        const Vector ku = k_u.apply(us);
        check.zeta = w.dot(ku) / w.squaredNorm(); // Eigen's dot conjugates the left factor
        check.parallel_residual = (ku - check.zeta * w).norm() / std::max(ku.norm(), 1e-300);

        const Matrix restricted = space.basis_F.adjoint() * a_minus_d * space.basis_F;
        Eigen::SelfAdjointEigenSolver<Matrix> ladder(hermitian_part(restricted),
                                                      Eigen::EigenvaluesOnly);
        for (Eigen::Index i = 0; i < ladder.eigenvalues().size(); ++i) {
            check.ladder.push_back(ladder.eigenvalues()(i));
        }
        check.ladder_ok = std::abs(check.ladder.front() - check.ladder_bottom) < tol &&
                          std::abs(check.ladder.back() - check.eigenvalue) < tol;
        for (std::size_t i = 1; i < check.ladder.size(); ++i) {
            check.ladder_ok =
                check.ladder_ok && std::abs(check.ladder[i] - check.ladder[i - 1] - 1.0) < tol;
        }

        check.mean = us(0);
        check.norm2 = us.squaredNorm();
        check.mean_identity_residual =
            std::abs((varpi + n_sigma - 2.0 * big_n) * check.mean - 2.0 * check.norm2);
        report.sigmas.push_back(std::move(check));
    }
    return report;
}

double verify_syst_pl(const std::vector<cplx>& points, double varpi)
{
    for (std::size_t l = 0; l < points.size(); ++l) {
        if (!(std::abs(points[l]) < 1.0)) {
            throw SzegoError(ErrorCode::InvalidArgument, "pole parameters must lie in the unit disc");
        }
        for (std::size_t k = 0; k < l; ++k) {
            if (std::abs(points[l] - points[k]) < 1e-12) {
                throw SzegoError(ErrorCode::PoleCollision, "two pole parameters coincide");
            }
        }
    }
    double worst = 0.0;
    for (std::size_t l = 0; l < points.size(); ++l) {
        cplx rhs{};
        for (std::size_t k = 0; k < points.size(); ++k) {
            rhs += 1.0 / (1.0 - points[l] * std::conj(points[k]));
            if (k != l) {
                rhs += points[l] / (points[l] - points[k]);
            }
        }
        worst = std::max(worst, std::abs(0.5 * (varpi - 1.0) - rhs));
    }
    return worst;
}

} // namespace szego
