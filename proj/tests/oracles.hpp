// Reference computations for the tests. Everything here is written from the
// definitions with plain loops (no FFT, no library helpers) so that it can
// serve as an independent check of the library.
#ifndef SZEGO_TESTS_ORACLES_HPP
#define SZEGO_TESTS_ORACLES_HPP

#include "szego/hardy.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using szego::cplx;
using szego::HardyCoefficients;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// u(e^{ix_j}) on n equispaced points by direct summation.
inline std::vector<cplx> grid(const HardyCoefficients& u, std::size_t n)
{
    std::vector<cplx> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double x = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
        cplx acc{};
        for (std::size_t k = 0; k < u.trunc(); ++k) {
            acc += u[k] * std::polar(1.0, static_cast<double>(k) * x);
        }
        out[j] = acc;
    }
    return out;
}

/// Trapezoid rule for the k-th Fourier coefficient of sampled values.
inline cplx fourier(const std::vector<cplx>& values, long k)
{
    const auto n = static_cast<double>(values.size());
    cplx acc{};
    for (std::size_t j = 0; j < values.size(); ++j) {
        const double x = kTwoPi * static_cast<double>(j) / n;
        acc += values[j] * std::polar(1.0, -static_cast<double>(k) * x);
    }
    return acc / n;
}

/// Mean of |f|^2 over the grid.
inline double mean_square(const std::vector<cplx>& values)
{
    double acc = 0.0;
    for (const auto& v : values) {
        acc += std::norm(v);
    }
    return acc / static_cast<double>(values.size());
}

/// [Pi(|u|^2)](k) = sum_j u(j+k) conj(u(j)).
inline cplx abs2(const HardyCoefficients& u, std::size_t k)
{
    cplx acc{};
    for (std::size_t j = 0; j + k < u.trunc(); ++j) {
        acc += u[j + k] * std::conj(u[j]);
    }
    return acc;
}

/// [u^2](k) = sum_{j <= k} u(j) u(k-j).
inline cplx square(const HardyCoefficients& u, std::size_t k)
{
    cplx acc{};
    for (std::size_t j = 0; j <= k; ++j) {
        acc += u[j] * u[k - j];
    }
    return acc;
}

/// J(u) = sum_{k,l} u(k) u(l) conj(u(k+l)).
inline cplx functional_j(const HardyCoefficients& u)
{
    cplx acc{};
    for (std::size_t k = 0; k < u.trunc(); ++k) {
        for (std::size_t l = 0; k + l < u.trunc(); ++l) {
            acc += u[k] * u[l] * std::conj(u[k + l]);
        }
    }
    return acc;
}

/// -i (2 J Pi(|u|^2) + conj(J) u^2) mode by mode.
inline std::vector<cplx> rhs(const HardyCoefficients& u)
{
    const cplx j = oracle::functional_j(u);
    std::vector<cplx> out(u.trunc());
    for (std::size_t k = 0; k < u.trunc(); ++k) {
        out[k] = cplx(0.0, -1.0) * (2.0 * j * oracle::abs2(u, k) + std::conj(j) * oracle::square(u, k));
    }
    return out;
}

inline double norm(const std::vector<cplx>& v)
{
    double acc = 0.0;
    for (const auto& x : v) {
        acc += std::norm(x);
    }
    return std::sqrt(acc);
}

/// lambda p^k for k < trunc.
inline HardyCoefficients geometric(cplx lambda, cplx p, std::size_t trunc)
{
    std::vector<cplx> c(trunc);
    cplx t = lambda;
    for (auto& x : c) {
        x = t;
        t *= p;
    }
    return HardyCoefficients(std::move(c));
}

/// Random coefficients with a geometric envelope so products stay tame.
inline HardyCoefficients random_state(std::mt19937_64& rng, std::size_t trunc, double decay = 0.7)
{
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<cplx> c(trunc);
    double env = 1.0;
    for (auto& x : c) {
        x = env * cplx(g(rng), g(rng));
        env *= decay;
    }
    return HardyCoefficients(std::move(c));
}

} // namespace oracle

#endif
