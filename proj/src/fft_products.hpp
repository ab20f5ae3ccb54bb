#ifndef SZEGO_FFT_PRODUCTS_HPP
#define SZEGO_FFT_PRODUCTS_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace szego::detail {

using cplx = std::complex<double>;

/// Below this many modes the quadratic loops beat the transforms.
inline constexpr std::size_t kDirectProductLimit = 48;

/// Smallest power of two >= n.
std::size_t fft_size_for(std::size_t n) noexcept;

/// In-place unnormalized DFT of `data`; sign -1 is forward, +1 is backward.
/// Plans are cached per length and shared between threads.
void dft_in_place(std::span<cplx> data, int sign);

/// Full linear convolution (length a.size() + b.size() - 1).
std::vector<cplx> linear_convolution(std::span<const cplx> a, std::span<const cplx> b);

/// c(n) = sum_m a(n+m) conj(b(m)) for n = 0..out_len-1.
std::vector<cplx> correlation(std::span<const cplx> a, std::span<const cplx> b,
                              std::size_t out_len);

/// Pi(|u|^2) and u^2 on modes 0..M-1, M = u.size(), from one forward synthesis.
void quadratic_terms(std::span<const cplx> u, std::vector<cplx>& abs2,
                     std::vector<cplx>& square);

} // namespace szego::detail

#endif
