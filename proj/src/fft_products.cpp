#include "fft_products.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <utility>

namespace szego::detail {

namespace {

// FFTW planning is not thread-safe; execution with new-array calls is.
class PlanCache {
public:
    ~PlanCache()
    {
        for (auto& [key, plan] : plans_) {
            fftw_destroy_plan(plan);
        }
    }

    fftw_plan get(std::size_t n, int sign)
    {
        std::lock_guard lock(mutex_);
        const auto key = std::make_pair(n, sign);
        if (auto it = plans_.find(key); it != plans_.end()) {
            return it->second;
        }
        std::vector<cplx> scratch(n);
        auto* ptr = reinterpret_cast<fftw_complex*>(scratch.data());
        fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), ptr, ptr,
                                          sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

PlanCache& plan_cache()
{
    static PlanCache cache;
    return cache;
}

std::vector<cplx> synthesize(std::span<const cplx> modes, std::size_t n)
{
    std::vector<cplx> grid(n);
    std::copy(modes.begin(), modes.end(), grid.begin());
    dft_in_place(grid, +1);
    return grid;
}

} // namespace

std::size_t fft_size_for(std::size_t n) noexcept
{
    std::size_t size = 1;
    while (size < n) {
        size <<= 1;
    }
    return size;
}

void dft_in_place(std::span<cplx> data, int sign)
{
    if (data.empty()) {
        return;
    }
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan_cache().get(data.size(), sign), ptr, ptr);
}

std::vector<cplx> linear_convolution(std::span<const cplx> a, std::span<const cplx> b)
{
    if (a.empty() || b.empty()) {
        return {};
    }
    const std::size_t out_len = a.size() + b.size() - 1;
    std::vector<cplx> out(out_len);
    if (std::min(a.size(), b.size()) <= kDirectProductLimit) {
        for (std::size_t i = 0; i < a.size(); ++i) {
            for (std::size_t j = 0; j < b.size(); ++j) {
                out[i + j] += a[i] * b[j];
            }
        }
        return out;
    }
    const std::size_t n = fft_size_for(out_len);
    auto fa = synthesize(a, n);
    const auto fb = synthesize(b, n);
    for (std::size_t j = 0; j < n; ++j) {
        fa[j] *= fb[j];
    }
    dft_in_place(fa, -1);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t k = 0; k < out_len; ++k) {
        out[k] = fa[k] * scale;
    }
    return out;
}

std::vector<cplx> correlation(std::span<const cplx> a, std::span<const cplx> b,
                              std::size_t out_len)
{
    std::vector<cplx> out(out_len);
    if (a.empty() || b.empty() || out_len == 0) {
        return out;
    }
    if (std::min(a.size(), b.size()) <= kDirectProductLimit) {
        for (std::size_t n = 0; n < std::min(out_len, a.size()); ++n) {
            cplx acc{};
            for (std::size_t m = 0; m < b.size() && n + m < a.size(); ++m) {
                acc += a[n + m] * std::conj(b[m]);
            }
            out[n] = acc;
        }
        return out;
    }
    // a conj(b) lives on modes -(|b|-1)..(|a|-1).
    const std::size_t n = fft_size_for(a.size() + b.size() - 1);
    auto fa = synthesize(a, n);
    const auto fb = synthesize(b, n);
    for (std::size_t j = 0; j < n; ++j) {
        fa[j] *= std::conj(fb[j]);
    }
    dft_in_place(fa, -1);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t k = 0; k < std::min(out_len, a.size()); ++k) {
        out[k] = fa[k] * scale;
    }
    return out;
}

void quadratic_terms(std::span<const cplx> u, std::vector<cplx>& abs2,
                     std::vector<cplx>& square)
{
    const std::size_t m = u.size();
    abs2.assign(m, cplx{});
    square.assign(m, cplx{});
    if (m == 0) {
        return;
    }
    if (m <= kDirectProductLimit) {
        for (std::size_t k = 0; k < m; ++k) {
            cplx acc{};
            for (std::size_t j = 0; j + k < m; ++j) {
                acc += u[j + k] * std::conj(u[j]);
            }
            abs2[k] = acc;
            cplx sq{};
            for (std::size_t j = 0; j <= k; ++j) {
                sq += u[j] * u[k - j];
            }
            square[k] = sq;
        }
        return;
    }
    const std::size_t n = fft_size_for(2 * m - 1);
    const auto f = synthesize(u, n);
    std::vector<cplx> g(n);
    std::vector<cplx> h(n);
    for (std::size_t j = 0; j < n; ++j) {
        g[j] = std::norm(f[j]);
        h[j] = f[j] * f[j];
    }
    dft_in_place(g, -1);
    dft_in_place(h, -1);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t k = 0; k < m; ++k) {
        abs2[k] = g[k] * scale;
        square[k] = h[k] * scale;
    }
}

} // namespace szego::detail
