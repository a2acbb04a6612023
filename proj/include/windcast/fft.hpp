#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "windcast/common.hpp"

namespace windcast {

using cd = std::complex<double>;

namespace detail {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

/// Iterative radix-2 Cooley-Tukey, n a power of two. sign=-1 forward, +1 inverse
/// (inverse is unscaled).
inline void fft_pow2(std::vector<cd>& a, int sign) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * M_PI / static_cast<double>(len);
        const cd wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cd w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                cd u = a[i + k];
                cd v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

/// Bluestein chirp-z transform: DFT of arbitrary length via a power-of-two
/// convolution. sign=-1 forward, +1 inverse (unscaled).
inline std::vector<cd> fft_bluestein(const std::vector<cd>& x, int sign) {
    const std::size_t n = x.size();
    const std::size_t m = next_pow2(2 * n + 1);
    std::vector<cd> chirp(n);
    for (std::size_t k = 0; k < n; ++k) {
        // k^2 mod 2n keeps the angle argument small for exactness
        std::size_t k2 = (static_cast<unsigned long long>(k) * k) % (2 * n);
        double ang = sign * M_PI * static_cast<double>(k2) / static_cast<double>(n);
        chirp[k] = cd(std::cos(ang), std::sin(ang));
    }
    std::vector<cd> a(m, cd(0, 0)), b(m, cd(0, 0));
    for (std::size_t k = 0; k < n; ++k) a[k] = x[k] * chirp[k];
    b[0] = std::conj(chirp[0]);
    for (std::size_t k = 1; k < n; ++k) b[k] = b[m - k] = std::conj(chirp[k]);
    fft_pow2(a, -1);
    fft_pow2(b, -1);
    for (std::size_t k = 0; k < m; ++k) a[k] *= b[k];
    fft_pow2(a, +1);
    const double scale = 1.0 / static_cast<double>(m);
    std::vector<cd> y(n);
    for (std::size_t k = 0; k < n; ++k) y[k] = a[k] * scale * chirp[k];
    return y;
}

inline void fft(std::vector<cd>& a, int sign) {
    if (is_pow2(a.size()))
        fft_pow2(a, sign);
    else
        a = fft_bluestein(a, sign);
}

} // namespace detail

/// One-sided positive-frequency spectrum of a real series.
/// bins[k] holds the raw DFT coefficient Σ_t f(t)·e^{-i·2πkt/N} for
/// k = 0..⌊N/2⌋; omega(k) = 2πk/N ∈ [0, π].
struct Spectrum {
    std::vector<cd> bins;
    std::size_t length = 0; // N of the source series

    std::size_t num_bins() const { return bins.size(); }
    double omega(std::size_t k) const {
        return 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(length);
    }
    double energy() const {
        double e = 0.0;
        for (const cd& b : bins) e += std::norm(b);
        return e;
    }
};

/// Forward transform of a real series onto the one-sided grid.
inline Spectrum analyze(const std::vector<double>& values) {
    if (values.empty()) throw InvalidInput("analyze: empty series");
    const std::size_t n = values.size();
    std::vector<cd> a(n);
    for (std::size_t t = 0; t < n; ++t) a[t] = cd(values[t], 0.0);
    detail::fft(a, -1);
    Spectrum s;
    s.length = n;
    s.bins.assign(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(n / 2 + 1));
    return s;
}

/// Real part of the inverse transform under the analytic-signal convention:
/// interior positive bins are doubled, DC (and Nyquist for even N) are not.
inline std::vector<double> synthesize(const Spectrum& s) {
    const std::size_t n = s.length;
    if (n == 0) throw InvalidInput("synthesize: empty spectrum");
    std::vector<cd> full(n, cd(0, 0));
    const std::size_t half = s.bins.size();
    full[0] = s.bins[0];
    const bool even = (n % 2 == 0);
    for (std::size_t k = 1; k < half; ++k) {
        if (even && k == n / 2)
            full[k] = s.bins[k];
        else
            full[k] = 2.0 * s.bins[k];
    }
    detail::fft(full, +1);
    std::vector<double> out(n);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t t = 0; t < n; ++t) out[t] = full[t].real() * scale;
    return out;
}

} // namespace windcast
