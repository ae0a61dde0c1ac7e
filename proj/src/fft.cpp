#include "revfeat/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace revfeat::detail {

namespace {

void fft_radix2(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * std::numbers::pi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                std::complex<double> u = a[i + j];
                std::complex<double> v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse) {
        const double inv_n = 1.0 / static_cast<double>(n);
        for (auto& v : a) v *= inv_n;
    }
}

// Bluestein: length-n DFT as a convolution of chirp-modulated sequences,
// carried out with a power-of-two radix-2 transform.
void fft_bluestein(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    const double sign = inverse ? 1.0 : -1.0;
    std::vector<std::complex<double>> chirp(n);
    for (std::size_t i = 0; i < n; ++i) {
        // i^2 mod 2n keeps the phase argument small
        const std::size_t sq = (i * i) % (2 * n);
        const double ang = sign * std::numbers::pi * static_cast<double>(sq) / static_cast<double>(n);
        chirp[i] = {std::cos(ang), std::sin(ang)};
    }
    const std::size_t m = next_power_of_two(2 * n - 1);
    std::vector<std::complex<double>> u(m), v(m);
    for (std::size_t i = 0; i < n; ++i) u[i] = a[i] * chirp[i];
    v[0] = std::conj(chirp[0]);
    for (std::size_t i = 1; i < n; ++i) v[i] = v[m - i] = std::conj(chirp[i]);
    fft_radix2(u, false);
    fft_radix2(v, false);
    for (std::size_t i = 0; i < m; ++i) u[i] *= v[i];
    fft_radix2(u, true);
    for (std::size_t i = 0; i < n; ++i) a[i] = u[i] * chirp[i];
    if (inverse) {
        const double inv_n = 1.0 / static_cast<double>(n);
        for (auto& x : a) x *= inv_n;
    }
}

}  // namespace

std::size_t next_power_of_two(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

void fft(std::vector<std::complex<double>>& a, bool inverse) {
    if (a.empty()) throw std::invalid_argument("fft: empty input");
    if (a.size() == 1) return;
    if (is_power_of_two(a.size())) {
        fft_radix2(a, inverse);
    } else {
        fft_bluestein(a, inverse);
    }
}

std::vector<std::complex<double>> rfft(std::span<const double> x, std::size_t n) {
    if (n == 0) throw std::invalid_argument("rfft: zero length");
    std::vector<std::complex<double>> a(n);
    const std::size_t copy = std::min(n, x.size());
    for (std::size_t i = 0; i < copy; ++i) a[i] = x[i];
    fft(a, false);
    a.resize(n / 2 + 1);
    return a;
}

std::vector<double> irfft(std::span<const std::complex<double>> spectrum, std::size_t n) {
    if (n == 0) throw std::invalid_argument("irfft: zero length");
    if (spectrum.size() != n / 2 + 1) throw std::invalid_argument("irfft: bin count does not match length");
    std::vector<std::complex<double>> a(n);
    for (std::size_t i = 0; i < spectrum.size(); ++i) a[i] = spectrum[i];
    for (std::size_t i = 1; i < spectrum.size(); ++i) {
        const std::size_t j = n - i;
        if (j >= spectrum.size()) a[j] = std::conj(spectrum[i]);
    }
    fft(a, true);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i].real();
    return out;
}

std::vector<double> fft_convolve(std::span<const double> x, std::span<const double> h) {
    if (x.empty() || h.empty()) return {};
    const std::size_t out_len = x.size() + h.size() - 1;
    const std::size_t n = next_power_of_two(out_len);
    auto xf = rfft(x, n);
    auto hf = rfft(h, n);
    for (std::size_t i = 0; i < xf.size(); ++i) xf[i] *= hf[i];
    auto y = irfft(xf, n);
    y.resize(out_len);
    return y;
}

}  // namespace revfeat::detail
