#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace revfeat::detail {

/// In-place FFT for any length >= 1. Power-of-two lengths use the iterative
/// radix-2 kernel; other lengths go through Bluestein's chirp-z transform.
/// The inverse transform includes the 1/n scaling.
void fft(std::vector<std::complex<double>>& a, bool inverse);

/// Real-input forward transform, one-sided output of n/2 + 1 bins.
/// x is zero-padded (or truncated) to length n.
std::vector<std::complex<double>> rfft(std::span<const double> x, std::size_t n);

/// Inverse of rfft: reconstructs n real samples from n/2 + 1 one-sided bins.
std::vector<double> irfft(std::span<const std::complex<double>> spectrum, std::size_t n);

/// Linear convolution of x and h via FFT, full length x.size() + h.size() - 1.
std::vector<double> fft_convolve(std::span<const double> x, std::span<const double> h);

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n);

}  // namespace revfeat::detail
