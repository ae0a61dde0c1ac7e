#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "revfeat/audio.hpp"
#include "revfeat/grid.hpp"

namespace revfeat {

/// Analysis parameters shared by stft and istft. The window is always the
/// periodic Hann form w[i] = 0.5 * (1 - cos(2*pi*i / win_len)).
struct StftConfig {
    std::size_t win_len = 512;
    std::size_t fft_len = 512;
    std::size_t hop = 150;

    void validate() const {
        if (!(fft_len >= win_len && win_len > hop && hop > 0))
            throw std::invalid_argument("StftConfig: need fft_len >= win_len > hop > 0");
    }
};

/// One-sided complex time-frequency grid, frame-major.
struct ComplexSpectrogram {
    std::vector<std::complex<double>> values;  // frames * bins, row-major
    std::size_t frames = 0;
    std::size_t bins = 0;  // fft_len / 2 + 1
    StftConfig config;
    int sample_rate = 0;

    std::complex<double>& at(std::size_t t, std::size_t f) { return values[t * bins + f]; }
    std::complex<double> at(std::size_t t, std::size_t f) const { return values[t * bins + f]; }
};

/// Triangular mel filterbank, peak-normalized so every row has maximum 1.0.
/// Mel scale: m(f) = 2595 * log10(1 + f / 700).
struct MelFilterbank {
    std::vector<double> weights;  // n_mels * bins, row-major
    std::size_t n_mels = 0;
    std::size_t bins = 0;
    double f_min = 0.0;
    double f_max = 0.0;
    std::vector<double> center_hz;  // one per filter, strictly increasing
    std::vector<double> row_sums;   // cached sum of each row

    double weight(std::size_t k, std::size_t f) const { return weights[k * bins + f]; }
};

inline constexpr double kPowerFloor = 1e-10;

double hz_to_mel(double hz);
double mel_to_hz(double mel);

std::vector<double> hann_window(std::size_t n);

/// Frames anchored at t*hop with tail zero-padding; frame count floor(L/hop).
ComplexSpectrogram stft(const AudioClip& mono, const StftConfig& cfg);

/// Weighted overlap-add with the analysis window reused for synthesis; the
/// accumulated squared-window normalizer is floored at 1e-8. Output length
/// is frames * hop samples.
AudioClip istft(const ComplexSpectrogram& spec);

MelFilterbank mel_filterbank(std::size_t n_mels, std::size_t fft_len, int sample_rate,
                             double f_min, double f_max);

/// out(t, k) = sum_f H(k, f) * power(t, f)
Grid apply_mel(const Grid& power, const MelFilterbank& fb);

/// 10 * log10(max(x, 1e-10)) elementwise.
Grid log_power(Grid x);

/// Squared magnitudes of a spectrogram as a frames x bins grid.
Grid power_spectrum(const ComplexSpectrogram& spec);

}  // namespace revfeat
