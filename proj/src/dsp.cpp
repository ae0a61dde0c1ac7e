#include "revfeat/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "revfeat/fft.hpp"

namespace revfeat {

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

std::vector<double> hann_window(std::size_t n) {
    if (n == 0) throw std::invalid_argument("hann_window: n must be >= 1");
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                     static_cast<double>(n)));
    }
    return w;
}

ComplexSpectrogram stft(const AudioClip& mono, const StftConfig& cfg) {
    cfg.validate();
    if (mono.channels() != 1) throw std::invalid_argument("stft: expected a mono clip");
    const auto x = mono.channel(0);
    if (x.empty()) throw std::invalid_argument("stft: empty signal");

    const std::size_t frames = x.size() / cfg.hop;
    const std::size_t bins = cfg.fft_len / 2 + 1;
    const auto window = hann_window(cfg.win_len);

    ComplexSpectrogram spec;
    spec.frames = frames;
    spec.bins = bins;
    spec.config = cfg;
    spec.sample_rate = mono.sample_rate;
    spec.values.resize(frames * bins);

    std::vector<double> frame(cfg.win_len);
    for (std::size_t t = 0; t < frames; ++t) {
        const std::size_t start = t * cfg.hop;
        for (std::size_t i = 0; i < cfg.win_len; ++i) {
            const std::size_t n = start + i;
            frame[i] = (n < x.size()) ? x[n] * window[i] : 0.0;
        }
        auto bins_t = detail::rfft(frame, cfg.fft_len);
        std::copy(bins_t.begin(), bins_t.end(), spec.values.begin() + static_cast<std::ptrdiff_t>(t * bins));
    }
    return spec;
}

AudioClip istft(const ComplexSpectrogram& spec) {
    spec.config.validate();
    const std::size_t out_len = spec.frames * spec.config.hop;
    std::vector<double> out(out_len, 0.0);
    std::vector<double> norm(out_len, 0.0);
    const auto window = hann_window(spec.config.win_len);

    std::vector<std::complex<double>> row(spec.bins);
    for (std::size_t t = 0; t < spec.frames; ++t) {
        std::copy(spec.values.begin() + static_cast<std::ptrdiff_t>(t * spec.bins),
                  spec.values.begin() + static_cast<std::ptrdiff_t>((t + 1) * spec.bins), row.begin());
        auto frame = detail::irfft(row, spec.config.fft_len);
        const std::size_t start = t * spec.config.hop;
        for (std::size_t i = 0; i < spec.config.win_len; ++i) {
            const std::size_t n = start + i;
            if (n >= out_len) break;
            out[n] += window[i] * frame[i];
            norm[n] += window[i] * window[i];
        }
    }
    for (std::size_t n = 0; n < out_len; ++n) {
        out[n] /= std::max(norm[n], 1e-8);
    }
    return AudioClip::mono(std::move(out), spec.sample_rate);
}

MelFilterbank mel_filterbank(std::size_t n_mels, std::size_t fft_len, int sample_rate,
                             double f_min, double f_max) {
    if (n_mels < 1) throw std::invalid_argument("mel_filterbank: n_mels must be >= 1");
    const double nyquist = 0.5 * static_cast<double>(sample_rate);
    if (!(f_min >= 0.0 && f_min < f_max && f_max <= nyquist))
        throw std::invalid_argument("mel_filterbank: need 0 <= f_min < f_max <= sample_rate/2");

    const std::size_t bins = fft_len / 2 + 1;
    const double mel_lo = hz_to_mel(f_min);
    const double mel_hi = hz_to_mel(f_max);

    std::vector<double> edges_hz(n_mels + 2);
    for (std::size_t i = 0; i < edges_hz.size(); ++i) {
        const double mel = mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) /
                                        static_cast<double>(n_mels + 1);
        edges_hz[i] = mel_to_hz(mel);
    }

    MelFilterbank fb;
    fb.n_mels = n_mels;
    fb.bins = bins;
    fb.f_min = f_min;
    fb.f_max = f_max;
    fb.weights.assign(n_mels * bins, 0.0);
    fb.center_hz.resize(n_mels);
    fb.row_sums.resize(n_mels);

    const double bin_hz = static_cast<double>(sample_rate) / static_cast<double>(fft_len);
    for (std::size_t k = 0; k < n_mels; ++k) {
        const double left = edges_hz[k];
        const double center = edges_hz[k + 1];
        const double right = edges_hz[k + 2];
        fb.center_hz[k] = center;
        double row_max = 0.0;
        for (std::size_t f = 0; f < bins; ++f) {
            const double hz = static_cast<double>(f) * bin_hz;
            double w = 0.0;
            if (hz > left && hz < right) {
                w = (hz <= center) ? (hz - left) / (center - left) : (right - hz) / (right - center);
            }
            fb.weights[k * bins + f] = w;
            row_max = std::max(row_max, w);
        }
        if (row_max <= 0.0) {
            // Filter narrower than the bin spacing: give it the nearest bin so
            // every row keeps a unit peak.
            const auto f = static_cast<std::size_t>(
                std::clamp(std::llround(center / bin_hz), 0LL, static_cast<long long>(bins - 1)));
            fb.weights[k * bins + f] = 1.0;
            row_max = 1.0;
        }
        double sum = 0.0;
        for (std::size_t f = 0; f < bins; ++f) {
            fb.weights[k * bins + f] /= row_max;
            sum += fb.weights[k * bins + f];
        }
        fb.row_sums[k] = sum;
    }
    return fb;
}

Grid apply_mel(const Grid& power, const MelFilterbank& fb) {
    if (power.cols != fb.bins) throw std::invalid_argument("apply_mel: bin count mismatch");
    Grid out(power.rows, fb.n_mels);
    for (std::size_t t = 0; t < power.rows; ++t) {
        const double* in_row = power.v.data() + t * power.cols;
        double* out_row = out.v.data() + t * fb.n_mels;
        for (std::size_t k = 0; k < fb.n_mels; ++k) {
            const double* w = fb.weights.data() + k * fb.bins;
            double acc = 0.0;
            for (std::size_t f = 0; f < fb.bins; ++f) acc += w[f] * in_row[f];
            out_row[k] = acc;
        }
    }
    return out;
}

Grid log_power(Grid x) {
    for (auto& v : x.v) v = 10.0 * std::log10(std::max(v, kPowerFloor));
    return x;
}

Grid power_spectrum(const ComplexSpectrogram& spec) {
    Grid g(spec.frames, spec.bins);
    for (std::size_t i = 0; i < spec.values.size(); ++i) g.v[i] = std::norm(spec.values[i]);
    return g;
}

}  // namespace revfeat
