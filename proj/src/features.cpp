#include "revfeat/features.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <utility>

#include "revfeat/fft.hpp"

namespace revfeat {

namespace {

AudioClip channel_clip(const AudioClip& multi, std::size_t c) {
    return AudioClip::mono(multi.samples[c], multi.sample_rate);
}

Grid logmel_of_spec(const ComplexSpectrogram& spec, const MelFilterbank& fb) {
    return log_power(apply_mel(power_spectrum(spec), fb));
}

void require_rate(const AudioClip& clip, int expected, const char* who) {
    if (clip.sample_rate != expected)
        throw std::invalid_argument(std::string(who) + ": clip sample rate does not match config");
}

}  // namespace

FeatureMode parse_feature_mode(const std::string& name) {
    if (name == "none") return FeatureMode::none;
    if (name == "drr") return FeatureMode::drr;
    if (name == "d_plus_r" || name == "dplusr") return FeatureMode::d_plus_r;
    if (name == "stpacc") return FeatureMode::stpacc;
    throw std::invalid_argument("unknown feature mode: " + name);
}

std::string feature_mode_name(FeatureMode mode) {
    switch (mode) {
        case FeatureMode::none: return "none";
        case FeatureMode::drr: return "drr";
        case FeatureMode::d_plus_r: return "d_plus_r";
        case FeatureMode::stpacc: return "stpacc";
    }
    throw std::invalid_argument("unknown feature mode");
}

PsdPair psd_pair(const DirectReverbPair& pair, const StftConfig& cfg) {
    PsdPair out;
    out.p_direct = power_spectrum(stft(pair.direct, cfg));
    out.p_reverb = power_spectrum(stft(pair.reverberant, cfg));
    for (double& p : out.p_direct.v) p = std::max(p, out.epsilon);
    for (double& p : out.p_reverb.v) p = std::max(p, out.epsilon);
    return out;
}

std::vector<Grid> logmel_foa(const AudioClip& foa, const FeatureConfig& cfg) {
    foa.validate();
    if (foa.channels() != 4)
        throw std::invalid_argument("logmel_foa: expected 4 FOA channels");
    require_rate(foa, cfg.sample_rate, "logmel_foa");
    const MelFilterbank fb =
        mel_filterbank(cfg.n_mels, cfg.stft.fft_len, cfg.sample_rate, cfg.f_min, cfg.resolved_f_max());
    std::vector<Grid> out;
    out.reserve(4);
    for (std::size_t c = 0; c < 4; ++c)
        out.push_back(logmel_of_spec(stft(channel_clip(foa, c), cfg.stft), fb));
    return out;
}

std::vector<Grid> intensity_vectors(const std::vector<ComplexSpectrogram>& foa_spec,
                                    const MelFilterbank& fb) {
    if (foa_spec.size() != 4)
        throw std::invalid_argument("intensity_vectors: expected W,X,Y,Z spectrograms");
    const ComplexSpectrogram& w = foa_spec[0];
    for (const auto& s : foa_spec)
        if (s.frames != w.frames || s.bins != w.bins)
            throw std::invalid_argument("intensity_vectors: spectrogram shapes disagree");
    if (fb.bins != w.bins)
        throw std::invalid_argument("intensity_vectors: filterbank does not match spectrogram bins");

    std::vector<Grid> comp(3, Grid(w.frames, w.bins));
    for (std::size_t t = 0; t < w.frames; ++t) {
        for (std::size_t f = 0; f < w.bins; ++f) {
            const std::complex<double> wc = std::conj(w.at(t, f));
            const double ix = (wc * foa_spec[1].at(t, f)).real();
            const double iy = (wc * foa_spec[2].at(t, f)).real();
            const double iz = (wc * foa_spec[3].at(t, f)).real();
            const double norm = std::sqrt(ix * ix + iy * iy + iz * iz) + 1e-10;
            comp[0].at(t, f) = ix / norm;
            comp[1].at(t, f) = iy / norm;
            comp[2].at(t, f) = iz / norm;
        }
    }
    std::vector<Grid> out;
    out.reserve(3);
    for (auto& g : comp) {
        Grid m = apply_mel(g, fb);
        for (std::size_t t = 0; t < m.rows; ++t)
            for (std::size_t k = 0; k < m.cols; ++k) m.at(t, k) /= fb.row_sums[k];
        out.push_back(std::move(m));
    }
    return out;
}

std::vector<Grid> drr_features(const DirectReverbPair& pair, const StftConfig& cfg,
                               const MelFilterbank& fb) {
    const PsdPair psd = psd_pair(pair, cfg);
    Grid ratio(psd.p_direct.rows, psd.p_direct.cols);
    for (std::size_t i = 0; i < ratio.v.size(); ++i)
        ratio.v[i] = psd.p_direct.v[i] / psd.p_reverb.v[i];
    std::vector<Grid> out;
    out.push_back(log_power(apply_mel(ratio, fb)));
    return out;
}

std::vector<Grid> d_plus_r_features(const DirectReverbPair& pair, const StftConfig& cfg,
                                    const MelFilterbank& fb) {
    std::vector<Grid> out;
    out.reserve(2);
    out.push_back(logmel_of_spec(stft(pair.direct, cfg), fb));
    out.push_back(logmel_of_spec(stft(pair.reverberant, cfg), fb));
    return out;
}

std::vector<Grid> stpacc_features(const AudioClip& w_channel, const StftConfig& cfg) {
    w_channel.validate();
    if (w_channel.channels() != 1)
        throw std::invalid_argument("stpacc_features: expected a mono clip");
    cfg.validate();

    const ComplexSpectrogram spec = stft(w_channel, cfg);
    const std::size_t n = cfg.fft_len;           // two-sided lag axis
    const std::size_t lags = n / 2;              // kept positive lags
    const std::size_t pooled = lags / 4;

    std::vector<double> kernel = hann_window(8);
    double ksum = 0.0;
    for (double k : kernel) ksum += k;
    for (double& k : kernel) k /= ksum;

    Grid out(spec.frames, pooled);
    std::vector<std::complex<double>> power(spec.bins);
    for (std::size_t t = 0; t < spec.frames; ++t) {
        for (std::size_t f = 0; f < spec.bins; ++f)
            power[f] = {std::norm(spec.at(t, f)), 0.0};
        const std::vector<double> acc = detail::irfft(power, n);

        double peak = 0.0;
        for (double a : acc) peak = std::max(peak, std::abs(a));
        const double norm = std::max(peak, 1e-10);

        std::vector<double> sq(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double a = acc[i] / norm;
            sq[i] = a * a;
        }
        // "same"-aligned moving average: out[i] = sum_m kernel[m] * sq[i + 3 - m]
        std::vector<double> smooth(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t m = 0; m < kernel.size(); ++m) {
                const long idx = static_cast<long>(i) + 3 - static_cast<long>(m);
                if (idx >= 0 && idx < static_cast<long>(n)) s += kernel[m] * sq[idx];
            }
            smooth[i] = s;
        }
        for (std::size_t j = 0; j < pooled; ++j) {
            double s = 0.0;
            for (std::size_t q = 0; q < 4; ++q) s += smooth[1 + 4 * j + q];
            out.at(t, j) = s / 4.0;
        }
    }
    return {std::move(out)};
}

FeatureStack stack_features(const AudioClip& foa, FeatureMode mode, const FeatureConfig& cfg) {
    foa.validate();
    if (foa.channels() != 4)
        throw std::invalid_argument("stack_features: expected 4 FOA channels");
    require_rate(foa, cfg.sample_rate, "stack_features");
    if (mode == FeatureMode::stpacc && cfg.n_mels != cfg.stpacc_stft.fft_len / 8)
        throw std::invalid_argument("stack_features: stpacc bins must match n_mels");

    const MelFilterbank fb =
        mel_filterbank(cfg.n_mels, cfg.stft.fft_len, cfg.sample_rate, cfg.f_min, cfg.resolved_f_max());

    std::vector<ComplexSpectrogram> specs;
    specs.reserve(4);
    for (std::size_t c = 0; c < 4; ++c) specs.push_back(stft(channel_clip(foa, c), cfg.stft));

    std::vector<Grid> grids;
    std::vector<std::string> names = {"logmel_w", "logmel_x", "logmel_y", "logmel_z",
                                      "iv_x",     "iv_y",     "iv_z"};
    for (const auto& s : specs) grids.push_back(logmel_of_spec(s, fb));
    for (auto& g : intensity_vectors(specs, fb)) grids.push_back(std::move(g));

    std::vector<BinSemantics> semantics(7, BinSemantics::mel_frequency);
    if (mode == FeatureMode::drr || mode == FeatureMode::d_plus_r) {
        const DirectReverbPair pair = split_direct_reverb(channel_clip(foa, 0), cfg.stft, cfg.wpe);
        if (mode == FeatureMode::drr) {
            for (auto& g : drr_features(pair, cfg.stft, fb)) grids.push_back(std::move(g));
            names.push_back("drr");
            semantics.push_back(BinSemantics::mel_frequency);
        } else {
            for (auto& g : d_plus_r_features(pair, cfg.stft, fb)) grids.push_back(std::move(g));
            names.push_back("logmel_direct");
            names.push_back("logmel_reverb");
            semantics.insert(semantics.end(), 2, BinSemantics::mel_frequency);
        }
    } else if (mode == FeatureMode::stpacc) {
        for (auto& g : stpacc_features(channel_clip(foa, 0), cfg.stpacc_stft))
            grids.push_back(std::move(g));
        names.push_back("stpacc");
        semantics.push_back(BinSemantics::time_lag);
    }

    FeatureStack stack;
    stack.mode = mode;
    stack.channels = grids.size();
    stack.frames = grids[0].rows;
    stack.bins = grids[0].cols;
    stack.channel_names = std::move(names);
    stack.bin_semantics = std::move(semantics);
    stack.frame_rate = static_cast<double>(cfg.sample_rate) / cfg.stft.hop;
    stack.data.resize(stack.channels * stack.frames * stack.bins);
    for (std::size_t c = 0; c < stack.channels; ++c) {
        const Grid& g = grids[c];
        if (g.rows != stack.frames || g.cols != stack.bins)
            throw std::runtime_error("stack_features: channel shapes disagree");
        for (std::size_t t = 0; t < stack.frames; ++t)
            for (std::size_t k = 0; k < stack.bins; ++k)
                stack.at(c, t, k) = static_cast<float>(g.at(t, k));
    }
    return stack;
}

}  // namespace revfeat
