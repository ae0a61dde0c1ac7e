#include "revfeat/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "revfeat/fft.hpp"

namespace revfeat {

SyntheticRIR make_rir(const SceneGeometry& g, double beta, const std::optional<RirTail>& tail,
                      int sample_rate, std::size_t length) {
    g.validate();
    if (beta < 0.0 || beta > 1.0) throw std::invalid_argument("make_rir: beta must be in [0, 1]");
    if (sample_rate <= 0) throw std::invalid_argument("make_rir: bad sample rate");

    SyntheticRIR rir;
    rir.sample_rate = sample_rate;
    rir.direct_delay_s = direct_delay(g);
    rir.reflection_delay_s = first_reflection_delay(g);
    rir.direct_amplitude = 1.0 / direct_path_length(g);
    rir.reflection_amplitude = beta / reflection_path_length(g);
    rir.tail = tail;

    const std::size_t d_idx = static_cast<std::size_t>(std::lround(rir.direct_delay_s * sample_rate));
    const std::size_t r_idx =
        static_cast<std::size_t>(std::lround(rir.reflection_delay_s * sample_rate));
    if (r_idx >= length) throw std::invalid_argument("make_rir: length too short for the reflection");

    rir.samples.assign(length, 0.0);
    rir.samples[d_idx] += rir.direct_amplitude;
    if (beta > 0.0) rir.samples[r_idx] += rir.reflection_amplitude;

    if (tail) {
        if (tail->t60_s <= 0.0 || tail->level < 0.0)
            throw std::invalid_argument("make_rir: bad tail parameters");
        if (tail->start_s < rir.reflection_delay_s)
            throw std::invalid_argument("make_rir: tail must start after the floor reflection");
        const std::size_t t_idx =
            static_cast<std::size_t>(std::lround(tail->start_s * sample_rate));
        if (t_idx >= length) throw std::invalid_argument("make_rir: length too short for the tail");
        std::mt19937 rng(tail->seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (std::size_t i = t_idx; i < length; ++i) {
            const double t = static_cast<double>(i - t_idx) / sample_rate;
            const double envelope = tail->level * std::pow(10.0, -3.0 * t / tail->t60_s);
            rir.samples[i] += envelope * gauss(rng);
        }
    }
    return rir;
}

AudioClip spatialize(const AudioClip& dry, const SyntheticRIR& rir) {
    dry.validate();
    if (dry.channels() != 1) throw std::invalid_argument("spatialize: expected a mono clip");
    if (dry.sample_rate != rir.sample_rate)
        throw std::invalid_argument("spatialize: sample rates do not match");
    if (rir.samples.empty()) throw std::invalid_argument("spatialize: empty impulse response");

    std::vector<double> wet = detail::fft_convolve(dry.samples[0], rir.samples);
    wet.resize(dry.length());
    return AudioClip::mono(std::move(wet), dry.sample_rate);
}

double true_drr(const std::vector<double>& rir, int sample_rate, double split_s) {
    std::size_t peak = 0;
    double peak_mag = 0.0;
    for (std::size_t i = 0; i < rir.size(); ++i) {
        const double m = std::abs(rir[i]);
        if (m > peak_mag) {
            peak_mag = m;
            peak = i;
        }
    }
    if (peak_mag == 0.0) throw std::invalid_argument("true_drr: all-zero impulse response");

    const long w = std::lround(split_s * sample_rate);
    const std::size_t lo = peak >= static_cast<std::size_t>(w) ? peak - w : 0;
    const std::size_t hi = std::min(rir.size() - 1, peak + static_cast<std::size_t>(w));
    double e_direct = 0.0, e_rest = 0.0;
    for (std::size_t i = 0; i < rir.size(); ++i) {
        const double e = rir[i] * rir[i];
        if (i >= lo && i <= hi)
            e_direct += e;
        else
            e_rest += e;
    }
    return 10.0 * std::log10(e_direct / std::max(e_rest, 1e-12));
}

ReflectionLag dominant_reflection_lag(const FeatureStack& stack, std::size_t frame_begin,
                                      std::size_t frame_end, int sample_rate) {
    if (stack.mode != FeatureMode::stpacc)
        throw std::invalid_argument("dominant_reflection_lag: stack is not in stpacc mode");
    if (frame_begin >= frame_end || frame_end > stack.frames)
        throw std::invalid_argument("dominant_reflection_lag: empty frame range");

    const std::size_t c = stack.channels - 1;  // stpacc is the last channel
    std::vector<double> avg(stack.bins, 0.0);
    for (std::size_t t = frame_begin; t < frame_end; ++t)
        for (std::size_t k = 0; k < stack.bins; ++k) avg[k] += stack.at(c, t, k);
    for (double& a : avg) a /= static_cast<double>(frame_end - frame_begin);

    std::size_t best = 1;
    for (std::size_t k = 2; k < avg.size(); ++k)
        if (avg[k] > avg[best]) best = k;

    std::vector<double> rest(avg.begin() + 1, avg.end());
    std::nth_element(rest.begin(), rest.begin() + rest.size() / 2, rest.end());
    const double median = rest[rest.size() / 2];

    ReflectionLag lag;
    lag.pooled_index = best;
    lag.seconds = (4.0 * static_cast<double>(best) + 2.5) / sample_rate;
    lag.found = avg[best] > 0.0 && avg[best] >= 2.5 * median;
    return lag;
}

FeatureStack stpacc_stack(const AudioClip& w_channel, const StftConfig& cfg) {
    const std::vector<Grid> grids = stpacc_features(w_channel, cfg);
    const Grid& g = grids[0];
    FeatureStack stack;
    stack.mode = FeatureMode::stpacc;
    stack.channels = 1;
    stack.frames = g.rows;
    stack.bins = g.cols;
    stack.channel_names = {"stpacc"};
    stack.bin_semantics = {BinSemantics::time_lag};
    stack.frame_rate = static_cast<double>(w_channel.sample_rate) / cfg.hop;
    stack.data.resize(g.v.size());
    for (std::size_t i = 0; i < g.v.size(); ++i) stack.data[i] = static_cast<float>(g.v[i]);
    return stack;
}

AudioClip burst_noise(double duration_s, int sample_rate, std::uint32_t seed) {
    if (duration_s <= 0.0 || sample_rate <= 0)
        throw std::invalid_argument("burst_noise: bad duration or sample rate");
    const std::size_t n = static_cast<std::size_t>(std::lround(duration_s * sample_rate));
    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);

    const std::size_t burst = static_cast<std::size_t>(std::lround(0.2 * sample_rate));
    const std::size_t ramp = static_cast<std::size_t>(std::lround(0.01 * sample_rate));

    // Sustained core: a dense comb of inharmonic partials on a jittered
    // frequency grid. Sustained narrowband partials give the stand-in the
    // short-time predictability of voiced speech (which linear-prediction
    // dereverberation depends on), while the jittered, non-harmonic spacing
    // keeps the full-band autocorrelation delta-like beyond a few samples, so
    // early-reflection peaks remain dominant in lag analyses.
    const double f_lo = 150.0;
    const double f_hi = std::min(11000.0, 0.46 * sample_rate);
    const int n_tones = 150;
    std::vector<double> rot_c(n_tones), rot_s(n_tones), st_c(n_tones), st_s(n_tones),
        amp(n_tones);
    for (int i = 0; i < n_tones; ++i) {
        const double f = f_lo + (f_hi - f_lo) * (i + uniform(rng)) / n_tones;
        const double w = 2.0 * M_PI * f / sample_rate;
        rot_c[i] = std::cos(w);
        rot_s[i] = std::sin(w);
        const double ph = 2.0 * M_PI * uniform(rng);
        st_c[i] = std::cos(ph);
        st_s[i] = std::sin(ph);
        amp[i] = std::pow(f / f_lo, -0.3);  // gentle low-pass tilt
    }
    double amp_sq = 0.0;
    for (double a : amp) amp_sq += a * a;
    const double noise_rms = 0.05 * std::sqrt(0.5 * amp_sq);  // floor ~26 dB down

    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double v = 0.0;
        for (int j = 0; j < n_tones; ++j) {
            const double c = st_c[j] * rot_c[j] - st_s[j] * rot_s[j];
            st_s[j] = st_s[j] * rot_c[j] + st_c[j] * rot_s[j];
            st_c[j] = c;
            v += amp[j] * st_s[j];
        }
        y[i] = v + noise_rms * gauss(rng);
    }
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t phase = i % (2 * burst);
        double env = 0.0;
        if (phase < burst) {
            env = 1.0;
            if (phase < ramp)
                env = 0.5 * (1.0 - std::cos(M_PI * phase / ramp));
            else if (burst - phase <= ramp)
                env = 0.5 * (1.0 - std::cos(M_PI * (burst - phase) / ramp));
        }
        y[i] *= env;
    }

    double peak = 0.0;
    for (double v : y) peak = std::max(peak, std::abs(v));
    if (peak > 0.0)
        for (double& v : y) v *= 0.5 / peak;
    return AudioClip::mono(std::move(y), sample_rate);
}

}  // namespace revfeat
