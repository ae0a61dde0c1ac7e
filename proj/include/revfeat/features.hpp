#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "revfeat/audio.hpp"
#include "revfeat/dsp.hpp"
#include "revfeat/grid.hpp"
#include "revfeat/wpe.hpp"

namespace revfeat {

enum class FeatureMode { none, drr, d_plus_r, stpacc };
enum class BinSemantics { mel_frequency, time_lag };

FeatureMode parse_feature_mode(const std::string& name);
std::string feature_mode_name(FeatureMode mode);

/// Everything needed to turn a FOA clip into a stacked network input.
struct FeatureConfig {
    StftConfig stft{512, 512, 150};
    StftConfig stpacc_stft{1014, 1024, 150};
    std::size_t n_mels = 128;
    double f_min = 0.0;
    double f_max = 0.0;  // 0 -> sample_rate / 2
    WpeConfig wpe;
    int sample_rate = 24000;

    double resolved_f_max() const { return f_max > 0.0 ? f_max : sample_rate / 2.0; }
};

/// Stacked feature tensor, channel-major (c, t, k), stored as float32.
struct FeatureStack {
    std::vector<float> data;
    std::size_t channels = 0;
    std::size_t frames = 0;
    std::size_t bins = 0;
    std::vector<std::string> channel_names;
    std::vector<BinSemantics> bin_semantics;  // one entry per channel
    FeatureMode mode = FeatureMode::none;
    double frame_rate = 0.0;

    float& at(std::size_t c, std::size_t t, std::size_t k) {
        return data[(c * frames + t) * bins + k];
    }
    float at(std::size_t c, std::size_t t, std::size_t k) const {
        return data[(c * frames + t) * bins + k];
    }
};

/// Clamped direct/reverberant power spectral densities on the STFT grid.
struct PsdPair {
    Grid p_direct;
    Grid p_reverb;
    double epsilon = 1e-10;
};

PsdPair psd_pair(const DirectReverbPair& pair, const StftConfig& cfg);

/// Per-channel log-mel spectrograms of a 4-channel FOA clip; 4 grids of T x n_mels.
std::vector<Grid> logmel_foa(const AudioClip& foa, const FeatureConfig& cfg = {});

/// Acoustic intensity direction per mel bin from the W,X,Y,Z spectrograms;
/// 3 grids of T x n_mels with values in [-1, 1].
std::vector<Grid> intensity_vectors(const std::vector<ComplexSpectrogram>& foa_spec,
                                    const MelFilterbank& fb);

/// Direct-to-reverberant ratio per mel band, in dB; 1 grid.
std::vector<Grid> drr_features(const DirectReverbPair& pair, const StftConfig& cfg,
                               const MelFilterbank& fb);

/// Separate log-mel spectrograms of the direct and reverberant components; 2 grids.
std::vector<Grid> d_plus_r_features(const DirectReverbPair& pair, const StftConfig& cfg,
                                    const MelFilterbank& fb);

/// Short-term power of the normalized autocorrelation, pooled over time lags;
/// 1 grid of T x 128 with values in [0, 1].
std::vector<Grid> stpacc_features(const AudioClip& w_channel, const StftConfig& cfg = {1014, 1024, 150});

/// Full model input: [logmel W,X,Y,Z; IV x,y,z; mode-specific channels].
FeatureStack stack_features(const AudioClip& foa, FeatureMode mode, const FeatureConfig& cfg = {});

}  // namespace revfeat
