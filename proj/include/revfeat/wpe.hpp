#pragma once

#include <cstddef>
#include <stdexcept>

#include "revfeat/audio.hpp"
#include "revfeat/dsp.hpp"

namespace revfeat {

/// Batch single-channel WPE dereverberation parameters.
struct WpeConfig {
    int taps = 60;        // prediction filter length K
    int delay = 5;        // prediction delay in frames
    int iterations = 5;
    double regularization = 1e-6;  // diagonal loading, scaled by trace/K
    double power_floor = 1e-10;

    void validate() const {
        if (taps < 1 || delay < 1 || iterations < 1)
            throw std::invalid_argument("WpeConfig: taps, delay and iterations must be >= 1");
        if (regularization < 0.0 || power_floor <= 0.0)
            throw std::invalid_argument("WpeConfig: bad regularization or power floor");
    }
};

/// Additive time-domain decomposition of a clip into an estimated direct
/// component and the reverberant remainder r = x - d.
struct DirectReverbPair {
    AudioClip direct;
    AudioClip reverberant;
    std::size_t source_len = 0;
};

/// Iterative weighted prediction error dereverberation, run independently per
/// frequency bin over the whole spectrogram (batch, not recursive).
ComplexSpectrogram wpe(const ComplexSpectrogram& spec, const WpeConfig& cfg = {});

/// d = istft(wpe(stft(x))) brought back to len(x); r = x - d.
DirectReverbPair split_direct_reverb(const AudioClip& w_channel, const StftConfig& stft_cfg = {},
                                     const WpeConfig& wpe_cfg = {});

}  // namespace revfeat
