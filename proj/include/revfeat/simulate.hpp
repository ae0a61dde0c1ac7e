#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "revfeat/audio.hpp"
#include "revfeat/features.hpp"
#include "revfeat/geometry.hpp"

namespace revfeat {

/// Exponentially decaying seeded noise appended after the floor reflection.
struct RirTail {
    double start_s = 0.02;
    double t60_s = 0.5;
    double level = 0.05;
    std::uint32_t seed = 1;
};

/// Two-impulse image-source response (direct + floor bounce), optional tail.
struct SyntheticRIR {
    int sample_rate = 0;
    double direct_delay_s = 0.0;
    double direct_amplitude = 0.0;
    double reflection_delay_s = 0.0;
    double reflection_amplitude = 0.0;
    std::optional<RirTail> tail;
    std::vector<double> samples;
};

SyntheticRIR make_rir(const SceneGeometry& g, double beta, const std::optional<RirTail>& tail,
                      int sample_rate, std::size_t length);

/// Full linear convolution of the dry clip with the RIR, truncated to len(dry).
AudioClip spatialize(const AudioClip& dry, const SyntheticRIR& rir);

/// Direct-to-reverberant energy ratio of an impulse response: energy within
/// +-split_s of the strongest sample versus everything else (floored at 1e-12).
double true_drr(const std::vector<double>& rir, int sample_rate, double split_s = 0.0025);

struct ReflectionLag {
    bool found = false;        // false -> flat autocorrelation, no reflection peak
    std::size_t pooled_index = 0;
    double seconds = 0.0;
};

/// Argmax of the frame-averaged stpACC over pooled lags, excluding the first
/// pooled bin (lags 1-4 are dominated by the signal's own short-term
/// correlation). Frames [frame_begin, frame_end) are averaged.
ReflectionLag dominant_reflection_lag(const FeatureStack& stack, std::size_t frame_begin,
                                      std::size_t frame_end, int sample_rate = 24000);

/// Speech stand-in: a seeded dense comb of sustained inharmonic partials
/// (gentle low-pass tilt) over a low noise floor, gated into alternating
/// 200 ms bursts with 10 ms cosine ramps. Sustained partials give the signal
/// the short-time predictability of voiced speech that linear-prediction
/// dereverberation relies on, while the jittered inharmonic spacing keeps the
/// broadband autocorrelation delta-like so reflection peaks stay dominant.
AudioClip burst_noise(double duration_s, int sample_rate, std::uint32_t seed);

/// Single-channel stpacc-mode stack for lag measurements on mono signals.
FeatureStack stpacc_stack(const AudioClip& w_channel,
                          const StftConfig& cfg = {1014, 1024, 150});

}  // namespace revfeat
