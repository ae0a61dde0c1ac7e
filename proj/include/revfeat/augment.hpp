#pragma once

#include <array>
#include <utility>
#include <vector>

#include "revfeat/audio.hpp"
#include "revfeat/events.hpp"

namespace revfeat {

/// One of the 8 exact FOA channel-swap augmentations: a right-angle azimuth
/// rotation combined with an optional elevation flip. W is always unchanged.
struct AcsTransform {
    int id = 0;
    int azimuth_deg = 0;  // 0, 90, 180 or 270
    bool elevation_flip = false;
};

const std::array<AcsTransform, 8>& acs_transforms();

AudioClip acs_audio(const AudioClip& foa, const AcsTransform& t);

std::vector<EventRecord> acs_labels(const std::vector<EventRecord>& events, const AcsTransform& t);

/// All 8 transformed (audio, labels) pairs; index 0 is the identity.
std::vector<std::pair<AudioClip, std::vector<EventRecord>>> acs_expand(
    const AudioClip& clip, const std::vector<EventRecord>& events);

/// wrap into (-180, 180]
double wrap_azimuth(double degrees);

}  // namespace revfeat
