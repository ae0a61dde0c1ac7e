#include "revfeat/augment.hpp"

#include <stdexcept>

namespace revfeat {

const std::array<AcsTransform, 8>& acs_transforms() {
    static const std::array<AcsTransform, 8> table = {{
        {0, 0, false},
        {1, 0, true},
        {2, 90, false},
        {3, 90, true},
        {4, 180, false},
        {5, 180, true},
        {6, 270, false},
        {7, 270, true},
    }};
    return table;
}

AudioClip acs_audio(const AudioClip& foa, const AcsTransform& t) {
    foa.validate();
    if (foa.channels() != 4)
        throw std::invalid_argument("acs_audio: expected 4 FOA channels");

    AudioClip out = foa;
    const std::vector<double>& x = foa.samples[1];
    const std::vector<double>& y = foa.samples[2];
    std::vector<double>& xo = out.samples[1];
    std::vector<double>& yo = out.samples[2];
    // Right-angle rotations as exact swap/negate so repeated application is
    // bit-reversible.
    switch (t.azimuth_deg) {
        case 0:
            break;
        case 90:
            for (std::size_t i = 0; i < x.size(); ++i) {
                xo[i] = -y[i];
                yo[i] = x[i];
            }
            break;
        case 180:
            for (std::size_t i = 0; i < x.size(); ++i) {
                xo[i] = -x[i];
                yo[i] = -y[i];
            }
            break;
        case 270:
            for (std::size_t i = 0; i < x.size(); ++i) {
                xo[i] = y[i];
                yo[i] = -x[i];
            }
            break;
        default:
            throw std::invalid_argument("acs_audio: rotation must be a multiple of 90 degrees");
    }
    if (t.elevation_flip)
        for (double& v : out.samples[3]) v = -v;
    return out;
}

double wrap_azimuth(double degrees) {
    while (degrees > 180.0) degrees -= 360.0;
    while (degrees <= -180.0) degrees += 360.0;
    return degrees;
}

std::vector<EventRecord> acs_labels(const std::vector<EventRecord>& events, const AcsTransform& t) {
    std::vector<EventRecord> out;
    out.reserve(events.size());
    for (const EventRecord& e : events) {
        e.validate();
        EventRecord r = e;
        r.azimuth = wrap_azimuth(e.azimuth + t.azimuth_deg);
        if (t.elevation_flip) r.elevation = -e.elevation;
        out.push_back(r);
    }
    return out;
}

std::vector<std::pair<AudioClip, std::vector<EventRecord>>> acs_expand(
    const AudioClip& clip, const std::vector<EventRecord>& events) {
    std::vector<std::pair<AudioClip, std::vector<EventRecord>>> out;
    out.reserve(8);
    for (const AcsTransform& t : acs_transforms())
        out.emplace_back(acs_audio(clip, t), acs_labels(events, t));
    return out;
}

}  // namespace revfeat
