#pragma once

#include <stdexcept>

namespace revfeat {

/// One active source in one 100 ms label frame.
struct EventRecord {
    int frame = 0;
    int class_id = 0;
    int track_id = 0;
    double azimuth = 0.0;    // degrees, (-180, 180]
    double elevation = 0.0;  // degrees, [-90, 90]
    double distance = 0.0;   // meters

    void validate() const {
        if (!(azimuth > -180.0 && azimuth <= 180.0))
            throw std::invalid_argument("EventRecord: azimuth out of (-180, 180]");
        if (!(elevation >= -90.0 && elevation <= 90.0))
            throw std::invalid_argument("EventRecord: elevation out of [-90, 90]");
        if (!(distance >= 0.0))
            throw std::invalid_argument("EventRecord: negative distance");
    }
};

}  // namespace revfeat
