#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace revfeat {

/// Speed of sound at room temperature (about 20 C).
inline constexpr double kSpeedOfSound = 343.2;

/// Source and microphone above a reflective floor, separated horizontally by
/// distance_d. The first reflection is modeled by the image source mirrored
/// below the floor.
struct SceneGeometry {
    double distance_d = 1.0;       // m, horizontal source-mic separation
    double source_height = 1.5;    // m
    double mic_height = 1.5;       // m
    double speed_of_sound = kSpeedOfSound;  // m/s

    void validate() const;
};

double direct_path_length(const SceneGeometry& g);       // m
double reflection_path_length(const SceneGeometry& g);   // m

double direct_delay(const SceneGeometry& g);             // s
double first_reflection_delay(const SceneGeometry& g);   // s
double itdg(const SceneGeometry& g);                     // s

/// Round a millisecond value to one decimal, as used for table display.
double round_tenth_ms(double ms);

struct ItdgRow {
    double distance_m;
    double source_height_m;
    double mic_height_m;
    double direct_ms;       // rounded to 0.1 ms
    double first_ref_ms;    // rounded to 0.1 ms
    double itdg_ms;         // rounded to 0.1 ms
};

/// One row per (distance, height pair), delays in ms rounded to 0.1 ms.
std::vector<ItdgRow> itdg_table(const std::vector<double>& distances,
                                const std::vector<std::pair<double, double>>& heights,
                                double speed_of_sound = kSpeedOfSound);

}  // namespace revfeat
