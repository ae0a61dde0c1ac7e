#include "revfeat/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace revfeat {

void SceneGeometry::validate() const {
    if (!(distance_d > 0.0 && source_height > 0.0 && mic_height > 0.0 && speed_of_sound > 0.0))
        throw std::invalid_argument("SceneGeometry: distance, heights and sound speed must be positive");
}

double direct_path_length(const SceneGeometry& g) {
    g.validate();
    const double dh = g.source_height - g.mic_height;
    return std::sqrt(g.distance_d * g.distance_d + dh * dh);
}

double reflection_path_length(const SceneGeometry& g) {
    g.validate();
    const double hs = g.source_height + g.mic_height;
    return std::sqrt(g.distance_d * g.distance_d + hs * hs);
}

double direct_delay(const SceneGeometry& g) { return direct_path_length(g) / g.speed_of_sound; }

double first_reflection_delay(const SceneGeometry& g) {
    return reflection_path_length(g) / g.speed_of_sound;
}

double itdg(const SceneGeometry& g) { return first_reflection_delay(g) - direct_delay(g); }

double round_tenth_ms(double ms) { return std::round(ms * 10.0) / 10.0; }

std::vector<ItdgRow> itdg_table(const std::vector<double>& distances,
                                const std::vector<std::pair<double, double>>& heights,
                                double speed_of_sound) {
    if (distances.empty() || heights.empty())
        throw std::invalid_argument("itdg_table: distances and heights must be nonempty");
    std::vector<ItdgRow> rows;
    rows.reserve(distances.size() * heights.size());
    for (const auto& [hs, hm] : heights) {
        for (double d : distances) {
            SceneGeometry g{d, hs, hm, speed_of_sound};
            ItdgRow row;
            row.distance_m = d;
            row.source_height_m = hs;
            row.mic_height_m = hm;
            row.direct_ms = round_tenth_ms(direct_delay(g) * 1e3);
            row.first_ref_ms = round_tenth_ms(first_reflection_delay(g) * 1e3);
            row.itdg_ms = round_tenth_ms(itdg(g) * 1e3);
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace revfeat
