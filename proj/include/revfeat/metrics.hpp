#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "revfeat/events.hpp"

namespace revfeat {

/// Great-circle angle between two (azimuth, elevation) directions, degrees in [0, 180].
double angular_error(double az_a_deg, double el_a_deg, double az_b_deg, double el_b_deg);

/// |pred - ref| / ref; the reference distance must be positive.
double relative_distance_error(double pred_m, double ref_m);

struct MatchResult {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (pred index, ref index)
    std::vector<std::size_t> unmatched_preds;
    std::vector<std::size_t> unmatched_refs;
};

/// Minimum-total-angular-error one-to-one assignment between predictions and
/// references of a single (frame, class) group.
MatchResult match_frame_class(const std::vector<EventRecord>& preds,
                              const std::vector<EventRecord>& refs);

/// Which matched pairs enter the DOAE/RDE means: every matched same-class pair,
/// or only those passing the TP thresholds.
enum class PairAveraging { all_matched, tp_only };

struct ClassScore {
    int class_id = 0;
    long tp = 0, fp = 0, fn = 0;
    long matched = 0;  // pairs contributing to doae/rde under the chosen averaging
    double f = 0.0;
    double doae = 180.0;
    double rde = 1.0;
    bool sentinel = false;  // no contributing pairs; doae/rde hold sentinel values
};

struct SeldScores {
    double f_score = 0.0;  // macro F over present classes
    double doae = 180.0;   // degrees
    double rde = 1.0;
    double seld = 1.0;     // mean((1 - F), DOAE/180, RDE)
    PairAveraging averaging = PairAveraging::all_matched;
    std::vector<ClassScore> per_class;
};

/// Location-dependent detection scores: per (frame, class) optimal matching,
/// TP iff angular error <= 20 degrees and relative distance error < 1,
/// macro-averaged over classes present in either list.
SeldScores score(const std::vector<EventRecord>& preds, const std::vector<EventRecord>& refs,
                 PairAveraging averaging = PairAveraging::all_matched);

struct SequenceData {
    std::vector<EventRecord> preds;
    std::vector<EventRecord> refs;
};

struct JackknifeEstimate {
    double point = 0.0;        // metric over all sequences pooled
    double pseudo_mean = 0.0;  // centre of the interval
    double low = 0.0;
    double high = 0.0;
};

/// Leave-one-sequence-out jackknife with a 95% Student-t interval on the
/// pseudo-values.
JackknifeEstimate jackknife_ci(const std::vector<SequenceData>& sequences,
                               const std::function<double(const SeldScores&)>& metric,
                               PairAveraging averaging = PairAveraging::all_matched);

/// Inverse CDF of Student's t distribution (used for the jackknife interval).
double student_t_quantile(double p, int dof);

}  // namespace revfeat
