#include "revfeat/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>

namespace revfeat {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Assignment by the potential/augmenting-path method; cost is n x m with
// n <= m, returns for each row its assigned column.
std::vector<int> assign_min_cost(const std::vector<std::vector<double>>& cost) {
    const int n = static_cast<int>(cost.size());
    const int m = static_cast<int>(cost[0].size());
    const double inf = 1e18;
    std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
    std::vector<int> p(m + 1, 0), way(m + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(m + 1, inf);
        std::vector<char> used(m + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            int j1 = -1;
            double delta = inf;
            for (int j = 1; j <= m; ++j) {
                if (used[j]) continue;
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= m; ++j)
        if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
    return row_to_col;
}

struct ClassAccum {
    long tp = 0, fp = 0, fn = 0;
    long matched = 0;
    double ang_sum = 0.0;
    double rde_sum = 0.0;
};

using SequenceAccum = std::map<int, ClassAccum>;

bool record_before(const EventRecord& a, const EventRecord& b) {
    return std::tie(a.azimuth, a.elevation, a.distance, a.track_id) <
           std::tie(b.azimuth, b.elevation, b.distance, b.track_id);
}

SequenceAccum accumulate_sequence(const std::vector<EventRecord>& preds,
                                  const std::vector<EventRecord>& refs, PairAveraging averaging) {
    std::map<std::pair<int, int>, std::pair<std::vector<EventRecord>, std::vector<EventRecord>>>
        groups;
    for (const EventRecord& p : preds) groups[{p.frame, p.class_id}].first.push_back(p);
    for (const EventRecord& r : refs) groups[{r.frame, r.class_id}].second.push_back(r);

    SequenceAccum acc;
    for (auto& [key, group] : groups) {
        auto& [gp, gr] = group;
        // Canonical order makes the assignment independent of input order.
        std::sort(gp.begin(), gp.end(), record_before);
        std::sort(gr.begin(), gr.end(), record_before);
        const MatchResult match = match_frame_class(gp, gr);
        ClassAccum& c = acc[key.second];
        for (const auto& [pi, ri] : match.pairs) {
            const double ang = angular_error(gp[pi].azimuth, gp[pi].elevation, gr[ri].azimuth,
                                             gr[ri].elevation);
            const double rde = relative_distance_error(gp[pi].distance, gr[ri].distance);
            const bool is_tp = ang <= 20.0 && rde < 1.0;
            if (is_tp) {
                ++c.tp;
            } else {
                ++c.fp;
                ++c.fn;
            }
            if (averaging == PairAveraging::all_matched || is_tp) {
                ++c.matched;
                c.ang_sum += ang;
                c.rde_sum += rde;
            }
        }
        c.fp += static_cast<long>(match.unmatched_preds.size());
        c.fn += static_cast<long>(match.unmatched_refs.size());
    }
    return acc;
}

SeldScores scores_from(const std::vector<const SequenceAccum*>& parts, PairAveraging averaging) {
    std::map<int, ClassAccum> total;
    for (const SequenceAccum* part : parts) {
        for (const auto& [class_id, a] : *part) {
            ClassAccum& t = total[class_id];
            t.tp += a.tp;
            t.fp += a.fp;
            t.fn += a.fn;
            t.matched += a.matched;
            t.ang_sum += a.ang_sum;
            t.rde_sum += a.rde_sum;
        }
    }
    SeldScores s;
    s.averaging = averaging;
    double f_sum = 0.0, doae_sum = 0.0, rde_sum = 0.0;
    for (const auto& [class_id, a] : total) {
        if (a.tp + a.fp + a.fn == 0) continue;  // class never occurred
        ClassScore cs;
        cs.class_id = class_id;
        cs.tp = a.tp;
        cs.fp = a.fp;
        cs.fn = a.fn;
        cs.matched = a.matched;
        cs.f = 2.0 * a.tp / static_cast<double>(2 * a.tp + a.fp + a.fn);
        cs.sentinel = a.matched == 0;
        cs.doae = cs.sentinel ? 180.0 : a.ang_sum / a.matched;
        cs.rde = cs.sentinel ? 1.0 : a.rde_sum / a.matched;
        f_sum += cs.f;
        doae_sum += cs.doae;
        rde_sum += cs.rde;
        s.per_class.push_back(cs);
    }
    const std::size_t n = s.per_class.size();
    if (n == 0) {
        s.f_score = 1.0;
        s.doae = 0.0;
        s.rde = 0.0;
    } else {
        s.f_score = f_sum / n;
        s.doae = doae_sum / n;
        s.rde = rde_sum / n;
    }
    s.seld = ((1.0 - s.f_score) + s.doae / 180.0 + s.rde) / 3.0;
    return s;
}

// Continued-fraction evaluation for the regularized incomplete beta function.
double beta_cf(double a, double b, double x) {
    const double fpmin = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < fpmin) d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 300; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 3e-16) break;
    }
    return h;
}

double reg_incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double log_bt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log(1.0 - x);
    const double bt = std::exp(log_bt);
    if (x < (a + 1.0) / (a + b + 2.0)) return bt * beta_cf(a, b, x) / a;
    return 1.0 - bt * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, int dof) {
    const double v = static_cast<double>(dof);
    const double x = v / (v + t * t);
    const double tail = 0.5 * reg_incomplete_beta(0.5 * v, 0.5, x);
    return t >= 0.0 ? 1.0 - tail : tail;
}

}  // namespace

double angular_error(double az_a_deg, double el_a_deg, double az_b_deg, double el_b_deg) {
    const double d = kPi / 180.0;
    const double ax = std::cos(el_a_deg * d) * std::cos(az_a_deg * d);
    const double ay = std::cos(el_a_deg * d) * std::sin(az_a_deg * d);
    const double az = std::sin(el_a_deg * d);
    const double bx = std::cos(el_b_deg * d) * std::cos(az_b_deg * d);
    const double by = std::cos(el_b_deg * d) * std::sin(az_b_deg * d);
    const double bz = std::sin(el_b_deg * d);
    const double dot = std::clamp(ax * bx + ay * by + az * bz, -1.0, 1.0);
    return std::acos(dot) * 180.0 / kPi;
}

double relative_distance_error(double pred_m, double ref_m) {
    if (!(ref_m > 0.0))
        throw std::invalid_argument("relative_distance_error: reference distance must be > 0");
    return std::abs(pred_m - ref_m) / ref_m;
}

MatchResult match_frame_class(const std::vector<EventRecord>& preds,
                              const std::vector<EventRecord>& refs) {
    MatchResult out;
    if (preds.empty() || refs.empty()) {
        for (std::size_t i = 0; i < preds.size(); ++i) out.unmatched_preds.push_back(i);
        for (std::size_t i = 0; i < refs.size(); ++i) out.unmatched_refs.push_back(i);
        return out;
    }
    const bool preds_as_rows = preds.size() <= refs.size();
    const std::vector<EventRecord>& rows = preds_as_rows ? preds : refs;
    const std::vector<EventRecord>& cols = preds_as_rows ? refs : preds;
    std::vector<std::vector<double>> cost(rows.size(), std::vector<double>(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j)
            cost[i][j] =
                angular_error(rows[i].azimuth, rows[i].elevation, cols[j].azimuth, cols[j].elevation);

    const std::vector<int> row_to_col = assign_min_cost(cost);
    std::vector<char> col_taken(cols.size(), 0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::size_t j = static_cast<std::size_t>(row_to_col[i]);
        col_taken[j] = 1;
        if (preds_as_rows)
            out.pairs.emplace_back(i, j);
        else
            out.pairs.emplace_back(j, i);
    }
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (col_taken[j]) continue;
        if (preds_as_rows)
            out.unmatched_refs.push_back(j);
        else
            out.unmatched_preds.push_back(j);
    }
    std::sort(out.pairs.begin(), out.pairs.end());
    return out;
}

SeldScores score(const std::vector<EventRecord>& preds, const std::vector<EventRecord>& refs,
                 PairAveraging averaging) {
    const SequenceAccum acc = accumulate_sequence(preds, refs, averaging);
    return scores_from({&acc}, averaging);
}

JackknifeEstimate jackknife_ci(const std::vector<SequenceData>& sequences,
                               const std::function<double(const SeldScores&)>& metric,
                               PairAveraging averaging) {
    const std::size_t n = sequences.size();
    if (n < 2) throw std::invalid_argument("jackknife_ci: need at least 2 sequences");

    std::vector<SequenceAccum> accums;
    accums.reserve(n);
    for (const SequenceData& s : sequences)
        accums.push_back(accumulate_sequence(s.preds, s.refs, averaging));

    std::vector<const SequenceAccum*> all;
    for (const SequenceAccum& a : accums) all.push_back(&a);
    const double theta_all = metric(scores_from(all, averaging));

    std::vector<double> pseudo(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<const SequenceAccum*> rest;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) rest.push_back(&accums[j]);
        const double theta_i = metric(scores_from(rest, averaging));
        pseudo[i] = n * theta_all - (n - 1) * theta_i;
    }
    double mean = 0.0;
    for (double p : pseudo) mean += p;
    mean /= n;
    double var = 0.0;
    for (double p : pseudo) var += (p - mean) * (p - mean);
    var /= (n - 1);
    const double half =
        student_t_quantile(0.975, static_cast<int>(n) - 1) * std::sqrt(var / n);

    JackknifeEstimate est;
    est.point = theta_all;
    est.pseudo_mean = mean;
    est.low = mean - half;
    est.high = mean + half;
    return est;
}

double student_t_quantile(double p, int dof) {
    if (dof < 1) throw std::invalid_argument("student_t_quantile: dof must be >= 1");
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("student_t_quantile: p must be in (0, 1)");
    if (p == 0.5) return 0.0;
    const bool upper = p > 0.5;
    const double target = upper ? p : 1.0 - p;
    double lo = 0.0, hi = 1.0;
    while (student_t_cdf(hi, dof) < target) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (student_t_cdf(mid, dof) < target)
            lo = mid;
        else
            hi = mid;
    }
    const double q = 0.5 * (lo + hi);
    return upper ? q : -q;
}

}  // namespace revfeat
