#include "redrec/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include <boost/math/special_functions/beta.hpp>

namespace redrec {

double baseline_success(long long n_traps, double epsilon, long long n_target) {
    if (epsilon < 0.0 || epsilon > 1.0)
        throw std::invalid_argument("baseline_success: epsilon must lie in [0,1]");
    if (n_traps < 0)
        throw std::invalid_argument("baseline_success: negative trap count");
    if (n_target <= 0) return 1.0;
    if (n_target > n_traps) return 0.0;
    if (epsilon == 0.0) return 0.0;
    if (epsilon == 1.0) return 1.0;
    // P(X >= k) for X ~ Bino(n, p) equals I_p(k, n - k + 1).
    return boost::math::ibeta(static_cast<double>(n_target),
                              static_cast<double>(n_traps - n_target + 1), epsilon);
}

TransitionFit transition_curve(const SweepResult& sweep, double level) {
    TransitionFit fit;
    for (const auto& row : sweep.rows) {
        bool found = false;
        for (std::size_t i = 0; i + 1 < row.points.size(); ++i) {
            const auto& a = row.points[i];
            const auto& b = row.points[i + 1];
            if (a.p < level && b.p >= level) {
                const double frac = (level - a.p) / (b.p - a.p);
                const double star = static_cast<double>(a.n_traps) +
                                    frac * static_cast<double>(b.n_traps - a.n_traps);
                fit.crossings.push_back(
                    {row.n_target, star, star / static_cast<double>(row.n_target)});
                found = true;
                break;
            }
        }
        if (!found) fit.excluded.push_back(row.n_target);
    }

    const std::size_t n = fit.crossings.size();
    if (n < 2) return fit;

    // Least squares eta* = eta0 + eta1 * n_target with standard errors.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& c : fit.crossings) {
        const double x = static_cast<double>(c.n_target);
        sx += x;
        sy += c.eta_star;
        sxx += x * x;
        sxy += x * c.eta_star;
    }
    const double nn = static_cast<double>(n);
    const double denom = nn * sxx - sx * sx;
    fit.eta1 = (nn * sxy - sx * sy) / denom;
    fit.eta0 = (sy - fit.eta1 * sx) / nn;

    if (n > 2) {
        double ss = 0;
        for (const auto& c : fit.crossings) {
            const double r = c.eta_star - (fit.eta0 + fit.eta1 * c.n_target);
            ss += r * r;
        }
        const double var = ss / (nn - 2.0);
        fit.se_eta1 = std::sqrt(var * nn / denom);
        fit.se_eta0 = std::sqrt(var * sxx / denom);
    }
    return fit;
}

CycleStatistics cycle_statistics(const std::vector<TrialRecord>& records) {
    if (records.empty())
        throw std::invalid_argument("cycle_statistics: no records");
    CycleStatistics stats;

    int max_cycles = 0;
    long long n_succ = 0, n_fail = 0;
    for (const auto& r : records) {
        max_cycles = std::max(max_cycles, r.cycles);
        (r.success ? n_succ : n_fail) += 1;
    }

    stats.cdf_cycles_success.assign(static_cast<std::size_t>(max_cycles) + 1, 0.0);
    stats.cdf_cycles_failure.assign(static_cast<std::size_t>(max_cycles) + 1, 0.0);
    for (const auto& r : records)
        (r.success ? stats.cdf_cycles_success
                   : stats.cdf_cycles_failure)[static_cast<std::size_t>(r.cycles)] += 1.0;
    auto accumulate_cdf = [](std::vector<double>& v, long long total) {
        double run = 0;
        for (double& x : v) {
            run += x;
            x = total ? run / static_cast<double>(total) : 0.0;
        }
    };
    accumulate_cdf(stats.cdf_cycles_success, n_succ);
    accumulate_cdf(stats.cdf_cycles_failure, n_fail);

    // Per-cycle op totals of successful trials, relative to cycle 1.
    std::vector<double> sum_t(static_cast<std::size_t>(max_cycles), 0.0);
    std::vector<double> sum_d(static_cast<std::size_t>(max_cycles), 0.0);
    std::vector<long long> alive(static_cast<std::size_t>(max_cycles), 0);
    for (const auto& r : records) {
        if (!r.success) continue;
        for (std::size_t k = 0; k < r.per_cycle.size(); ++k) {
            sum_t[k] += static_cast<double>(r.per_cycle[k].transfers);
            sum_d[k] += static_cast<double>(r.per_cycle[k].displacements);
            ++alive[k];
        }
    }
    if (!sum_t.empty() && alive[0] > 0) {
        const double t1 = sum_t[0] / static_cast<double>(alive[0]);
        const double d1 = sum_d[0] / static_cast<double>(alive[0]);
        for (std::size_t k = 0; k < sum_t.size(); ++k) {
            if (!alive[k]) break;
            const double mt = sum_t[k] / static_cast<double>(alive[k]);
            const double md = sum_d[k] / static_cast<double>(alive[k]);
            stats.rel_transfers.push_back(t1 > 0 ? mt / t1 : 0.0);
            stats.rel_displacements.push_back(d1 > 0 ? md / d1 : 0.0);
            stats.frac_success_reaching.push_back(
                n_succ ? static_cast<double>(alive[k]) / static_cast<double>(n_succ) : 0.0);
        }
    }

    std::map<int, int> hist_s, hist_f;
    for (const auto& r : records)
        (r.success ? hist_s : hist_f)[r.initial_atoms] += 1;
    stats.initial_atoms_success.assign(hist_s.begin(), hist_s.end());
    stats.initial_atoms_failure.assign(hist_f.begin(), hist_f.end());
    return stats;
}

WaitTimeCurve threshold_optimizer(const std::vector<TrialRecord>& records,
                                  const GridSpec& spec, const LossParams& params) {
    if (records.empty())
        throw std::invalid_argument("threshold_optimizer: no records");

    // Sort trials by loading count once; a threshold keeps a suffix.
    std::vector<const TrialRecord*> by_atoms;
    by_atoms.reserve(records.size());
    for (const auto& r : records) by_atoms.push_back(&r);
    std::sort(by_atoms.begin(), by_atoms.end(),
              [](const TrialRecord* a, const TrialRecord* b) {
                  return a->initial_atoms < b->initial_atoms;
              });
    const int max_atoms = by_atoms.back()->initial_atoms;

    std::vector<int> candidates{0};
    for (int t = static_cast<int>(spec.target_size()); t <= max_atoms; ++t)
        candidates.push_back(t);

    WaitTimeCurve curve;
    std::size_t cursor = 0;
    long long kept = static_cast<long long>(records.size());
    long long kept_success = 0;
    double kept_protocol_time = 0; // control + per-cycle imaging
    double kept_images = 0;        // post-acceptance images (K per trial)
    for (const auto& r : records) {
        kept_success += r.success ? 1 : 0;
        kept_protocol_time += r.control_time + params.t_image * r.cycles;
        kept_images += r.cycles;
    }

    for (int threshold : candidates) {
        while (cursor < by_atoms.size() && by_atoms[cursor]->initial_atoms < threshold) {
            const TrialRecord* r = by_atoms[cursor];
            kept -= 1;
            kept_success -= r->success ? 1 : 0;
            kept_protocol_time -= r->control_time + params.t_image * r->cycles;
            kept_images -= r->cycles;
            ++cursor;
        }
        if (kept <= 0 || kept_success <= 0) break; // nothing retained survives

        WaitTimePoint pt;
        pt.threshold = threshold;
        pt.p_load = baseline_success(spec.num_traps(), params.epsilon, threshold);
        pt.rejected = 1.0 - pt.p_load;
        pt.trials_retained = kept;
        pt.p_success_cond = static_cast<double>(kept_success) / static_cast<double>(kept);
        pt.p_success_overall = pt.p_load * pt.p_success_cond;

        const double mean_protocol = kept_protocol_time / static_cast<double>(kept);
        const double mean_cycles_img = kept_images / static_cast<double>(kept);
        pt.wait_mot = params.t_mot / pt.p_success_cond;
        pt.wait_imaging =
            (params.t_image / pt.p_load + mean_cycles_img * params.t_image) / pt.p_success_cond;
        pt.wait_control =
            (mean_protocol - mean_cycles_img * params.t_image) / pt.p_success_cond;
        pt.wait_total = pt.wait_mot + pt.wait_imaging + pt.wait_control;
        pt.measurements = (1.0 / pt.p_load + mean_cycles_img) / pt.p_success_cond;
        curve.points.push_back(pt);
    }

    if (curve.points.empty())
        throw std::invalid_argument("threshold_optimizer: no threshold retains a success");

    const WaitTimePoint* best = &curve.points.front();
    for (const auto& pt : curve.points)
        if (pt.wait_total < best->wait_total) best = &pt;
    curve.optimal_threshold = best->threshold;
    curve.optimal_wait = best->wait_total;
    curve.unthresholded_wait = curve.points.front().wait_total;
    return curve;
}

} // namespace redrec
