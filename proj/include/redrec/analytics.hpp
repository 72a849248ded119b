#pragma once

#include <optional>
#include <string>
#include <vector>

#include "redrec/sim.hpp"

namespace redrec {

/// P(Bino(n_traps, epsilon) >= n_target): the probability that loading
/// supplies enough atoms, which upper-bounds any lossy success probability.
/// Evaluated through the regularized incomplete beta function; absolute
/// error below 1e-12 for n_traps up to ~1e5.
double baseline_success(long long n_traps, double epsilon, long long n_target);

struct SweepPoint {
    long long n_traps = 0;
    double p = 0;
    double sigma = 0;
};

struct SweepRow {
    long long n_target = 0;
    std::vector<SweepPoint> points; // ascending n_traps
};

struct SweepResult {
    std::vector<SweepRow> rows;
};

struct TransitionFit {
    struct Crossing {
        long long n_target;
        double n_traps_star;
        double eta_star;
    };
    std::vector<Crossing> crossings;
    std::vector<long long> excluded; // rows that never bracket the level
    double eta0 = 0, eta1 = 0;       // eta(N) = eta0 + eta1 * N
    double se_eta0 = 0, se_eta1 = 0;
};

/// Finds where each row crosses `level` by linear interpolation between the
/// bracketing trap counts, then least-squares fits eta* against the target
/// size. Rows that never bracket the level are excluded and reported.
TransitionFit transition_curve(const SweepResult& sweep, double level = 0.5);

struct CycleStatistics {
    // P(K <= k) per outcome; index 0 is k = 0.
    std::vector<double> cdf_cycles_success;
    std::vector<double> cdf_cycles_failure;
    // Mean ops in cycle k relative to cycle 1, over successful trials still
    // running at cycle k; index 0 is cycle 1.
    std::vector<double> rel_transfers;
    std::vector<double> rel_displacements;
    std::vector<double> frac_success_reaching; // P(K >= k | success)
    // Initial-atom histograms split by outcome.
    std::vector<std::pair<int, int>> initial_atoms_success;
    std::vector<std::pair<int, int>> initial_atoms_failure;
};

CycleStatistics cycle_statistics(const std::vector<TrialRecord>& records);

struct WaitTimePoint {
    int threshold = 0;
    double p_load = 1;        // P(N_a^0 >= threshold), analytic
    double rejected = 0;      // 1 - p_load
    double p_success_cond = 0;
    double p_success_overall = 0;
    double measurements = 0;  // mean images between successes
    double wait_mot = 0;
    double wait_imaging = 0;
    double wait_control = 0;
    double wait_total = 0;
    long long trials_retained = 0;
};

struct WaitTimeCurve {
    std::vector<WaitTimePoint> points;
    int optimal_threshold = 0;
    double optimal_wait = 0;
    double unthresholded_wait = 0;
};

/// Rejection-threshold sweep: for each candidate minimum loading count the
/// mean wait between successes is (t_MOT + t_image / P(load) + E[protocol
/// time | retained]) / P(success | retained), with the loading probability
/// taken from the binomial CCDF and the conditional terms estimated by
/// reweighting the recorded trials. The grid is 0 plus every integer from
/// the target size to the largest observed loading count; ties go to the
/// smaller threshold.
WaitTimeCurve threshold_optimizer(const std::vector<TrialRecord>& records,
                                  const GridSpec& spec, const LossParams& params);

} // namespace redrec
