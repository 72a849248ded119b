#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "redrec/redrec.hpp"
#include "redrec/rng.hpp"

namespace redrec {

/// Stochastic model parameters. Survival per addressed operation is p_alpha
/// (transfers) or p_nu (displacements); atoms not addressed by a batch decay
/// as exp(-duration/tau). Times are seconds.
struct LossParams {
    double epsilon = 0.60;  // loading efficiency
    double p_alpha = 0.985; // transfer survival
    double p_nu = 0.985;    // displacement survival
    double tau = 60.0;      // trap lifetime
    double t_alpha = 15e-6; // transfer batch duration
    double t_nu = 67e-6;    // displacement batch duration
    double t_mot = 100e-3;  // MOT loading time
    double t_image = 20e-3; // imaging time

    void validate() const;

    static LossParams lossless() {
        LossParams p;
        p.p_alpha = 1.0;
        p.p_nu = 1.0;
        p.tau = std::numeric_limits<double>::infinity();
        return p;
    }

    double idle_survival(double duration) const;
    double batch_duration(BatchKind kind) const {
        return kind == BatchKind::transfer ? t_alpha : t_nu;
    }
};

struct CycleStats {
    long long transfers = 0;
    long long displacements = 0;
    long long batches_transfer = 0;
    long long batches_displacement = 0;
    int atoms_measured_before = 0; // N_a at the measurement opening the cycle
};

struct TrialRecord {
    std::uint64_t trial = 0;
    bool success = false;
    bool stalled = false;
    int cycles = 0;        // actuated reconfiguration cycles
    int initial_atoms = 0; // accepted loading count
    int final_atoms = 0;
    int images = 0;          // all measurements, initial and final included
    int rejected_loads = 0;  // loads discarded by thresholding
    double control_time = 0; // sum of batch durations
    double imaging_time = 0;
    double mot_time = 0;
    std::vector<CycleStats> per_cycle;
    OpCounts totals;

    double elapsed() const { return control_time + imaging_time + mot_time; }
};

struct MonteCarloSummary {
    std::uint64_t trials = 0;
    double success_mean = 0;
    double success_stderr = 0; // binomial standard error
    double mean_cycles_success = 0;
    double mean_cycles_failure = 0;
    double mean_initial_atoms = 0;
};

/// Binomial loading: each static trap holds an atom with probability
/// epsilon, corruption 1, ids assigned in row-major order.
ArrayState sample_loading(const GridSpec& spec, const LossParams& params, TrialRng& rng);

/// Loading with exactly `atoms` occupied traps drawn uniformly, used by the
/// lossless benchmark.
ArrayState sample_loading_exact(const GridSpec& spec, int atoms, TrialRng& rng);

/// Multiplies corruption by the per-op survival for every atom the batch
/// addresses and by exp(-duration/tau) for every other atom present, in
/// either layer. Called before the state transition of apply_batch.
void charge_batch_loss(ArrayState& state, const Batch& batch, const LossParams& params);

/// Projects the state: each atom survives with probability equal to its
/// corruption; survivors reset to corruption 1. The dynamic layer must be
/// empty. Returns the detected configuration.
Configuration measure(ArrayState& state, TrialRng& rng);

/// Loss realization mode. Deferred accumulates corruption and samples it at
/// measurement; immediate samples every survival factor as it is incurred.
/// The two give the same success statistics because planning only sees
/// measured states.
enum class LossMode : std::uint8_t { deferred, immediate };

struct TrialOptions {
    int load_threshold = 0; // resample until N_a^0 >= threshold
    int exact_atoms = -1;   // >= 0: exact-count loading instead of binomial
    LossMode loss_mode = LossMode::deferred;
};

/// One full measure-actuate protocol: load (re-imaging until the threshold
/// is met), then alternate planning, lossy actuation, and measurement until
/// the target is contained or fewer atoms remain than needed. Two
/// consecutive cycles without progress abort the trial as a stall.
TrialRecord run_trial(const GridSpec& spec, const LossParams& params,
                      const Planner& planner, TrialRng& rng,
                      const TrialOptions& options = {});

struct MonteCarloResult {
    std::vector<TrialRecord> records;
    MonteCarloSummary summary;
};

/// Runs `trials` independent trials on substreams derived from (seed, trial
/// index), optionally on several threads; results are ordered by trial index
/// regardless of scheduling.
MonteCarloResult run_monte_carlo(const GridSpec& spec, const LossParams& params,
                                 const Planner& planner, std::uint64_t trials,
                                 std::uint64_t seed, const TrialOptions& options = {},
                                 int jobs = 1);

MonteCarloSummary summarize(const std::vector<TrialRecord>& records);

} // namespace redrec
