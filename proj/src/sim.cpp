#include "redrec/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace redrec {

void LossParams::validate() const {
    auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!prob(epsilon) || !prob(p_alpha) || !prob(p_nu))
        throw std::invalid_argument("LossParams: probabilities must lie in [0,1]");
    if (!(tau > 0.0))
        throw std::invalid_argument("LossParams: tau must be positive (may be infinite)");
    if (t_alpha < 0 || t_nu < 0 || t_mot < 0 || t_image < 0)
        throw std::invalid_argument("LossParams: times must be non-negative");
}

double LossParams::idle_survival(double duration) const {
    return std::exp(-duration / tau);
}

ArrayState sample_loading(const GridSpec& spec, const LossParams& params, TrialRng& rng) {
    ArrayState state(spec);
    int id = 0;
    for (int i = 0; i < static_cast<int>(spec.num_traps()); ++i)
        if (rng.bernoulli(params.epsilon)) state.place_static(spec.unflat(i), Atom{id++, 1.0});
    state.set_next_atom_id(id);
    return state;
}

ArrayState sample_loading_exact(const GridSpec& spec, int atoms, TrialRng& rng) {
    const int n = static_cast<int>(spec.num_traps());
    if (atoms < 0 || atoms > n)
        throw std::invalid_argument("sample_loading_exact: atom count out of range");
    std::vector<int> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = 0; i < atoms; ++i)
        std::swap(idx[i], idx[i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)))]);
    idx.resize(static_cast<std::size_t>(atoms));
    std::sort(idx.begin(), idx.end());
    ArrayState state(spec);
    int id = 0;
    for (int i : idx) state.place_static(spec.unflat(i), Atom{id++, 1.0});
    state.set_next_atom_id(id);
    return state;
}

namespace {

double addressed_survival(const Batch& batch, const LossParams& params) {
    return batch.kind == BatchKind::transfer ? params.p_alpha : params.p_nu;
}

// Flat indices the batch addresses, split by layer, sorted.
void addressed_indices(const GridSpec& spec, const Batch& batch,
                       std::vector<int>& static_idx, std::vector<int>& dynamic_idx) {
    static_idx.clear();
    dynamic_idx.clear();
    for (const auto& op : batch.ops) {
        if (op.kind == ElementaryOp::Kind::extract)
            static_idx.push_back(spec.flat(op.at));
        else
            dynamic_idx.push_back(spec.flat(op.at));
    }
    std::sort(static_idx.begin(), static_idx.end());
    std::sort(dynamic_idx.begin(), dynamic_idx.end());
}

} // namespace

void charge_batch_loss(ArrayState& state, const Batch& batch, const LossParams& params) {
    const GridSpec& spec = state.spec();
    const double p_op = addressed_survival(batch, params);
    const double p_idle = params.idle_survival(params.batch_duration(batch.kind));

    std::vector<int> addr_static, addr_dynamic;
    addressed_indices(spec, batch, addr_static, addr_dynamic);
    auto addressed = [](const std::vector<int>& v, int i) {
        return std::binary_search(v.begin(), v.end(), i);
    };

    for (int i = 0; i < static_cast<int>(spec.num_traps()); ++i) {
        const TrapIndex t = spec.unflat(i);
        if (state.has_static(t))
            state.static_at(t).corruption *= addressed(addr_static, i) ? p_op : p_idle;
    }
    for (int i : state.dynamic_occupied()) {
        const TrapIndex t = spec.unflat(i);
        state.dynamic_at(t).corruption *= addressed(addr_dynamic, i) ? p_op : p_idle;
    }
}

namespace {

// Immediate-mode loss: sample each survival factor as it would have been
// charged, removing casualties on the spot.
void sample_batch_loss(ArrayState& state, const Batch& batch, const LossParams& params,
                       TrialRng& rng) {
    const GridSpec& spec = state.spec();
    const double p_op = addressed_survival(batch, params);
    const double p_idle = params.idle_survival(params.batch_duration(batch.kind));

    std::vector<int> addr_static, addr_dynamic;
    addressed_indices(spec, batch, addr_static, addr_dynamic);
    auto addressed = [](const std::vector<int>& v, int i) {
        return std::binary_search(v.begin(), v.end(), i);
    };

    for (int i = 0; i < static_cast<int>(spec.num_traps()); ++i) {
        const TrapIndex t = spec.unflat(i);
        if (state.has_static(t) && !rng.bernoulli(addressed(addr_static, i) ? p_op : p_idle))
            state.take_static(t);
    }
    std::vector<int> dyn = state.dynamic_occupied();
    for (int i : dyn) {
        const TrapIndex t = spec.unflat(i);
        if (!rng.bernoulli(addressed(addr_dynamic, i) ? p_op : p_idle)) state.take_dynamic(t);
    }
}

// Drop ops whose atom vanished mid-flight (immediate mode only); the plan
// was legal for the full population, so remaining ops stay legal.
Batch surviving_ops(const ArrayState& state, const Batch& batch) {
    Batch kept{batch.kind, {}};
    for (const auto& op : batch.ops) {
        if (op.kind == ElementaryOp::Kind::extract) {
            if (state.has_static(op.at)) kept.ops.push_back(op);
        } else {
            if (state.has_dynamic(op.at)) kept.ops.push_back(op);
        }
    }
    return kept;
}

} // namespace

Configuration measure(ArrayState& state, TrialRng& rng) {
    if (state.dynamic_count() != 0)
        throw ContractError("measure: dynamic layer not empty");
    const GridSpec& spec = state.spec();
    for (int i = 0; i < static_cast<int>(spec.num_traps()); ++i) {
        const TrapIndex t = spec.unflat(i);
        if (!state.has_static(t)) continue;
        if (rng.bernoulli(state.static_at(t).corruption))
            state.static_at(t).corruption = 1.0;
        else
            state.take_static(t);
    }
    return state.detected();
}

TrialRecord run_trial(const GridSpec& spec, const LossParams& params,
                      const Planner& planner, TrialRng& rng,
                      const TrialOptions& options) {
    params.validate();
    TrialRecord rec;
    rec.mot_time = params.t_mot;

    ArrayState state(spec);
    while (true) {
        state = options.exact_atoms >= 0
                    ? sample_loading_exact(spec, options.exact_atoms, rng)
                    : sample_loading(spec, params, rng);
        ++rec.images;
        rec.imaging_time += params.t_image;
        if (options.load_threshold <= 0 || state.static_count() >= options.load_threshold)
            break;
        ++rec.rejected_loads;
    }
    rec.initial_atoms = state.static_count();

    const std::vector<TrapIndex> target = target_region(spec);
    Configuration detected = state.detected();
    int no_progress = 0;

    while (true) {
        if (detected.contains_all(target)) {
            rec.success = true;
            break;
        }
        if (static_cast<long long>(detected.size()) < spec.target_size()) break;

        const ActuationSequence plan = planner.plan_cycle(state);
        if (plan.empty()) {
            if (++no_progress >= 2) {
                rec.stalled = true;
                break;
            }
            continue;
        }

        CycleStats cs;
        cs.atoms_measured_before = static_cast<int>(detected.size());
        OpCounts cycle_counts;
        for (const auto& batch : plan.batches) {
            if (options.loss_mode == LossMode::deferred) {
                charge_batch_loss(state, batch, params);
                apply_batch(state, batch, cycle_counts);
            } else {
                sample_batch_loss(state, batch, params, rng);
                const Batch kept = surviving_ops(state, batch);
                if (!kept.ops.empty()) apply_batch(state, kept, cycle_counts);
            }
            rec.control_time += params.batch_duration(batch.kind);
        }
        cs.transfers = cycle_counts.transfers;
        cs.displacements = cycle_counts.displacements;
        cs.batches_transfer = cycle_counts.batches_transfer;
        cs.batches_displacement = cycle_counts.batches_displacement;
        rec.per_cycle.push_back(cs);
        rec.totals.merge(cycle_counts);
        ++rec.cycles;

        ++rec.images;
        rec.imaging_time += params.t_image;
        Configuration next = measure(state, rng);
        if (next == detected)
            ++no_progress;
        else
            no_progress = 0;
        if (no_progress >= 2) {
            rec.stalled = true;
            detected = next;
            break;
        }
        detected = next;
    }

    rec.final_atoms = static_cast<int>(detected.size());
    return rec;
}

MonteCarloSummary summarize(const std::vector<TrialRecord>& records) {
    MonteCarloSummary s;
    s.trials = records.size();
    if (records.empty()) return s;
    long long successes = 0;
    double cyc_s = 0, cyc_f = 0, atoms = 0;
    long long n_f = 0;
    for (const auto& r : records) {
        successes += r.success ? 1 : 0;
        atoms += r.initial_atoms;
        if (r.success)
            cyc_s += r.cycles;
        else {
            cyc_f += r.cycles;
            ++n_f;
        }
    }
    const double n = static_cast<double>(records.size());
    s.success_mean = static_cast<double>(successes) / n;
    s.success_stderr = std::sqrt(s.success_mean * (1.0 - s.success_mean) / n);
    s.mean_cycles_success = successes ? cyc_s / static_cast<double>(successes) : 0.0;
    s.mean_cycles_failure = n_f ? cyc_f / static_cast<double>(n_f) : 0.0;
    s.mean_initial_atoms = atoms / n;
    return s;
}

MonteCarloResult run_monte_carlo(const GridSpec& spec, const LossParams& params,
                                 const Planner& planner, std::uint64_t trials,
                                 std::uint64_t seed, const TrialOptions& options,
                                 int jobs) {
    MonteCarloResult result;
    result.records.resize(trials);
    jobs = std::max(1, jobs);

    auto worker = [&](std::uint64_t begin, std::uint64_t stride) {
        for (std::uint64_t t = begin; t < trials; t += stride) {
            TrialRng rng(seed, t);
            result.records[t] = run_trial(spec, params, planner, rng, options);
            result.records[t].trial = t;
        }
    };

    if (jobs == 1 || trials < 2) {
        worker(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j)
            pool.emplace_back(worker, static_cast<std::uint64_t>(j),
                              static_cast<std::uint64_t>(jobs));
        for (auto& th : pool) th.join();
    }

    result.summary = summarize(result.records);
    return result;
}

} // namespace redrec
