#include "doctest.h"

#include <cmath>

#include "redrec/analytics.hpp"
#include "redrec/sim.hpp"

using namespace redrec;

namespace {

LossParams paper_params() {
    return LossParams{}; // defaults carry the reference values
}

} // namespace

TEST_CASE("loading extremes") {
    GridSpec spec(4, 8, 2, 2);
    TrialRng rng(1, 0);
    LossParams full = paper_params();
    full.epsilon = 1.0;
    CHECK(sample_loading(spec, full, rng).static_count() == 32);
    full.epsilon = 0.0;
    CHECK(sample_loading(spec, full, rng).static_count() == 0);
}

TEST_CASE("binomial loading matches its mean") {
    GridSpec spec(32, 64, 32, 32);
    LossParams params = paper_params();
    const int reps = 20000;
    double total = 0;
    for (int i = 0; i < reps; ++i) {
        TrialRng rng(99, static_cast<std::uint64_t>(i));
        total += sample_loading(spec, params, rng).static_count();
    }
    const double mean = total / reps;
    const double sigma =
        std::sqrt(2048.0 * 0.6 * 0.4 / reps); // std error of the mean
    CHECK(std::abs(mean - 1228.8) <= 3.0 * sigma);
}

TEST_CASE("exact-count loading places the requested number of atoms") {
    GridSpec spec(8, 16, 8, 8);
    TrialRng rng(3, 17);
    const ArrayState state = sample_loading_exact(spec, 64, rng);
    CHECK(state.static_count() == 64);
    CHECK_THROWS_AS(sample_loading_exact(spec, 129, rng), std::invalid_argument);
}

TEST_CASE("corruption accumulates per addressed operation") {
    GridSpec spec(1, 8, 1, 2);
    LossParams params = paper_params();
    params.tau = std::numeric_limits<double>::infinity(); // isolate op losses

    ArrayState state(spec);
    state.place_static(TrapIndex{0, 1}, Atom{0, 1.0});

    ActuationSequence seq;
    seq.batches.push_back({BatchKind::transfer, {ElementaryOp::make_extract({0, 1})}});
    for (int row : {1, 2, 3})
        seq.batches.push_back(
            {BatchKind::displacement, {ElementaryOp::make_step({0, row}, Axis::y, +1)}});
    seq.batches.push_back({BatchKind::transfer, {ElementaryOp::make_implant({0, 4})}});

    OpCounts counts;
    for (const auto& batch : seq.batches) {
        charge_batch_loss(state, batch, params);
        apply_batch(state, batch, counts);
    }
    const double expected = std::pow(0.985, 5);
    CHECK(state.static_at({0, 4}).corruption == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("idle atoms decay with the batch duration") {
    GridSpec spec(2, 4, 1, 1);
    LossParams params = paper_params();
    ArrayState state(spec);
    state.place_static(TrapIndex{0, 0}, Atom{0, 1.0});
    state.place_dynamic(TrapIndex{1, 2}, Atom{1, 1.0});

    Batch step{BatchKind::displacement, {ElementaryOp::make_step({1, 2}, Axis::y, +1)}};
    charge_batch_loss(state, step, params);

    const double idle = std::exp(-67e-6 / 60.0);
    CHECK(state.static_at({0, 0}).corruption == doctest::Approx(idle).epsilon(1e-15));
    CHECK(state.dynamic_at({1, 2}).corruption == doctest::Approx(0.985).epsilon(1e-15));

    // Infinite lifetime leaves idle atoms untouched.
    LossParams forever = paper_params();
    forever.tau = std::numeric_limits<double>::infinity();
    CHECK(forever.idle_survival(1.0) == 1.0);
}

TEST_CASE("measurement projects corruption into survival") {
    GridSpec spec(10, 10, 2, 2);
    TrialRng rng(5, 1);

    ArrayState certain(spec);
    for (int i = 0; i < 100; ++i) certain.place_static(spec.unflat(i), Atom{i, 1.0});
    CHECK(measure(certain, rng).size() == 100);

    ArrayState doomed(spec);
    for (int i = 0; i < 100; ++i) doomed.place_static(spec.unflat(i), Atom{i, 0.0});
    CHECK(measure(doomed, rng).size() == 0);

    long long survivors = 0;
    const int reps = 2000;
    for (int r = 0; r < reps; ++r) {
        ArrayState coin(spec);
        for (int i = 0; i < 100; ++i) coin.place_static(spec.unflat(i), Atom{i, 0.5});
        TrialRng coin_rng(77, static_cast<std::uint64_t>(r));
        survivors += static_cast<long long>(measure(coin, coin_rng).size());
    }
    const double frac = static_cast<double>(survivors) / (100.0 * reps);
    CHECK(std::abs(frac - 0.5) <= 3.0 * std::sqrt(0.25 / (100.0 * reps)));

    ArrayState busy(spec);
    busy.place_dynamic(TrapIndex{0, 0}, Atom{0, 1.0});
    CHECK_THROWS_AS(measure(busy, rng), ContractError);
}

TEST_CASE("lossless trials succeed in exactly one cycle") {
    GridSpec spec(8, 16, 8, 8);
    LossParams params = LossParams::lossless();
    RedRecPlanner planner;
    TrialOptions options;
    options.exact_atoms = 64;
    for (int t = 0; t < 20; ++t) {
        TrialRng rng(123, static_cast<std::uint64_t>(t));
        const TrialRecord rec = run_trial(spec, params, planner, rng, options);
        REQUIRE(rec.success);
        REQUIRE(rec.cycles == 1);
        REQUIRE(!rec.stalled);
    }
}

TEST_CASE("too few atoms fail with zero actuated cycles") {
    GridSpec spec(8, 16, 8, 8);
    LossParams params = LossParams::lossless();
    RedRecPlanner planner;
    TrialOptions options;
    options.exact_atoms = 63;
    TrialRng rng(8, 0);
    const TrialRecord rec = run_trial(spec, params, planner, rng, options);
    CHECK(!rec.success);
    CHECK(rec.cycles == 0);
}

TEST_CASE("same seed reproduces identical ensembles") {
    GridSpec spec(8, 16, 8, 8);
    LossParams params = paper_params();
    RedRecPlanner planner;
    const MonteCarloResult a = run_monte_carlo(spec, params, planner, 40, 2024, {}, 2);
    const MonteCarloResult b = run_monte_carlo(spec, params, planner, 40, 2024, {}, 1);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].success == b.records[i].success);
        CHECK(a.records[i].cycles == b.records[i].cycles);
        CHECK(a.records[i].initial_atoms == b.records[i].initial_atoms);
        CHECK(a.records[i].control_time == b.records[i].control_time);
        CHECK(a.records[i].totals.transfers == b.records[i].totals.transfers);
        CHECK(a.records[i].totals.displacements == b.records[i].totals.displacements);
    }
    CHECK(a.summary.success_mean == b.summary.success_mean);
}

TEST_CASE("lossless success equals the loading tail probability") {
    GridSpec spec(1, 64, 1, 40);
    LossParams params = LossParams::lossless();
    RedRecPlanner planner;
    const MonteCarloResult mc = run_monte_carlo(spec, params, planner, 1500, 31, {}, 2);
    const double p0 = baseline_success(64, params.epsilon, 40);
    const double sigma = std::sqrt(p0 * (1 - p0) / 1500.0);
    CHECK(std::abs(mc.summary.success_mean - p0) <= 3.0 * sigma);
    for (const auto& rec : mc.records)
        if (rec.success) CHECK(rec.cycles <= 1);
}

TEST_CASE("corruption never increases") {
    GridSpec spec(4, 8, 4, 4);
    LossParams params = paper_params();
    TrialRng rng(17, 4);
    ArrayState state = sample_loading(spec, params, rng);
    const ActuationSequence seq = redrec_cycle(state);
    OpCounts counts;
    for (const auto& batch : seq.batches) {
        std::vector<double> before;
        state.for_each_atom([&](Atom& a) { before.push_back(a.corruption); });
        charge_batch_loss(state, batch, params);
        std::size_t k = 0;
        state.for_each_atom([&](Atom& a) { CHECK(a.corruption <= before[k++]); });
        apply_batch(state, batch, counts);
    }
}

TEST_CASE("deferred and immediate loss sampling agree statistically") {
    GridSpec spec(16, 32, 16, 16);
    LossParams params = paper_params();
    RedRecPlanner planner;

    TrialOptions deferred;
    deferred.loss_mode = LossMode::deferred;
    TrialOptions immediate;
    immediate.loss_mode = LossMode::immediate;

    const std::uint64_t n = 2000;
    const MonteCarloResult a = run_monte_carlo(spec, params, planner, n, 555, deferred, 2);
    const MonteCarloResult b = run_monte_carlo(spec, params, planner, n, 556, immediate, 2);

    const double se = std::sqrt(a.summary.success_stderr * a.summary.success_stderr +
                                b.summary.success_stderr * b.summary.success_stderr);
    CHECK(std::abs(a.summary.success_mean - b.summary.success_mean) <= 2.5 * se);
}

TEST_CASE("transfer parity holds for every completed trial") {
    GridSpec spec(8, 16, 8, 8);
    LossParams params = paper_params();
    RedRecPlanner planner;
    const MonteCarloResult mc = run_monte_carlo(spec, params, planner, 50, 77, {}, 2);
    for (const auto& rec : mc.records)
        for (const auto& cycle : rec.per_cycle) CHECK(cycle.transfers % 2 == 0);
}
