#include "redrec/redrec.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "redrec/assignment.hpp"

namespace redrec {

namespace {

int desired_count(const GridSpec& spec, int col) {
    return spec.target_column(col) ? spec.target_height() : 0;
}

ColumnClass classify(int imbalance) {
    if (imbalance > 0) return ColumnClass::donor;
    if (imbalance < 0) return ColumnClass::receiver;
    return ColumnClass::neutral;
}

std::vector<int> band_rows(const GridSpec& spec) {
    std::vector<int> rows;
    for (int r = spec.target_row_begin(); r < spec.target_row_end(); ++r) rows.push_back(r);
    return rows;
}

// Distance from an external row to the target band; 0 inside.
int band_distance(const GridSpec& spec, int row) {
    if (row < spec.target_row_begin()) return spec.target_row_begin() - row;
    if (row >= spec.target_row_end()) return row - spec.target_row_end() + 1;
    return 0;
}

} // namespace

ColumnLedger classify_columns(const ArrayState& state) {
    const GridSpec& spec = state.spec();
    ColumnLedger ledger;
    ledger.columns.resize(static_cast<std::size_t>(spec.width()));
    for (int col = 0; col < spec.width(); ++col) {
        ColumnInfo& info = ledger.columns[col];
        info.count = static_cast<int>(state.column_rows(col).size());
        info.desired = desired_count(spec, col);
        info.imbalance = info.count - info.desired;
        info.cls = classify(info.imbalance);
    }
    return ledger;
}

std::vector<std::pair<int, int>> pair_columns(const ColumnLedger& ledger) {
    const int w = static_cast<int>(ledger.columns.size());
    std::vector<std::pair<int, int>> pairs;
    std::set<std::pair<int, int>> emitted;

    auto donor = [&](int c) { return ledger.columns[c].imbalance > 0; };
    auto receiver = [&](int c) { return ledger.columns[c].imbalance < 0; };

    // Adjacent pairs where the donor fully satisfies the receiver.
    for (int c = 0; c + 1 < w; ++c) {
        if (donor(c) && receiver(c + 1) &&
            ledger.surplus(c) >= ledger.deficit(c + 1)) {
            pairs.emplace_back(c, c + 1);
            emitted.insert({c, c + 1});
        }
        if (receiver(c) && donor(c + 1) &&
            ledger.surplus(c + 1) >= ledger.deficit(c)) {
            pairs.emplace_back(c + 1, c);
            emitted.insert({c + 1, c});
        }
    }

    // Remaining pairs by exchangeable atoms, then distance, then indices.
    struct Ranked {
        int exchange;
        int distance;
        int d;
        int r;
    };
    std::vector<Ranked> rest;
    for (int d = 0; d < w; ++d) {
        if (!donor(d)) continue;
        for (int r = 0; r < w; ++r) {
            if (!receiver(r) || emitted.count({d, r})) continue;
            rest.push_back(Ranked{std::min(ledger.surplus(d), ledger.deficit(r)),
                                  std::abs(d - r), d, r});
        }
    }
    std::sort(rest.begin(), rest.end(), [](const Ranked& a, const Ranked& b) {
        if (a.exchange != b.exchange) return a.exchange > b.exchange;
        if (a.distance != b.distance) return a.distance < b.distance;
        if (a.d != b.d) return a.d < b.d;
        return a.r < b.r;
    });
    for (const auto& p : rest) pairs.emplace_back(p.d, p.r);
    return pairs;
}

DonorLabeling label_donor(const ArrayState& state, int donor, int quota) {
    const GridSpec& spec = state.spec();
    const std::vector<int> rows = state.column_rows(donor);

    ChainProblem problem;
    problem.length = spec.height();
    problem.sources = rows;
    if (spec.target_column(donor)) problem.targets = band_rows(spec);

    DonorLabeling labeling;
    labeling.reconfigure = solve_chain(problem);
    collapse_shift_chains(labeling.reconfigure);

    std::set<int> reconfigured;
    for (const auto& [src, dst] : labeling.reconfigure.assignment) reconfigured.insert(src);

    std::vector<int> above, below;
    for (int row : rows) {
        if (reconfigured.count(row)) continue;
        if (row < spec.target_row_begin())
            above.push_back(row);
        else if (row >= spec.target_row_end())
            below.push_back(row);
        // Unassigned atoms inside the band cannot occur: a band atom always
        // matches some band target at no extra cost.
    }
    if (quota > static_cast<int>(above.size() + below.size()))
        throw std::invalid_argument("label_donor: quota exceeds donor surplus");

    // Farthest from the band first on each side.
    std::sort(above.begin(), above.end());
    std::sort(below.begin(), below.end(), std::greater<int>());

    std::size_t ai = 0, bi = 0;
    bool take_above = true;
    while (static_cast<int>(labeling.redistributed.size()) < quota) {
        if (take_above && ai < above.size())
            labeling.redistributed.push_back(above[ai++]);
        else if (!take_above && bi < below.size())
            labeling.redistributed.push_back(below[bi++]);
        else if (ai < above.size())
            labeling.redistributed.push_back(above[ai++]);
        else
            labeling.redistributed.push_back(below[bi++]);
        take_above = !take_above;
    }
    for (std::size_t i = ai; i < above.size(); ++i) labeling.idle.push_back(above[i]);
    for (std::size_t i = bi; i < below.size(); ++i) labeling.idle.push_back(below[i]);
    labeling.assigned_rows.assign(labeling.redistributed.size(), -1);
    return labeling;
}

std::vector<int> open_rows(const ArrayState& state, int donor, int receiver) {
    const GridSpec& spec = state.spec();
    const int lo = std::min(donor, receiver);
    const int hi = std::max(donor, receiver);
    std::vector<int> rows;
    for (int row = 0; row < spec.height(); ++row) {
        if (spec.target_row(row)) continue;
        if (state.has_static(TrapIndex{receiver, row})) continue;
        bool blocked = false;
        for (int col = lo + 1; col < hi && !blocked; ++col)
            blocked = state.has_static(TrapIndex{col, row});
        if (!blocked) rows.push_back(row);
    }
    return rows;
}

int assign_open_rows(const ArrayState& state, int donor, int receiver,
                     DonorLabeling& labeling) {
    const GridSpec& spec = state.spec();
    std::vector<int> rows = open_rows(state, donor, receiver);
    std::vector<char> taken(rows.size(), 0);

    labeling.assigned_rows.assign(labeling.redistributed.size(), -1);
    labeling.assigned_count = 0;
    for (std::size_t i = 0; i < labeling.redistributed.size(); ++i) {
        const int at = labeling.redistributed[i];
        int best = -1;
        for (std::size_t k = 0; k < rows.size(); ++k) {
            if (taken[k]) continue;
            if (best < 0) {
                best = static_cast<int>(k);
                continue;
            }
            const int da = std::abs(rows[k] - at);
            const int db = std::abs(rows[best] - at);
            if (da < db ||
                (da == db &&
                 band_distance(spec, rows[k]) < band_distance(spec, rows[best])))
                best = static_cast<int>(k);
        }
        if (best < 0) continue; // no open row left; wait for a repeat
        taken[best] = 1;
        labeling.assigned_rows[i] = rows[best];
        ++labeling.assigned_count;
    }
    return labeling.assigned_count;
}

namespace {

struct Move {
    int from;
    int to;
};

bool crosses(const Move& a, const Move& b) {
    return (static_cast<long long>(a.from) - b.from) *
               (static_cast<long long>(a.to) - b.to) < 0;
}

// Lockstep vertical displacement batches within one column: every mover still
// in flight steps together; increasing direction first.
void emit_column_steps(std::vector<Move> movers, int col, ActuationSequence& seq) {
    for (const int sign : {+1, -1}) {
        std::vector<Move*> group;
        for (auto& m : movers)
            if ((m.to - m.from) * sign > 0) group.push_back(&m);
        while (!group.empty()) {
            Batch step{BatchKind::displacement, {}};
            for (Move* m : group) {
                step.ops.push_back(
                    ElementaryOp::make_step(TrapIndex{col, m->from}, Axis::y, sign));
                m->from += sign;
            }
            seq.batches.push_back(std::move(step));
            std::erase_if(group, [](const Move* m) { return m->from == m->to; });
        }
    }
}

} // namespace

int streamlined_sequence(ArrayState& state, int donor, int receiver,
                         const DonorLabeling& labeling, ActuationSequence& out) {
    if (labeling.assigned_count == 0)
        throw std::invalid_argument("streamlined_sequence: no assigned redistributed atom");
    const GridSpec& spec = state.spec();

    std::vector<Move> reconfig;
    for (const auto& [src, dst] : labeling.reconfigure.assignment)
        if (src != dst) reconfig.push_back(Move{src, dst});

    // Re-pair redistributed sources and their open rows in sorted order; the
    // greedy row choice can cross itself and crossing moves collide when the
    // column is actuated in lockstep.
    std::vector<int> redis_src, redis_dst;
    for (std::size_t i = 0; i < labeling.redistributed.size(); ++i) {
        if (labeling.assigned_rows[i] < 0) continue;
        redis_src.push_back(labeling.redistributed[i]);
        redis_dst.push_back(labeling.assigned_rows[i]);
    }
    std::sort(redis_src.begin(), redis_src.end());
    std::sort(redis_dst.begin(), redis_dst.end());
    std::vector<Move> redis;
    for (std::size_t i = 0; i < redis_src.size(); ++i) {
        const Move m{redis_src[i], redis_dst[i]};
        // An assignment on the far side of the band can still cross a
        // reconfiguration move; such atoms wait for a repeated sequence.
        bool conflict = false;
        for (const auto& rc : reconfig)
            if (crosses(m, rc)) {
                conflict = true;
                break;
            }
        if (!conflict) redis.push_back(m);
    }
    if (redis.empty()) return 0;

    ActuationSequence seq;

    // Donor column: one extraction covers reconfigured movers and every
    // redistributed atom, wherever it sits.
    Batch extract{BatchKind::transfer, {}};
    std::vector<Move> vertical = reconfig;
    for (const auto& m : redis) vertical.push_back(m);
    for (const auto& m : reconfig)
        extract.ops.push_back(ElementaryOp::make_extract(TrapIndex{donor, m.from}));
    for (const auto& m : redis)
        extract.ops.push_back(ElementaryOp::make_extract(TrapIndex{donor, m.from}));
    seq.batches.push_back(std::move(extract));

    emit_column_steps(vertical, donor, seq);

    if (!reconfig.empty()) {
        Batch implant{BatchKind::transfer, {}};
        for (const auto& m : reconfig)
            implant.ops.push_back(ElementaryOp::make_implant(TrapIndex{donor, m.to}));
        seq.batches.push_back(std::move(implant));
    }

    // Horizontal crossing, one parallel step per inter-column unit.
    const int sign = receiver > donor ? +1 : -1;
    for (int col = donor; col != receiver; col += sign) {
        Batch step{BatchKind::displacement, {}};
        for (const auto& m : redis)
            step.ops.push_back(ElementaryOp::make_step(TrapIndex{col, m.to}, Axis::x, sign));
        seq.batches.push_back(std::move(step));
    }

    // Receiver column: exact reconfiguration over its own atoms plus the
    // arrivals, which are implanted without a second extraction.
    ChainProblem receiver_problem;
    receiver_problem.length = spec.height();
    std::set<int> arrived;
    for (const auto& m : redis) arrived.insert(m.to);
    {
        std::vector<int> sources = state.column_rows(receiver);
        for (int row : arrived) sources.push_back(row);
        std::sort(sources.begin(), sources.end());
        receiver_problem.sources = std::move(sources);
    }
    receiver_problem.targets = band_rows(spec);
    const ChainPlan receiver_plan = solve_chain(receiver_problem);

    OpCounts scratch_counts;
    for (const auto& batch : seq.batches) apply_batch(state, batch, scratch_counts);

    const ActuationSequence receiver_seq =
        plan_to_sequence(receiver_plan, ChainLocator{true, receiver}, arrived);
    for (const auto& batch : receiver_seq.batches)
        apply_batch(state, batch, scratch_counts);

    out.append(seq);
    out.append(receiver_seq);
    return static_cast<int>(redis.size());
}

namespace {

// Exact single-column reconfiguration; applies to the working state and
// appends any operations produced.
void reconfigure_column(ArrayState& state, int col, ActuationSequence& out) {
    const GridSpec& spec = state.spec();
    if (!spec.target_column(col)) return; // atoms outside target columns idle
    ChainProblem problem;
    problem.length = spec.height();
    problem.sources = state.column_rows(col);
    problem.targets = band_rows(spec);
    const ChainPlan plan = solve_chain(problem);
    const ActuationSequence seq = plan_to_sequence(plan, ChainLocator{true, col});
    OpCounts counts;
    for (const auto& batch : seq.batches) apply_batch(state, batch, counts);
    out.append(seq);
}

void refresh(ColumnLedger& ledger, int col, int delta) {
    ColumnInfo& info = ledger.columns[col];
    info.count += delta;
    info.imbalance = info.count - info.desired;
    info.cls = classify(info.imbalance);
}

} // namespace

ActuationSequence redrec_cycle(const ArrayState& measured) {
    ArrayState state = measured;
    const GridSpec& spec = state.spec();
    ActuationSequence out;

    ColumnLedger ledger = classify_columns(state);
    std::vector<char> touched(static_cast<std::size_t>(spec.width()), 0);

    for (int col = 0; col < spec.width(); ++col) {
        if (ledger.columns[col].cls != ColumnClass::neutral) continue;
        reconfigure_column(state, col, out);
        touched[col] = 1;
    }

    bool fallback_used = false;
    while (true) {
        const auto pairs = pair_columns(ledger);
        if (pairs.empty()) break;

        bool progress = false;
        for (const auto& [d, r] : pairs) {
            while (ledger.columns[d].imbalance > 0 && ledger.columns[r].imbalance < 0) {
                const int quota = std::min(ledger.surplus(d), ledger.deficit(r));
                DonorLabeling labeling = label_donor(state, d, quota);
                if (assign_open_rows(state, d, r, labeling) == 0) break;
                const int sent = streamlined_sequence(state, d, r, labeling, out);
                if (sent == 0) break;
                progress = true;
                touched[d] = touched[r] = 1;
                refresh(ledger, d, -sent);
                refresh(ledger, r, +sent);
            }
        }

        const bool donors_left =
            std::any_of(ledger.columns.begin(), ledger.columns.end(),
                        [](const ColumnInfo& c) { return c.imbalance > 0; });
        const bool receivers_left =
            std::any_of(ledger.columns.begin(), ledger.columns.end(),
                        [](const ColumnInfo& c) { return c.imbalance < 0; });
        if (!donors_left || !receivers_left) break;
        if (!progress) {
            if (fallback_used) break; // stalled; yield and let the loop re-measure
            fallback_used = true;
            for (int col = 0; col < spec.width(); ++col) {
                reconfigure_column(state, col, out);
                touched[col] = 1;
            }
        }
    }

    // Columns never visited (unpaired donors, starved receivers) still get
    // their own exact reconfiguration.
    for (int col = 0; col < spec.width(); ++col) {
        if (touched[col]) continue;
        reconfigure_column(state, col, out);
    }
    return out;
}

ActuationSequence RedRecPlanner::plan_cycle(const ArrayState& measured) const {
    return redrec_cycle(measured);
}

ActuationSequence MwpmPlanner::plan_cycle(const ArrayState& measured) const {
    AssignmentProblem problem;
    const Configuration detected = measured.detected();
    problem.sources = detected.positions();
    problem.targets = target_region(measured.spec());
    const Matching matching = solve_mwpm(problem);
    return route_matching(measured, matching, problem).sequence;
}

} // namespace redrec
