#include "redrec/chain.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace redrec {

namespace {

constexpr long long kInf = std::numeric_limits<long long>::max() / 4;

void check_positions(const std::vector<int>& xs, int length, const char* what) {
    int prev = -1;
    for (int x : xs) {
        if (x < 0 || x >= length)
            throw std::invalid_argument(std::string("ChainProblem: ") + what + " out of range");
        if (x <= prev)
            throw std::invalid_argument(std::string("ChainProblem: ") + what +
                                        " not strictly increasing");
        prev = x;
    }
}

} // namespace

ChainPlan solve_chain(const ChainProblem& problem, ChainTieBreak tie) {
    check_positions(problem.sources, problem.length, "source");
    check_positions(problem.targets, problem.length, "target");

    ChainPlan plan;
    if (problem.sources.empty() || problem.targets.empty()) {
        plan.idle = problem.sources;
        plan.unfilled = problem.targets;
        return plan;
    }

    // Align the longer list (elements may be skipped) against the shorter
    // (every element matched). Matching in sorted order is optimal on a
    // chain, so the alignment table covers all candidate plans.
    const bool surplus = problem.sources.size() >= problem.targets.size();
    const std::vector<int>& longer = surplus ? problem.sources : problem.targets;
    const std::vector<int>& shorter = surplus ? problem.targets : problem.sources;
    const int n = static_cast<int>(longer.size());
    const int m = static_cast<int>(shorter.size());

    std::vector<std::vector<long long>> f(n + 1, std::vector<long long>(m + 1, kInf));
    f[0][0] = 0;
    for (int i = 1; i <= n; ++i) {
        f[i][0] = 0; // all skipped so far
        const int jmax = std::min(i, m);
        for (int j = 1; j <= jmax; ++j) {
            const long long match =
                f[i - 1][j - 1] == kInf
                    ? kInf
                    : f[i - 1][j - 1] + std::abs(longer[i - 1] - shorter[j - 1]);
            const long long skip = (n - i >= m - j) ? f[i - 1][j] : kInf;
            f[i][j] = std::min(match, skip);
        }
    }
    plan.cost = f[n][m];

    // Backtrack; on cost ties prefer_low skips the higher index, pushing the
    // matched set toward low positions.
    std::vector<std::pair<int, int>> pairs; // (longer, shorter)
    std::vector<int> skipped;
    int i = n, j = m;
    while (i > 0) {
        const long long match =
            j > 0 && f[i - 1][j - 1] != kInf
                ? f[i - 1][j - 1] + std::abs(longer[i - 1] - shorter[j - 1])
                : kInf;
        const long long skip = (n - i >= m - j) ? f[i - 1][j] : kInf;
        const bool can_match = j > 0 && match == f[i][j];
        const bool can_skip = skip == f[i][j];
        bool do_skip;
        if (can_match && can_skip)
            do_skip = tie == ChainTieBreak::prefer_low;
        else
            do_skip = can_skip;
        if (do_skip) {
            skipped.push_back(longer[i - 1]);
            --i;
        } else {
            pairs.emplace_back(longer[i - 1], shorter[j - 1]);
            --i;
            --j;
        }
    }
    std::reverse(pairs.begin(), pairs.end());
    std::reverse(skipped.begin(), skipped.end());

    for (const auto& [a, b] : pairs) {
        if (surplus)
            plan.assignment.emplace_back(a, b);
        else
            plan.assignment.emplace_back(b, a);
    }
    if (surplus)
        plan.idle = std::move(skipped);
    else
        plan.unfilled = std::move(skipped);
    return plan;
}

void collapse_shift_chains(ChainPlan& plan) {
    auto& pairs = plan.assignment;
    auto find_by_src = [&](int src) -> int {
        int lo = 0, hi = static_cast<int>(pairs.size()) - 1;
        while (lo <= hi) {
            const int mid = (lo + hi) / 2;
            if (pairs[mid].first == src) return mid;
            if (pairs[mid].first < src)
                lo = mid + 1;
            else
                hi = mid - 1;
        }
        return -1;
    };
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto& [src, dst] : pairs) {
            if (src == dst) continue;
            const int j = find_by_src(dst);
            if (j < 0) continue;
            auto& [jsrc, jdst] = pairs[j];
            if (jsrc == jdst) continue;
            if ((dst - src > 0) != (jdst - jsrc > 0)) continue;
            // The intermediate atom keeps the target it sits on; this move
            // takes over its tail.
            dst = jdst;
            jdst = jsrc;
            changed = true;
        }
    }
}

namespace {

bool moves_cross(const ColumnMove& a, const ColumnMove& b) {
    return (static_cast<long long>(a.src) - b.src) *
               (static_cast<long long>(a.dst) - b.dst) < 0;
}

} // namespace

ActuationSequence execute_column_moves(std::vector<ColumnMove> moves, ChainLocator chain) {
    ActuationSequence seq;
    const Axis axis = chain.is_column ? Axis::y : Axis::x;
    std::sort(moves.begin(), moves.end(),
              [](const ColumnMove& a, const ColumnMove& b) { return a.src < b.src; });

    // Arrivals already sitting on their destination leave the dynamic layer
    // first, before anything sweeps over them.
    Batch parked{BatchKind::transfer, {}};
    std::vector<ColumnMove> active;
    for (const auto& m : moves) {
        if (m.src == m.dst) {
            if (m.pre_extracted)
                parked.ops.push_back(ElementaryOp::make_implant(chain.trap(m.src)));
        } else {
            active.push_back(m);
        }
    }
    if (!parked.ops.empty()) seq.batches.push_back(std::move(parked));

    // Greedy maximal set of mutually non-crossing moves runs in parallel;
    // anything crossing the wave runs as its own sequential EDI.
    std::vector<ColumnMove> wave, singles;
    for (const auto& m : active) {
        bool ok = true;
        for (const auto& w : wave)
            if (moves_cross(m, w)) {
                ok = false;
                break;
            }
        (ok ? wave : singles).push_back(m);
    }

    auto emit_single = [&](const ColumnMove& m) {
        if (!m.pre_extracted)
            seq.batches.push_back(
                Batch{BatchKind::transfer, {ElementaryOp::make_extract(chain.trap(m.src))}});
        const int sign = m.dst > m.src ? +1 : -1;
        for (int pos = m.src; pos != m.dst; pos += sign)
            seq.batches.push_back(Batch{BatchKind::displacement,
                                        {ElementaryOp::make_step(chain.trap(pos), axis, sign)}});
        seq.batches.push_back(
            Batch{BatchKind::transfer, {ElementaryOp::make_implant(chain.trap(m.dst))}});
    };

    // Airborne singles land first, innermost first, so no path crosses a
    // trap where a later one still hovers.
    std::vector<const ColumnMove*> airborne;
    for (const auto& m : singles)
        if (m.pre_extracted) airborne.push_back(&m);
    std::sort(airborne.begin(), airborne.end(), [](const ColumnMove* a, const ColumnMove* b) {
        const bool a_up = a->dst > a->src;
        const bool b_up = b->dst > b->src;
        if (a_up != b_up) return a_up;
        return a_up ? a->src > b->src : a->src < b->src;
    });
    for (const ColumnMove* m : airborne) emit_single(*m);

    Batch extract{BatchKind::transfer, {}};
    Batch implant{BatchKind::transfer, {}};
    for (const auto& m : wave) {
        if (!m.pre_extracted)
            extract.ops.push_back(ElementaryOp::make_extract(chain.trap(m.src)));
        implant.ops.push_back(ElementaryOp::make_implant(chain.trap(m.dst)));
    }
    if (!extract.ops.empty()) seq.batches.push_back(std::move(extract));

    for (const int sign : {+1, -1}) {
        std::vector<ColumnMove*> group;
        for (auto& m : wave)
            if ((m.dst - m.src) * sign > 0) group.push_back(&m);
        while (!group.empty()) {
            Batch step{BatchKind::displacement, {}};
            for (ColumnMove* m : group) {
                step.ops.push_back(ElementaryOp::make_step(chain.trap(m->src), axis, sign));
                m->src += sign;
            }
            seq.batches.push_back(std::move(step));
            std::erase_if(group, [](const ColumnMove* m) { return m->src == m->dst; });
        }
    }
    if (!implant.ops.empty()) seq.batches.push_back(std::move(implant));

    for (const auto& m : singles)
        if (!m.pre_extracted) emit_single(m);
    return seq;
}

ActuationSequence plan_to_sequence(const ChainPlan& plan, ChainLocator chain,
                                   const std::set<int>& pre_extracted) {
    std::vector<ColumnMove> moves;
    for (const auto& [src, dst] : plan.assignment) {
        if (src == dst && !pre_extracted.count(src)) continue;
        moves.push_back(ColumnMove{src, dst, pre_extracted.count(src) > 0});
    }
    for (int pos : plan.idle)
        if (pre_extracted.count(pos))
            moves.push_back(ColumnMove{pos, pos, true});
    return execute_column_moves(std::move(moves), chain);
}

} // namespace redrec
