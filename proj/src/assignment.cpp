#include "redrec/assignment.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <functional>
#include <limits>
#include <set>
#include <stdexcept>

namespace redrec {

namespace {

constexpr long long kInf = std::numeric_limits<long long>::max() / 4;

long long manhattan(TrapIndex a, TrapIndex b) {
    return std::abs(a.col - b.col) + std::abs(a.row - b.row);
}

// Dense shortest-augmenting-path assignment for n rows into m >= n columns.
// Returns col_of_row. Scanning columns in ascending order makes tie handling
// deterministic.
std::vector<int> solve_rectangular(int n, int m,
                                   const std::function<long long(int, int)>& cost) {
    std::vector<long long> u(n + 1, 0), v(m + 1, 0), minv(m + 1);
    std::vector<int> p(m + 1, 0), way(m + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::fill(minv.begin(), minv.end(), kInf);
        std::vector<char> used(m + 1, false);
        do {
            used[j0] = true;
            const int i0 = p[j0];
            long long delta = kInf;
            int j1 = 0;
            for (int j = 1; j <= m; ++j) {
                if (used[j]) continue;
                const long long cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
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
        } while (j0);
    }
    std::vector<int> col_of_row(n, -1);
    for (int j = 1; j <= m; ++j)
        if (p[j] > 0) col_of_row[p[j] - 1] = j - 1;
    return col_of_row;
}

} // namespace

Matching solve_mwpm(const AssignmentProblem& problem) {
    const int ns = static_cast<int>(problem.sources.size());
    const int nt = static_cast<int>(problem.targets.size());
    Matching result;
    result.source_of_target.assign(nt, -1);
    if (ns == 0 || nt == 0) {
        for (int t = 0; t < nt; ++t) result.unfilled_targets.push_back(t);
        return result;
    }

    if (ns >= nt) {
        auto cost = [&](int t, int s) {
            return manhattan(problem.targets[t], problem.sources[s]);
        };
        result.source_of_target = solve_rectangular(nt, ns, cost);
    } else {
        // Deficit: match every source, leave targets unfilled.
        auto cost = [&](int s, int t) {
            return manhattan(problem.sources[s], problem.targets[t]);
        };
        std::vector<int> target_of_source = solve_rectangular(ns, nt, cost);
        for (int s = 0; s < ns; ++s) result.source_of_target[target_of_source[s]] = s;
    }

    // Equal-cost canonicalization: exchange pairs while that lowers the
    // (target, source) sequence lexicographically at unchanged total cost.
    bool changed = true;
    int guard = 0;
    while (changed && guard++ < 8) {
        changed = false;
        for (int a = 0; a < nt; ++a) {
            const int sa = result.source_of_target[a];
            if (sa < 0) continue;
            for (int b = a + 1; b < nt; ++b) {
                const int sb = result.source_of_target[b];
                if (sb < 0 || sb >= sa) continue;
                const long long now = manhattan(problem.targets[a], problem.sources[sa]) +
                                      manhattan(problem.targets[b], problem.sources[sb]);
                const long long swapped = manhattan(problem.targets[a], problem.sources[sb]) +
                                          manhattan(problem.targets[b], problem.sources[sa]);
                if (swapped == now) {
                    result.source_of_target[a] = sb;
                    result.source_of_target[b] = sa;
                    changed = true;
                    break;
                }
            }
        }
    }

    for (int t = 0; t < nt; ++t) {
        const int s = result.source_of_target[t];
        if (s < 0)
            result.unfilled_targets.push_back(t);
        else
            result.cost += manhattan(problem.targets[t], problem.sources[s]);
    }
    return result;
}

namespace {

struct RouteTask {
    TrapIndex src;
    TrapIndex dst;
    TrapIndex pos;       // current dynamic position once extracted
    bool extracted = false;
    bool done = false;
};

class Router {
public:
    Router(const ArrayState& initial, const Matching& matching,
           const AssignmentProblem& problem)
        : state_(initial) {
        std::set<std::pair<int, int>> target_cells;
        for (const auto& t : problem.targets) target_cells.insert({t.col, t.row});
        for (int t = 0; t < static_cast<int>(matching.source_of_target.size()); ++t) {
            const int s = matching.source_of_target[t];
            if (s < 0) continue;
            const TrapIndex src = problem.sources[s];
            const TrapIndex dst = problem.targets[t];
            if (src == dst) continue;
            tasks_.push_back(RouteTask{src, dst, src, false, false});
        }
        // Fill enclosed destinations first so placed atoms do not wall off
        // the interior of a compact target block.
        auto interior_degree = [&](TrapIndex dst) {
            int deg = 0;
            deg += target_cells.count({dst.col + 1, dst.row});
            deg += target_cells.count({dst.col - 1, dst.row});
            deg += target_cells.count({dst.col, dst.row + 1});
            deg += target_cells.count({dst.col, dst.row - 1});
            return deg;
        };
        std::stable_sort(tasks_.begin(), tasks_.end(),
                         [&](const RouteTask& a, const RouteTask& b) {
                             return interior_degree(a.dst) > interior_degree(b.dst);
                         });
    }

    RoutingResult run() {
        while (true) {
            bool progressed = false;
            for (auto& task : tasks_) {
                if (task.done) continue;
                if (try_monotone(task)) progressed = true;
            }
            if (all_done()) break;
            if (progressed) continue;

            if (try_bfs_any()) continue;
            if (park_one()) continue;
            if (relay_one()) continue;
            force_one();
        }
        return RoutingResult{std::move(seq_), detour_, relays_, forced_};
    }

private:
    bool all_done() const {
        return std::all_of(tasks_.begin(), tasks_.end(),
                           [](const RouteTask& t) { return t.done; });
    }

    bool cell_blocked(TrapIndex t, const RouteTask& self) const {
        if (state_.has_static(t)) return true;
        if (state_.has_dynamic(t) && !(t == self.pos)) return true;
        return false;
    }

    // Staircase path from task.pos to task.dst through unblocked cells,
    // stepping vertically whenever the destination stays reachable.
    bool monotone_path(const RouteTask& task, std::vector<TrapIndex>& path) const {
        if (state_.has_static(task.dst)) return false;
        if (state_.has_dynamic(task.dst) && !(task.dst == task.pos)) return false;
        const int dr = task.dst.row >= task.pos.row ? 1 : -1;
        const int dc = task.dst.col >= task.pos.col ? 1 : -1;
        const int nr = std::abs(task.dst.row - task.pos.row);
        const int nc = std::abs(task.dst.col - task.pos.col);
        // reach[r][c]: can (pos + r rows + c cols) still reach dst.
        std::vector<std::vector<char>> reach(nr + 1, std::vector<char>(nc + 1, 0));
        reach[nr][nc] = 1;
        for (int r = nr; r >= 0; --r) {
            for (int c = nc; c >= 0; --c) {
                if (r == nr && c == nc) continue;
                const TrapIndex cell{task.pos.col + c * dc, task.pos.row + r * dr};
                const bool free_cell = (r == 0 && c == 0) || !cell_blocked(cell, task);
                if (!free_cell) {
                    reach[r][c] = 0;
                    continue;
                }
                reach[r][c] = (r < nr && reach[r + 1][c]) || (c < nc && reach[r][c + 1]);
            }
        }
        if (!reach[0][0]) return false;
        path.clear();
        int r = 0, c = 0;
        while (r < nr || c < nc) {
            if (r < nr && reach[r + 1][c])
                ++r;
            else
                ++c;
            path.push_back(TrapIndex{task.pos.col + c * dc, task.pos.row + r * dr});
        }
        return true;
    }

    void exec_steps(RouteTask& task, const std::vector<TrapIndex>& path) {
        if (!task.extracted) {
            seq_.batches.push_back(
                Batch{BatchKind::transfer, {ElementaryOp::make_extract(task.pos)}});
            apply_batch(state_, seq_.batches.back(), counts_);
            task.extracted = true;
        }
        for (const TrapIndex& next : path) {
            Axis axis = next.col != task.pos.col ? Axis::x : Axis::y;
            int sign = axis == Axis::x ? next.col - task.pos.col : next.row - task.pos.row;
            seq_.batches.push_back(
                Batch{BatchKind::displacement, {ElementaryOp::make_step(task.pos, axis, sign)}});
            apply_batch(state_, seq_.batches.back(), counts_);
            task.pos = next;
        }
    }

    bool try_monotone(RouteTask& task) {
        std::vector<TrapIndex> path;
        if (!monotone_path(task, path)) return false;
        exec_steps(task, path);
        implant(task);
        return true;
    }

    void implant(RouteTask& task) {
        seq_.batches.push_back(
            Batch{BatchKind::transfer, {ElementaryOp::make_implant(task.pos)}});
        apply_batch(state_, seq_.batches.back(), counts_);
        task.done = true;
    }

    bool bfs_path(const RouteTask& task, bool avoid_static, std::vector<TrapIndex>& path) const {
        const GridSpec& spec = state_.spec();
        std::vector<int> parent(static_cast<std::size_t>(spec.num_traps()), -2);
        std::deque<TrapIndex> queue;
        parent[spec.flat(task.pos)] = -1;
        queue.push_back(task.pos);
        while (!queue.empty()) {
            const TrapIndex cur = queue.front();
            queue.pop_front();
            if (cur == task.dst) break;
            const TrapIndex nbrs[4] = {{cur.col + 1, cur.row},
                                       {cur.col - 1, cur.row},
                                       {cur.col, cur.row + 1},
                                       {cur.col, cur.row - 1}};
            for (const TrapIndex& nb : nbrs) {
                if (!spec.in_grid(nb) || parent[spec.flat(nb)] != -2) continue;
                if (!(nb == task.dst)) {
                    if (avoid_static && state_.has_static(nb)) continue;
                    if (state_.has_dynamic(nb) && !(nb == task.pos)) continue;
                }
                parent[spec.flat(nb)] = spec.flat(cur);
                queue.push_back(nb);
            }
        }
        if (parent[spec.flat(task.dst)] == -2) return false;
        path.clear();
        for (int at = spec.flat(task.dst); at != spec.flat(task.pos); at = parent[at])
            path.push_back(spec.unflat(at));
        std::reverse(path.begin(), path.end());
        return true;
    }

    bool try_bfs_any() {
        for (auto& task : tasks_) {
            if (task.done || state_.has_static(task.dst)) continue;
            std::vector<TrapIndex> path;
            if (!bfs_path(task, true, path)) continue;
            const long long excess =
                static_cast<long long>(path.size()) - manhattan(task.pos, task.dst);
            exec_steps(task, path);
            implant(task);
            detour_ += excess;
            return true;
        }
        return false;
    }

    // Extract the first blocked atom and step it one trap aside so the rest
    // of a blocking cycle can resolve; it finishes from there later. The
    // aside cell must stay clear of every pending source and destination.
    bool park_one() {
        for (auto& task : tasks_) {
            if (task.done || task.extracted) continue;
            const TrapIndex cands[4] = {{task.pos.col + 1, task.pos.row},
                                        {task.pos.col - 1, task.pos.row},
                                        {task.pos.col, task.pos.row + 1},
                                        {task.pos.col, task.pos.row - 1}};
            for (const TrapIndex& aside : cands) {
                if (!state_.spec().in_grid(aside)) continue;
                if (state_.has_dynamic(aside) || state_.has_static(aside)) continue;
                bool reserved = false;
                for (const auto& other : tasks_) {
                    if (other.done) continue;
                    if (other.dst == aside || (!other.extracted && other.pos == aside)) {
                        reserved = true;
                        break;
                    }
                }
                if (reserved) continue;
                const long long before = manhattan(task.pos, task.dst);
                exec_steps(task, {aside});
                detour_ += 1 + manhattan(task.pos, task.dst) - before;
                return true;
            }
        }
        return false;
    }

    void emit_step(const TrapIndex& from, const TrapIndex& to) {
        const Axis axis = to.col != from.col ? Axis::x : Axis::y;
        const int sign = axis == Axis::x ? to.col - from.col : to.row - from.row;
        seq_.batches.push_back(
            Batch{BatchKind::displacement, {ElementaryOp::make_step(from, axis, sign)}});
        apply_batch(state_, seq_.batches.back(), counts_);
    }

    // BFS that may cross idle or already-placed atoms (they will be relayed
    // out of the way) but not pending sources or dynamic traps.
    bool relay_path(const RouteTask& task, std::vector<TrapIndex>& full) const {
        const GridSpec& spec = state_.spec();
        std::set<std::pair<int, int>> pending;
        for (const auto& other : tasks_)
            if (!other.done && !other.extracted && !(&other == &task))
                pending.insert({other.pos.col, other.pos.row});
        std::vector<int> parent(static_cast<std::size_t>(spec.num_traps()), -2);
        std::deque<TrapIndex> queue;
        parent[spec.flat(task.pos)] = -1;
        queue.push_back(task.pos);
        while (!queue.empty()) {
            const TrapIndex cur = queue.front();
            queue.pop_front();
            if (cur == task.dst) break;
            const TrapIndex nbrs[4] = {{cur.col + 1, cur.row},
                                       {cur.col - 1, cur.row},
                                       {cur.col, cur.row + 1},
                                       {cur.col, cur.row - 1}};
            for (const TrapIndex& nb : nbrs) {
                if (!spec.in_grid(nb) || parent[spec.flat(nb)] != -2) continue;
                if (state_.has_dynamic(nb) && !(nb == task.pos)) continue;
                if (pending.count({nb.col, nb.row})) continue;
                parent[spec.flat(nb)] = spec.flat(cur);
                queue.push_back(nb);
            }
        }
        if (parent[spec.flat(task.dst)] == -2) return false;
        full.clear();
        for (int at = spec.flat(task.dst); at != -1; at = parent[at])
            full.push_back(spec.unflat(at));
        std::reverse(full.begin(), full.end());
        return true;
    }

    // Push-chain resolution of a walled-in destination: each atom on the
    // path advances one hole toward the destination, the task takes the
    // innermost vacated cell, and every atom still moves exactly once.
    bool relay_one() {
        for (auto& task : tasks_) {
            if (task.done) continue;
            if (state_.has_static(task.dst)) continue;
            if (state_.has_dynamic(task.dst) && !(task.dst == task.pos)) continue;
            std::vector<TrapIndex> full;
            if (!relay_path(task, full)) continue;

            const long long straight = manhattan(task.pos, task.dst);
            std::vector<std::size_t> blockers;
            for (std::size_t i = 1; i + 1 < full.size(); ++i)
                if (state_.has_static(full[i])) blockers.push_back(i);

            std::size_t hole = full.size() - 1;
            for (auto it = blockers.rbegin(); it != blockers.rend(); ++it) {
                const std::size_t w = *it;
                seq_.batches.push_back(
                    Batch{BatchKind::transfer, {ElementaryOp::make_extract(full[w])}});
                apply_batch(state_, seq_.batches.back(), counts_);
                for (std::size_t k = w + 1; k <= hole; ++k) emit_step(full[k - 1], full[k]);
                seq_.batches.push_back(
                    Batch{BatchKind::transfer, {ElementaryOp::make_implant(full[hole])}});
                apply_batch(state_, seq_.batches.back(), counts_);
                hole = w;
            }

            if (!task.extracted) {
                seq_.batches.push_back(
                    Batch{BatchKind::transfer, {ElementaryOp::make_extract(task.pos)}});
                apply_batch(state_, seq_.batches.back(), counts_);
                task.extracted = true;
            }
            for (std::size_t k = 1; k <= hole; ++k) emit_step(full[k - 1], full[k]);
            task.pos = full[hole];
            implant(task);
            detour_ += static_cast<long long>(full.size()) - 1 - straight;
            ++relays_;
            return true;
        }
        return false;
    }

    // Last resort: drive the first unfinished atom across occupied traps.
    void force_one() {
        for (auto& task : tasks_) {
            if (task.done) continue;
            if (state_.has_static(task.dst)) continue;
            std::vector<TrapIndex> path;
            if (!bfs_path(task, false, path)) continue;
            for (const TrapIndex& cell : path)
                if (!(cell == task.dst) && state_.has_static(cell)) ++forced_;
            const long long excess =
                static_cast<long long>(path.size()) - manhattan(task.pos, task.dst);
            exec_steps(task, path);
            implant(task);
            detour_ += excess;
            return;
        }
        throw ContractError("route_matching: no executable move remains");
    }

    ArrayState state_;
    std::vector<RouteTask> tasks_;
    ActuationSequence seq_;
    OpCounts counts_;
    long long detour_ = 0;
    long long relays_ = 0;
    long long forced_ = 0;
};

} // namespace

RoutingResult route_matching(const ArrayState& initial, const Matching& matching,
                             const AssignmentProblem& problem) {
    return Router(initial, matching, problem).run();
}

} // namespace redrec
