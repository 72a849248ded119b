#pragma once

#include <vector>

#include "redrec/ops.hpp"

namespace redrec {

/// Bipartite assignment of atoms to target traps under Manhattan cost.
struct AssignmentProblem {
    std::vector<TrapIndex> sources;
    std::vector<TrapIndex> targets;
};

struct Matching {
    /// target_of_source? No: source index matched to each target, -1 when the
    /// target is unfilled (deficit instances).
    std::vector<int> source_of_target;
    std::vector<int> unfilled_targets;
    long long cost = 0; // total Manhattan distance over matched pairs
};

/// Exact minimum-cost maximum-cardinality matching, solved by shortest
/// augmenting paths on the dense cost matrix. Among equal-cost optima the
/// result is canonicalized by pairwise exchanges toward lexicographically
/// small (target, source) order, so runs are reproducible.
Matching solve_mwpm(const AssignmentProblem& problem);

struct RoutingResult {
    ActuationSequence sequence;
    /// Displacements beyond the matching's Manhattan total, incurred when a
    /// blocking cycle forces a one-step detour. Zero on detour-free runs.
    long long detour_displacements = 0;
    /// Push-chain resolutions of walled-in destinations; the atoms involved
    /// each still move once, but they are not the matched atoms.
    long long relays = 0;
    /// Steps that had to cross an occupied static trap after every ordering
    /// and detour option was exhausted. Zero on all but adversarial inputs.
    long long forced_passages = 0;
};

/// Routes each matched atom along a shortest path as its own EDI cycle,
/// sequenced so no intermediate step crosses an occupied static trap.
/// Vertical-then-horizontal paths are preferred, then the alternate bend,
/// then any free monotone staircase; blocking cycles are broken by stepping
/// one atom aside (two extra displacements).
RoutingResult route_matching(const ArrayState& initial, const Matching& matching,
                             const AssignmentProblem& problem);

} // namespace redrec
