#pragma once

#include <set>
#include <vector>

#include "redrec/ops.hpp"

namespace redrec {

/// 1D reconfiguration instance: atoms at `sources` must populate `targets`,
/// both strictly increasing positions in [0, length).
struct ChainProblem {
    int length = 0;
    std::vector<int> sources;
    std::vector<int> targets;
};

/// Order-preserving assignment minimizing total |dest - src|. Sources and
/// destinations are matched in sorted order, so pairs never cross. Pairs
/// with source == destination stay in the plan but generate no operations.
struct ChainPlan {
    std::vector<std::pair<int, int>> assignment; // (source, destination)
    std::vector<int> idle;                       // unassigned sources
    std::vector<int> unfilled;                   // unassigned targets (deficit)
    long long cost = 0;                          // sum of |dest - src|
};

enum class ChainTieBreak { prefer_low, prefer_high };

/// Minimum-displacement maximum-cardinality assignment on a chain, found by
/// dynamic-programming alignment of the sorted sources against the sorted
/// targets. With equal counts the order-preserving assignment is unique;
/// otherwise ties pick the lowest-position candidates (prefer_low).
ChainPlan solve_chain(const ChainProblem& problem,
                      ChainTieBreak tie = ChainTieBreak::prefer_low);

/// Identifies the chain a plan executes on: a column (positions are rows)
/// or a row (positions are columns).
struct ChainLocator {
    bool is_column = true;
    int index = 0;

    TrapIndex trap(int position) const {
        return is_column ? TrapIndex{index, position} : TrapIndex{position, index};
    }
};

/// Rewrites displacement-cost ties in favor of moving fewer atoms: a move
/// ending on another mover's source hands its tail to a single direct
/// flight, the intermediate atom staying on the target it already occupies.
/// Total displacement is unchanged; the collapsed moves may cross.
void collapse_shift_chains(ChainPlan& plan);

/// One move along a chain. Atoms flagged pre_extracted start in the dynamic
/// layer and are only implanted.
struct ColumnMove {
    int src = 0;
    int dst = 0;
    bool pre_extracted = false;
};

/// Executes chain moves as one EDI cycle: parked arrivals implant first,
/// then mutually non-crossing moves run as parallel batches (one extraction
/// batch, lockstep displacement batches per direction, one implantation
/// batch), and any move that crosses the parallel wave runs as its own
/// sequential EDI.
ActuationSequence execute_column_moves(std::vector<ColumnMove> moves, ChainLocator chain);

/// Expands a plan into one EDI cycle: a transfer batch extracting every
/// moving atom not already held in a dynamic trap, per-direction lockstep
/// displacement batches (increasing direction first; atoms that arrive stop
/// while the rest continue), and a transfer batch implanting everything.
/// Positions listed in `pre_extracted` are taken from the dynamic layer and
/// only implanted, so each costs one transfer instead of two.
ActuationSequence plan_to_sequence(const ChainPlan& plan, ChainLocator chain,
                                   const std::set<int>& pre_extracted = {});

} // namespace redrec
