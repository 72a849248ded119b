#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "redrec/state.hpp"

namespace redrec {

/// Raised when a planner emits a sequence that breaks an operation
/// precondition (collision, empty source, ...). Planners are required to
/// produce collision-free sequences, so this indicates a bug in the caller,
/// not a protocol failure.
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

enum class Axis : std::uint8_t { x, y };

/// One of the elementary control operations. Extraction moves an atom
/// static -> dynamic at the same trap, implantation the reverse, and a step
/// displaces a dynamic trap by one lattice unit along an axis. Idle (no-op)
/// exposure is implicit: any atom not addressed by a batch idles for the
/// batch's duration.
struct ElementaryOp {
    enum class Kind : std::uint8_t { extract, implant, step };

    Kind kind;
    TrapIndex at;
    Axis axis = Axis::x; // step only
    int sign = +1;       // step only, +1 or -1

    static ElementaryOp make_extract(TrapIndex t) { return {Kind::extract, t}; }
    static ElementaryOp make_implant(TrapIndex t) { return {Kind::implant, t}; }
    static ElementaryOp make_step(TrapIndex t, Axis a, int s) {
        return {Kind::step, t, a, s};
    }

    TrapIndex step_destination() const {
        TrapIndex d = at;
        if (axis == Axis::x) d.col += sign; else d.row += sign;
        return d;
    }
};

enum class BatchKind : std::uint8_t { transfer, displacement };

/// A set of elementary operations executed in parallel. All addressed traps
/// must be distinct and lie in a single row or a single column; displacement
/// batches share one (axis, sign).
struct Batch {
    BatchKind kind;
    std::vector<ElementaryOp> ops;
};

struct ActuationSequence {
    std::vector<Batch> batches;

    bool empty() const { return batches.empty(); }
    void append(const ActuationSequence& other) {
        batches.insert(batches.end(), other.batches.begin(), other.batches.end());
    }
};

struct AtomTally {
    long long transfers = 0;
    long long displacements = 0;
};

struct OpCounts {
    long long transfers = 0;      // extractions + implantations
    long long displacements = 0;
    long long batches_transfer = 0;
    long long batches_displacement = 0;
    std::map<std::int32_t, AtomTally> per_atom;

    void merge(const OpCounts& o);
};

struct BatchViolation {
    TrapIndex at;
    std::string reason;
};

/// Checks the chain constraint and every op's layer preconditions against
/// `state` without mutating it. Returns the first violation found.
std::optional<BatchViolation> validate_batch(const ArrayState& state, const Batch& batch);

/// Applies a batch in place, accumulating operation counts. Extraction onto
/// an occupied dynamic trap, stepping from an empty trap, or a displacement
/// collision raise ContractError. Implanting onto an occupied static trap
/// removes both atoms (pair annihilation).
void apply_batch(ArrayState& state, const Batch& batch, OpCounts& counts);

/// Simulates `seq` from a copy of `initial` and returns the totals.
OpCounts count_ops(const ArrayState& initial, const ActuationSequence& seq);

} // namespace redrec
