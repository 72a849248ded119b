#include "redrec/ops.hpp"

#include <algorithm>

namespace redrec {

void OpCounts::merge(const OpCounts& o) {
    transfers += o.transfers;
    displacements += o.displacements;
    batches_transfer += o.batches_transfer;
    batches_displacement += o.batches_displacement;
    for (const auto& [id, tally] : o.per_atom) {
        AtomTally& mine = per_atom[id];
        mine.transfers += tally.transfers;
        mine.displacements += tally.displacements;
    }
}

namespace {

bool op_is_transfer(const ElementaryOp& op) {
    return op.kind != ElementaryOp::Kind::step;
}

} // namespace

std::optional<BatchViolation> validate_batch(const ArrayState& state, const Batch& batch) {
    if (batch.ops.empty())
        return BatchViolation{{}, "empty batch"};

    const GridSpec& spec = state.spec();
    bool same_col = true, same_row = true;
    const TrapIndex first = batch.ops.front().at;
    std::vector<int> flats;
    flats.reserve(batch.ops.size());

    for (const auto& op : batch.ops) {
        if (!spec.in_grid(op.at))
            return BatchViolation{op.at, "trap outside grid"};
        if (op_is_transfer(op) != (batch.kind == BatchKind::transfer))
            return BatchViolation{op.at, "op kind does not match batch kind"};
        same_col = same_col && op.at.col == first.col;
        same_row = same_row && op.at.row == first.row;
        flats.push_back(spec.flat(op.at));
    }

    std::sort(flats.begin(), flats.end());
    if (std::adjacent_find(flats.begin(), flats.end()) != flats.end())
        return BatchViolation{first, "duplicate trap in batch"};
    if (!same_col && !same_row)
        return BatchViolation{first, "not a sub-row or sub-column"};

    if (batch.kind == BatchKind::displacement) {
        const Axis axis = batch.ops.front().axis;
        const int sign = batch.ops.front().sign;
        for (const auto& op : batch.ops) {
            if (op.axis != axis || op.sign != sign)
                return BatchViolation{op.at, "mixed direction in displacement batch"};
            if (op.sign != 1 && op.sign != -1)
                return BatchViolation{op.at, "step sign must be +1 or -1"};
            if (!spec.in_grid(op.step_destination()))
                return BatchViolation{op.at, "destination outside grid"};
            if (!state.has_dynamic(op.at))
                return BatchViolation{op.at, "no dynamic atom at step source"};
        }
    } else {
        for (const auto& op : batch.ops) {
            if (op.kind == ElementaryOp::Kind::extract) {
                if (!state.has_static(op.at))
                    return BatchViolation{op.at, "extract from empty static trap"};
                if (state.has_dynamic(op.at))
                    return BatchViolation{op.at, "dynamic trap occupied at extraction"};
            } else {
                if (!state.has_dynamic(op.at))
                    return BatchViolation{op.at, "implant from empty dynamic trap"};
            }
        }
    }
    return std::nullopt;
}

namespace {

[[noreturn]] void contract_fail(const char* what, TrapIndex at) {
    throw ContractError(std::string(what) + " at (" + std::to_string(at.col) + "," +
                        std::to_string(at.row) + ")");
}

void tally(OpCounts& counts, std::int32_t id, bool transfer) {
    AtomTally& t = counts.per_atom[id];
    if (transfer)
        ++t.transfers;
    else
        ++t.displacements;
}

} // namespace

void apply_batch(ArrayState& state, const Batch& batch, OpCounts& counts) {
    if (batch.ops.empty()) return;

    if (batch.kind == BatchKind::transfer) {
        ++counts.batches_transfer;
        for (const auto& op : batch.ops) {
            if (op.kind == ElementaryOp::Kind::extract) {
                if (!state.has_static(op.at)) contract_fail("extract from empty trap", op.at);
                if (state.has_dynamic(op.at)) contract_fail("extract into occupied dynamic trap", op.at);
                Atom a = state.take_static(op.at);
                state.place_dynamic(op.at, a);
                ++counts.transfers;
                tally(counts, a.id, true);
            } else {
                if (!state.has_dynamic(op.at)) contract_fail("implant from empty dynamic trap", op.at);
                Atom a = state.take_dynamic(op.at);
                ++counts.transfers;
                tally(counts, a.id, true);
                if (state.has_static(op.at)) {
                    // Pair annihilation: both atoms are lost.
                    state.take_static(op.at);
                } else {
                    state.place_static(op.at, a);
                }
            }
        }
        return;
    }

    ++counts.batches_displacement;
    // Process ops front-to-back along the step direction so each atom's
    // destination is vacated before it arrives.
    std::vector<const ElementaryOp*> order;
    order.reserve(batch.ops.size());
    for (const auto& op : batch.ops) order.push_back(&op);
    const int sign = batch.ops.front().sign;
    const Axis axis = batch.ops.front().axis;
    std::sort(order.begin(), order.end(), [&](const ElementaryOp* a, const ElementaryOp* b) {
        const int pa = axis == Axis::x ? a->at.col : a->at.row;
        const int pb = axis == Axis::x ? b->at.col : b->at.row;
        return sign > 0 ? pa > pb : pa < pb;
    });
    for (const ElementaryOp* op : order) {
        if (!state.has_dynamic(op->at)) contract_fail("step from empty dynamic trap", op->at);
        const TrapIndex dest = op->step_destination();
        if (!state.spec().in_grid(dest)) contract_fail("step outside grid", op->at);
        if (state.has_dynamic(dest)) contract_fail("dynamic collision", dest);
        Atom a = state.take_dynamic(op->at);
        state.place_dynamic(dest, a);
        ++counts.displacements;
        tally(counts, a.id, false);
    }
}

OpCounts count_ops(const ArrayState& initial, const ActuationSequence& seq) {
    ArrayState state = initial;
    OpCounts counts;
    for (const auto& batch : seq.batches) apply_batch(state, batch, counts);
    return counts;
}

} // namespace redrec
