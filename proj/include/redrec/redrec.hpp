#pragma once

#include <optional>
#include <vector>

#include "redrec/chain.hpp"

namespace redrec {

enum class ColumnClass : std::uint8_t { donor, receiver, neutral };

struct ColumnInfo {
    int count = 0;   // measured atoms in the column
    int desired = 0; // target_height for target columns, 0 outside
    int imbalance = 0;
    ColumnClass cls = ColumnClass::neutral;
};

struct ColumnLedger {
    std::vector<ColumnInfo> columns;

    int surplus(int col) const { return columns[col].imbalance; }
    int deficit(int col) const { return -columns[col].imbalance; }
};

/// Partition of a donor column's atoms for one redistribution sequence.
/// Reconfigured atoms fill the donor's own target traps, redistributed atoms
/// (always drawn from the external region) leave for the receiver, the rest
/// idle in place.
struct DonorLabeling {
    ChainPlan reconfigure;              // donor-column chain plan
    std::vector<int> redistributed;     // rows, in selection order
    std::vector<int> idle;              // rows left untouched
    std::vector<int> assigned_rows;     // open row per redistributed atom, -1 if none
    int assigned_count = 0;
};

ColumnLedger classify_columns(const ArrayState& state);

/// Donor/receiver pairing order: first adjacent pairs whose donor can fully
/// satisfy the receiver, scanning left to right; then all remaining pairs
/// ranked by exchangeable atoms descending, column distance ascending,
/// donor index ascending, receiver index ascending.
std::vector<std::pair<int, int>> pair_columns(const ColumnLedger& ledger);

/// Chooses which donor atoms to reconfigure, redistribute, and idle.
/// Redistributed atoms are picked farthest from the target region first,
/// alternating above/below the target band starting above. quota must not
/// exceed the donor's surplus.
DonorLabeling label_donor(const ArrayState& state, int donor, int quota);

/// Open rows between two columns: external rows with every static trap
/// strictly between the columns empty and the receiver trap empty (the donor
/// endpoint does not count; its atom leaves before crossing). Ascending.
std::vector<int> open_rows(const ArrayState& state, int donor, int receiver);

/// Greedily assigns each redistributed atom the nearest free open row,
/// breaking ties toward the target region. Atoms left without a row keep
/// assignment -1 and wait for a repeated sequence. Returns the number of
/// rows assigned (0 means the pair is blocked).
int assign_open_rows(const ArrayState& state, int donor, int receiver,
                     DonorLabeling& labeling);

/// Builds and applies the three-phase donor->receiver sequence: donor-column
/// EDI that also parks redistributed atoms on their open rows, a parallel
/// horizontal crossing, and the receiver-column reconfiguration that implants
/// the arrivals (each redistributed atom is extracted and implanted exactly
/// once). Returns the number of atoms delivered to the receiver.
int streamlined_sequence(ArrayState& state, int donor, int receiver,
                         const DonorLabeling& labeling, ActuationSequence& out);

/// Plans one full reconfiguration cycle on a measured state: neutral columns
/// first, then donor-receiver pairs until every receiver is satisfied or no
/// pairing can progress (with one reconfigure-everything fallback per cycle
/// when no pair has an open row), and finally any column not yet touched.
/// An empty sequence signals a stalled cycle.
ActuationSequence redrec_cycle(const ArrayState& measured);

/// Cycle planner interface used by the trial engine.
class Planner {
public:
    virtual ~Planner() = default;
    virtual ActuationSequence plan_cycle(const ArrayState& measured) const = 0;
    virtual const char* name() const = 0;
};

class RedRecPlanner final : public Planner {
public:
    ActuationSequence plan_cycle(const ArrayState& measured) const override;
    const char* name() const override { return "redrec"; }
};

/// Assignment baseline: minimum-distance matching routed one EDI per atom.
class MwpmPlanner final : public Planner {
public:
    ActuationSequence plan_cycle(const ArrayState& measured) const override;
    const char* name() const override { return "mwpm"; }
};

} // namespace redrec
