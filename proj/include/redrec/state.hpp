#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "redrec/grid.hpp"

namespace redrec {

/// One atom. The id is assigned at loading and used only for bookkeeping
/// (per-atom operation tallies); no algorithm branches on it. corruption is
/// the cumulative survival probability given the atom's control history;
/// a freshly measured atom has corruption 1.
struct Atom {
    std::int32_t id = -1;
    double corruption = 1.0;
};

/// Deterministic configuration: positions of detected atoms in the static
/// layer, sorted by row-major flat index.
class Configuration {
public:
    Configuration() = default;
    Configuration(const GridSpec& spec, std::vector<TrapIndex> positions);

    const std::vector<TrapIndex>& positions() const { return positions_; }
    std::size_t size() const { return positions_.size(); }

    bool contains_all(const std::vector<TrapIndex>& traps) const;

    bool operator==(const Configuration&) const = default;

private:
    std::vector<TrapIndex> positions_; // sorted (row, col)
};

/// Occupancy and corruption of the static and dynamic trap layers.
/// Value type: copying yields an independent state. A trap index holds at
/// most one atom per layer; dynamic traps exist only where an atom is
/// currently carried.
class ArrayState {
public:
    explicit ArrayState(const GridSpec& spec);
    ArrayState(const GridSpec& spec, const Configuration& detected);

    const GridSpec& spec() const { return spec_; }

    bool has_static(TrapIndex t) const { return static_[spec_.flat(t)].id >= 0; }
    bool has_dynamic(TrapIndex t) const { return dynamic_[spec_.flat(t)].id >= 0; }
    const Atom& static_at(TrapIndex t) const { return static_[spec_.flat(t)]; }
    const Atom& dynamic_at(TrapIndex t) const { return dynamic_[spec_.flat(t)]; }
    Atom& static_at(TrapIndex t) { return static_[spec_.flat(t)]; }
    Atom& dynamic_at(TrapIndex t) { return dynamic_[spec_.flat(t)]; }

    void place_static(TrapIndex t, Atom a);
    Atom take_static(TrapIndex t);
    void place_dynamic(TrapIndex t, Atom a);
    Atom take_dynamic(TrapIndex t);

    int static_count() const { return static_count_; }
    int dynamic_count() const { return static_cast<int>(dynamic_occupied_.size()); }

    /// Flat indices of occupied dynamic traps, ascending.
    const std::vector<int>& dynamic_occupied() const { return dynamic_occupied_; }

    /// Positions of atoms in the static layer, as a Configuration.
    Configuration detected() const;

    /// Static occupancy of one column, row 0 first.
    std::vector<std::optional<Atom>> column_view(int col) const;

    /// Rows of static atoms in one column, ascending.
    std::vector<int> column_rows(int col) const;

    /// Visit every atom present in either layer.
    template <typename F>
    void for_each_atom(F&& f) {
        for (auto& slot : static_)
            if (slot.id >= 0) f(slot);
        for (int idx : dynamic_occupied_) f(dynamic_[idx]);
    }

    int next_atom_id() const { return next_id_; }
    void set_next_atom_id(int id) { next_id_ = id; }

private:
    GridSpec spec_;
    std::vector<Atom> static_;
    std::vector<Atom> dynamic_;
    std::vector<int> dynamic_occupied_; // sorted flat indices
    int static_count_ = 0;
    int next_id_ = 0;
};

} // namespace redrec
