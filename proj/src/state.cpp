#include "redrec/state.hpp"

#include <algorithm>
#include <stdexcept>

namespace redrec {

std::vector<TrapIndex> target_region(const GridSpec& spec) {
    std::vector<TrapIndex> region;
    region.reserve(static_cast<std::size_t>(spec.target_size()));
    for (int row = spec.target_row_begin(); row < spec.target_row_end(); ++row)
        for (int col = spec.target_col_begin(); col < spec.target_col_end(); ++col)
            region.push_back(TrapIndex{col, row});
    return region;
}

namespace {
// Row-major order, matching GridSpec::flat.
bool row_major_less(TrapIndex a, TrapIndex b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
}
} // namespace

Configuration::Configuration(const GridSpec& spec, std::vector<TrapIndex> positions)
    : positions_(std::move(positions)) {
    for (const auto& t : positions_)
        if (!spec.in_grid(t))
            throw std::invalid_argument("Configuration: position outside grid");
    std::sort(positions_.begin(), positions_.end(), row_major_less);
    if (std::adjacent_find(positions_.begin(), positions_.end()) != positions_.end())
        throw std::invalid_argument("Configuration: duplicate position");
}

bool Configuration::contains_all(const std::vector<TrapIndex>& traps) const {
    for (const auto& t : traps) {
        auto it = std::lower_bound(positions_.begin(), positions_.end(), t, row_major_less);
        if (it == positions_.end() || !(*it == t)) return false;
    }
    return true;
}

ArrayState::ArrayState(const GridSpec& spec)
    : spec_(spec),
      static_(static_cast<std::size_t>(spec.num_traps())),
      dynamic_(static_cast<std::size_t>(spec.num_traps())) {}

ArrayState::ArrayState(const GridSpec& spec, const Configuration& detected)
    : ArrayState(spec) {
    for (const auto& t : detected.positions())
        place_static(t, Atom{next_id_++, 1.0});
}

void ArrayState::place_static(TrapIndex t, Atom a) {
    Atom& slot = static_[spec_.flat(t)];
    if (slot.id >= 0) throw std::logic_error("ArrayState: static trap already occupied");
    slot = a;
    ++static_count_;
}

Atom ArrayState::take_static(TrapIndex t) {
    Atom& slot = static_[spec_.flat(t)];
    if (slot.id < 0) throw std::logic_error("ArrayState: static trap empty");
    Atom a = slot;
    slot = Atom{};
    --static_count_;
    return a;
}

void ArrayState::place_dynamic(TrapIndex t, Atom a) {
    const int idx = spec_.flat(t);
    Atom& slot = dynamic_[idx];
    if (slot.id >= 0) throw std::logic_error("ArrayState: dynamic trap already occupied");
    slot = a;
    dynamic_occupied_.insert(
        std::lower_bound(dynamic_occupied_.begin(), dynamic_occupied_.end(), idx), idx);
}

Atom ArrayState::take_dynamic(TrapIndex t) {
    const int idx = spec_.flat(t);
    Atom& slot = dynamic_[idx];
    if (slot.id < 0) throw std::logic_error("ArrayState: dynamic trap empty");
    Atom a = slot;
    slot = Atom{};
    dynamic_occupied_.erase(
        std::lower_bound(dynamic_occupied_.begin(), dynamic_occupied_.end(), idx));
    return a;
}

Configuration ArrayState::detected() const {
    std::vector<TrapIndex> positions;
    positions.reserve(static_cast<std::size_t>(static_count_));
    for (int i = 0; i < static_cast<int>(static_.size()); ++i)
        if (static_[i].id >= 0) positions.push_back(spec_.unflat(i));
    return Configuration(spec_, std::move(positions));
}

std::vector<std::optional<Atom>> ArrayState::column_view(int col) const {
    if (col < 0 || col >= spec_.width())
        throw std::invalid_argument("column_view: column out of range");
    std::vector<std::optional<Atom>> view(static_cast<std::size_t>(spec_.height()));
    for (int row = 0; row < spec_.height(); ++row) {
        const Atom& a = static_[spec_.flat(TrapIndex{col, row})];
        if (a.id >= 0) view[row] = a;
    }
    return view;
}

std::vector<int> ArrayState::column_rows(int col) const {
    if (col < 0 || col >= spec_.width())
        throw std::invalid_argument("column_rows: column out of range");
    std::vector<int> rows;
    for (int row = 0; row < spec_.height(); ++row)
        if (static_[spec_.flat(TrapIndex{col, row})].id >= 0) rows.push_back(row);
    return rows;
}

} // namespace redrec
