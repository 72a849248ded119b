#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace redrec {

/// Position of a static trap. Columns run vertically: a "column" is the set
/// of traps sharing `col`, indexed 0-based from the left; rows 0-based from
/// the top.
struct TrapIndex {
    int col = 0;
    int row = 0;

    auto operator<=>(const TrapIndex&) const = default;
};

/// Geometry of the static trap array with a centered rectangular target
/// block. When an external margin is odd, the extra row goes below the
/// target block (larger row indices) and the extra column to its right.
class GridSpec {
public:
    GridSpec(int width, int height, int target_width, int target_height)
        : width_(width), height_(height),
          target_width_(target_width), target_height_(target_height) {
        if (width <= 0 || height <= 0 || target_width <= 0 || target_height <= 0)
            throw std::invalid_argument("GridSpec: dimensions must be positive");
        if (target_width > width || target_height > height)
            throw std::invalid_argument("GridSpec: target block exceeds grid");
    }

    int width() const { return width_; }
    int height() const { return height_; }
    int target_width() const { return target_width_; }
    int target_height() const { return target_height_; }

    long long num_traps() const { return 1LL * width_ * height_; }
    long long target_size() const { return 1LL * target_width_ * target_height_; }
    double overhead() const {
        return static_cast<double>(num_traps()) / static_cast<double>(target_size());
    }

    int target_col_begin() const { return (width_ - target_width_) / 2; }
    int target_col_end() const { return target_col_begin() + target_width_; }
    int target_row_begin() const { return (height_ - target_height_) / 2; }
    int target_row_end() const { return target_row_begin() + target_height_; }

    bool in_grid(TrapIndex t) const {
        return t.col >= 0 && t.col < width_ && t.row >= 0 && t.row < height_;
    }
    bool in_target(TrapIndex t) const {
        return t.col >= target_col_begin() && t.col < target_col_end() &&
               t.row >= target_row_begin() && t.row < target_row_end();
    }
    bool target_column(int col) const {
        return col >= target_col_begin() && col < target_col_end();
    }
    bool target_row(int row) const {
        return row >= target_row_begin() && row < target_row_end();
    }

    /// Row-major flat index.
    int flat(TrapIndex t) const { return t.row * width_ + t.col; }
    TrapIndex unflat(int i) const { return TrapIndex{i % width_, i / width_}; }

private:
    int width_;
    int height_;
    int target_width_;
    int target_height_;
};

/// Traps of the centered target block, in row-major order.
std::vector<TrapIndex> target_region(const GridSpec& spec);

} // namespace redrec
