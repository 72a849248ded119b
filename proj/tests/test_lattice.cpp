#include "doctest.h"

#include <algorithm>
#include <set>

#include "redrec/state.hpp"

using namespace redrec;

TEST_CASE("target region of the reference geometry") {
    GridSpec spec(8, 16, 8, 8);
    CHECK(spec.num_traps() == 128);
    CHECK(spec.target_size() == 64);
    CHECK(spec.overhead() == doctest::Approx(2.0));

    const auto region = target_region(spec);
    CHECK(region.size() == 64);
    for (const auto& t : region) {
        CHECK(t.row >= 4);
        CHECK(t.row <= 11);
    }
    std::set<int> cols;
    for (const auto& t : region) cols.insert(t.col);
    CHECK(cols.size() == 8);
}

TEST_CASE("degenerate single-trap grid") {
    GridSpec spec(1, 1, 1, 1);
    const auto region = target_region(spec);
    REQUIRE(region.size() == 1);
    CHECK(region[0] == TrapIndex{0, 0});
}

TEST_CASE("odd margins center with the extra trap after the block") {
    GridSpec spec(4, 7, 2, 2);
    CHECK(spec.target_col_begin() == 1);
    CHECK(spec.target_col_end() == 3);
    CHECK(spec.target_row_begin() == 2);
    CHECK(spec.target_row_end() == 4);
}

TEST_CASE("grid spec validation") {
    CHECK_THROWS_AS(GridSpec(0, 4, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(GridSpec(4, 4, 5, 1), std::invalid_argument);
    CHECK_THROWS_AS(GridSpec(4, 4, 1, 5), std::invalid_argument);
}

TEST_CASE("target region size and bounding box for assorted specs") {
    for (int w : {1, 3, 8, 13})
        for (int h : {1, 5, 16})
            for (int tw = 1; tw <= w; ++tw)
                for (int th = 1; th <= h; ++th) {
                    GridSpec spec(w, h, tw, th);
                    const auto region = target_region(spec);
                    CHECK(static_cast<long long>(region.size()) == spec.target_size());
                    int cmin = w, cmax = -1, rmin = h, rmax = -1;
                    for (const auto& t : region) {
                        cmin = std::min(cmin, t.col);
                        cmax = std::max(cmax, t.col);
                        rmin = std::min(rmin, t.row);
                        rmax = std::max(rmax, t.row);
                    }
                    CHECK(cmax - cmin + 1 == tw);
                    CHECK(rmax - rmin + 1 == th);
                    // Margins differ by at most one, extra after the block.
                    CHECK(((w - tw) - cmin == cmin || (w - tw) - cmin == cmin + 1));
                    CHECK(((h - th) - rmin == rmin || (h - th) - rmin == rmin + 1));
                }
}

TEST_CASE("target region is mirror symmetric when margins are even") {
    GridSpec spec(12, 6, 4, 2);
    const auto region = target_region(spec);
    std::set<std::pair<int, int>> cells;
    for (const auto& t : region) cells.insert({t.col, t.row});
    for (const auto& t : region)
        CHECK(cells.count({spec.width() - 1 - t.col, t.row}) == 1);
}

TEST_CASE("column view snapshots static occupancy") {
    GridSpec spec(4, 8, 2, 2);
    ArrayState state(spec);
    state.place_static(TrapIndex{2, 0}, Atom{0, 1.0});
    state.place_static(TrapIndex{2, 5}, Atom{1, 1.0});

    const auto view = state.column_view(2);
    REQUIRE(view.size() == 8);
    for (int row = 0; row < 8; ++row)
        CHECK(view[row].has_value() == (row == 0 || row == 5));

    const auto empty = state.column_view(0);
    CHECK(std::none_of(empty.begin(), empty.end(),
                       [](const auto& a) { return a.has_value(); }));

    CHECK_THROWS_AS(state.column_view(4), std::invalid_argument);
}

TEST_CASE("configuration round-trips through ArrayState") {
    GridSpec spec(5, 9, 3, 3);
    Configuration config(spec, {{0, 0}, {4, 8}, {2, 4}, {1, 7}});
    ArrayState state(spec, config);
    CHECK(state.detected() == config);
    CHECK(state.static_count() == 4);
}

TEST_CASE("configuration rejects invalid positions") {
    GridSpec spec(3, 3, 1, 1);
    CHECK_THROWS_AS(Configuration(spec, {{3, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(Configuration(spec, {{1, 1}, {1, 1}}), std::invalid_argument);
}
