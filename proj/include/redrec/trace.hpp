#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "redrec/state.hpp"
#include "redrec/ops.hpp"

namespace redrec {

/// Line-delimited protocol trace, stable across runs for a fixed seed.
/// Format (one record per line):
///   trace v1
///   grid <width> <height> <target_width> <target_height>
///   atom <col> <row>                      (one line per initial atom)
///   cycle <k>
///   batch <ordinal> transfer <n> {E|I} <col> <row> ...
///   batch <ordinal> displacement <x|y> <+|-> <n> <col> <row> ...
struct ProtocolTrace {
    GridSpec spec{1, 1, 1, 1};
    Configuration initial;
    std::vector<ActuationSequence> cycles;
};

void write_trace(std::ostream& os, const ProtocolTrace& trace);
ProtocolTrace read_trace(std::istream& is);

std::string trace_to_string(const ProtocolTrace& trace);
ProtocolTrace trace_from_string(const std::string& text);

} // namespace redrec
