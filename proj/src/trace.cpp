#include "redrec/trace.hpp"

#include <sstream>
#include <stdexcept>

namespace redrec {

void write_trace(std::ostream& os, const ProtocolTrace& trace) {
    os << "trace v1\n";
    os << "grid " << trace.spec.width() << ' ' << trace.spec.height() << ' '
       << trace.spec.target_width() << ' ' << trace.spec.target_height() << '\n';
    for (const auto& t : trace.initial.positions())
        os << "atom " << t.col << ' ' << t.row << '\n';
    for (std::size_t k = 0; k < trace.cycles.size(); ++k) {
        os << "cycle " << (k + 1) << '\n';
        int ordinal = 0;
        for (const auto& batch : trace.cycles[k].batches) {
            ++ordinal;
            if (batch.kind == BatchKind::transfer) {
                os << "batch " << ordinal << " transfer " << batch.ops.size();
                for (const auto& op : batch.ops)
                    os << ' ' << (op.kind == ElementaryOp::Kind::extract ? 'E' : 'I') << ' '
                       << op.at.col << ' ' << op.at.row;
            } else {
                const auto& first = batch.ops.front();
                os << "batch " << ordinal << " displacement "
                   << (first.axis == Axis::x ? 'x' : 'y') << ' '
                   << (first.sign > 0 ? '+' : '-') << ' ' << batch.ops.size();
                for (const auto& op : batch.ops) os << ' ' << op.at.col << ' ' << op.at.row;
            }
            os << '\n';
        }
    }
}

ProtocolTrace read_trace(std::istream& is) {
    std::string word;
    if (!(is >> word) || word != "trace")
        throw std::invalid_argument("trace: missing header");
    if (!(is >> word) || word != "v1")
        throw std::invalid_argument("trace: unsupported version");
    if (!(is >> word) || word != "grid")
        throw std::invalid_argument("trace: missing grid record");
    int w, h, tw, th;
    if (!(is >> w >> h >> tw >> th))
        throw std::invalid_argument("trace: malformed grid record");

    ProtocolTrace trace;
    trace.spec = GridSpec(w, h, tw, th);
    std::vector<TrapIndex> atoms;

    while (is >> word) {
        if (word == "atom") {
            TrapIndex t;
            if (!(is >> t.col >> t.row))
                throw std::invalid_argument("trace: malformed atom record");
            atoms.push_back(t);
            continue;
        }
        if (word == "cycle") {
            int k;
            if (!(is >> k) || k != static_cast<int>(trace.cycles.size()) + 1)
                throw std::invalid_argument("trace: cycles out of order");
            trace.cycles.emplace_back();
            continue;
        }
        if (word != "batch")
            throw std::invalid_argument("trace: unexpected record '" + word + "'");
        if (trace.cycles.empty())
            throw std::invalid_argument("trace: batch before first cycle");

        int ordinal;
        std::string kind;
        if (!(is >> ordinal >> kind))
            throw std::invalid_argument("trace: malformed batch record");
        Batch batch{kind == "transfer" ? BatchKind::transfer : BatchKind::displacement, {}};
        if (kind == "transfer") {
            std::size_t n;
            if (!(is >> n)) throw std::invalid_argument("trace: malformed transfer batch");
            for (std::size_t i = 0; i < n; ++i) {
                char tag;
                TrapIndex t;
                if (!(is >> tag >> t.col >> t.row) || (tag != 'E' && tag != 'I'))
                    throw std::invalid_argument("trace: malformed transfer op");
                batch.ops.push_back(tag == 'E' ? ElementaryOp::make_extract(t)
                                               : ElementaryOp::make_implant(t));
            }
        } else if (kind == "displacement") {
            char axis, sign;
            std::size_t n;
            if (!(is >> axis >> sign >> n))
                throw std::invalid_argument("trace: malformed displacement batch");
            for (std::size_t i = 0; i < n; ++i) {
                TrapIndex t;
                if (!(is >> t.col >> t.row))
                    throw std::invalid_argument("trace: malformed displacement op");
                batch.ops.push_back(ElementaryOp::make_step(
                    t, axis == 'x' ? Axis::x : Axis::y, sign == '+' ? +1 : -1));
            }
        } else {
            throw std::invalid_argument("trace: unknown batch kind '" + kind + "'");
        }
        trace.cycles.back().batches.push_back(std::move(batch));
    }

    trace.initial = Configuration(trace.spec, std::move(atoms));
    return trace;
}

std::string trace_to_string(const ProtocolTrace& trace) {
    std::ostringstream os;
    write_trace(os, trace);
    return os.str();
}

ProtocolTrace trace_from_string(const std::string& text) {
    std::istringstream is(text);
    return read_trace(is);
}

} // namespace redrec
