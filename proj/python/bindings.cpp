#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <stdexcept>

#include "redrec/analytics.hpp"
#include "redrec/assignment.hpp"

namespace py = pybind11;
using namespace redrec;

namespace {

std::unique_ptr<Planner> make_planner(const std::string& name) {
    if (name == "redrec") return std::make_unique<RedRecPlanner>();
    if (name == "mwpm") return std::make_unique<MwpmPlanner>();
    throw std::invalid_argument("unknown planner '" + name + "' (use redrec or mwpm)");
}

ArrayState state_from_pairs(const GridSpec& spec,
                            const std::vector<std::pair<int, int>>& atoms) {
    std::vector<TrapIndex> positions;
    positions.reserve(atoms.size());
    for (const auto& [col, row] : atoms) positions.push_back(TrapIndex{col, row});
    return ArrayState(spec, Configuration(spec, std::move(positions)));
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Atom reconfiguration on grid trap arrays: red-rec, exact chain "
              "solver, assignment baseline, and the lossy protocol simulator";

    py::class_<GridSpec>(m, "GridSpec")
        .def(py::init<int, int, int, int>(), py::arg("width"), py::arg("height"),
             py::arg("target_width"), py::arg("target_height"))
        .def_property_readonly("width", &GridSpec::width)
        .def_property_readonly("height", &GridSpec::height)
        .def_property_readonly("target_width", &GridSpec::target_width)
        .def_property_readonly("target_height", &GridSpec::target_height)
        .def_property_readonly("num_traps", &GridSpec::num_traps)
        .def_property_readonly("target_size", &GridSpec::target_size)
        .def_property_readonly("overhead", &GridSpec::overhead)
        .def("__repr__", [](const GridSpec& s) {
            return "GridSpec(" + std::to_string(s.width()) + ", " +
                   std::to_string(s.height()) + ", " + std::to_string(s.target_width()) +
                   ", " + std::to_string(s.target_height()) + ")";
        });

    py::class_<LossParams>(m, "LossParams")
        .def(py::init<>())
        .def_readwrite("epsilon", &LossParams::epsilon)
        .def_readwrite("p_alpha", &LossParams::p_alpha)
        .def_readwrite("p_nu", &LossParams::p_nu)
        .def_readwrite("tau", &LossParams::tau)
        .def_readwrite("t_alpha", &LossParams::t_alpha)
        .def_readwrite("t_nu", &LossParams::t_nu)
        .def_readwrite("t_mot", &LossParams::t_mot)
        .def_readwrite("t_image", &LossParams::t_image)
        .def_static("lossless", &LossParams::lossless);

    py::class_<ChainPlan>(m, "ChainPlan")
        .def_readonly("assignment", &ChainPlan::assignment)
        .def_readonly("idle", &ChainPlan::idle)
        .def_readonly("unfilled", &ChainPlan::unfilled)
        .def_readonly("cost", &ChainPlan::cost);

    m.def("baseline_success", &baseline_success, py::arg("n_traps"), py::arg("epsilon"),
          py::arg("n_target"),
          "P(Bino(n_traps, epsilon) >= n_target), the lossless success bound");

    m.def(
        "solve_chain",
        [](int length, const std::vector<int>& sources, const std::vector<int>& targets) {
            return solve_chain(ChainProblem{length, sources, targets});
        },
        py::arg("length"), py::arg("sources"), py::arg("targets"),
        "Minimum-displacement order-preserving assignment on a chain");

    m.def(
        "solve_mwpm_cost",
        [](const std::vector<std::pair<int, int>>& sources,
           const std::vector<std::pair<int, int>>& targets) {
            AssignmentProblem problem;
            for (const auto& [c, r] : sources) problem.sources.push_back(TrapIndex{c, r});
            for (const auto& [c, r] : targets) problem.targets.push_back(TrapIndex{c, r});
            const Matching match = solve_mwpm(problem);
            return py::make_tuple(match.cost, match.source_of_target);
        },
        py::arg("sources"), py::arg("targets"),
        "Exact minimum total Manhattan distance matching; returns (cost, "
        "source index per target)");

    m.def(
        "redrec_cycle_counts",
        [](const GridSpec& spec, const std::vector<std::pair<int, int>>& atoms) {
            ArrayState state = state_from_pairs(spec, atoms);
            const ActuationSequence seq = redrec_cycle(state);
            const OpCounts counts = count_ops(state, seq);
            ArrayState end = state;
            OpCounts scratch;
            for (const auto& batch : seq.batches) apply_batch(end, batch, scratch);
            bool solved = true;
            for (const auto& t : target_region(spec))
                if (!end.has_static(t)) {
                    solved = false;
                    break;
                }
            py::dict out;
            out["transfers"] = counts.transfers;
            out["displacements"] = counts.displacements;
            out["batches"] = counts.batches_transfer + counts.batches_displacement;
            out["solved"] = solved;
            return out;
        },
        py::arg("spec"), py::arg("atoms"),
        "Plan one lossless red-rec cycle on a configuration and report its counts");

    m.def(
        "run_monte_carlo",
        [](const GridSpec& spec, const LossParams& params, const std::string& planner,
           std::uint64_t trials, std::uint64_t seed, int jobs, int load_threshold,
           int exact_atoms) {
            TrialOptions options;
            options.load_threshold = load_threshold;
            options.exact_atoms = exact_atoms;
            const auto impl = make_planner(planner);
            MonteCarloResult result;
            {
                py::gil_scoped_release release;
                result = run_monte_carlo(spec, params, *impl, trials, seed, options, jobs);
            }
            py::list successes, cycles, initial_atoms, control_time;
            for (const auto& r : result.records) {
                successes.append(r.success);
                cycles.append(r.cycles);
                initial_atoms.append(r.initial_atoms);
                control_time.append(r.control_time);
            }
            py::dict out;
            out["success_mean"] = result.summary.success_mean;
            out["success_stderr"] = result.summary.success_stderr;
            out["mean_initial_atoms"] = result.summary.mean_initial_atoms;
            out["success"] = successes;
            out["cycles"] = cycles;
            out["initial_atoms"] = initial_atoms;
            out["control_time"] = control_time;
            return out;
        },
        py::arg("spec"), py::arg("params"), py::arg("planner"), py::arg("trials"),
        py::arg("seed"), py::arg("jobs") = 1, py::arg("load_threshold") = 0,
        py::arg("exact_atoms") = -1,
        "Seeded protocol ensemble; per-trial substreams make results "
        "independent of the job count");

    m.attr("__version__") = "0.1.0";
}
