#include <dynabt/cli.hpp>
#include <dynabt/harness.hpp>
#include <dynabt/instances.hpp>
#include <dynabt/problem_io.hpp>
#include <dynabt/verify.hpp>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace dynabt;

namespace {

template <class T>
T parse_name(std::optional<T> parsed, const std::string &what, const std::string &name)
{
    if (!parsed)
        throw py::value_error("unknown " + what + " '" + name + "'");
    return *parsed;
}

py::dict search(const Problem &problem, const std::string &algorithm, const std::string &mechanism,
                const std::string &var_rule, const std::string &val_rule, std::uint64_t seed,
                std::optional<std::uint64_t> max_backtracks, std::optional<std::uint64_t> max_nodes)
{
    problem.require_well_formed();
    Heuristics h;
    h.variable_rule = parse_name(parse_variable_rule(var_rule), "variable rule", var_rule);
    h.value_rule = parse_name(parse_value_rule(val_rule), "value rule", val_rule);
    h.seed = seed;
    const auto algo = parse_name(parse_algorithm(algorithm), "algorithm", algorithm);
    const auto mech = make_mechanism(parse_name(parse_mechanism(mechanism), "mechanism", mechanism));

    SearchOutcome out;
    {
        py::gil_scoped_release release;
        out = solve(problem, algo, mech, h, {max_backtracks, max_nodes});
    }
    py::dict result;
    result["verdict"] = std::string(to_string(out.verdict));
    if (out.solution) {
        py::dict solution;
        for (VarIndex v = 0; v < static_cast<VarIndex>(problem.num_variables()); ++v)
            solution[py::str(problem.name(v))] = problem.value_name(v, (*out.solution)[v]);
        result["solution"] = solution;
    }
    else
        result["solution"] = py::none();
    result["nodes"] = out.stats.nodes_expanded;
    result["backtracks"] = out.stats.backtracks;
    result["max_entries"] = out.stats.max_elimination_entries;
    result["trace"] = format_trace(problem, out.trace);
    return result;
}

py::tuple cli(const std::vector<std::string> &args)
{
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Backtracking search with eliminating explanations";

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);

    py::class_<Problem>(m, "Problem")
        .def_property_readonly("variables",
                               [](const Problem &p) {
                                   std::vector<std::string> names;
                                   for (const auto &v : p.variables())
                                       names.push_back(v.name);
                                   return names;
                               })
        .def("domain", [](const Problem &p, const std::string &name) {
            auto v = p.find_variable(name);
            if (!v)
                throw py::key_error(name);
            return p.variables()[*v].domain;
        })
        .def_property_readonly("num_constraints", &Problem::num_constraints)
        .def("validate", &validate_problem)
        .def("to_json", [](const Problem &p) { return to_json(p); })
        .def("__eq__", [](const Problem &a, const Problem &b) { return a == b; })
        .def("__repr__", [](const Problem &p) {
            return "<Problem " + std::to_string(p.num_variables()) + " variables, " +
                   std::to_string(p.num_constraints()) + " constraints>";
        });

    m.def("parse_problem", &parse_problem, py::arg("text"));
    m.def("load_problem", [](const std::string &path) { return load_problem(path); }, py::arg("path"));
    m.def("figure1", &figure1_instance);
    m.def("xyz", &xyz_unsat_instance);
    m.def("random_csp", &random_binary_csp, py::arg("n"), py::arg("d"), py::arg("p1"), py::arg("p2"),
          py::arg("seed"));
    m.def(
        "crossword",
        [](const std::string &frame, const std::vector<std::string> &words, bool distinct) {
            return crossword_csp(CrosswordFrame::parse(frame), words, distinct);
        },
        py::arg("frame"), py::arg("words"), py::arg("distinct") = false);

    m.def("solve", &search, py::arg("problem"), py::arg("algorithm") = "dynamic", py::arg("mechanism") = "basic",
          py::arg("var_rule") = "lexicographic", py::arg("val_rule") = "lexicographic", py::arg("seed") = 0,
          py::arg("max_backtracks") = py::none(), py::arg("max_nodes") = py::none(),
          "Run one search; returns verdict, solution, counters and the event trace.");

    m.def(
        "count_solutions", [](const Problem &p) { return brute_force(p).size(); }, py::arg("problem"));
    m.def(
        "check_mechanism",
        [](const Problem &p, const std::string &mechanism) {
            const auto r =
                check_mechanism(make_mechanism(parse_name(parse_mechanism(mechanism), "mechanism", mechanism)), p);
            py::dict d;
            d["passed"] = r.passed;
            d["cases"] = r.cases;
            d["property"] = r.property;
            d["counterexample"] = r.counterexample;
            return d;
        },
        py::arg("problem"), py::arg("mechanism") = "basic");
    m.def(
        "monitor",
        [](const Problem &p, const std::string &algorithm, const std::string &mechanism,
           std::optional<std::uint64_t> max_nodes) {
            const auto algo = parse_name(parse_algorithm(algorithm), "algorithm", algorithm);
            const auto mech = make_mechanism(parse_name(parse_mechanism(mechanism), "mechanism", mechanism));
            const auto r = monitor_run(p, algo, mech, {}, {std::nullopt, max_nodes});
            py::dict d;
            d["certified"] = r.certified();
            d["nogoods"] = r.nogoods.size();
            d["excluded"] = r.excluded_final;
            d["total"] = r.total_assignments;
            d["violations"] = r.violations;
            return d;
        },
        py::arg("problem"), py::arg("algorithm") = "dynamic", py::arg("mechanism") = "basic",
        py::arg("max_nodes") = py::none());

    m.def("cli", &cli, py::arg("args"), "Run the command line in-process; returns (exit code, stdout, stderr).");
}
