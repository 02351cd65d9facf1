#include <dynabt/cli.hpp>
#include <dynabt/harness.hpp>
#include <dynabt/problem_io.hpp>
#include <dynabt/verify.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace dynabt {

namespace {

// Thrown for bad flag values that CLI11 itself cannot detect.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::uint64_t default_seed()
{
    if (const char *s = std::getenv("DYNABT_SEED")) {
        char *end = nullptr;
        const auto v = std::strtoull(s, &end, 10);
        if (end && *end == '\0' && end != s)
            return v;
        throw UsageError(std::string("DYNABT_SEED='") + s + "' is not an unsigned integer");
    }
    return 0;
}

Problem open_problem(const std::string &arg)
{
    if (!std::filesystem::exists(arg)) {
        if (arg == "figure1")
            return figure1_instance();
        if (arg == "xyz")
            return xyz_unsat_instance();
    }
    auto p = load_problem(arg);
    p.require_well_formed();
    return p;
}

struct SearchFlags {
    std::string problem;
    std::string algo = "dynamic";
    std::string mechanism = "basic";
    std::string var_rule = "lexicographic";
    std::string val_rule = "lexicographic";
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> max_backtracks;
    std::optional<std::uint64_t> max_nodes;
    std::vector<std::string> prefer;

    void attach(CLI::App *app)
    {
        app->add_option("problem", problem, "problem JSON file, or figure1 / xyz")->required();
        app->add_option("--algo", algo,
                        "dfs, explained-dfs, backjump, dynamic-v1, dynamic or oldest-culprit")
            ->capture_default_str();
        app->add_option("--mechanism", mechanism, "basic, forward or blame-everything")->capture_default_str();
        app->add_option("--var-rule", var_rule, "lexicographic or cheapest-first")->capture_default_str();
        app->add_option("--val-rule", val_rule, "lexicographic or seeded-random")->capture_default_str();
        app->add_option("--seed", seed, "seed for seeded-random (default $DYNABT_SEED or 0)");
        app->add_option("--max-backtracks", max_backtracks, "give up after this many backtracks");
        app->add_option("--max-nodes", max_nodes, "give up after this many assignments");
        app->add_option("--prefer", prefer, "VAR=v1,v2: try these values of VAR first")->take_all();
    }

    Algorithm algorithm() const
    {
        auto a = parse_algorithm(algo);
        if (!a)
            throw UsageError("unknown algorithm '" + algo + "'");
        return *a;
    }

    Mechanism make() const
    {
        auto m = parse_mechanism(mechanism);
        if (!m)
            throw UsageError("unknown mechanism '" + mechanism + "'");
        return make_mechanism(*m);
    }

    Heuristics heuristics(const Problem &p) const
    {
        Heuristics h;
        auto vr = parse_variable_rule(var_rule);
        if (!vr)
            throw UsageError("unknown variable rule '" + var_rule + "'");
        auto xr = parse_value_rule(val_rule);
        if (!xr)
            throw UsageError("unknown value rule '" + val_rule + "'");
        h.variable_rule = *vr;
        h.value_rule = *xr;
        h.seed = seed ? *seed : default_seed();
        for (const auto &item : prefer) {
            const auto eq = item.find('=');
            if (eq == std::string::npos)
                throw UsageError("--prefer expects VAR=value[,value...], got '" + item + "'");
            auto v = p.find_variable(item.substr(0, eq));
            if (!v)
                throw UsageError("--prefer names unknown variable '" + item.substr(0, eq) + "'");
            std::stringstream values(item.substr(eq + 1));
            for (std::string name; std::getline(values, name, ',');) {
                auto x = p.find_value(*v, name);
                if (!x)
                    throw UsageError("--prefer: '" + name + "' is not a value of " + p.name(*v));
                h.preferences[*v].push_back(*x);
            }
        }
        return h;
    }

    Limits limits() const { return {max_backtracks, max_nodes}; }
};

int verdict_code(Verdict v)
{
    switch (v) {
    case Verdict::solved: return exit_code::ok;
    case Verdict::unsat: return exit_code::unsat;
    case Verdict::exhausted: return exit_code::exhausted;
    }
    return exit_code::data;
}

SearchOutcome run_search(const SearchFlags &f, const Problem &p)
{
    const auto algorithm = f.algorithm();
    const auto mechanism = f.make();
    const auto heuristics = f.heuristics(p);
    if (algorithm == Algorithm::oldest_culprit && !f.max_nodes)
        throw UsageError("--algo oldest-culprit requires --max-nodes");
    return solve(p, algorithm, mechanism, heuristics, f.limits());
}

int cmd_solve(const SearchFlags &f, std::ostream &out)
{
    const auto p = open_problem(f.problem);
    const auto outcome = run_search(f, p);
    switch (outcome.verdict) {
    case Verdict::solved:
        out << "SAT\n";
        for (VarIndex v = 0; v < static_cast<VarIndex>(p.num_variables()); ++v)
            out << p.name(v) << '=' << p.value_name(v, (*outcome.solution)[v]) << '\n';
        break;
    case Verdict::unsat: out << "UNSAT\n"; break;
    case Verdict::exhausted: out << "EXHAUSTED\n"; break;
    }
    return verdict_code(outcome.verdict);
}

int cmd_trace(const SearchFlags &f, const std::string &format, std::ostream &out)
{
    const auto p = open_problem(f.problem);
    const auto outcome = run_search(f, p);
    if (format == "events")
        out << format_trace(p, outcome.trace);
    else if (format == "tables")
        out << render_tables(p, f.algorithm(), outcome.trace);
    else
        throw UsageError("--format must be events or tables");
    return verdict_code(outcome.verdict);
}

struct GenFlags {
    std::string kind;
    std::string out;
    std::vector<std::string> regions, borders, colors;
    int n = 0, d = 0;
    double p1 = -1, p2 = -1;
    std::optional<std::uint64_t> seed;
    std::string frame, words;
    bool distinct = false;
    std::optional<std::uint64_t> shuffle_seed;
};

int cmd_gen(const GenFlags &g, std::ostream &out, std::ostream &err)
{
    Problem p;
    if (g.kind == "figure1")
        p = figure1_instance();
    else if (g.kind == "xyz")
        p = xyz_unsat_instance();
    else if (g.kind == "map") {
        if (g.regions.empty() || g.colors.empty())
            throw UsageError("gen map needs --regions and --colors");
        MapSpec spec{g.regions, {}, g.colors};
        for (const auto &b : g.borders) {
            const auto dash = b.find('-');
            if (dash == std::string::npos)
                throw UsageError("--borders expects pairs like A-B, got '" + b + "'");
            spec.borders.emplace_back(b.substr(0, dash), b.substr(dash + 1));
        }
        try {
            p = map_coloring(spec);
        }
        catch (const InputError &e) {
            throw UsageError(e.what());
        }
    }
    else if (g.kind == "random") {
        if (g.n < 1 || g.d < 1 || g.p1 < 0 || g.p1 > 1 || g.p2 < 0 || g.p2 > 1)
            throw UsageError("gen random needs --n >= 1, --d >= 1 and --p1, --p2 in [0, 1]");
        p = random_binary_csp(g.n, g.d, g.p1, g.p2, g.seed ? *g.seed : default_seed());
    }
    else if (g.kind == "crossword") {
        if (g.frame.empty() || g.words.empty())
            throw UsageError("gen crossword needs --frame and --words");
        auto words = load_wordlist(g.words);
        if (g.shuffle_seed)
            words = shuffle_wordlist(std::move(words), *g.shuffle_seed);
        p = crossword_csp(CrosswordFrame::load(g.frame), words, g.distinct);
        if (auto bad = unfillable_slots(p); !bad.empty()) {
            for (const auto &m : bad)
                err << "dynabt: " << m << '\n';
            return exit_code::data;
        }
    }
    else
        throw UsageError("unknown kind '" + g.kind + "' (map, random, crossword, xyz, figure1)");

    const auto summary = g.kind + ": " + std::to_string(p.num_variables()) + " variables, " +
                         std::to_string(p.num_constraints()) + " constraints";
    if (g.out.empty() || g.out == "-") {
        out << to_json(p);
        err << summary << '\n';
    }
    else {
        save_problem(p, g.out);
        out << "wrote " << g.out << " (" << summary << ")\n";
    }
    return exit_code::ok;
}

int cmd_check(const SearchFlags &f, bool mechanism_given, bool monitor, std::ostream &out)
{
    const auto p = open_problem(f.problem);
    if (!monitor) {
        if (!mechanism_given)
            throw UsageError("check needs --mechanism NAME or --monitor");
        const auto mechanism = f.make();
        Oracle(p).require_within_guard();
        const auto report = check_mechanism(mechanism, p);
        if (report.passed) {
            out << "mechanism " << f.mechanism << ": pass (" << report.cases << " cases)\n";
            return exit_code::ok;
        }
        out << "mechanism " << f.mechanism << ": FAIL " << report.property << "\n" << report.counterexample << '\n';
        return 1;
    }
    const auto algorithm = f.algorithm();
    auto limits = f.limits();
    if (algorithm == Algorithm::oldest_culprit && !limits.max_nodes)
        limits.max_nodes = 100;
    SearchOutcome outcome;
    const auto report = monitor_run(p, algorithm, f.make(), f.heuristics(p), limits, &outcome);
    out << report.to_json();
    out << (report.certified() ? "certified" : "NOT certified") << " (" << to_string(outcome.verdict) << ")\n";
    return report.certified() ? exit_code::ok : 1;
}

int cmd_bench(const std::string &config_path, const std::string &results, const std::string &summary, int jobs,
              std::ostream &out)
{
    const auto config = load_config(config_path);
    if (config.algorithms.empty())
        throw UsageError("config selects no algorithms");
    const auto rows = run_experiment(config, jobs);
    auto write = [](const std::string &path, const std::string &text) {
        std::ofstream f(path, std::ios::binary);
        if (!f || !(f << text))
            throw InputError("cannot write " + path);
    };
    write(results, results_csv(rows));
    write(summary, summary_csv(summarize(rows)));
    out << results << '\n' << summary << '\n';
    return exit_code::ok;
}

} // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Backtracking search with eliminating explanations", "dynabt"};
    app.require_subcommand(1);

    SearchFlags solve_flags, trace_flags, check_flags;
    auto *solve_cmd = app.add_subcommand("solve", "solve a problem and print the solution");
    solve_flags.attach(solve_cmd);

    std::string format = "events";
    auto *trace_cmd = app.add_subcommand("trace", "print the search trace");
    trace_flags.attach(trace_cmd);
    trace_cmd->add_option("--format", format, "events or tables")->capture_default_str();

    GenFlags gen;
    auto *gen_cmd = app.add_subcommand("gen", "generate a problem file");
    gen_cmd->add_option("kind", gen.kind, "map, random, crossword, xyz or figure1")->required();
    gen_cmd->add_option("--out", gen.out, "output path (default: standard output)");
    gen_cmd->add_option("--regions", gen.regions, "map regions")->delimiter(',');
    gen_cmd->add_option("--borders", gen.borders, "map borders as A-B pairs")->delimiter(',');
    gen_cmd->add_option("--colors", gen.colors, "map colours")->delimiter(',');
    gen_cmd->add_option("--n", gen.n, "random: variables");
    gen_cmd->add_option("--d", gen.d, "random: domain size");
    gen_cmd->add_option("--p1", gen.p1, "random: constraint density");
    gen_cmd->add_option("--p2", gen.p2, "random: forbidden-pair fraction");
    gen_cmd->add_option("--seed", gen.seed, "random: seed (default $DYNABT_SEED or 0)");
    gen_cmd->add_option("--frame", gen.frame, "crossword: frame file");
    gen_cmd->add_option("--words", gen.words, "crossword: wordlist file");
    gen_cmd->add_flag("--distinct", gen.distinct, "crossword: no word used twice");
    gen_cmd->add_option("--shuffle-seed", gen.shuffle_seed, "crossword: shuffle the wordlist first");

    bool monitor = false;
    auto *check_cmd = app.add_subcommand("check", "check a mechanism, or certify a run with --monitor");
    check_flags.attach(check_cmd);
    check_cmd->add_flag("--monitor", monitor, "run --algo under the termination monitor");

    std::string config_path, results_path = "results.csv", summary_path = "summary.csv";
    int jobs = 1;
    auto *bench_cmd = app.add_subcommand("bench", "run an experiment configuration");
    bench_cmd->add_option("config", config_path, "key = value configuration file")->required();
    bench_cmd->add_option("--results", results_path, "results CSV path")->capture_default_str();
    bench_cmd->add_option("--summary", summary_path, "summary CSV path")->capture_default_str();
    bench_cmd->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    }
    catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_code::ok : exit_code::usage;
    }

    try {
        if (solve_cmd->parsed())
            return cmd_solve(solve_flags, out);
        if (trace_cmd->parsed())
            return cmd_trace(trace_flags, format, out);
        if (gen_cmd->parsed())
            return cmd_gen(gen, out, err);
        if (check_cmd->parsed())
            return cmd_check(check_flags, check_cmd->count("--mechanism") > 0, monitor, out);
        if (bench_cmd->parsed())
            return cmd_bench(config_path, results_path, summary_path, jobs, out);
    }
    catch (const UsageError &e) {
        err << "dynabt: " << e.what() << '\n';
        return exit_code::usage;
    }
    catch (const InputError &e) {
        err << "dynabt: " << e.what() << '\n';
        return exit_code::data;
    }
    catch (const std::invalid_argument &e) {
        err << "dynabt: " << e.what() << '\n';
        return exit_code::usage;
    }
    return exit_code::usage;
}

} // namespace dynabt
