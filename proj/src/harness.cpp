#include <dynabt/harness.hpp>
#include <dynabt/problem_io.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace dynabt {

namespace {

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view s)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        auto end = s.find(',', start);
        if (end == std::string_view::npos)
            end = s.size();
        if (auto item = trim(s.substr(start, end - start)); !item.empty())
            out.push_back(item);
        start = end + 1;
    }
    return out;
}

template <class T> T parse_number(const std::string &key, const std::string &value)
{
    std::istringstream in(value);
    T out{};
    if (!(in >> out) || !in.eof())
        throw InputError("config: " + key + " = '" + value + "' is not a number");
    return out;
}

bool parse_bool(const std::string &key, const std::string &value)
{
    if (value == "true" || value == "1" || value == "yes")
        return true;
    if (value == "false" || value == "0" || value == "no")
        return false;
    throw InputError("config: " + key + " = '" + value + "' is not a boolean");
}

std::optional<std::uint64_t> parse_limit(const std::string &key, const std::string &value)
{
    if (value == "none" || value == "unlimited")
        return std::nullopt;
    return parse_number<std::uint64_t>(key, value);
}

std::uint64_t splitmix(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct Instance {
    std::string id;
    // Built once when the problem does not depend on the attempt.
    std::optional<Problem> fixed;
    std::optional<CrosswordFrame> frame;
    int random_index = 0;
};

} // namespace

ExperimentConfig parse_config(std::string_view text, const std::filesystem::path &base_dir)
{
    ExperimentConfig c;
    std::istringstream in{std::string(text)};
    std::size_t line_no = 0;
    auto resolve = [&](const std::string &p) {
        std::filesystem::path path(p);
        return path.is_absolute() || base_dir.empty() ? path : base_dir / path;
    };
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        if (trim(line).empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InputError("config line " + std::to_string(line_no) + ": expected key = value");
        const auto key = trim(std::string_view(line).substr(0, eq));
        const auto value = trim(std::string_view(line).substr(eq + 1));

        if (key == "source") {
            if (value == "crossword")
                c.source = InstanceSource::crossword;
            else if (value == "random")
                c.source = InstanceSource::random;
            else if (value == "files")
                c.source = InstanceSource::files;
            else if (value == "figure1")
                c.source = InstanceSource::figure1;
            else if (value == "xyz")
                c.source = InstanceSource::xyz;
            else
                throw InputError("config: unknown source '" + value + "'");
        }
        else if (key == "frames" || key == "files") {
            for (const auto &p : split_list(value))
                c.paths.push_back(resolve(p));
        }
        else if (key == "wordlist")
            c.wordlist = resolve(value);
        else if (key == "distinct")
            c.distinct_words = parse_bool(key, value);
        else if (key == "count")
            c.random_count = parse_number<int>(key, value);
        else if (key == "n")
            c.random_n = parse_number<int>(key, value);
        else if (key == "d")
            c.random_d = parse_number<int>(key, value);
        else if (key == "p1")
            c.random_p1 = parse_number<double>(key, value);
        else if (key == "p2")
            c.random_p2 = parse_number<double>(key, value);
        else if (key == "regenerate")
            c.regenerate = parse_bool(key, value);
        else if (key == "algorithms") {
            c.algorithms.clear();
            for (const auto &name : split_list(value)) {
                auto a = parse_algorithm(name);
                if (!a)
                    throw InputError("config: unknown algorithm '" + name + "'");
                c.algorithms.push_back(*a);
            }
        }
        else if (key == "mechanism") {
            auto m = parse_mechanism(value);
            if (!m)
                throw InputError("config: unknown mechanism '" + value + "'");
            c.mechanism = *m;
        }
        else if (key == "var-rule") {
            auto r = parse_variable_rule(value);
            if (!r)
                throw InputError("config: unknown variable rule '" + value + "'");
            c.variable_rule = *r;
        }
        else if (key == "val-rule") {
            auto r = parse_value_rule(value);
            if (!r)
                throw InputError("config: unknown value rule '" + value + "'");
            c.value_rule = *r;
        }
        else if (key == "attempts")
            c.attempts = parse_number<int>(key, value);
        else if (key == "max-backtracks")
            c.max_backtracks = parse_limit(key, value);
        else if (key == "max-nodes")
            c.max_nodes = parse_limit(key, value);
        else if (key == "seed")
            c.seed = parse_number<std::uint64_t>(key, value);
        else if (key == "record-time")
            c.record_time = parse_bool(key, value);
        else
            throw InputError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    return c;
}

ExperimentConfig load_config(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot read config " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), path.parent_path());
}

void validate_config(const ExperimentConfig &c)
{
    if (c.algorithms.empty())
        throw InputError("config: no algorithms selected");
    if (c.attempts < 1)
        throw InputError("config: attempts must be at least 1");
    for (auto a : c.algorithms)
        if (a == Algorithm::oldest_culprit && !c.max_nodes)
            throw InputError("config: oldest-culprit needs a finite max-nodes");
    switch (c.source) {
    case InstanceSource::crossword:
        if (c.paths.empty() || c.wordlist.empty())
            throw InputError("config: crossword source needs frames and wordlist");
        break;
    case InstanceSource::files:
        if (c.paths.empty())
            throw InputError("config: files source needs files");
        break;
    case InstanceSource::random:
        if (c.random_count < 1 || c.random_n < 1 || c.random_d < 1)
            throw InputError("config: random source needs count, n and d of at least 1");
        if (c.random_p1 < 0 || c.random_p1 > 1 || c.random_p2 < 0 || c.random_p2 > 1)
            throw InputError("config: p1 and p2 must lie in [0, 1]");
        break;
    default: break;
    }
}

std::uint64_t attempt_seed(std::uint64_t base, std::string_view instance, int attempt)
{
    std::uint64_t h = splitmix(base);
    for (unsigned char ch : instance)
        h = splitmix(h ^ ch);
    return splitmix(h ^ static_cast<std::uint64_t>(attempt));
}

std::vector<ResultRow> run_experiment(const ExperimentConfig &config, int jobs)
{
    validate_config(config);

    std::vector<Instance> instances;
    Wordlist words;
    switch (config.source) {
    case InstanceSource::crossword:
        words = load_wordlist(config.wordlist);
        for (const auto &p : config.paths)
            instances.push_back({p.stem().string(), std::nullopt, CrosswordFrame::load(p), 0});
        break;
    case InstanceSource::files:
        for (const auto &p : config.paths)
            instances.push_back({p.stem().string(), load_problem(p), std::nullopt, 0});
        break;
    case InstanceSource::random:
        for (int k = 0; k < config.random_count; ++k) {
            Instance inst{"random-" + std::to_string(k), std::nullopt, std::nullopt, k};
            if (!config.regenerate)
                inst.fixed = random_binary_csp(config.random_n, config.random_d, config.random_p1, config.random_p2,
                                               attempt_seed(config.seed, inst.id, -1));
            instances.push_back(std::move(inst));
        }
        break;
    case InstanceSource::figure1: instances.push_back({"figure1", figure1_instance(), std::nullopt, 0}); break;
    case InstanceSource::xyz: instances.push_back({"xyz", xyz_unsat_instance(), std::nullopt, 0}); break;
    }

    const auto mechanism = make_mechanism(config.mechanism);
    const Limits limits{config.max_backtracks, config.max_nodes};
    const std::size_t tasks = instances.size() * static_cast<std::size_t>(config.attempts);
    std::vector<std::vector<ResultRow>> results(tasks);

    auto run_task = [&](std::size_t t) {
        const auto &inst = instances[t / static_cast<std::size_t>(config.attempts)];
        const int attempt = static_cast<int>(t % static_cast<std::size_t>(config.attempts));
        const auto seed = attempt_seed(config.seed, inst.id, attempt);
        auto &out = results[t];

        std::optional<Problem> built;
        std::string error;
        try {
            if (inst.frame)
                built = crossword_csp(*inst.frame, shuffle_wordlist(words, seed), config.distinct_words);
            else if (!inst.fixed)
                built = random_binary_csp(config.random_n, config.random_d, config.random_p1, config.random_p2, seed);
        }
        catch (const std::exception &e) {
            error = e.what();
        }
        const Problem *problem = inst.fixed ? &*inst.fixed : built ? &*built : nullptr;

        Heuristics heuristics;
        heuristics.variable_rule = config.variable_rule;
        heuristics.value_rule = config.value_rule;
        heuristics.seed = seed;
        SolveOptions options;
        options.record_trace = false;

        for (auto algorithm : config.algorithms) {
            ResultRow row{inst.id, algorithm, attempt, "Error", 0, 0, 0};
            if (problem) {
                try {
                    const auto start = std::chrono::steady_clock::now();
                    const auto outcome = solve(*problem, algorithm, mechanism, heuristics, limits, options);
                    const auto stop = std::chrono::steady_clock::now();
                    row.outcome = std::string(to_string(outcome.verdict));
                    row.nodes = outcome.stats.nodes_expanded;
                    row.backtracks = outcome.stats.backtracks;
                    if (config.record_time)
                        row.micros = static_cast<std::uint64_t>(
                            std::chrono::duration_cast<std::chrono::microseconds>(stop - start).count());
                }
                catch (const std::exception &) {
                    row.outcome = "Error";
                }
            }
            out.push_back(std::move(row));
        }
    };

    jobs = std::max(1, jobs);
    if (jobs == 1 || tasks < 2) {
        for (std::size_t t = 0; t < tasks; ++t)
            run_task(t);
    }
    else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (int j = 0; j < std::min<int>(jobs, static_cast<int>(tasks)); ++j)
            pool.emplace_back([&] {
                for (auto t = next++; t < tasks; t = next++)
                    run_task(t);
            });
    }

    std::vector<ResultRow> rows;
    for (auto &r : results)
        std::move(r.begin(), r.end(), std::back_inserter(rows));
    std::sort(rows.begin(), rows.end(), [](const ResultRow &a, const ResultRow &b) {
        return std::tuple(a.instance, to_string(a.algorithm), a.attempt) <
               std::tuple(b.instance, to_string(b.algorithm), b.attempt);
    });
    return rows;
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow> &rows)
{
    struct Acc {
        int successes = 0, attempts = 0;
        double backtracks = 0;
    };
    std::map<std::pair<std::string, std::string>, std::pair<Algorithm, Acc>> acc;
    for (const auto &r : rows) {
        auto &[alg, a] = acc[{r.instance, std::string(to_string(r.algorithm))}];
        alg = r.algorithm;
        ++a.attempts;
        if (r.outcome == "Solved") {
            ++a.successes;
            a.backtracks += static_cast<double>(r.backtracks);
        }
    }
    std::vector<SummaryRow> out;
    for (const auto &[key, value] : acc) {
        const auto &[alg, a] = value;
        SummaryRow s{key.first, alg, a.successes, a.attempts, std::nullopt};
        if (a.successes > 0)
            s.mean_backtracks = a.backtracks / a.successes;
        out.push_back(std::move(s));
    }
    return out;
}

std::string results_csv(const std::vector<ResultRow> &rows)
{
    std::string out = "instance,algorithm,attempt,outcome,nodes,backtracks,micros\n";
    for (const auto &r : rows)
        out += r.instance + ',' + std::string(to_string(r.algorithm)) + ',' + std::to_string(r.attempt) + ',' +
               r.outcome + ',' + std::to_string(r.nodes) + ',' + std::to_string(r.backtracks) + ',' +
               std::to_string(r.micros) + '\n';
    return out;
}

std::string summary_csv(const std::vector<SummaryRow> &rows)
{
    std::string out = "instance,algorithm,successes,attempts,mean_backtracks\n";
    for (const auto &r : rows) {
        out += r.instance + ',' + std::string(to_string(r.algorithm)) + ',' + std::to_string(r.successes) + ',' +
               std::to_string(r.attempts) + ',';
        if (r.mean_backtracks) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.2f", *r.mean_backtracks);
            out += buf;
        }
        out += '\n';
    }
    return out;
}

} // namespace dynabt
