#pragma once

#include <dynabt/engine.hpp>
#include <dynabt/instances.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dynabt {

enum class InstanceSource { crossword, random, files, figure1, xyz };

struct ExperimentConfig {
    InstanceSource source = InstanceSource::crossword;
    /// crossword: frame files; files: problem JSON files.
    std::vector<std::filesystem::path> paths;
    std::filesystem::path wordlist;
    bool distinct_words = false;

    /// random: instance count and generator parameters. With `regenerate`,
    /// every attempt draws a fresh instance from its attempt seed.
    int random_count = 1;
    int random_n = 8;
    int random_d = 3;
    double random_p1 = 0.5;
    double random_p2 = 0.4;
    bool regenerate = false;

    std::vector<Algorithm> algorithms;
    MechanismKind mechanism = MechanismKind::forward;
    VariableRule variable_rule = VariableRule::cheapest_first;
    ValueRule value_rule = ValueRule::lexicographic;
    int attempts = 1;
    std::optional<std::uint64_t> max_backtracks = 1000;
    std::optional<std::uint64_t> max_nodes = 1'000'000;
    std::uint64_t seed = 0;
    /// Wall time goes into the micros column only when set; otherwise the
    /// column is 0 so that result files are reproducible byte for byte.
    bool record_time = false;
};

/// Flat `key = value` text, `#` comments. Keys: source, frames, files,
/// wordlist, distinct, count, n, d, p1, p2, regenerate, algorithms,
/// mechanism, var-rule, val-rule, attempts, max-backtracks, max-nodes,
/// seed, record-time. Relative paths resolve against `base_dir`.
/// Throws InputError on unknown keys, bad values and invalid combinations.
ExperimentConfig parse_config(std::string_view text, const std::filesystem::path &base_dir = {});
ExperimentConfig load_config(const std::filesystem::path &path);

/// Throws InputError when the configuration cannot be run.
void validate_config(const ExperimentConfig &config);

struct ResultRow {
    std::string instance;
    Algorithm algorithm = Algorithm::dynamic;
    int attempt = 0;
    /// Solved, Unsat, Exhausted, or Error when the run threw.
    std::string outcome;
    std::uint64_t nodes = 0;
    std::uint64_t backtracks = 0;
    std::uint64_t micros = 0;

    friend bool operator==(const ResultRow &, const ResultRow &) = default;
};

/// splitmix64 over the base seed, the instance id bytes and the attempt.
std::uint64_t attempt_seed(std::uint64_t base, std::string_view instance, int attempt);

/// Rows sorted by (instance, algorithm name, attempt). `jobs` > 1 spreads
/// (instance, attempt) pairs over that many threads; output is unchanged.
std::vector<ResultRow> run_experiment(const ExperimentConfig &config, int jobs = 1);

struct SummaryRow {
    std::string instance;
    Algorithm algorithm = Algorithm::dynamic;
    int successes = 0;
    int attempts = 0;
    /// Over Solved rows only; absent without successes.
    std::optional<double> mean_backtracks;
};

std::vector<SummaryRow> summarize(const std::vector<ResultRow> &rows);

std::string results_csv(const std::vector<ResultRow> &rows);
std::string summary_csv(const std::vector<SummaryRow> &rows);

} // namespace dynabt
