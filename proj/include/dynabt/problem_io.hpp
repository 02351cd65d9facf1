#pragma once

#include <dynabt/problem.hpp>

#include <filesystem>
#include <string>
#include <string_view>

namespace dynabt {

/// Canonical JSON text: compact, keys sorted, arrays in declaration order,
/// terminated by a newline.
std::string to_json(const Problem &problem);

/// Throws InputError on syntax errors (with line and column), unknown or
/// missing fields, and wrongly typed values. The result is not validated;
/// call validate_problem() for semantic checks.
Problem parse_problem(std::string_view text);

Problem load_problem(const std::filesystem::path &path);
void save_problem(const Problem &problem, const std::filesystem::path &path);

} // namespace dynabt
