#include <dynabt/problem_io.hpp>

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace dynabt {

using nlohmann::json;

std::string to_json(const Problem &problem)
{
    json vars = json::array();
    for (const auto &v : problem.variables())
        vars.push_back({{"name", v.name}, {"domain", v.domain}});
    json cons = json::array();
    for (const auto &c : problem.constraints()) {
        if (c.kind == RelationKind::neq)
            cons.push_back({{"scope", c.scope}, {"kind", "neq"}});
        else
            cons.push_back({{"scope", c.scope}, {"allowed", c.allowed}});
    }
    return json{{"variables", vars}, {"constraints", cons}}.dump() + "\n";
}

namespace {

[[noreturn]] void reject(const std::string &where, const std::string &why)
{
    throw InputError(where + ": " + why);
}

void only_fields(const json &obj, const std::string &where, std::initializer_list<std::string_view> allowed)
{
    if (!obj.is_object())
        reject(where, "expected an object");
    for (const auto &[key, _] : obj.items())
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            reject(where, "unknown field '" + key + "'");
}

const json &field(const json &obj, const std::string &where, const char *key)
{
    auto it = obj.find(key);
    if (it == obj.end())
        reject(where, std::string("missing field '") + key + "'");
    return *it;
}

std::vector<std::string> strings(const json &arr, const std::string &where)
{
    if (!arr.is_array())
        reject(where, "expected an array of strings");
    std::vector<std::string> out;
    for (const auto &s : arr) {
        if (!s.is_string())
            reject(where, "expected an array of strings");
        out.push_back(s.get<std::string>());
    }
    return out;
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte)
{
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
        if (text[k] == '\n') {
            ++line;
            col = 1;
        }
        else
            ++col;
    }
    return {line, col};
}

} // namespace

Problem parse_problem(std::string_view text)
{
    json doc;
    try {
        doc = json::parse(text);
    }
    catch (const json::parse_error &e) {
        const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
        std::string what = e.what();
        if (auto p = what.find("parse error"); p != std::string::npos)
            what = what.substr(p);
        throw InputError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + what);
    }

    only_fields(doc, "problem", {"variables", "constraints"});
    const auto &vars_json = field(doc, "problem", "variables");
    const auto &cons_json = field(doc, "problem", "constraints");
    if (!vars_json.is_array())
        reject("variables", "expected an array");
    if (!cons_json.is_array())
        reject("constraints", "expected an array");

    std::vector<VariableDecl> vars;
    for (std::size_t k = 0; k < vars_json.size(); ++k) {
        const auto where = "variables[" + std::to_string(k) + "]";
        only_fields(vars_json[k], where, {"name", "domain"});
        const auto &name = field(vars_json[k], where, "name");
        if (!name.is_string())
            reject(where, "name must be a string");
        vars.push_back({name.get<std::string>(), strings(field(vars_json[k], where, "domain"), where + ".domain")});
    }

    std::vector<ConstraintDecl> cons;
    for (std::size_t k = 0; k < cons_json.size(); ++k) {
        const auto where = "constraints[" + std::to_string(k) + "]";
        const auto &c = cons_json[k];
        only_fields(c, where, {"scope", "allowed", "kind"});
        ConstraintDecl decl;
        decl.scope = strings(field(c, where, "scope"), where + ".scope");
        if (c.contains("kind")) {
            if (c.contains("allowed"))
                reject(where, "'kind' and 'allowed' are mutually exclusive");
            if (c["kind"] != "neq")
                reject(where, "unknown kind " + c["kind"].dump());
            decl.kind = RelationKind::neq;
        }
        else {
            const auto &rows = field(c, where, "allowed");
            if (!rows.is_array())
                reject(where, "allowed must be an array of tuples");
            for (const auto &row : rows)
                decl.allowed.push_back(strings(row, where + ".allowed"));
        }
        cons.push_back(std::move(decl));
    }
    return Problem(std::move(vars), std::move(cons));
}

Problem load_problem(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot read " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    try {
        return parse_problem(text.str());
    }
    catch (const InputError &e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

void save_problem(const Problem &problem, const std::filesystem::path &path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw InputError("cannot write " + path.string());
    out << to_json(problem);
    if (!out)
        throw InputError("write failed for " + path.string());
}

} // namespace dynabt
