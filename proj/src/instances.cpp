#include <dynabt/instances.hpp>

#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace dynabt {

Problem map_coloring(const MapSpec &spec)
{
    std::set<std::string> names;
    std::vector<VariableDecl> vars;
    for (const auto &r : spec.regions) {
        if (!names.insert(r).second)
            throw InputError("duplicate region '" + r + "'");
        vars.push_back({r, spec.colors});
    }
    std::vector<ConstraintDecl> cons;
    for (const auto &[a, b] : spec.borders) {
        if (!names.contains(a) || !names.contains(b))
            throw InputError("border " + a + "-" + b + " names an unknown region");
        if (a == b)
            throw InputError("region " + a + " borders itself");
        cons.push_back({{a, b}, RelationKind::neq, {}});
    }
    return Problem(std::move(vars), std::move(cons));
}

MapSpec figure1_spec()
{
    return {{"A", "B", "C", "D", "E"},
            {{"A", "C"}, {"A", "D"}, {"A", "E"}, {"B", "D"}, {"B", "E"}, {"D", "E"}},
            {"red", "yellow", "blue"}};
}

Problem figure1_instance()
{
    return map_coloring(figure1_spec());
}

Problem xyz_unsat_instance()
{
    const std::vector<std::string> bits{"0", "1"};
    return Problem({{"x", bits}, {"y", bits}, {"z", bits}}, {{{"x", "y", "z"}, RelationKind::allowed, {}}});
}

namespace {

double uniform(std::mt19937_64 &rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace

Problem random_binary_csp(int n, int d, double p1, double p2, std::uint64_t seed)
{
    if (n < 1 || d < 1)
        throw InputError("random_binary_csp needs n >= 1 and d >= 1");
    std::mt19937_64 rng(seed);
    std::vector<std::string> domain;
    for (int x = 0; x < d; ++x)
        domain.push_back(std::to_string(x));
    std::vector<VariableDecl> vars;
    for (int v = 0; v < n; ++v)
        vars.push_back({"v" + std::to_string(v), domain});

    std::vector<ConstraintDecl> cons;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            if (uniform(rng) >= p1)
                continue;
            ConstraintDecl c{{vars[a].name, vars[b].name}, RelationKind::allowed, {}};
            for (int x = 0; x < d; ++x)
                for (int y = 0; y < d; ++y)
                    if (uniform(rng) >= p2)
                        c.allowed.push_back({domain[x], domain[y]});
            cons.push_back(std::move(c));
        }
    return Problem(std::move(vars), std::move(cons));
}

std::string Slot::name() const
{
    return (direction == Direction::across ? "A" : "D") + std::to_string(row) + "_" + std::to_string(col);
}

CrosswordFrame CrosswordFrame::parse(std::string_view text)
{
    CrosswordFrame f;
    std::vector<std::string> lines;
    std::istringstream in{std::string(text)};
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (line.find_first_not_of(".#") != std::string::npos)
            throw InputError("frame row " + std::to_string(lines.size() + 1) + " has a character other than '.' or '#'");
        if (!lines.empty() && line.size() != lines.front().size())
            throw InputError("frame is not rectangular");
        lines.push_back(line);
    }
    if (lines.empty())
        throw InputError("frame is empty");
    f.rows_ = static_cast<int>(lines.size());
    f.cols_ = static_cast<int>(lines.front().size());
    for (const auto &line : lines)
        for (char ch : line)
            f.open_.push_back(ch == '.');

    std::vector<int> across_of(f.open_.size(), -1), down_of(f.open_.size(), -1);
    auto scan = [&](Slot::Direction dir, std::vector<int> &owner) {
        const bool across = dir == Slot::Direction::across;
        const int outer = across ? f.rows_ : f.cols_, inner = across ? f.cols_ : f.rows_;
        std::vector<Slot> found;
        for (int a = 0; a < outer; ++a)
            for (int b = 0; b < inner;) {
                auto at = [&](int k) { return across ? f.open(a, k) : f.open(k, a); };
                if (!at(b)) {
                    ++b;
                    continue;
                }
                int e = b;
                while (e < inner && at(e))
                    ++e;
                if (e - b >= 2)
                    found.push_back({dir, across ? a : b, across ? b : a, e - b});
                b = e;
            }
        if (!across)
            std::sort(found.begin(), found.end(),
                      [](const Slot &x, const Slot &y) { return std::pair{x.row, x.col} < std::pair{y.row, y.col}; });
        for (const auto &s : found) {
            for (int k = 0; k < s.length; ++k) {
                auto [r, c] = s.cell(k);
                owner[static_cast<std::size_t>(r * f.cols_ + c)] = static_cast<int>(f.slots_.size());
            }
            f.slots_.push_back(s);
        }
    };
    scan(Slot::Direction::across, across_of);
    scan(Slot::Direction::down, down_of);

    for (int r = 0; r < f.rows_; ++r)
        for (int c = 0; c < f.cols_; ++c) {
            const auto cell = static_cast<std::size_t>(r * f.cols_ + c);
            if (!f.open_[cell])
                continue;
            if (across_of[cell] < 0 && down_of[cell] < 0)
                throw InputError("open cell (" + std::to_string(r) + "," + std::to_string(c) + ") is in no slot");
            if (across_of[cell] >= 0 && down_of[cell] >= 0) {
                const auto &a = f.slots_[across_of[cell]];
                const auto &d = f.slots_[down_of[cell]];
                f.crossings_.push_back({static_cast<std::size_t>(across_of[cell]), c - a.col,
                                        static_cast<std::size_t>(down_of[cell]), r - d.row});
            }
        }
    return f;
}

CrosswordFrame CrosswordFrame::load(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot read frame " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse(text.str());
}

std::string CrosswordFrame::to_text() const
{
    std::string out;
    for (int r = 0; r < rows_; ++r) {
        for (int c = 0; c < cols_; ++c)
            out += open(r, c) ? '.' : '#';
        out += '\n';
    }
    return out;
}

Wordlist parse_wordlist(std::string_view text)
{
    Wordlist words;
    std::istringstream in{std::string(text)};
    std::size_t line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (line.find_first_not_of("abcdefghijklmnopqrstuvwxyz") != std::string::npos)
            throw InputError("wordlist line " + std::to_string(line_no) + ": '" + line + "' is not lowercase a-z");
        words.push_back(std::move(line));
    }
    if (words.empty())
        throw InputError("wordlist is empty");
    return words;
}

Wordlist load_wordlist(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot read wordlist " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_wordlist(text.str());
}

Wordlist shuffle_wordlist(Wordlist words, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    for (std::size_t k = words.size(); k > 1; --k)
        std::swap(words[k - 1], words[rng() % k]);
    return words;
}

Problem crossword_csp(const CrosswordFrame &frame, const Wordlist &words, bool distinct)
{
    std::map<int, std::vector<std::string>> by_length;
    std::map<int, std::set<std::string>> seen;
    for (const auto &w : words) {
        const int len = static_cast<int>(w.size());
        if (seen[len].insert(w).second)
            by_length[len].push_back(w);
    }

    const auto &slots = frame.slots();
    std::vector<VariableDecl> vars;
    for (const auto &s : slots)
        vars.push_back({s.name(), by_length[s.length]});

    std::vector<ConstraintDecl> cons;
    for (const auto &x : frame.crossings()) {
        const auto &a = vars[x.across], &d = vars[x.down];
        ConstraintDecl c{{a.name, d.name}, RelationKind::allowed, {}};
        std::map<char, std::vector<const std::string *>> down_by_letter;
        for (const auto &w : d.domain)
            down_by_letter[w[x.down_pos]].push_back(&w);
        for (const auto &w : a.domain)
            for (const auto *u : down_by_letter[w[x.across_pos]])
                c.allowed.push_back({w, *u});
        cons.push_back(std::move(c));
    }
    if (distinct)
        for (std::size_t a = 0; a < slots.size(); ++a)
            for (std::size_t b = a + 1; b < slots.size(); ++b)
                if (slots[a].length == slots[b].length)
                    cons.push_back({{vars[a].name, vars[b].name}, RelationKind::neq, {}});
    return Problem(std::move(vars), std::move(cons));
}

std::vector<std::string> unfillable_slots(const Problem &problem)
{
    std::vector<std::string> out;
    for (const auto &v : problem.variables())
        if (v.domain.empty())
            out.push_back("unfillable slot " + v.name);
    return out;
}

} // namespace dynabt
