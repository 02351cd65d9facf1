#pragma once

#include <dynabt/problem.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dynabt {

struct MapSpec {
    std::vector<std::string> regions;
    std::vector<std::pair<std::string, std::string>> borders;
    std::vector<std::string> colors;
};

/// One variable per region over `colors`, one `neq` constraint per border.
/// Throws InputError for unknown regions, self-borders or duplicate names.
Problem map_coloring(const MapSpec &spec);

/// The five-country map: A, B, C, D, E coloured red, yellow, blue.
MapSpec figure1_spec();
Problem figure1_instance();

/// x, y, z over {0, 1} with a single ternary constraint allowing nothing.
Problem xyz_unsat_instance();

/// Variables v0..v{n-1} over "0".."d-1". Every unordered pair is constrained
/// with probability p1; a constrained pair forbids each value pair with
/// probability p2. Deterministic in all arguments.
Problem random_binary_csp(int n, int d, double p1, double p2, std::uint64_t seed);

struct Slot {
    enum class Direction { across, down };

    Direction direction = Direction::across;
    int row = 0;
    int col = 0;
    int length = 0;

    /// A{row}_{col} or D{row}_{col}.
    std::string name() const;
    std::pair<int, int> cell(int k) const
    {
        return direction == Direction::across ? std::pair{row, col + k} : std::pair{row + k, col};
    }
};

struct Crossing {
    std::size_t across = 0;   ///< index into slots()
    int across_pos = 0;
    std::size_t down = 0;
    int down_pos = 0;
};

class CrosswordFrame {
public:
    /// `.` open, `#` blocked; rows must be equally long. Throws InputError
    /// on bad characters, ragged rows, or an open cell outside every slot.
    static CrosswordFrame parse(std::string_view text);
    static CrosswordFrame load(const std::filesystem::path &path);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool open(int r, int c) const { return open_[static_cast<std::size_t>(r * cols_ + c)]; }

    /// Across slots in row-major order, then down slots in row-major order.
    const std::vector<Slot> &slots() const { return slots_; }
    const std::vector<Crossing> &crossings() const { return crossings_; }

    std::string to_text() const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<bool> open_;
    std::vector<Slot> slots_;
    std::vector<Crossing> crossings_;
};

using Wordlist = std::vector<std::string>;

/// One lowercase a-z word per line. Throws InputError when empty or invalid.
Wordlist load_wordlist(const std::filesystem::path &path);
Wordlist parse_wordlist(std::string_view text);

/// Deterministic Fisher-Yates permutation driven by mt19937_64(seed).
Wordlist shuffle_wordlist(Wordlist words, std::uint64_t seed);

/// One variable per slot, domain = words of the slot's length in list
/// order (duplicates dropped), one binary constraint per crossing cell.
/// With `distinct`, same-length slots also get a `neq` constraint.
Problem crossword_csp(const CrosswordFrame &frame, const Wordlist &words, bool distinct = false);

/// "unfillable slot X" for every variable with an empty domain.
std::vector<std::string> unfillable_slots(const Problem &problem);

} // namespace dynabt
