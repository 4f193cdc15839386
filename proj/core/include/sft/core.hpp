#pragma once

#include <compare>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sft {

using Symbol = int;

struct SpecError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : SpecError {
    int line;
    int column;
    ParseError(const std::string& msg, int line_, int column_)
        : SpecError(msg + " (line " + std::to_string(line_) + ", column " +
                    std::to_string(column_) + ")"),
          line(line_), column(column_) {}
};

/// Lattice position in Z^d. Compared lexicographically.
struct Coord {
    std::vector<int> v;

    Coord() = default;
    explicit Coord(std::vector<int> c) : v(std::move(c)) {}
    Coord(std::initializer_list<int> c) : v(c) {}

    static Coord zero(int dim) { return Coord(std::vector<int>(dim, 0)); }
    static Coord unit(int dim, int axis);  // e_axis, axis in [0, dim)

    int dim() const { return static_cast<int>(v.size()); }
    int operator[](int k) const { return v[k]; }
    int& operator[](int k) { return v[k]; }

    friend Coord operator+(const Coord& a, const Coord& b);
    friend Coord operator-(const Coord& a, const Coord& b);
    Coord operator-() const;

    auto operator<=>(const Coord&) const = default;

    std::string to_string() const;
};

/// A finite assignment of symbols to lattice positions.
struct Pattern {
    int dim = 1;
    std::map<Coord, Symbol> cells;

    Pattern() = default;
    explicit Pattern(int d) : dim(d) {}

    static Pattern from_word(const std::vector<Symbol>& word);  // 1D, support [0, n)
    static Pattern single(int dim, Symbol s);                   // cell at the origin

    bool empty_support() const { return cells.empty(); }
    int size() const { return static_cast<int>(cells.size()); }
    Coord min_corner() const;  // lexicographic minimum of the support
    std::optional<Symbol> at(const Coord& c) const;

    /// Reading the result at w gives this pattern's value at w + u.
    Pattern translated(const Coord& u) const;
    /// Translated so the support's lexicographic minimum sits at the origin.
    Pattern canonical() const;

    auto operator<=>(const Pattern&) const = default;
};

Pattern pattern_translate(const Pattern& p, const Coord& u);

/// True iff some translate of p's support lies inside q's support with all
/// symbols equal. The offset of one such match is returned by find_offset.
bool pattern_appears_in(const Pattern& p, const Pattern& q);
std::optional<Coord> find_offset(const Pattern& p, const Pattern& q);

/// Finite window over which languages are enumerated.
struct Window {
    enum class Kind { Centered, Corner, Explicit };

    int dim = 1;
    Kind kind = Kind::Centered;
    int radius = 0;  // Centered: [-r, r]^d.  Corner: [0, r-1]^d (r = side).
    std::vector<Coord> explicit_cells;

    static Window centered(int dim, int r);
    static Window corner(int dim, int side);
    static Window explicit_set(int dim, std::vector<Coord> cells);

    std::vector<Coord> cells() const;  // sorted lexicographically
    std::string describe() const;
};

/// SFT descriptor: dimension, alphabet, finite forbidden-pattern list.
/// Kept in canonical form: sorted alphabet, forbidden patterns translated so
/// their supports' lexicographic minima are the origin, sorted, deduplicated.
struct ShiftSpec {
    int dim = 1;
    std::vector<Symbol> alphabet;
    std::vector<Pattern> forbidden;
    std::map<std::string, std::string> metadata;  // advisory, not part of equality

    void canonicalize();
    void validate() const;  // throws SpecError on malformed content

    bool has_symbol(Symbol s) const;
    int alphabet_index(Symbol s) const;  // index in the sorted alphabet

    friend bool operator==(const ShiftSpec& a, const ShiftSpec& b) {
        return a.dim == b.dim && a.alphabet == b.alphabet && a.forbidden == b.forbidden;
    }
};

ShiftSpec make_spec(int dim, std::vector<Symbol> alphabet, std::vector<Pattern> forbidden);

/// Full shift on the given alphabet (no forbidden patterns).
ShiftSpec full_shift(int dim, std::vector<Symbol> alphabet);

/// Product shift on a paired alphabet. The pairing is
/// code(s, s') = index(s) * |B| + index(s') over the sorted alphabets.
ShiftSpec product(const ShiftSpec& a, const ShiftSpec& b);
Symbol product_code(const ShiftSpec& a, const ShiftSpec& b, Symbol s, Symbol t);

/// Disjoint union. The right alphabet is shifted to be disjoint from the left
/// one; nearest-neighbour mixed pairs are forbidden so configurations never
/// mix alphabets. The offset is recorded in metadata["relabel_offset_right"].
ShiftSpec disjoint_union(const ShiftSpec& a, const ShiftSpec& b);

/// Adds `extra` axes along which configurations are constant.
/// extra = 0 returns the input unchanged.
ShiftSpec extend_dims(const ShiftSpec& a, int extra);

/// Shift whose configurations are the n constant configurations on {1..n}.
ShiftSpec constant_layer(int n, int dimension);

/// Canonical, deterministic text form (see README for the .shift grammar).
std::string serialize_spec(const ShiftSpec& spec);
ShiftSpec parse_spec(const std::string& text);

ShiftSpec load_spec_file(const std::string& path);
void save_spec_file(const ShiftSpec& spec, const std::string& path);

}  // namespace sft
