#include "sft/core.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace sft {

Coord Coord::unit(int dim, int axis) {
    Coord c = zero(dim);
    c.v[axis] = 1;
    return c;
}

Coord operator+(const Coord& a, const Coord& b) {
    Coord r = a;
    for (size_t k = 0; k < r.v.size(); ++k) r.v[k] += b.v[k];
    return r;
}

Coord operator-(const Coord& a, const Coord& b) {
    Coord r = a;
    for (size_t k = 0; k < r.v.size(); ++k) r.v[k] -= b.v[k];
    return r;
}

Coord Coord::operator-() const {
    Coord r = *this;
    for (int& x : r.v) x = -x;
    return r;
}

std::string Coord::to_string() const {
    std::string s = "(";
    for (size_t k = 0; k < v.size(); ++k) {
        if (k) s += ",";
        s += std::to_string(v[k]);
    }
    return s + ")";
}

Pattern Pattern::from_word(const std::vector<Symbol>& word) {
    Pattern p(1);
    for (size_t i = 0; i < word.size(); ++i) p.cells[Coord{static_cast<int>(i)}] = word[i];
    return p;
}

Pattern Pattern::single(int dim, Symbol s) {
    Pattern p(dim);
    p.cells[Coord::zero(dim)] = s;
    return p;
}

Coord Pattern::min_corner() const {
    if (cells.empty()) return Coord::zero(dim);
    return cells.begin()->first;  // map is ordered lexicographically
}

std::optional<Symbol> Pattern::at(const Coord& c) const {
    auto it = cells.find(c);
    if (it == cells.end()) return std::nullopt;
    return it->second;
}

Pattern Pattern::translated(const Coord& u) const {
    Pattern q(dim);
    for (const auto& [c, s] : cells) q.cells[c - u] = s;
    return q;
}

Pattern Pattern::canonical() const {
    if (cells.empty()) return *this;
    return translated(min_corner());
}

Pattern pattern_translate(const Pattern& p, const Coord& u) {
    if (u.dim() != p.dim) throw SpecError("pattern_translate: dimension mismatch");
    return p.translated(u);
}

std::optional<Coord> find_offset(const Pattern& p, const Pattern& q) {
    if (p.dim != q.dim) throw SpecError("pattern_appears_in: dimension mismatch");
    if (p.cells.empty()) return Coord::zero(p.dim);
    const auto& [pc, ps] = *p.cells.begin();
    for (const auto& [qc, qs] : q.cells) {
        if (qs != ps) continue;
        Coord t = qc - pc;
        bool ok = true;
        for (const auto& [c, s] : p.cells) {
            auto got = q.at(c + t);
            if (!got || *got != s) {
                ok = false;
                break;
            }
        }
        if (ok) return t;
    }
    return std::nullopt;
}

bool pattern_appears_in(const Pattern& p, const Pattern& q) {
    return find_offset(p, q).has_value();
}

Window Window::centered(int dim, int r) {
    Window w;
    w.dim = dim;
    w.kind = Kind::Centered;
    w.radius = r;
    return w;
}

Window Window::corner(int dim, int side) {
    Window w;
    w.dim = dim;
    w.kind = Kind::Corner;
    w.radius = side;
    return w;
}

Window Window::explicit_set(int dim, std::vector<Coord> cells) {
    Window w;
    w.dim = dim;
    w.kind = Kind::Explicit;
    w.explicit_cells = std::move(cells);
    return w;
}

static void enumerate_box(int dim, int lo, int hi, std::vector<Coord>& out) {
    Coord c = Coord::zero(dim);
    for (int k = 0; k < dim; ++k) c.v[k] = lo;
    while (true) {
        out.push_back(c);
        int k = dim - 1;
        while (k >= 0 && c.v[k] == hi) {
            c.v[k] = lo;
            --k;
        }
        if (k < 0) break;
        ++c.v[k];
    }
}

std::vector<Coord> Window::cells() const {
    std::vector<Coord> out;
    switch (kind) {
        case Kind::Centered:
            enumerate_box(dim, -radius, radius, out);
            break;
        case Kind::Corner:
            if (radius > 0) enumerate_box(dim, 0, radius - 1, out);
            break;
        case Kind::Explicit:
            out = explicit_cells;
            break;
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::string Window::describe() const {
    switch (kind) {
        case Kind::Centered:
            return "centered(" + std::to_string(radius) + ")^" + std::to_string(dim);
        case Kind::Corner:
            return "corner(" + std::to_string(radius) + ")^" + std::to_string(dim);
        case Kind::Explicit:
            return "explicit[" + std::to_string(explicit_cells.size()) + "]";
    }
    return "?";
}

void ShiftSpec::canonicalize() {
    std::sort(alphabet.begin(), alphabet.end());
    alphabet.erase(std::unique(alphabet.begin(), alphabet.end()), alphabet.end());
    for (Pattern& p : forbidden) p = p.canonical();
    std::sort(forbidden.begin(), forbidden.end());
    forbidden.erase(std::unique(forbidden.begin(), forbidden.end()), forbidden.end());
}

void ShiftSpec::validate() const {
    if (dim < 1) throw SpecError("spec dimension must be >= 1");
    if (alphabet.empty()) throw SpecError("alphabet must be nonempty");
    for (size_t i = 0; i < forbidden.size(); ++i) {
        const Pattern& p = forbidden[i];
        if (p.dim != dim)
            throw SpecError("forbidden pattern #" + std::to_string(i) + " has dimension " +
                            std::to_string(p.dim) + ", spec has " + std::to_string(dim));
        for (const auto& [c, s] : p.cells) {
            if (c.dim() != dim)
                throw SpecError("forbidden pattern #" + std::to_string(i) +
                                " has a coordinate of wrong dimension");
            if (!has_symbol(s))
                throw SpecError("forbidden pattern #" + std::to_string(i) + " uses symbol " +
                                std::to_string(s) + " outside the alphabet");
        }
    }
}

bool ShiftSpec::has_symbol(Symbol s) const {
    return std::binary_search(alphabet.begin(), alphabet.end(), s);
}

int ShiftSpec::alphabet_index(Symbol s) const {
    auto it = std::lower_bound(alphabet.begin(), alphabet.end(), s);
    if (it == alphabet.end() || *it != s) throw SpecError("symbol not in alphabet");
    return static_cast<int>(it - alphabet.begin());
}

ShiftSpec make_spec(int dim, std::vector<Symbol> alphabet, std::vector<Pattern> forbidden) {
    ShiftSpec s;
    s.dim = dim;
    s.alphabet = std::move(alphabet);
    s.forbidden = std::move(forbidden);
    s.canonicalize();
    s.validate();
    return s;
}

ShiftSpec full_shift(int dim, std::vector<Symbol> alphabet) {
    return make_spec(dim, std::move(alphabet), {});
}

Symbol product_code(const ShiftSpec& a, const ShiftSpec& b, Symbol s, Symbol t) {
    return a.alphabet_index(s) * static_cast<int>(b.alphabet.size()) + b.alphabet_index(t);
}

// All assignments of symbols from `syms` to the support of `base`, combined
// cell-wise with `base` through `combine`.
template <typename Combine>
static void lifts_of(const Pattern& base, const std::vector<Symbol>& syms, Combine combine,
                     std::vector<Pattern>& out) {
    std::vector<Coord> support;
    support.reserve(base.cells.size());
    for (const auto& [c, _] : base.cells) support.push_back(c);
    std::vector<size_t> pick(support.size(), 0);
    while (true) {
        Pattern lift(base.dim);
        for (size_t i = 0; i < support.size(); ++i)
            lift.cells[support[i]] = combine(*base.at(support[i]), syms[pick[i]]);
        out.push_back(std::move(lift));
        size_t k = 0;
        while (k < pick.size() && pick[k] + 1 == syms.size()) pick[k++] = 0;
        if (k == pick.size()) break;
        ++pick[k];
    }
}

ShiftSpec product(const ShiftSpec& a, const ShiftSpec& b) {
    if (a.dim != b.dim) throw SpecError("product: dimension mismatch");
    ShiftSpec r;
    r.dim = a.dim;
    int nb = static_cast<int>(b.alphabet.size());
    for (size_t i = 0; i < a.alphabet.size(); ++i)
        for (int j = 0; j < nb; ++j) r.alphabet.push_back(static_cast<int>(i) * nb + j);
    std::vector<Pattern> forb;
    for (const Pattern& p : a.forbidden)
        lifts_of(p, b.alphabet, [&](Symbol s, Symbol t) { return product_code(a, b, s, t); },
                 forb);
    for (const Pattern& q : b.forbidden)
        lifts_of(q, a.alphabet, [&](Symbol t, Symbol s) { return product_code(a, b, s, t); },
                 forb);
    r.forbidden = std::move(forb);
    r.metadata["construction"] = "product";
    r.metadata["pairing"] = "lex";
    r.canonicalize();
    r.validate();
    return r;
}

ShiftSpec disjoint_union(const ShiftSpec& a, const ShiftSpec& b) {
    if (a.dim != b.dim) throw SpecError("disjoint_union: dimension mismatch");
    int offset = a.alphabet.back() + 1 - b.alphabet.front();
    ShiftSpec r;
    r.dim = a.dim;
    r.alphabet = a.alphabet;
    for (Symbol s : b.alphabet) r.alphabet.push_back(s + offset);
    r.forbidden = a.forbidden;
    for (const Pattern& p : b.forbidden) {
        Pattern q(p.dim);
        for (const auto& [c, s] : p.cells) q.cells[c] = s + offset;
        r.forbidden.push_back(std::move(q));
    }
    for (int axis = 0; axis < a.dim; ++axis) {
        Coord e = Coord::unit(a.dim, axis);
        for (Symbol s : a.alphabet) {
            for (Symbol t : b.alphabet) {
                Pattern m1(a.dim);
                m1.cells[Coord::zero(a.dim)] = s;
                m1.cells[e] = t + offset;
                Pattern m2(a.dim);
                m2.cells[Coord::zero(a.dim)] = t + offset;
                m2.cells[e] = s;
                r.forbidden.push_back(std::move(m1));
                r.forbidden.push_back(std::move(m2));
            }
        }
    }
    r.metadata["construction"] = "disjoint_union";
    r.metadata["relabel_offset_right"] = std::to_string(offset);
    r.canonicalize();
    r.validate();
    return r;
}

ShiftSpec extend_dims(const ShiftSpec& a, int extra) {
    if (extra < 0) throw SpecError("extend_dims: extra must be >= 0");
    if (extra == 0) return a;
    ShiftSpec r;
    r.dim = a.dim + extra;
    r.alphabet = a.alphabet;
    for (const Pattern& p : a.forbidden) {
        Pattern q(r.dim);
        for (const auto& [c, s] : p.cells) {
            Coord e = Coord::zero(r.dim);
            for (int k = 0; k < a.dim; ++k) e.v[k] = c[k];
            q.cells[e] = s;
        }
        r.forbidden.push_back(std::move(q));
    }
    for (int axis = a.dim; axis < r.dim; ++axis) {
        Coord e = Coord::unit(r.dim, axis);
        for (Symbol s : a.alphabet)
            for (Symbol t : a.alphabet) {
                if (s == t) continue;
                Pattern m(r.dim);
                m.cells[Coord::zero(r.dim)] = s;
                m.cells[e] = t;
                r.forbidden.push_back(std::move(m));
            }
    }
    r.metadata = a.metadata;
    r.metadata["construction"] = "extend_dims";
    r.canonicalize();
    r.validate();
    return r;
}

ShiftSpec constant_layer(int n, int dimension) {
    if (n < 1) throw SpecError("constant_layer: n must be >= 1");
    ShiftSpec r;
    r.dim = dimension;
    for (int s = 1; s <= n; ++s) r.alphabet.push_back(s);
    for (int axis = 0; axis < dimension; ++axis) {
        Coord e = Coord::unit(dimension, axis);
        for (int s = 1; s <= n; ++s)
            for (int t = 1; t <= n; ++t) {
                if (s == t) continue;
                Pattern m(dimension);
                m.cells[Coord::zero(dimension)] = s;
                m.cells[e] = t;
                r.forbidden.push_back(std::move(m));
            }
    }
    r.canonicalize();
    r.validate();
    return r;
}

std::string serialize_spec(const ShiftSpec& spec) {
    ShiftSpec s = spec;
    s.canonicalize();
    s.validate();
    std::ostringstream out;
    out << "shift v1\n";
    out << "dim " << s.dim << "\n";
    out << "alphabet";
    for (Symbol a : s.alphabet) out << " " << a;
    out << "\n";
    for (const auto& [k, v] : s.metadata) out << "# meta " << k << " " << v << "\n";
    for (const Pattern& p : s.forbidden) {
        out << "forbid\n";
        for (const auto& [c, sym] : p.cells) {
            for (int k = 0; k < s.dim; ++k) out << c[k] << " ";
            out << sym << "\n";
        }
        out << "end\n";
    }
    return out.str();
}

namespace {

struct LineReader {
    std::istringstream in;
    int lineno = 0;
    explicit LineReader(const std::string& text) : in(text) {}
    bool next(std::string& line) {
        while (std::getline(in, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            return true;
        }
        return false;
    }
};

std::vector<std::string> tokens_of(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> toks;
    std::string t;
    while (ss >> t) toks.push_back(t);
    return toks;
}

int parse_int(const std::string& tok, int lineno, int col) {
    try {
        size_t pos = 0;
        int v = std::stoi(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ParseError("expected an integer, got '" + tok + "'", lineno, col);
    }
}

}  // namespace

ShiftSpec parse_spec(const std::string& text) {
    LineReader rd(text);
    ShiftSpec spec;
    std::string line;

    auto next_content = [&](std::string& out) -> bool {
        while (rd.next(out)) {
            if (out.rfind("# meta ", 0) == 0) {
                auto toks = tokens_of(out.substr(7));
                if (!toks.empty()) {
                    std::string key = toks[0];
                    std::string value;
                    for (size_t i = 1; i < toks.size(); ++i) {
                        if (i > 1) value += " ";
                        value += toks[i];
                    }
                    spec.metadata[key] = value;
                }
                continue;
            }
            if (!out.empty() && out[0] == '#') continue;
            if (tokens_of(out).empty()) continue;
            return true;
        }
        return false;
    };

    if (!next_content(line) || line != "shift v1")
        throw ParseError("expected header 'shift v1'", rd.lineno, 1);

    if (!next_content(line)) throw ParseError("expected 'dim <d>'", rd.lineno, 1);
    {
        auto toks = tokens_of(line);
        if (toks.size() != 2 || toks[0] != "dim")
            throw ParseError("expected 'dim <d>'", rd.lineno, 1);
        spec.dim = parse_int(toks[1], rd.lineno, 2);
        if (spec.dim < 1) throw ParseError("dimension must be >= 1", rd.lineno, 2);
    }

    if (!next_content(line)) throw ParseError("expected 'alphabet ...'", rd.lineno, 1);
    {
        auto toks = tokens_of(line);
        if (toks.empty() || toks[0] != "alphabet")
            throw ParseError("expected 'alphabet ...'", rd.lineno, 1);
        if (toks.size() == 1) throw ParseError("alphabet must be nonempty", rd.lineno, 1);
        for (size_t i = 1; i < toks.size(); ++i)
            spec.alphabet.push_back(parse_int(toks[i], rd.lineno, static_cast<int>(i + 1)));
        std::sort(spec.alphabet.begin(), spec.alphabet.end());
        spec.alphabet.erase(std::unique(spec.alphabet.begin(), spec.alphabet.end()),
                            spec.alphabet.end());
    }

    while (next_content(line)) {
        auto toks = tokens_of(line);
        if (toks.size() != 1 || toks[0] != "forbid")
            throw ParseError("expected 'forbid' or end of file", rd.lineno, 1);
        Pattern p(spec.dim);
        while (true) {
            if (!next_content(line))
                throw ParseError("unterminated forbid block (missing 'end')", rd.lineno, 1);
            auto cell = tokens_of(line);
            if (cell.size() == 1 && cell[0] == "end") break;
            if (static_cast<int>(cell.size()) != spec.dim + 1)
                throw ParseError("cell line must have " + std::to_string(spec.dim) +
                                     " coordinates and a symbol",
                                 rd.lineno, 1);
            Coord c = Coord::zero(spec.dim);
            for (int k = 0; k < spec.dim; ++k) c.v[k] = parse_int(cell[k], rd.lineno, k + 1);
            Symbol s = parse_int(cell[spec.dim], rd.lineno, spec.dim + 1);
            p.cells[c] = s;
        }
        size_t idx = spec.forbidden.size();
        for (const auto& [c, s] : p.cells) {
            (void)c;
            if (std::find(spec.alphabet.begin(), spec.alphabet.end(), s) == spec.alphabet.end())
                throw ParseError("forbidden pattern #" + std::to_string(idx) + " uses symbol " +
                                     std::to_string(s) + " outside the declared alphabet",
                                 rd.lineno, 1);
        }
        spec.forbidden.push_back(std::move(p));
    }

    spec.canonicalize();
    spec.validate();
    return spec;
}

ShiftSpec load_spec_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SpecError("cannot open spec file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_spec(ss.str());
}

void save_spec_file(const ShiftSpec& spec, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SpecError("cannot write spec file: " + path);
    out << serialize_spec(spec);
}

}  // namespace sft
