#include "sft/lang.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace sft {

namespace {

struct BudgetStop {};

// Minkowski sum of the cell set with [-margin, margin]^d.
std::vector<Coord> inflate(const std::vector<Coord>& cells, int margin, int dim) {
    if (margin == 0) return cells;
    std::set<Coord> out;
    std::vector<Coord> box;
    {
        Coord c = Coord::zero(dim);
        for (int k = 0; k < dim; ++k) c.v[k] = -margin;
        while (true) {
            box.push_back(c);
            int k = dim - 1;
            while (k >= 0 && c.v[k] == margin) {
                c.v[k] = -margin;
                --k;
            }
            if (k < 0) break;
            ++c.v[k];
        }
    }
    for (const Coord& c : cells)
        for (const Coord& d : box) out.insert(c + d);
    return {out.begin(), out.end()};
}

// One anchored occurrence of a forbidden pattern inside the cell set,
// expressed over assignment-order indices. `trigger` is the largest index.
struct Instance {
    std::vector<std::pair<int, Symbol>> match;  // (order index, required symbol)
};

// Depth-first assignment engine over an ordered cell list with forward
// checking against anchored forbidden-pattern instances.
struct Engine {
    const ShiftSpec& spec;
    std::vector<Coord> order;                       // assignment order
    std::map<Coord, int> index_of;                  // coord -> order index
    std::vector<std::vector<Instance>> triggers;    // by trigger index
    std::vector<Symbol> assign;                     // assigned symbol or INT_MIN
    long long budget;
    long long nodes = 0;

    static constexpr Symbol kUnset = INT32_MIN;

    Engine(const ShiftSpec& s, std::vector<Coord> cell_order, long long budget_)
        : spec(s), order(std::move(cell_order)), budget(budget_) {
        for (size_t i = 0; i < order.size(); ++i) index_of[order[i]] = static_cast<int>(i);
        triggers.resize(order.size());
        assign.assign(order.size(), kUnset);
        std::set<Coord> cellset(order.begin(), order.end());
        for (const Pattern& p : spec.forbidden) {
            if (p.cells.empty()) continue;  // empty pattern forbids everything
            // Canonical patterns have lexicographic-min at the origin, so every
            // anchor candidate is a cell of the set itself.
            for (const Coord& anchor : order) {
                Instance inst;
                bool inside = true;
                int trig = -1;
                for (const auto& [c, sym] : p.cells) {
                    auto it = index_of.find(c + anchor);
                    if (it == index_of.end()) {
                        inside = false;
                        break;
                    }
                    inst.match.emplace_back(it->second, sym);
                    trig = std::max(trig, it->second);
                }
                if (!inside) continue;
                // Move the trigger cell's requirement first for a fast veto.
                std::swap(inst.match.front(),
                          *std::find_if(inst.match.begin(), inst.match.end(),
                                        [&](const auto& m) { return m.first == trig; }));
                triggers[trig].push_back(std::move(inst));
            }
        }
    }

    bool consistent_at(int idx) const {
        for (const Instance& inst : triggers[idx]) {
            bool fullmatch = true;
            for (const auto& [i, sym] : inst.match) {
                if (assign[i] != sym) {
                    fullmatch = false;
                    break;
                }
            }
            if (fullmatch) return false;
        }
        return true;
    }

    void bump() {
        if (++nodes > budget) throw BudgetStop{};
    }

    // Existence of any full assignment of cells [from, end).
    bool extendable(size_t from) {
        if (from == order.size()) return true;
        for (Symbol s : spec.alphabet) {
            bump();
            assign[from] = s;
            if (consistent_at(static_cast<int>(from)) && extendable(from + 1)) {
                assign[from] = kUnset;
                return true;
            }
        }
        assign[from] = kUnset;
        return false;
    }
};

bool spec_forbids_everything(const ShiftSpec& spec) {
    for (const Pattern& p : spec.forbidden)
        if (p.cells.empty()) return true;
    return false;
}

}  // namespace

WindowLanguage window_language(const ShiftSpec& spec, const Window& window, int margin,
                               const EnumLimits& limits) {
    spec.validate();
    if (window.dim != spec.dim) throw SpecError("window_language: dimension mismatch");
    if (margin < 0) throw SpecError("window_language: margin must be >= 0");

    WindowLanguage result;
    result.window = window;
    result.margin = margin;

    std::vector<Coord> wcells = window.cells();
    if (wcells.empty()) {
        if (!spec_forbids_everything(spec)) result.patterns.push_back(Pattern(spec.dim));
        return result;
    }
    if (spec_forbids_everything(spec)) return result;

    std::vector<Coord> icells = inflate(wcells, margin, spec.dim);
    std::set<Coord> wset(wcells.begin(), wcells.end());
    std::vector<Coord> cell_order = wcells;
    for (const Coord& c : icells)
        if (!wset.count(c)) cell_order.push_back(c);

    Engine eng(spec, cell_order, limits.node_budget);
    const size_t W = wcells.size();

    // Enumerate window assignments in lexicographic order; for each, a single
    // existence search over the margin cells decides certification.
    auto enumerate = [&](auto&& self, size_t i) -> void {
        if (i == W) {
            if (eng.extendable(W)) {
                Pattern p(spec.dim);
                for (size_t k = 0; k < W; ++k) p.cells[eng.order[k]] = eng.assign[k];
                result.patterns.push_back(std::move(p));
            }
            return;
        }
        for (Symbol s : spec.alphabet) {
            eng.bump();
            eng.assign[i] = s;
            if (eng.consistent_at(static_cast<int>(i))) self(self, i + 1);
        }
        eng.assign[i] = Engine::kUnset;
    };
    try {
        enumerate(enumerate, 0);
    } catch (const BudgetStop&) {
        result.status = SearchStatus::BudgetExhausted;
    }
    return result;
}

Admissibility is_locally_admissible(const ShiftSpec& spec, const Pattern& p, int margin,
                                    const EnumLimits& limits) {
    spec.validate();
    if (p.dim != spec.dim) throw SpecError("is_locally_admissible: dimension mismatch");
    for (const auto& [c, s] : p.cells) {
        (void)c;
        if (!spec.has_symbol(s)) throw SpecError("pattern uses a symbol outside the alphabet");
    }
    if (spec_forbids_everything(spec)) return Admissibility::No;
    if (p.cells.empty()) return Admissibility::Yes;

    std::vector<Coord> support;
    for (const auto& [c, s] : p.cells) {
        (void)s;
        support.push_back(c);
    }
    std::vector<Coord> icells = inflate(support, margin, spec.dim);
    std::set<Coord> sset(support.begin(), support.end());
    std::vector<Coord> cell_order = support;
    for (const Coord& c : icells)
        if (!sset.count(c)) cell_order.push_back(c);

    Engine eng(spec, cell_order, limits.node_budget);
    for (size_t i = 0; i < support.size(); ++i) {
        eng.assign[i] = *p.at(eng.order[i]);
        if (!eng.consistent_at(static_cast<int>(i))) return Admissibility::No;
    }
    try {
        return eng.extendable(support.size()) ? Admissibility::Yes : Admissibility::No;
    } catch (const BudgetStop&) {
        return Admissibility::BudgetExhausted;
    }
}

std::optional<int> stabilization_margin(const ShiftSpec& spec, const Window& window,
                                        int max_margin, const EnumLimits& limits) {
    WindowLanguage prev = window_language(spec, window, 0, limits);
    if (!prev.complete()) return std::nullopt;
    for (int m = 0; m < max_margin; ++m) {
        WindowLanguage next = window_language(spec, window, m + 1, limits);
        if (!next.complete()) return std::nullopt;
        if (next == prev) return m;
        prev = std::move(next);
    }
    return std::nullopt;
}

bool ResolutionDistance::closer_than(const ResolutionDistance& o) const {
    if (beyond_cap()) return !o.beyond_cap();
    if (o.beyond_cap()) return false;
    return *separating_radius > *o.separating_radius;
}

std::string ResolutionDistance::value_string() const {
    if (!reason.empty() && status == SearchStatus::Complete && separating_radius &&
        *separating_radius == 0 && reason == "alphabets differ")
        return "1 (alphabets differ)";
    if (beyond_cap())
        return "<=2^-" + std::to_string(cap + 1) + " (agree through radius " +
               std::to_string(cap) + ")";
    if (*separating_radius == 0) return "1";
    return "2^-" + std::to_string(*separating_radius);
}

ResolutionDistance resolution_distance(const ShiftSpec& a, const ShiftSpec& b, int radius_cap,
                                       int margin, const EnumLimits& limits) {
    if (a.dim != b.dim) throw SpecError("resolution_distance: dimension mismatch");
    if (radius_cap < 0) throw SpecError("resolution_distance: radius cap must be >= 0");
    ResolutionDistance d;
    d.cap = radius_cap;
    d.margin = margin;
    if (a.alphabet != b.alphabet) {
        d.separating_radius = 0;
        d.reason = "alphabets differ";
        return d;
    }
    for (int s = 0; s <= radius_cap; ++s) {
        Window w = Window::centered(a.dim, s);
        WindowLanguage la = window_language(a, w, margin, limits);
        WindowLanguage lb = window_language(b, w, margin, limits);
        if (!la.complete() || !lb.complete()) {
            d.status = SearchStatus::BudgetExhausted;
            d.reason = "budget exhausted at radius " + std::to_string(s);
            d.separating_radius = std::nullopt;
            return d;
        }
        if (!(la == lb)) {
            d.separating_radius = s;
            return d;
        }
    }
    d.separating_radius = std::nullopt;
    return d;
}

ConvergenceReport check_convergence(const std::vector<ShiftSpec>& sequence,
                                    const ShiftSpec& limit, int radius_cap, int margin,
                                    const EnumLimits& limits) {
    if (sequence.empty()) throw SpecError("check_convergence: empty sequence");
    for (const ShiftSpec& s : sequence)
        if (s.dim != limit.dim) throw SpecError("check_convergence: dimension mismatch");

    ConvergenceReport rep;
    rep.radius_cap = radius_cap;
    rep.margin = margin;
    rep.consistent = true;
    for (int s = 0; s <= radius_cap; ++s) {
        Window w = Window::centered(limit.dim, s);
        WindowLanguage ll = window_language(limit, w, margin, limits);
        if (!ll.complete()) {
            rep.status = SearchStatus::BudgetExhausted;
            rep.consistent = false;
            return rep;
        }
        std::optional<int> from;
        // Find the last index that disagrees with the limit at this radius.
        int last_bad = -1;
        for (size_t i = 0; i < sequence.size(); ++i) {
            WindowLanguage li = window_language(sequence[i], w, margin, limits);
            if (!li.complete()) {
                rep.status = SearchStatus::BudgetExhausted;
                rep.consistent = false;
                return rep;
            }
            if (!(li == ll)) last_bad = static_cast<int>(i);
        }
        if (last_bad + 1 < static_cast<int>(sequence.size()))
            from = last_bad + 1;
        else
            from = std::nullopt;
        if (!from) rep.consistent = false;
        rep.agree_from.push_back(from);
    }
    return rep;
}

std::string ConvergenceReport::to_text() const {
    std::ostringstream out;
    out << "convergence report (radius cap " << radius_cap << ", margin " << margin << ")\n";
    if (status == SearchStatus::BudgetExhausted) {
        out << "  budget exhausted; no verdict\n";
        return out.str();
    }
    for (size_t s = 0; s < agree_from.size(); ++s) {
        out << "  radius " << s << ": ";
        if (agree_from[s])
            out << "agree from index " << *agree_from[s] << "\n";
        else
            out << "never within list\n";
    }
    out << (consistent ? "  consistent with convergence up to resolution "
                       : "  NOT consistent with convergence up to resolution ")
        << radius_cap << "\n";
    return out.str();
}

std::string ConvergenceReport::to_porcelain() const {
    std::ostringstream out;
    for (size_t s = 0; s < agree_from.size(); ++s) {
        out << "radius " << s << " agree_from ";
        if (agree_from[s])
            out << *agree_from[s] << "\n";
        else
            out << "never\n";
    }
    out << "consistent " << (consistent ? 1 : 0) << "\n";
    return out.str();
}

}  // namespace sft
