#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sft/core.hpp"

namespace sft {

enum class SearchStatus { Complete, BudgetExhausted };

struct EnumLimits {
    long long node_budget = 10'000'000;  // counted symbol assignments
};

/// Margin-certified locally admissible patterns on a window, in deterministic
/// lexicographic order of their symbol sequences over the sorted window cells.
/// For dimension >= 2 this is an over-approximation of the window language of
/// the shift; reports must label the margin used.
struct WindowLanguage {
    Window window;
    int margin = 0;
    std::vector<Pattern> patterns;
    SearchStatus status = SearchStatus::Complete;

    bool complete() const { return status == SearchStatus::Complete; }
    size_t count() const { return patterns.size(); }
    friend bool operator==(const WindowLanguage& a, const WindowLanguage& b) {
        return a.patterns == b.patterns;
    }
};

WindowLanguage window_language(const ShiftSpec& spec, const Window& window, int margin,
                               const EnumLimits& limits = {});

enum class Admissibility { Yes, No, BudgetExhausted };

/// True iff p extends to its support inflated by `margin` with no forbidden
/// occurrence. Point query of window_language.
Admissibility is_locally_admissible(const ShiftSpec& spec, const Pattern& p, int margin,
                                    const EnumLimits& limits = {});

/// Smallest margin m <= max_margin with language(m) == language(m + 1) on the
/// window, or nullopt if none found. For 1D specs the language is exact from
/// that margin on.
std::optional<int> stabilization_margin(const ShiftSpec& spec, const Window& window,
                                        int max_margin, const EnumLimits& limits = {});

/// Dyadic separation of two specs: 2^(-s) where s is the smallest radius with
/// differing window languages on centered boxes, or "beyond the cap".
struct ResolutionDistance {
    std::optional<int> separating_radius;  // nullopt = agree on all radii <= cap
    int cap = 0;
    int margin = 0;
    std::string reason;  // "alphabets differ", "budget exhausted", or empty
    SearchStatus status = SearchStatus::Complete;

    bool beyond_cap() const { return !separating_radius.has_value(); }
    /// Dyadic comparison: distances order by separating radius (larger radius
    /// = smaller distance); beyond-cap compares below every resolved radius.
    bool closer_than(const ResolutionDistance& o) const;
    std::string value_string() const;  // "2^-s" or "<=2^-(cap+1)"
};

ResolutionDistance resolution_distance(const ShiftSpec& a, const ShiftSpec& b, int radius_cap,
                                       int margin, const EnumLimits& limits = {});

/// Per-radius agreement indices of a sequence against a limit spec.
struct ConvergenceReport {
    int radius_cap = 0;
    int margin = 0;
    // agree_from[s] = smallest m such that every listed spec with index >= m
    // agrees with the limit on the centered box of radius s; nullopt = never
    // within the list.
    std::vector<std::optional<int>> agree_from;
    bool consistent = false;  // all radii have an agreement index
    SearchStatus status = SearchStatus::Complete;

    std::string to_text() const;
    std::string to_porcelain() const;
};

ConvergenceReport check_convergence(const std::vector<ShiftSpec>& sequence,
                                    const ShiftSpec& limit, int radius_cap, int margin,
                                    const EnumLimits& limits = {});

}  // namespace sft
