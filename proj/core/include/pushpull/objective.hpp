#pragma once

#include <compare>
#include <span>

#include "pushpull/context.hpp"
#include "pushpull/solution.hpp"

namespace pushpull {

inline constexpr double kRoutePenalty = 1'000'000.0;

struct ObjectiveBreakdown {
    int routes = 0;       // non-empty routes (E)
    int target = 0;       // route target used by the penalty
    int unassigned = 0;
    double travel = 0;    // total route length (D), distance units
    double service = 0;   // sum of customer service durations
    double penalty = 0;
    double value = 0;
};

/// Objective of one solution:
///
///   E * 1e6 * min(1, max(0, E - target)) + scale * (D + sum of durations)
///
/// The E factor keeps pressure on the route count once a solution is
/// above target: every further route still costs another 1e6.
///
/// In trucks mode the target is the instance's target route count (throws
/// std::invalid_argument when unset); in travel mode it is the fleet limit,
/// so the penalty vanishes. Unassigned customers add nothing; compare
/// partial solutions with `score` instead.
ObjectiveBreakdown evaluate(const Solution& sol, const EvalContext& ctx);
double objective(const Solution& sol, const EvalContext& ctx);

/// Mean of per-instance values.
double dataset_value(std::span<const double> values) noexcept;

/// Ordering used by every accept/reject decision: fewer unassigned
/// customers first, then lower objective.
struct Score {
    int unassigned = 0;
    double value = 0;

    friend bool operator==(const Score&, const Score&) = default;
    friend std::partial_ordering operator<=>(const Score& a, const Score& b) {
        if (a.unassigned != b.unassigned) return a.unassigned <=> b.unassigned;
        return a.value <=> b.value;
    }
    /// a is no worse than b, with a small tolerance on the value.
    bool no_worse_than(const Score& b) const noexcept {
        return unassigned < b.unassigned || (unassigned == b.unassigned && value <= b.value + 1e-7);
    }
    bool better_than(const Score& b) const noexcept {
        return unassigned < b.unassigned || (unassigned == b.unassigned && value < b.value - 1e-7);
    }
};

Score score(const Solution& sol, const EvalContext& ctx);

}  // namespace pushpull
