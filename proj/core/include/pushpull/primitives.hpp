#pragma once

#include <limits>
#include <optional>
#include <span>

#include "pushpull/context.hpp"
#include "pushpull/solution.hpp"

namespace pushpull {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// A place to insert a customer: `route == route_slots()` means a fresh route.
struct InsertionPoint {
    int route = -1;
    int position = 0;
    double delta = kInfinity;

    bool valid() const noexcept { return route >= 0; }
};

/// Best insertion overall and best insertion on a different route.
struct InsertionChoice {
    InsertionPoint best;
    InsertionPoint second;
};

/// Cheapest feasible position of customer c in a route, or nullopt.
/// Uses the route's cached start/latest times: O(route size).
std::optional<InsertionPoint> best_insertion_in_route(const Instance& inst, const Route& route, int c);

/// Cheapest feasible position of c in an arbitrary node sequence (full
/// propagation per position). Slow path for modified routes.
std::optional<InsertionPoint> best_insertion_in_sequence(const Instance& inst, std::span<const int> nodes, int c);

/// Whether a fresh route may be opened.
bool can_open_route(const Solution& sol) noexcept;

/// Evaluates all candidate routes (plus a fresh one when the fleet allows)
/// for an unassigned customer. Counts one insertion per route examined.
/// Ties go to the lowest route index, then the earliest position.
InsertionChoice evaluate_insertion(const Solution& sol, int c, EvalContext& ctx);

/// Commits an insertion point returned by evaluate_insertion.
void apply_insertion(Solution& sol, int c, const InsertionPoint& point);

struct PushReport {
    int route = -1;
    int position = 0;
    double delta = 0;
    double second_delta = kInfinity;
};

/// Inserts an unassigned customer at its cheapest feasible position.
/// Returns nullopt (solution untouched) when no route admits it.
std::optional<PushReport> push(Solution& sol, int c, EvalContext& ctx);

struct PullReport {
    double delta = 0;  // length decrease
};

/// Removes an assigned customer; start times downstream are re-propagated.
PullReport pull(Solution& sol, int c);

/// Length saved by removing c from its route.
double removal_gain(const Solution& sol, int c) noexcept;

}  // namespace pushpull
