#pragma once

#include <optional>
#include <vector>

#include "pushpull/context.hpp"
#include "pushpull/solution.hpp"

namespace pushpull {

/// Result of a local move. `applied` implies `delta < 0`.
/// Route ids refer to the solution before empty routes were dropped.
struct MoveOutcome {
    bool applied = false;
    double delta = 0;
    std::vector<int> routes_touched;
};

// Routes are addressed by index; a "cut" k of a route is the edge between
// positions k-1 and k, so cuts run 0..size() with the depot at both ends.
// Every move below checks capacity and windows on the rewired routes and
// commits only a strict decrease of total length; otherwise the solution is
// left bit-identical. None of them runs follow-up optimization: that is the
// job of `improve_around`.

/// 2-edge exchange between cut_a of route a and cut_b of route b: the head of
/// a is linked to the tail of b and the head of b to the tail of a.
MoveOutcome two_opt_exchange(Solution& sol, int route_a, int cut_a, int route_b, int cut_b);

/// Moves the chain at positions [first, last] of `from` into route `to`,
/// right after position `anchor` (-1 = after the depot).
MoveOutcome chain_transfer(Solution& sol, int from, int first, int last, int to, int anchor);

/// Moves customer y into route `to` right after position `anchor`.
MoveOutcome node_transfer(Solution& sol, int y, int to, int anchor);

/// Hill-climbs a single route with segment reversals and segment moves
/// (length 1..3, either orientation), first improvement by position.
MoveOutcome intra_route_3opt(Solution& sol, int route);

/// Pulls nearby customers of other routes into `route` when that shortens
/// the total. Candidates are the nearest-neighbor lists of the route's
/// members, scanned in ascending id order.
MoveOutcome greedy_route_optimization(Solution& sol, int route);

/// A relocation of a contiguous chain into another route.
struct TransferMove {
    int from = -1;
    int first = 0;
    int last = 0;
    int to = -1;
    int anchor = -1;
    double delta = 0;
};

/// Best feasible inter-route chain transfer with chain length in
/// [1, max_chain] over the whole solution (deterministic scan order; the
/// first of equal deltas wins). Does not modify the solution.
std::optional<TransferMove> best_chain_transfer(const Solution& sol, int max_chain);

/// Incremental local optimization after inserting customer u.
///   level 0: nothing
///   level 1: 2-edge exchanges with routes of u's nearest neighbors
///   level 2: + chain transfers from those routes into u's route
///   level 3: + greedy optimization of u's route and of the donor routes
///   level 4: as level 3 (the build adds route reconstruction)
void improve_around(Solution& sol, int u, int level, EvalContext& ctx);

}  // namespace pushpull
