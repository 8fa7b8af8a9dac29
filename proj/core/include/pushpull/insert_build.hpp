#pragma once

#include <vector>

#include "pushpull/context.hpp"
#include "pushpull/solution.hpp"

namespace pushpull {

/// Static insertion order: due date ascending, ties by id.
std::vector<int> insertion_order(const Instance& inst, std::vector<int> customers);

/// Level-4 repair for a customer that no route admits: empties one of the
/// routes closest to c, serves c there first and re-pushes the evicted
/// customers. Tries up to three routes, nearest first; returns false and
/// leaves the solution untouched when none works.
bool reconstruct_route(Solution& sol, int c, int level, EvalContext& ctx);

/// Greedy build INSERT(level): push every customer in `insertion_order`,
/// running `improve_around` after each success. Customers that fit nowhere
/// stay unassigned.
Solution insert_build(const Instance& inst, EvalContext& ctx, int level);

/// Same procedure restricted to the unassigned customers of a partial
/// solution.
void insert_complete(Solution& sol, EvalContext& ctx, int level);

}  // namespace pushpull
