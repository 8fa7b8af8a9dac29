#pragma once

#include <functional>
#include <vector>

#include "pushpull/context.hpp"
#include "pushpull/solution.hpp"

namespace pushpull {

struct ShawParams {
    int count = 1;        // customers to select
    int determinism = 1;  // exponent h; higher picks more related customers
};

/// Relatedness key of j to i, smaller = more related:
/// d(i,j) / diameter + (0 when on the same route, else 1).
double relatedness_key(const Solution& sol, int i, int j) noexcept;

/// Shaw selection: unassigned customers first (ascending id), then a random
/// seed, then repeatedly the customer of rank floor(u^h * remaining) in
/// relatedness to a randomly chosen selected customer.
std::vector<int> shaw_select(const Solution& sol, EvalContext& ctx, const ShawParams& p);

/// Rebuilds the unassigned customers of a partial solution.
using Rebuild = std::function<void(Solution&)>;

/// LNS(n, h, t): pull n Shaw-selected customers, rebuild with `rebuild`,
/// keep the result when its score is no worse, else restore.
void lns_optimize(Solution& sol, EvalContext& ctx, const ShawParams& p, const Rebuild& rebuild);

}  // namespace pushpull
