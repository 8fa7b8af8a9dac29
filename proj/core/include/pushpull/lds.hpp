#pragma once

#include <functional>

#include "pushpull/context.hpp"
#include "pushpull/solution.hpp"

namespace pushpull {

struct LdsParams {
    int ilo_level = 3;
    int discrepancies = 0;
    int threshold = 0;  // in objective units (see EvalContext::value_scale)
};

/// Called on each leaf; may improve the leaf in place.
using LeafConsumer = std::function<void(Solution&)>;

struct LdsStats {
    int leaves = 0;
};

/// Limited discrepancy search over the greedy insertion of the unassigned
/// customers of `sol`. At each customer the search branches when the second
/// best route is within `threshold` of the best and branching points remain
/// on the path (both branches use one up, so there are at most 2^n leaves);
/// the best branch is explored first. `sol` receives the best leaf (after
/// `consumer`, if any); the first leaf wins ties, so with no branching the
/// result is exactly the greedy build.
LdsStats lds_complete(Solution& sol, EvalContext& ctx, const LdsParams& p, const LeafConsumer& consumer = {});

/// LDS from scratch.
Solution lds_build(const Instance& inst, EvalContext& ctx, const LdsParams& p);

/// LDS from scratch, handing every leaf to `consumer`; returns the best
/// post-processed leaf.
Solution lds_generate(const Instance& inst, EvalContext& ctx, const LdsParams& p, const LeafConsumer& consumer,
                      LdsStats* stats = nullptr);

}  // namespace pushpull
