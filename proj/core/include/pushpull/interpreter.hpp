#pragma once

#include <cstdint>
#include <optional>

#include "pushpull/context.hpp"
#include "pushpull/solution.hpp"
#include "pushpull/term.hpp"

namespace pushpull {

struct RunReport {
    Solution solution;
    double value = 0;
    std::uint64_t insertions = 0;  // counter increase during the run
    double wall_time = 0;          // seconds
};

/// Completes a partial solution with a Build term (unassigned customers are
/// inserted; assigned ones stay where they are unless an optimizer moves
/// them).
void build_into(const Term& t, Solution& sol, EvalContext& ctx);

/// Applies an Optimize term; never worsens the score of `sol`.
void optimize(const Term& t, Solution& sol, EvalContext& ctx);

/// Runs a term: Build terms start from an empty solution, Optimize terms
/// from `base` (required).
RunReport run(const Term& t, const Instance& inst, EvalContext& ctx, const Solution* base = nullptr);

}  // namespace pushpull
