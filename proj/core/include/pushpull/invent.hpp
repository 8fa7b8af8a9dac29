#pragma once

#include "pushpull/common.hpp"
#include "pushpull/term.hpp"

namespace pushpull {

/// Whether an estimated complexity is within [goal/2, 3*goal/2].
bool within_goal(double complexity, double goal) noexcept;

/// Random term of the given sort with no complexity constraint. Composite
/// operators get rarer with depth, so generation stops with probability 1.
TermPtr invent_free(Sort sort, Rng& rng, int depth = 0);

/// Tries to move a term's estimated complexity into the goal window by
/// re-solving one linear repetition parameter (LOOP, CHAIN, TREE or LNS
/// count), outermost first. Returns the input when nothing fits.
TermPtr fit_complexity(const TermPtr& t, double goal);

/// Random term whose estimate lies within the goal window: up to 50 random
/// attempts, then a direct LDS / LOOP(CHAIN) construction.
TermPtr invent(Sort sort, double goal, Rng& rng);

/// The direct construction used when random attempts fail.
TermPtr invent_direct(Sort sort, double goal);

}  // namespace pushpull
