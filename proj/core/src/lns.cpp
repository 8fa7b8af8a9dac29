#include "pushpull/lns.hpp"

#include <algorithm>
#include <cmath>

#include "pushpull/objective.hpp"
#include "pushpull/primitives.hpp"

namespace pushpull {

double relatedness_key(const Solution& sol, int i, int j) noexcept {
    const auto& inst = sol.instance();
    const bool same = sol.assigned(i) && sol.route_of(i) == sol.route_of(j);
    const double dmax = inst.diameter() > 0 ? inst.diameter() : 1.0;
    return inst.dist(i, j) / dmax + (same ? 0.0 : 1.0);
}

std::vector<int> shaw_select(const Solution& sol, EvalContext& ctx, const ShawParams& p) {
    const auto& inst = sol.instance();
    PUSHPULL_EXPECTS(p.count >= 0 && p.count <= inst.customers(), "selection size out of range");
    PUSHPULL_EXPECTS(p.determinism >= 1, "determinism exponent must be at least 1");
    const auto want = static_cast<std::size_t>(p.count);

    std::vector<int> selected = sol.unassigned();
    if (selected.size() >= want) {
        selected.resize(want);
        return selected;
    }
    std::vector<char> taken(static_cast<std::size_t>(inst.node_count()), 0);
    for (int c : selected) taken[c] = 1;
    std::vector<int> rest;
    for (int c = 1; c < inst.node_count(); ++c)
        if (!taken[c]) rest.push_back(c);

    if (selected.empty()) {
        const std::size_t k = ctx.rng.index(rest.size());
        selected.push_back(rest[k]);
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(k));
    }
    while (selected.size() < want) {
        const int i = selected[ctx.rng.index(selected.size())];
        std::stable_sort(rest.begin(), rest.end(),
                         [&](int a, int b) { return relatedness_key(sol, i, a) < relatedness_key(sol, i, b); });
        const double u = ctx.rng.uniform01();
        auto rank = static_cast<std::size_t>(std::pow(u, p.determinism) * static_cast<double>(rest.size()));
        rank = std::min(rank, rest.size() - 1);
        selected.push_back(rest[rank]);
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(rank));
    }
    return selected;
}

void lns_optimize(Solution& sol, EvalContext& ctx, const ShawParams& p, const Rebuild& rebuild) {
    if (p.count == 0) return;
    const Score before = score(sol, ctx);
    const auto chosen = shaw_select(sol, ctx, p);
    Solution trial = sol;
    for (int c : chosen)
        if (trial.assigned(c)) pull(trial, c);
    rebuild(trial);
    trial.drop_empty_routes();
    const Score after = score(trial, ctx);
    if (after.no_worse_than(before)) {
        sol = std::move(trial);
        if (ctx.on_step) ctx.on_step(StepEvent{"lns", before.value, after.value});
    }
}

}  // namespace pushpull
