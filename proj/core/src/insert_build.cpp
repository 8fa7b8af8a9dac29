#include "pushpull/insert_build.hpp"

#include <algorithm>

#include "pushpull/lds.hpp"
#include "pushpull/local_opt.hpp"
#include "pushpull/primitives.hpp"

namespace pushpull {

namespace {

constexpr int kReconstructCandidates = 3;

}  // namespace

std::vector<int> insertion_order(const Instance& inst, std::vector<int> customers) {
    std::stable_sort(customers.begin(), customers.end(), [&](int a, int b) {
        if (inst.due(a) != inst.due(b)) return inst.due(a) < inst.due(b);
        return a < b;
    });
    return customers;
}

bool reconstruct_route(Solution& sol, int c, int level, EvalContext& ctx) {
    const auto& inst = sol.instance();
    const int alone[1] = {c};
    if (!sequence_feasible(inst, alone)) return false;

    std::vector<std::pair<double, int>> near;
    for (int r = 0; r < sol.route_slots(); ++r) {
        if (sol.route(r).empty()) continue;
        double d = kInfinity;
        for (int v : sol.route(r).nodes) d = std::min(d, inst.dist(c, v));
        near.emplace_back(d, r);
    }
    std::sort(near.begin(), near.end());
    if (static_cast<int>(near.size()) > kReconstructCandidates) near.resize(kReconstructCandidates);

    const int ilo = std::min(level, 3);
    for (const auto& [d, r] : near) {
        Solution trial = sol;
        const auto evicted = insertion_order(inst, trial.route(r).nodes);
        trial.rewrite(r, {c});
        bool ok = true;
        for (int v : evicted) {
            if (!push(trial, v, ctx)) {
                ok = false;
                break;
            }
            improve_around(trial, v, ilo, ctx);
        }
        if (!ok) continue;
        if (trial.assigned(c)) improve_around(trial, c, ilo, ctx);
        sol = std::move(trial);
        return true;
    }
    return false;
}

void insert_complete(Solution& sol, EvalContext& ctx, int level) {
    lds_complete(sol, ctx, LdsParams{level, 0, 0});
}

Solution insert_build(const Instance& inst, EvalContext& ctx, int level) {
    Solution sol(inst);
    insert_complete(sol, ctx, level);
    return sol;
}

}  // namespace pushpull
