#include "pushpull/interpreter.hpp"

#include <algorithm>
#include <chrono>

#include "pushpull/ejection.hpp"
#include "pushpull/insert_build.hpp"
#include "pushpull/lds.hpp"
#include "pushpull/lns.hpp"
#include "pushpull/objective.hpp"

namespace pushpull {

namespace {

LdsParams lds_params(const Term& t) { return LdsParams{t.arg(0), t.arg(1), t.arg(2)}; }

}  // namespace

void build_into(const Term& t, Solution& sol, EvalContext& ctx) {
    PUSHPULL_EXPECTS(t.sort() == Sort::build, "build_into needs a Build term");
    switch (t.op()) {
        case Op::insert: insert_complete(sol, ctx, t.arg(0)); break;
        case Op::lds: lds_complete(sol, ctx, lds_params(t)); break;
        case Op::do_:
            build_into(t.child(0), sol, ctx);
            optimize(t.child(1), sol, ctx);
            break;
        case Op::forall: {
            const Term& post = t.child(1);
            lds_complete(sol, ctx, lds_params(t.child(0)), [&](Solution& leaf) { optimize(post, leaf, ctx); });
            break;
        }
        default: break;
    }
}

void optimize(const Term& t, Solution& sol, EvalContext& ctx) {
    PUSHPULL_EXPECTS(t.sort() == Sort::optimize, "optimize needs an Optimize term");
    if (ctx.budget_spent()) return;
    switch (t.op()) {
        case Op::chain: chain_optimize(sol, ctx, t.arg(0), t.arg(1)); break;
        case Op::tree: tree_optimize(sol, ctx, t.arg(0), t.arg(1), t.arg(2)); break;
        case Op::lns: {
            const int n = std::min(t.arg(0), sol.instance().customers());
            const Term& rebuild = t.child(0);
            lns_optimize(sol, ctx, ShawParams{n, t.arg(1)}, [&](Solution& partial) { build_into(rebuild, partial, ctx); });
            break;
        }
        case Op::loop:
            for (int k = 0; k < t.arg(0); ++k) optimize(t.child(0), sol, ctx);
            break;
        case Op::then:
            optimize(t.child(0), sol, ctx);
            optimize(t.child(1), sol, ctx);
            break;
        default: break;
    }
}

RunReport run(const Term& t, const Instance& inst, EvalContext& ctx, const Solution* base) {
    const auto start = std::chrono::steady_clock::now();
    const auto before = ctx.insertions;
    Solution sol(inst);
    if (t.sort() == Sort::build) {
        build_into(t, sol, ctx);
    } else {
        PUSHPULL_EXPECTS(base != nullptr, "an Optimize term needs a base solution");
        PUSHPULL_EXPECTS(&base->instance() == &inst, "base solution belongs to another instance");
        sol = *base;
        optimize(t, sol, ctx);
    }
    const double value = objective(sol, ctx);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return RunReport{std::move(sol), value, ctx.insertions - before, secs};
}

}  // namespace pushpull
