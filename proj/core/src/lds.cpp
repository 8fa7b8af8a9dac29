#include "pushpull/lds.hpp"

#include <optional>
#include <utility>
#include <vector>

#include "pushpull/insert_build.hpp"
#include "pushpull/local_opt.hpp"
#include "pushpull/objective.hpp"
#include "pushpull/primitives.hpp"

namespace pushpull {

namespace {

class Search {
  public:
    Search(EvalContext& ctx, const LdsParams& p, const LeafConsumer& consumer) : ctx_(ctx), p_(p), consumer_(consumer) {}

    void descend(Solution sol, const std::vector<int>& order, std::size_t idx, int budget) {
        for (; idx < order.size(); ++idx) {
            const int c = order[idx];
            if (sol.assigned(c)) continue;
            const auto choice = evaluate_insertion(sol, c, ctx_);
            if (!choice.best.valid()) {
                if (p_.ilo_level >= 4) reconstruct_route(sol, c, p_.ilo_level, ctx_);
                continue;
            }
            const bool branch = budget > 0 && choice.second.valid() &&
                                (choice.second.delta - choice.best.delta) * ctx_.value_scale < p_.threshold;
            if (branch) {
                Solution alt = sol;
                step(sol, c, choice.best);
                descend(std::move(sol), order, idx + 1, budget - 1);
                step(alt, c, choice.second);
                descend(std::move(alt), order, idx + 1, budget - 1);
                return;
            }
            step(sol, c, choice.best);
        }
        leaf(std::move(sol));
    }

    LdsStats stats;
    std::optional<Solution> best;

  private:
    void step(Solution& sol, int c, const InsertionPoint& point) {
        apply_insertion(sol, c, point);
        improve_around(sol, c, p_.ilo_level, ctx_);
    }

    void leaf(Solution sol) {
        ++stats.leaves;
        if (consumer_) consumer_(sol);
        const Score s = score(sol, ctx_);
        if (!best || s.better_than(best_score_)) {
            best = std::move(sol);
            best_score_ = s;
        }
    }

    EvalContext& ctx_;
    const LdsParams& p_;
    const LeafConsumer& consumer_;
    Score best_score_;
};

}  // namespace

LdsStats lds_complete(Solution& sol, EvalContext& ctx, const LdsParams& p, const LeafConsumer& consumer) {
    PUSHPULL_EXPECTS(p.ilo_level >= 0 && p.ilo_level <= 4, "ILO level must be in 0..4");
    PUSHPULL_EXPECTS(p.discrepancies >= 0 && p.threshold >= 0, "LDS parameters must be non-negative");
    const auto order = insertion_order(sol.instance(), sol.unassigned());
    Search search(ctx, p, consumer);
    search.descend(sol, order, 0, p.discrepancies);
    sol = std::move(*search.best);
    return search.stats;
}

Solution lds_build(const Instance& inst, EvalContext& ctx, const LdsParams& p) {
    Solution sol(inst);
    lds_complete(sol, ctx, p);
    return sol;
}

Solution lds_generate(const Instance& inst, EvalContext& ctx, const LdsParams& p, const LeafConsumer& consumer,
                      LdsStats* stats) {
    Solution sol(inst);
    const auto s = lds_complete(sol, ctx, p, consumer);
    if (stats) *stats = s;
    return sol;
}

}  // namespace pushpull
