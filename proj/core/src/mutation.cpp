#include <algorithm>
#include <cmath>

#include "pushpull/invent.hpp"
#include "pushpull/learning.hpp"

namespace pushpull {

namespace {

constexpr int kGuidedAttempts = 10;

struct Param {
    int lo;
    int hi;
    bool cost;  // larger values cost more insertions
};

// Mutation ranges follow the invention ranges.
Param param_info(Op op, std::size_t k) {
    switch (op) {
        case Op::insert: return {0, 4, false};
        case Op::lds: return k == 0 ? Param{0, 4, false} : k == 1 ? Param{0, 8, true} : Param{0, 1000, false};
        case Op::chain: return k == 0 ? Param{1, 100, true} : Param{1, 2, false};
        case Op::tree: return k == 0 ? Param{1, 50, true} : k == 1 ? Param{1, 2, false} : Param{0, 3, true};
        case Op::lns: return k == 0 ? Param{2, 15, true} : Param{1, 30, false};
        case Op::loop: return {1, 100, true};
        default: return {0, 0, false};
    }
}

int small_step(int v, const Param& p, bool grow, Rng& rng) {
    const int span = p.hi - p.lo;
    const int step = span <= 8 ? 1 : std::max(1, static_cast<int>(std::lround(std::abs(v) * 0.2 * rng.uniform01())));
    const int sign = p.cost ? (grow ? 1 : -1) : (rng.bernoulli(0.5) ? 1 : -1);
    return std::clamp(v + sign * step, p.lo, p.hi);
}

int large_step(int v, const Param& p, bool grow, Rng& rng) {
    if (!p.cost) return rng.uniform_int(p.lo, p.hi);
    const double factor = 1.5 + 1.5 * rng.uniform01();
    const double next = grow ? std::max(v + 1.0, v * factor) : std::min(v - 1.0, v / factor);
    return std::clamp(static_cast<int>(std::lround(next)), p.lo, p.hi);
}

double sub_goal(const Term& t) { return std::max(1000.0, estimate_complexity(t)); }

bool slot_accepts(Op parent, std::size_t slot, const Term& t) {
    const auto& sig = signature(parent);
    if (t.sort() != sig.children[slot]) return false;
    return !(parent == Op::forall && slot == 0 && t.op() != Op::lds);
}

TermPtr invent_for_slot(Op parent, std::size_t slot, double goal, Rng& rng) {
    if (parent == Op::forall && slot == 0) {
        const int i = rng.uniform_int(0, 4);
        const int n = std::clamp(static_cast<int>(std::lround(std::log2(goal / 1000.0))), 0, 8);
        return make_lds(i, n, rng.uniform_int(0, 1000));
    }
    return invent(signature(parent).children[slot], goal, rng);
}

std::vector<int> mutate_ints(const Term& t, int level, bool grow, Rng& rng) {
    std::vector<int> ints = t.ints();
    for (std::size_t k = 0; k < ints.size(); ++k) {
        if (!rng.bernoulli(0.5)) continue;
        const Param p = param_info(t.op(), k);
        ints[k] = level == 1 ? small_step(ints[k], p, grow, rng) : large_step(ints[k], p, grow, rng);
    }
    return ints;
}

// Leaf mutation that keeps the operator.
TermPtr mutate_params(const TermPtr& t, int level, bool grow, Rng& rng) {
    return make_term(t->op(), mutate_ints(*t, level, grow, rng), t->children());
}

TermPtr mutate_rec(const TermPtr& t, int level, bool grow, Rng& rng, const MutationSettings& ms) {
    if (t->op() == Op::then) {
        const int y = rng.uniform_int(0, 100 / level - 1);
        const int y2 = rng.uniform_int(0, 99);
        return mutate_then(t, grow, level, y, y2, rng, ms);
    }
    if (level == 3 && rng.bernoulli(0.25)) {
        const double goal = sub_goal(*t) * (grow ? 2.0 : 0.5);
        return invent(t->sort(), std::max(goal, 1000.0), rng);
    }
    if (level >= 2 && !grow && rng.bernoulli(0.15)) {
        if (t->op() == Op::loop) return mutate_rec(t->children()[0], level, grow, rng, ms);
        if (t->op() == Op::do_ && level == 3) return mutate_rec(t->children()[0], level, grow, rng, ms);
    }
    if (level >= 2 && grow && rng.bernoulli(0.1) && t->sort() == Sort::optimize)
        return make_loop(rng.uniform_int(2, 5), t);

    std::vector<int> ints = mutate_ints(*t, level, grow, rng);
    std::vector<TermPtr> kids;
    for (std::size_t k = 0; k < t->children().size(); ++k) {
        const auto& c = t->children()[k];
        if (level >= 2 && rng.bernoulli(0.15))
            kids.push_back(invent_for_slot(t->op(), k, sub_goal(*c), rng));
        else if (t->op() == Op::forall && k == 0)
            kids.push_back(mutate_params(c, level, grow, rng));
        else
            kids.push_back(mutate_rec(c, level, grow, rng, ms));
    }
    return make_term(t->op(), std::move(ints), std::move(kids));
}

void collect(const TermPtr& t, std::vector<TermPtr>& out) {
    out.push_back(t);
    for (const auto& c : t->children()) collect(c, out);
}

TermPtr cross_rec(const TermPtr& a, const TermPtr& b, Rng& rng, const MutationSettings& ms) {
    PUSHPULL_EXPECTS(a->sort() == b->sort(), "crossover needs two terms of the same sort");
    if (a->op() == b->op()) {
        std::vector<int> ints(a->ints().size());
        for (std::size_t k = 0; k < ints.size(); ++k)
            ints[k] = static_cast<int>(std::lround((a->ints()[k] + static_cast<double>(b->ints()[k])) / 2.0));
        std::vector<TermPtr> kids;
        for (std::size_t k = 0; k < a->children().size(); ++k)
            kids.push_back(cross_rec(a->children()[k], b->children()[k], rng, ms));
        return make_term(a->op(), std::move(ints), std::move(kids));
    }
    const bool first = rng.bernoulli(0.5);
    const TermPtr& base = first ? a : b;
    const TermPtr& other = first ? b : a;
    std::vector<TermPtr> subs;
    collect(other, subs);

    // The other parent may hold a term of the same class further down.
    std::vector<TermPtr> same;
    for (const auto& s : subs)
        if (s->op() == base->op()) same.push_back(s);
    if (!same.empty()) return cross_rec(base, same[rng.index(same.size())], rng, ms);

    std::vector<TermPtr> kids;
    for (std::size_t k = 0; k < base->children().size(); ++k) {
        std::vector<TermPtr> fits;
        for (const auto& s : subs)
            if (slot_accepts(base->op(), k, *s)) fits.push_back(s);
        const auto& own = base->children()[k];
        if (fits.empty())
            kids.push_back(own);
        else
            kids.push_back(cross_rec(own, fits[rng.index(fits.size())], rng, ms));
    }
    return make_term(base->op(), base->ints(), std::move(kids));
}

}  // namespace

TermPtr mutate_then(const TermPtr& x, bool grow, int level, int y, int y2, Rng& rng, const MutationSettings& ms) {
    PUSHPULL_EXPECTS(x->op() == Op::then, "mutate_then needs a THEN term");
    PUSHPULL_EXPECTS(level >= 1 && level <= 3, "mutation level must be 1, 2 or 3");
    const TermPtr& optim = x->children()[0];
    const TermPtr& post = x->children()[1];
    auto recurse = [&] {
        auto a = mutate_rec(optim, level, grow, rng, ms);
        return make_then(std::move(a), mutate_rec(post, level, grow, rng, ms));
    };
    if ((grow && y2 > 20) || y > 90) {
        if (y < 10) return make_then(x, invent(Sort::optimize, sub_goal(*x) / 2, rng));
        if (y < 20) return make_then(optim, make_loop(rng.uniform_int(3, 10), post));
        if (y < 30) return make_then(make_loop(rng.uniform_int(3, 10), optim), post);
        return recurse();
    }
    if ((level == 3 && y < 50) || (level > 1 && y < 10)) return optim;
    if (level == 3 || (level > 1 && y < 20)) return post;
    return recurse();
}

TermPtr mutate(const TermPtr& t, int level, bool too_small, Rng& rng, const MutationSettings& ms) {
    PUSHPULL_EXPECTS(level >= 1 && level <= 3, "mutation level must be 1, 2 or 3");
    TermPtr out;
    for (int attempt = 0; attempt < kGuidedAttempts; ++attempt) {
        // Some draws pick the direction at random.
        const bool grow = rng.bernoulli(kIgnoreGuidance) ? rng.bernoulli(0.5) : too_small;
        out = fit_complexity(diet(mutate_rec(t, level, grow, rng, ms), ms.diet_bound), ms.goal);
        if (within_goal(estimate_complexity(*out), ms.goal)) break;
    }
    return out;
}

TermPtr crossover(const TermPtr& a, const TermPtr& b, Rng& rng, const MutationSettings& ms) {
    PUSHPULL_EXPECTS(a && b && a->sort() == b->sort(), "crossover needs two terms of the same sort");
    return fit_complexity(diet(cross_rec(a, b, rng, ms), ms.diet_bound), ms.goal);
}

}  // namespace pushpull
