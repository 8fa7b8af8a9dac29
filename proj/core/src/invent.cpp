#include "pushpull/invent.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace pushpull {

namespace {

constexpr int kAttempts = 50;

struct Range {
    int lo;
    int hi;
};

// Ranges used when inventing and when re-solving counts.
Range count_range(Op op) {
    switch (op) {
        case Op::chain: return {1, 100};
        case Op::tree: return {1, 50};
        case Op::lns: return {2, 15};
        case Op::loop: return {1, 100};
        default: return {0, 0};
    }
}

int draw(Rng& rng, Range r) { return rng.uniform_int(r.lo, r.hi); }

int pick(Rng& rng, std::initializer_list<double> weights) {
    double total = 0;
    for (double w : weights) total += w;
    double u = rng.uniform01() * total;
    int k = 0;
    for (double w : weights) {
        if (u < w) return k;
        u -= w;
        ++k;
    }
    return k - 1;
}

TermPtr invent_lds(Rng& rng) {
    const int i = rng.uniform_int(0, 4);
    const int n = rng.uniform_int(0, 8);
    return make_lds(i, n, rng.uniform_int(0, 1000));
}

// Replaces the count parameter of the node with preorder index `target`.
TermPtr with_count(const TermPtr& t, int& index, int target, int value) {
    const int mine = index++;
    std::vector<int> ints = t->ints();
    if (mine == target) ints[0] = value;
    std::vector<TermPtr> kids;
    bool changed = mine == target;
    for (const auto& c : t->children()) {
        kids.push_back(with_count(c, index, target, value));
        changed = changed || kids.back() != c;
    }
    if (!changed) return t;
    return make_term(t->op(), std::move(ints), std::move(kids));
}

void collect_counts(const Term& t, int& index, std::vector<std::pair<int, Op>>& out) {
    const int mine = index++;
    if (count_range(t.op()).hi > 0) out.emplace_back(mine, t.op());
    for (const auto& c : t.children()) collect_counts(*c, index, out);
}

}  // namespace

bool within_goal(double complexity, double goal) noexcept {
    return complexity >= goal / 2 && complexity <= 1.5 * goal;
}

TermPtr invent_free(Sort sort, Rng& rng, int depth) {
    const double decay = std::pow(0.5, depth);
    if (sort == Sort::build) {
        switch (pick(rng, {15, 35, 40 * decay, 10 * decay})) {
            case 0: return make_insert(rng.uniform_int(0, 4));
            case 1: return invent_lds(rng);
            case 2: {
                auto b = invent_free(Sort::build, rng, depth + 1);
                return make_do(std::move(b), invent_free(Sort::optimize, rng, depth + 1));
            }
            default: {
                auto l = invent_lds(rng);
                return make_forall(std::move(l), invent_free(Sort::optimize, rng, depth + 1));
            }
        }
    }
    switch (pick(rng, {20, 15, 30, 20 * decay, 15 * decay})) {
        case 0: {
            const int n = draw(rng, count_range(Op::chain));
            return make_chain(n, rng.uniform_int(1, 2));
        }
        case 1: {
            const int n = draw(rng, count_range(Op::tree));
            const int m = rng.uniform_int(1, 2);
            return make_tree(n, m, rng.uniform_int(0, 3));
        }
        case 2: {
            const int n = draw(rng, count_range(Op::lns));
            const int h = rng.uniform_int(1, 30);
            return make_lns(n, h, invent_free(Sort::build, rng, depth + 1));
        }
        case 3: {
            const int n = draw(rng, count_range(Op::loop));
            return make_loop(n, invent_free(Sort::optimize, rng, depth + 1));
        }
        default: {
            auto a = invent_free(Sort::optimize, rng, depth + 1);
            return make_then(std::move(a), invent_free(Sort::optimize, rng, depth + 1));
        }
    }
}

TermPtr fit_complexity(const TermPtr& t, double goal) {
    if (within_goal(estimate_complexity(*t), goal)) return t;
    std::vector<std::pair<int, Op>> counts;
    int index = 0;
    collect_counts(*t, index, counts);
    for (const auto& [node, op] : counts) {
        const Range r = count_range(op);
        int i0 = 0, i1 = 0;
        // Complexity is affine in any single count.
        const double c_lo = estimate_complexity(*with_count(t, i0, node, r.lo));
        const double c_hi = estimate_complexity(*with_count(t, i1, node, r.hi));
        const double slope = (c_hi - c_lo) / (r.hi - r.lo);
        if (slope <= 0) continue;
        const double ideal = r.lo + (goal - c_lo) / slope;
        const int value = static_cast<int>(std::clamp(std::lround(ideal), static_cast<long>(r.lo), static_cast<long>(r.hi)));
        int k = 0;
        auto candidate = with_count(t, k, node, value);
        if (within_goal(estimate_complexity(*candidate), goal)) return candidate;
    }
    return t;
}

TermPtr invent_direct(Sort sort, double goal) {
    goal = std::max(goal, 1000.0);
    if (sort == Sort::build) {
        const int n = static_cast<int>(std::lround(std::log2(goal / 1000.0)));
        if (n <= 8) return make_lds(3, std::max(n, 0), 100);
        const double rest = goal - 256000.0;
        return make_do(make_lds(3, 8, 100), invent_direct(Sort::optimize, rest));
    }
    const long total = std::max(1L, std::lround(goal / 1500.0));
    if (total <= 100) return make_chain(static_cast<int>(total), 2);
    const long loops = (total + 99) / 100;
    const long per = std::lround(static_cast<double>(total) / static_cast<double>(loops));
    return make_loop(static_cast<int>(std::min(loops, 100000L)), make_chain(static_cast<int>(per), 2));
}

TermPtr invent(Sort sort, double goal, Rng& rng) {
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
        auto t = fit_complexity(invent_free(sort, rng), goal);
        if (within_goal(estimate_complexity(*t), goal)) return t;
    }
    return invent_direct(sort, goal);
}

}  // namespace pushpull
