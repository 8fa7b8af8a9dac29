#include "pushpull/primitives.hpp"

#include <algorithm>
#include <vector>

namespace pushpull {

std::optional<InsertionPoint> best_insertion_in_route(const Instance& inst, const Route& route, int c) {
    if (route.load + inst.load(c) > inst.capacity() + kEpsilon) return std::nullopt;
    const int n = route.size();
    const double ready = inst.ready(c);
    const double due = inst.due(c);
    const double service = inst.service(c);
    std::optional<InsertionPoint> best;
    int prev = 0;
    double leave = inst.ready(0);
    for (int p = 0; p <= n; ++p) {
        const int next = p == n ? 0 : route.nodes[p];
        const double arrive = leave + inst.dist(prev, c);
        const double t = std::max(ready, arrive);
        if (t > due + kEpsilon) break;  // later positions only start later
        const double next_latest = p == n ? inst.due(0) : route.latest[p];
        if (t + service + inst.dist(c, next) <= next_latest + kEpsilon) {
            const double delta = inst.dist(prev, c) + inst.dist(c, next) - inst.dist(prev, next);
            if (!best || delta < best->delta) best = InsertionPoint{0, p, delta};
        }
        if (p < n) {
            leave = route.start[p] + inst.service(next);
            prev = next;
        }
    }
    return best;
}

std::optional<InsertionPoint> best_insertion_in_sequence(const Instance& inst, std::span<const int> nodes, int c) {
    double load = inst.load(c);
    for (int v : nodes) load += inst.load(v);
    if (load > inst.capacity() + kEpsilon) return std::nullopt;
    std::vector<int> trial(nodes.size() + 1);
    std::optional<InsertionPoint> best;
    const int n = static_cast<int>(nodes.size());
    for (int p = 0; p <= n; ++p) {
        const int prev = p == 0 ? 0 : nodes[p - 1];
        const int next = p == n ? 0 : nodes[p];
        const double delta = inst.dist(prev, c) + inst.dist(c, next) - inst.dist(prev, next);
        if (best && delta >= best->delta) continue;
        std::copy(nodes.begin(), nodes.begin() + p, trial.begin());
        trial[p] = c;
        std::copy(nodes.begin() + p, nodes.end(), trial.begin() + p + 1);
        if (sequence_feasible(inst, trial)) best = InsertionPoint{0, p, delta};
    }
    return best;
}

bool can_open_route(const Solution& sol) noexcept { return sol.route_count() < sol.instance().fleet_limit(); }

namespace {

std::optional<InsertionPoint> fresh_route_insertion(const Instance& inst, int c) {
    const int seq[1] = {c};
    if (!sequence_feasible(inst, seq)) return std::nullopt;
    return InsertionPoint{0, 0, inst.dist(0, c) + inst.dist(c, 0)};
}

void offer(InsertionChoice& choice, const InsertionPoint& p) {
    if (p.delta < choice.best.delta) {
        if (choice.best.valid()) choice.second = choice.best;
        choice.best = p;
    } else if (p.delta < choice.second.delta) {
        choice.second = p;
    }
}

}  // namespace

InsertionChoice evaluate_insertion(const Solution& sol, int c, EvalContext& ctx) {
    const auto& inst = sol.instance();
    InsertionChoice choice;
    const int slots = sol.route_slots();

    std::vector<int> candidates;
    candidates.reserve(static_cast<std::size_t>(slots));
    for (int r = 0; r < slots; ++r)
        if (!sol.route(r).empty()) candidates.push_back(r);
    if (ctx.candidate_route_limit > 0 && static_cast<int>(candidates.size()) > ctx.candidate_route_limit) {
        std::vector<double> closeness(static_cast<std::size_t>(slots), kInfinity);
        for (int r : candidates)
            for (int v : sol.route(r).nodes) closeness[r] = std::min(closeness[r], inst.dist(c, v));
        std::stable_sort(candidates.begin(), candidates.end(), [&](int a, int b) { return closeness[a] < closeness[b]; });
        candidates.resize(static_cast<std::size_t>(ctx.candidate_route_limit));
        std::sort(candidates.begin(), candidates.end());
    }

    for (int r : candidates) {
        ctx.count_insertions();
        if (auto p = best_insertion_in_route(inst, sol.route(r), c)) {
            p->route = r;
            offer(choice, *p);
        }
    }
    if (can_open_route(sol)) {
        ctx.count_insertions();
        if (auto p = fresh_route_insertion(inst, c)) {
            p->route = slots;
            offer(choice, *p);
        }
    }
    return choice;
}

void apply_insertion(Solution& sol, int c, const InsertionPoint& point) {
    PUSHPULL_EXPECTS(point.valid(), "invalid insertion point");
    sol.insert(c, point.route, point.position);
}

std::optional<PushReport> push(Solution& sol, int c, EvalContext& ctx) {
    PUSHPULL_EXPECTS(c >= 1 && c < sol.instance().node_count() && !sol.assigned(c), "push needs an unassigned customer");
    const auto choice = evaluate_insertion(sol, c, ctx);
    if (!choice.best.valid()) return std::nullopt;
    apply_insertion(sol, c, choice.best);
    return PushReport{sol.route_of(c), choice.best.position, choice.best.delta, choice.second.delta};
}

double removal_gain(const Solution& sol, int c) noexcept {
    const auto& inst = sol.instance();
    const int prev = sol.predecessor(c);
    const int next = sol.successor(c);
    return inst.dist(prev, c) + inst.dist(c, next) - inst.dist(prev, next);
}

PullReport pull(Solution& sol, int c) {
    PUSHPULL_EXPECTS(c >= 1 && c < sol.instance().node_count() && sol.assigned(c), "pull needs an assigned customer");
    const double before = sol.route(sol.route_of(c)).length;
    const bool last = sol.route(sol.route_of(c)).size() == 1;
    const double gain = last ? before : removal_gain(sol, c);
    sol.remove(c);
    return PullReport{gain};
}

}  // namespace pushpull
