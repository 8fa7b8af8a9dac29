#include "pushpull/local_opt.hpp"

#include <algorithm>

#include "pushpull/common.hpp"
#include "pushpull/primitives.hpp"

namespace pushpull {

namespace {

constexpr int kMaxChain = 3;
constexpr int kMaxRounds = 200;

bool improving(double delta) { return delta < -kEpsilon; }

// Commits two rewritten routes, then drops any that ended up empty.
MoveOutcome commit_pair(Solution& sol, int a, std::vector<int> na, int b, std::vector<int> nb, double delta) {
    const std::pair<int, std::vector<int>> edits[2] = {{a, std::move(na)}, {b, std::move(nb)}};
    sol.rewrite(edits);
    sol.drop_empty_routes();
    return MoveOutcome{true, delta, {a, b}};
}

double edge(const Instance& inst, const Route& r, int k) { return inst.dist(r.at(k - 1), r.at(k)); }

// Delta of moving the chain [first, last] of `from` after position `anchor`
// of `to` (orientation kept).
double transfer_delta(const Instance& inst, const Route& from, int first, int last, const Route& to, int anchor) {
    const int p = from.at(first - 1);
    const int q = from.at(last + 1);
    const int s0 = from.nodes[first];
    const int s1 = from.nodes[last];
    const double removed = inst.dist(p, s0) + inst.dist(s1, q);
    const double restored = inst.dist(p, q);
    const int u = to.at(anchor);
    const int v = to.at(anchor + 1);
    return restored - removed + inst.dist(u, s0) + inst.dist(s1, v) - inst.dist(u, v);
}

bool chain_fits(const Instance& inst, const Route& from, int first, int last, const Route& to) {
    double load = to.load;
    for (int k = first; k <= last; ++k) load += inst.load(from.nodes[k]);
    return load <= inst.capacity() + kEpsilon;
}

std::vector<int> with_chain(const Route& from, int first, int last, const Route& to, int anchor) {
    std::vector<int> out(to.nodes.begin(), to.nodes.begin() + (anchor + 1));
    out.insert(out.end(), from.nodes.begin() + first, from.nodes.begin() + last + 1);
    out.insert(out.end(), to.nodes.begin() + (anchor + 1), to.nodes.end());
    return out;
}

std::vector<int> without_chain(const Route& from, int first, int last) {
    std::vector<int> out(from.nodes.begin(), from.nodes.begin() + first);
    out.insert(out.end(), from.nodes.begin() + last + 1, from.nodes.end());
    return out;
}

}  // namespace

MoveOutcome two_opt_exchange(Solution& sol, int route_a, int cut_a, int route_b, int cut_b) {
    PUSHPULL_EXPECTS(route_a != route_b, "exchange needs two distinct routes");
    const auto& inst = sol.instance();
    const Route& a = sol.route(route_a);
    const Route& b = sol.route(route_b);
    PUSHPULL_EXPECTS(cut_a >= 0 && cut_a <= a.size() && cut_b >= 0 && cut_b <= b.size(), "cut out of range");

    const int a0 = a.at(cut_a - 1), a1 = a.at(cut_a);
    const int b0 = b.at(cut_b - 1), b1 = b.at(cut_b);
    const double delta = inst.dist(a0, b1) + inst.dist(b0, a1) - inst.dist(a0, a1) - inst.dist(b0, b1);
    if (!improving(delta)) return {};

    std::vector<int> na(a.nodes.begin(), a.nodes.begin() + cut_a);
    na.insert(na.end(), b.nodes.begin() + cut_b, b.nodes.end());
    std::vector<int> nb(b.nodes.begin(), b.nodes.begin() + cut_b);
    nb.insert(nb.end(), a.nodes.begin() + cut_a, a.nodes.end());
    if (!sequence_feasible(inst, na) || !sequence_feasible(inst, nb)) return {};
    return commit_pair(sol, route_a, std::move(na), route_b, std::move(nb), delta);
}

MoveOutcome chain_transfer(Solution& sol, int from, int first, int last, int to, int anchor) {
    PUSHPULL_EXPECTS(from != to, "transfer needs two distinct routes");
    const auto& inst = sol.instance();
    const Route& src = sol.route(from);
    const Route& dst = sol.route(to);
    PUSHPULL_EXPECTS(first >= 0 && first <= last && last < src.size(), "chain out of range");
    PUSHPULL_EXPECTS(anchor >= -1 && anchor < dst.size(), "anchor out of range");

    const double delta = transfer_delta(inst, src, first, last, dst, anchor);
    if (!improving(delta) || !chain_fits(inst, src, first, last, dst)) return {};
    auto nd = with_chain(src, first, last, dst, anchor);
    if (!sequence_feasible(inst, nd)) return {};
    auto ns = without_chain(src, first, last);
    if (!sequence_feasible(inst, ns)) return {};
    return commit_pair(sol, to, std::move(nd), from, std::move(ns), delta);
}

MoveOutcome node_transfer(Solution& sol, int y, int to, int anchor) {
    PUSHPULL_EXPECTS(sol.assigned(y), "node transfer needs an assigned customer");
    const int pos = sol.position_of(y);
    return chain_transfer(sol, sol.route_of(y), pos, pos, to, anchor);
}

MoveOutcome intra_route_3opt(Solution& sol, int route) {
    const auto& inst = sol.instance();
    MoveOutcome total;
    for (bool again = true; again;) {
        again = false;
        const Route& r = sol.route(route);
        const int n = r.size();

        // Segment reversal [i, j].
        for (int i = 0; i < n && !again; ++i) {
            for (int j = i + 1; j < n && !again; ++j) {
                const double delta = inst.dist(r.at(i - 1), r.at(j)) + inst.dist(r.at(i), r.at(j + 1)) -
                                     edge(inst, r, i) - edge(inst, r, j + 1);
                if (!improving(delta)) continue;
                std::vector<int> trial = r.nodes;
                std::reverse(trial.begin() + i, trial.begin() + j + 1);
                if (!sequence_feasible(inst, trial)) continue;
                sol.rewrite(route, std::move(trial));
                total.delta += delta;
                again = true;
            }
        }
        if (again) continue;

        // Segment move [i, i+len-1] into another gap, either orientation.
        for (int len = 1; len <= kMaxChain && !again; ++len) {
            for (int i = 0; i + len <= n && !again; ++i) {
                const int s0 = r.nodes[i];
                const int s1 = r.nodes[i + len - 1];
                const int p = r.at(i - 1);
                const int q = r.at(i + len);
                const double cut = inst.dist(p, q) - inst.dist(p, s0) - inst.dist(s1, q);
                std::vector<int> rest = without_chain(r, i, i + len - 1);
                const int m = static_cast<int>(rest.size());
                for (int g = 0; g <= m && !again; ++g) {
                    const int u = g == 0 ? 0 : rest[g - 1];
                    const int v = g == m ? 0 : rest[g];
                    for (int rev = 0; rev < 2 && !again; ++rev) {
                        if (g == i && rev == 0) continue;  // identity
                        if (len == 1 && rev == 1) continue;
                        const int head = rev ? s1 : s0;
                        const int tail = rev ? s0 : s1;
                        const double delta = cut + inst.dist(u, head) + inst.dist(tail, v) - inst.dist(u, v);
                        if (!improving(delta)) continue;
                        std::vector<int> trial(rest.begin(), rest.begin() + g);
                        if (rev)
                            trial.insert(trial.end(), r.nodes.rbegin() + (n - i - len), r.nodes.rbegin() + (n - i));
                        else
                            trial.insert(trial.end(), r.nodes.begin() + i, r.nodes.begin() + i + len);
                        trial.insert(trial.end(), rest.begin() + g, rest.end());
                        if (!sequence_feasible(inst, trial)) continue;
                        sol.rewrite(route, std::move(trial));
                        total.delta += delta;
                        again = true;
                    }
                }
            }
        }
    }
    if (total.delta < 0) {
        total.applied = true;
        total.routes_touched = {route};
    }
    return total;
}

MoveOutcome greedy_route_optimization(Solution& sol, int route) {
    const auto& inst = sol.instance();
    if (sol.route(route).empty()) return {};
    const int anchor_node = sol.route(route).nodes.front();

    std::vector<int> candidates;
    for (int v : sol.route(route).nodes)
        for (int y : inst.neighbors(v)) candidates.push_back(y);
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    MoveOutcome total;
    const int original = route;
    for (int y : candidates) {
        const int r = sol.route_of(anchor_node);
        if (!sol.assigned(y) || sol.route_of(y) == r) continue;
        const auto ins = best_insertion_in_route(inst, sol.route(r), y);
        if (!ins) continue;
        const int src = sol.route_of(y);
        const double gain = sol.route(src).size() == 1 ? sol.route(src).length : removal_gain(sol, y);
        const double delta = ins->delta - gain;
        if (!improving(delta)) continue;
        sol.remove(y);
        sol.insert(y, sol.route_of(anchor_node), ins->position);
        total.delta += delta;
        total.routes_touched.push_back(src);
    }
    if (total.delta < 0) {
        total.applied = true;
        total.routes_touched.insert(total.routes_touched.begin(), original);
    }
    return total;
}

std::optional<TransferMove> best_chain_transfer(const Solution& sol, int max_chain) {
    const auto& inst = sol.instance();
    std::optional<TransferMove> best;
    for (int from = 0; from < sol.route_slots(); ++from) {
        const Route& src = sol.route(from);
        for (int first = 0; first < src.size(); ++first) {
            for (int last = first; last < src.size() && last - first < max_chain; ++last) {
                for (int to = 0; to < sol.route_slots(); ++to) {
                    if (to == from) continue;
                    const Route& dst = sol.route(to);
                    if (dst.empty() || !chain_fits(inst, src, first, last, dst)) continue;
                    for (int anchor = -1; anchor < dst.size(); ++anchor) {
                        const double delta = transfer_delta(inst, src, first, last, dst, anchor);
                        if (best && delta >= best->delta) continue;
                        if (!sequence_feasible(inst, with_chain(src, first, last, dst, anchor))) continue;
                        if (!sequence_feasible(inst, without_chain(src, first, last))) continue;
                        best = TransferMove{from, first, last, to, anchor, delta};
                    }
                }
            }
        }
    }
    return best;
}

namespace {

// The four 2-edge exchanges linking u and y (or their successors).
bool try_exchange(Solution& sol, int u, int y) {
    const int ru = sol.route_of(u), ry = sol.route_of(y);
    const int pu = sol.position_of(u), py = sol.position_of(y);
    const int cuts[4][2] = {{pu + 1, py}, {pu, py + 1}, {pu + 1, py + 1}, {pu, py}};
    for (const auto& c : cuts)
        if (two_opt_exchange(sol, ru, c[0], ry, c[1]).applied) return true;
    return false;
}

// Chains of up to three customers containing y, moved next to u.
bool try_transfer(Solution& sol, int u, int y) {
    const int ru = sol.route_of(u), ry = sol.route_of(y);
    const int pu = sol.position_of(u), py = sol.position_of(y);
    const int ny = sol.route(ry).size();
    for (int len = 1; len <= kMaxChain; ++len) {
        for (int first = std::max(0, py - len + 1); first <= py; ++first) {
            const int last = first + len - 1;
            if (last >= ny) break;
            if (chain_transfer(sol, ry, first, last, ru, pu).applied) return true;
            if (chain_transfer(sol, ry, first, last, ru, pu - 1).applied) return true;
        }
    }
    return false;
}

void polish(Solution& sol, int member) {
    if (sol.assigned(member)) intra_route_3opt(sol, sol.route_of(member));
}

void regroup(Solution& sol, int member) {
    if (sol.assigned(member)) greedy_route_optimization(sol, sol.route_of(member));
}

}  // namespace

void improve_around(Solution& sol, int u, int level, EvalContext& ctx) {
    if (level <= 0 || !sol.assigned(u)) return;
    const auto& inst = sol.instance();
    const double before = sol.total_length();
    for (int round = 0; round < kMaxRounds; ++round) {
        bool moved = false;
        for (int y : inst.neighbors(u)) {
            if (!sol.assigned(y) || sol.route_of(y) == sol.route_of(u)) continue;
            // Remember one member of y's route: route ids shift on drops.
            const int donor = y;
            if (try_exchange(sol, u, y)) {
                polish(sol, u);
                polish(sol, donor);
                if (level >= 3) regroup(sol, donor);
                moved = true;
            } else if (level >= 2) {
                // A neighbor of y left behind in the donor route, if any.
                const int ry = sol.route_of(y);
                const int stay_left = sol.route(ry).at(sol.position_of(y) - 3);
                const int stay_right = sol.route(ry).at(sol.position_of(y) + 3);
                if (try_transfer(sol, u, y)) {
                    polish(sol, u);
                    if (level >= 3) {
                        if (stay_left > 0) regroup(sol, stay_left);
                        if (stay_right > 0) regroup(sol, stay_right);
                    }
                    moved = true;
                }
            }
            if (moved) break;
        }
        if (!moved) break;
    }
    if (level >= 3) regroup(sol, u);
    if (ctx.on_step) ctx.on_step(StepEvent{"ilo", before, sol.total_length()});
}

}  // namespace pushpull
