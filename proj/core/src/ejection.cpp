#include "pushpull/ejection.hpp"

#include <algorithm>
#include <map>

#include "pushpull/common.hpp"
#include "pushpull/objective.hpp"
#include "pushpull/primitives.hpp"

namespace pushpull {

namespace {

constexpr int kMaxBlock = 3;
constexpr int kMaxTreeNodes = 400;

std::vector<int> without(const std::vector<int>& nodes, int c) {
    std::vector<int> out;
    out.reserve(nodes.size());
    for (int v : nodes)
        if (v != c) out.push_back(v);
    return out;
}

// Length saved by taking c out of its route.
double ejection_gain(const Solution& sol, int c) {
    const Route& r = sol.route(sol.route_of(c));
    return r.size() == 1 ? r.length : removal_gain(sol, c);
}

struct Label {
    int node = 0;
    int depth = 0;
    int parent = -1;
    double cost = 0;
    int route = -1;     // route receiving the parent's node (= route of `node`)
    int position = 0;   // where the parent's node goes once `node` is out
};

}  // namespace

std::optional<EjectionChain> ejection_chain_search(const Solution& sol, int root, EvalContext& ctx, int max_length) {
    const auto& inst = sol.instance();
    PUSHPULL_EXPECTS(root >= 1 && root < inst.node_count() && !sol.assigned(root), "chain root must be unassigned");
    const bool fresh_allowed = can_open_route(sol);

    std::vector<Label> labels{Label{root, 0, -1, 0.0, -1, 0}};
    std::map<std::pair<int, int>, int> marker;  // (node, depth) -> label
    std::vector<int> frontier{0};

    std::optional<EjectionChain> best;
    std::vector<char> used(static_cast<std::size_t>(sol.route_slots()), 0);

    auto mark_path = [&](int l, char value) {
        for (; l >= 0 && labels[l].depth > 0; l = labels[l].parent) used[labels[l].route] = value;
    };

    auto finish = [&](int l, int route, int position, double cost) {
        EjectionChain chain;
        chain.cost = cost;
        std::vector<int> path;
        for (int k = l; k >= 0; k = labels[k].parent) path.push_back(k);
        std::reverse(path.begin(), path.end());
        for (std::size_t j = 0; j < path.size(); ++j) {
            chain.nodes.push_back(labels[path[j]].node);
            if (j + 1 < path.size()) {
                chain.routes.push_back(labels[path[j + 1]].route);
                chain.positions.push_back(labels[path[j + 1]].position);
            }
        }
        chain.routes.push_back(route);
        chain.positions.push_back(position);
        best = std::move(chain);
    };

    for (int depth = 0; !frontier.empty(); ++depth) {
        std::vector<int> next;
        for (int l : frontier) {
            const int a = labels[l].node;
            const double base = labels[l].cost;
            mark_path(l, 1);

            // Free insertion of a into a route off the chain.
            for (int r = 0; r < sol.route_slots(); ++r) {
                if (used[r] || sol.route(r).empty()) continue;
                ctx.count_insertions();
                if (auto p = best_insertion_in_route(inst, sol.route(r), a)) {
                    const double cost = base + p->delta;
                    if (!best || cost < best->cost) finish(l, r, p->position, cost);
                }
            }
            if (fresh_allowed) {
                const int alone[1] = {a};
                ctx.count_insertions();
                if (sequence_feasible(inst, alone)) {
                    const double cost = base + inst.dist(0, a) + inst.dist(a, 0);
                    if (!best || cost < best->cost) finish(l, sol.route_slots(), 0, cost);
                }
            }

            // Ejection edges a -> b.
            if (depth < max_length) {
                for (int b : inst.neighbors(a)) {
                    if (!sol.assigned(b)) continue;
                    const int r = sol.route_of(b);
                    if (used[r]) continue;
                    const auto rest = without(sol.route(r).nodes, b);
                    ctx.count_insertions();
                    const auto p = best_insertion_in_sequence(inst, rest, a);
                    if (!p) continue;
                    const double cost = base + p->delta - ejection_gain(sol, b);
                    const auto key = std::make_pair(b, depth + 1);
                    const auto it = marker.find(key);
                    if (it != marker.end()) {
                        Label& old = labels[it->second];
                        if (old.cost <= cost) continue;
                        old = Label{b, depth + 1, l, cost, r, p->position};
                        continue;
                    }
                    marker.emplace(key, static_cast<int>(labels.size()));
                    next.push_back(static_cast<int>(labels.size()));
                    labels.push_back(Label{b, depth + 1, l, cost, r, p->position});
                }
            }
            mark_path(l, 0);
        }
        frontier = std::move(next);
    }
    return best;
}

void apply_chain(Solution& sol, const EjectionChain& chain) {
    const int k = chain.length();
    PUSHPULL_EXPECTS(k >= 0 && chain.routes.size() == chain.nodes.size(), "malformed ejection chain");
    std::vector<std::pair<int, std::vector<int>>> edits;
    for (int j = 0; j < k; ++j) {
        const int r = chain.routes[j];
        auto seq = without(sol.route(r).nodes, chain.nodes[j + 1]);
        seq.insert(seq.begin() + chain.positions[j], chain.nodes[j]);
        edits.emplace_back(r, std::move(seq));
    }
    const int tr = chain.routes[k];
    const bool fresh = tr == sol.route_slots();
    if (!fresh) {
        auto seq = sol.route(tr).nodes;
        seq.insert(seq.begin() + chain.positions[k], chain.nodes[k]);
        edits.emplace_back(tr, std::move(seq));
    }
    sol.rewrite(edits);
    if (fresh) sol.open_route({chain.nodes[k]});
}

NodeSelector::NodeSelector(const Solution& sol, int heuristic)
    : heuristic_(heuristic), picked_(static_cast<std::size_t>(sol.instance().node_count()), 0) {
    PUSHPULL_EXPECTS(heuristic == 1 || heuristic == 2, "selector must be 1 or 2");
}

int NodeSelector::next(const Solution& sol, EvalContext& ctx) {
    const int n = sol.instance().node_count();
    if (heuristic_ == 1) {
        std::vector<int> pool;
        for (int c = 1; c < n; ++c)
            if (sol.assigned(c)) pool.push_back(c);
        if (pool.empty()) return -1;
        return pool[ctx.rng.index(pool.size())];
    }
    int best = -1;
    double best_gain = -kInfinity;
    for (int c = 1; c < n; ++c) {
        if (!sol.assigned(c) || picked_[c]) continue;
        const double g = ejection_gain(sol, c);
        if (g > best_gain) {
            best_gain = g;
            best = c;
        }
    }
    if (best >= 0) picked_[best] = 1;
    return best;
}

namespace {

template <class Reinsert>
void reinsert_loop(Solution& sol, EvalContext& ctx, int n, int m, std::string_view op, Reinsert reinsert) {
    PUSHPULL_EXPECTS(n >= 0, "repetition count must be non-negative");
    NodeSelector selector(sol, m);
    for (int t = 0; t < n; ++t) {
        const int x = selector.next(sol, ctx);
        if (x < 0) break;
        const Score before = score(sol, ctx);
        Solution trial = sol;
        pull(trial, x);
        if (!reinsert(trial, x)) continue;
        trial.drop_empty_routes();
        const Score after = score(trial, ctx);
        if (after.no_worse_than(before)) {
            sol = std::move(trial);
            if (ctx.on_step) ctx.on_step(StepEvent{op, before.value, after.value});
        }
    }
}

}  // namespace

void chain_optimize(Solution& sol, EvalContext& ctx, int n, int m) {
    reinsert_loop(sol, ctx, n, m, "chain", [&](Solution& trial, int x) {
        const auto chain = ejection_chain_search(trial, x, ctx);
        if (!chain) return false;
        apply_chain(trial, *chain);
        return true;
    });
}

std::optional<ForcedInsertion> forced_insertion(const Instance& inst, const std::vector<int>& nodes, int c) {
    const double old_length = sequence_length(inst, nodes);
    const int n = static_cast<int>(nodes.size());
    std::optional<ForcedInsertion> best;
    for (int size = 0; size <= std::min(kMaxBlock, n); ++size) {
        for (int start = 0; start + size <= n; ++start) {
            std::vector<int> rest(nodes.begin(), nodes.begin() + start);
            rest.insert(rest.end(), nodes.begin() + start + size, nodes.end());
            const auto p = best_insertion_in_sequence(inst, rest, c);
            if (!p) {
                if (size == 0) break;
                continue;
            }
            const double delta = sequence_length(inst, rest) + p->delta - old_length;
            if (best && delta >= best->delta) {
                if (size == 0) break;
                continue;
            }
            rest.insert(rest.begin() + p->position, c);
            best = ForcedInsertion{std::move(rest), std::vector<int>(nodes.begin() + start, nodes.begin() + start + size),
                                   delta};
            if (size == 0) break;
        }
        if (best) return best;
    }

    double load = inst.load(c);
    for (int v : nodes) load += inst.load(v);
    if (load <= inst.capacity() + kEpsilon) return std::nullopt;
    std::vector<int> by_load = nodes;
    std::stable_sort(by_load.begin(), by_load.end(), [&](int a, int b) { return inst.load(a) > inst.load(b); });
    std::vector<int> ejected;
    for (int v : by_load) {
        if (load <= inst.capacity() + kEpsilon) break;
        ejected.push_back(v);
        load -= inst.load(v);
    }
    std::vector<int> rest;
    for (int v : nodes)
        if (std::find(ejected.begin(), ejected.end(), v) == ejected.end()) rest.push_back(v);
    const auto p = best_insertion_in_sequence(inst, rest, c);
    if (!p) return std::nullopt;
    const double delta = sequence_length(inst, rest) + p->delta - old_length;
    rest.insert(rest.begin() + p->position, c);
    return ForcedInsertion{std::move(rest), std::move(ejected), delta};
}

namespace {

struct TreeState {
    Solution sol;
    std::vector<std::pair<int, int>> stack;  // (customer, depth)
    std::vector<char> touched;
    int discrepancies = 0;
    double cost = 0;
};

class TreeSearch {
  public:
    TreeSearch(EvalContext& ctx, const TreeParams& p) : ctx_(ctx), p_(p) {}

    void expand(TreeState state) {
        if (++expanded_ > kMaxTreeNodes) return;
        if (state.stack.empty()) {
            if (!best_ || state.cost < best_->cost) best_ = TreeResult{std::move(state.sol), state.cost, 0};
            return;
        }
        const auto& inst = state.sol.instance();
        const auto [a, depth] = state.stack.back();
        state.stack.pop_back();

        struct Option {
            int route;
            std::optional<ForcedInsertion> forced;
            double delta;
        };
        std::vector<Option> options;
        std::vector<int> routes;
        for (int y : inst.neighbors(a)) {
            if (!state.sol.assigned(y)) continue;
            const int r = state.sol.route_of(y);
            if (is_touched(state, r) || std::find(routes.begin(), routes.end(), r) != routes.end()) continue;
            routes.push_back(r);
        }
        std::sort(routes.begin(), routes.end());
        for (int r : routes) {
            ctx_.count_insertions();
            if (auto f = forced_insertion(inst, state.sol.route(r).nodes, a)) {
                const double d = f->delta;
                options.push_back(Option{r, std::move(f), d});
            }
        }
        if (can_open_route(state.sol)) {
            const int alone[1] = {a};
            ctx_.count_insertions();
            if (sequence_feasible(inst, alone))
                options.push_back(Option{state.sol.route_slots(), std::nullopt, inst.dist(0, a) + inst.dist(a, 0)});
        }
        std::stable_sort(options.begin(), options.end(), [](const Option& x, const Option& y) { return x.delta < y.delta; });
        if (static_cast<int>(options.size()) > p_.fan_out) options.resize(static_cast<std::size_t>(p_.fan_out));

        for (std::size_t i = 0; i < options.size(); ++i) {
            const int disc = state.discrepancies + (i > 0 ? 1 : 0);
            if (disc > p_.discrepancies) break;
            TreeState child = state;
            child.discrepancies = disc;
            child.cost += options[i].delta;
            const Option& opt = options[i];
            std::vector<int> ejected;
            if (opt.forced) {
                child.sol.rewrite(opt.route, opt.forced->route);
                ejected = opt.forced->ejected;
            } else {
                child.sol.open_route({a});
            }
            touch(child, opt.route);
            bool alive = true;
            for (int e : ejected) {
                if (place_freely(child, e)) continue;
                if (depth + 1 >= p_.depth) {
                    alive = false;
                    break;
                }
                child.stack.emplace_back(e, depth + 1);
            }
            if (alive) expand(std::move(child));
        }
    }

    std::optional<TreeResult> result() {
        if (best_) best_->nodes = expanded_;
        return std::move(best_);
    }

  private:
    static bool is_touched(const TreeState& s, int r) {
        return r < static_cast<int>(s.touched.size()) && s.touched[static_cast<std::size_t>(r)];
    }
    static void touch(TreeState& s, int r) {
        if (r >= static_cast<int>(s.touched.size())) s.touched.resize(static_cast<std::size_t>(r) + 1, 0);
        s.touched[static_cast<std::size_t>(r)] = 1;
    }

    bool place_freely(TreeState& s, int e) {
        const auto& inst = s.sol.instance();
        InsertionPoint best;
        for (int r = 0; r < s.sol.route_slots(); ++r) {
            if (is_touched(s, r) || s.sol.route(r).empty()) continue;
            ctx_.count_insertions();
            if (auto p = best_insertion_in_route(inst, s.sol.route(r), e); p && p->delta < best.delta) {
                best = *p;
                best.route = r;
            }
        }
        if (can_open_route(s.sol)) {
            const int alone[1] = {e};
            const double d = inst.dist(0, e) + inst.dist(e, 0);
            if (d < best.delta && sequence_feasible(inst, alone)) best = InsertionPoint{s.sol.route_slots(), 0, d};
        }
        if (!best.valid()) return false;
        s.sol.insert(e, best.route, best.position);
        touch(s, best.route);
        s.cost += best.delta;
        return true;
    }

    EvalContext& ctx_;
    const TreeParams& p_;
    std::optional<TreeResult> best_;
    int expanded_ = 0;
};

}  // namespace

std::optional<TreeResult> ejection_tree_search(const Solution& sol, int root, EvalContext& ctx, const TreeParams& p) {
    PUSHPULL_EXPECTS(root >= 1 && root < sol.instance().node_count() && !sol.assigned(root), "tree root must be unassigned");
    PUSHPULL_EXPECTS(p.fan_out >= 1 && p.depth >= 1 && p.discrepancies >= 0, "invalid tree parameters");
    TreeSearch search(ctx, p);
    search.expand(TreeState{sol, {{root, 0}}, {}, 0, 0.0});
    return search.result();
}

void tree_optimize(Solution& sol, EvalContext& ctx, int n, int m, int k) {
    const TreeParams params{3, 4, k};
    reinsert_loop(sol, ctx, n, m, "tree", [&](Solution& trial, int x) {
        auto tree = ejection_tree_search(trial, x, ctx, params);
        if (!tree) return false;
        trial = std::move(tree->solution);
        return true;
    });
}

}  // namespace pushpull
