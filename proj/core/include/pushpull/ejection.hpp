#pragma once

#include <optional>
#include <vector>

#include "pushpull/context.hpp"
#include "pushpull/solution.hpp"

namespace pushpull {

/// nodes[0] is the root; nodes[j] goes into the route of nodes[j+1], which is
/// ejected; the last node is free and goes into `routes.back()` without any
/// ejection (`routes.back() == route_slots()` opens a fresh route).
/// routes[j]/positions[j] tell where nodes[j] is inserted, positions being
/// relative to the route after its ejected node is taken out.
struct EjectionChain {
    std::vector<int> nodes;
    std::vector<int> routes;
    std::vector<int> positions;
    double cost = 0;  // change of total length, root insertion included

    int length() const noexcept { return static_cast<int>(nodes.size()) - 1; }
};

inline constexpr int kMaxChainLength = 3;

/// Breadth-first search for the cheapest ejection chain of at most
/// `max_length` ejections starting at an unassigned root. Each visited
/// (node, depth) keeps the cheapest cost and a parent pointer. Routes along a
/// chain are pairwise distinct. Ejection candidates are the nearest
/// neighbors of the node being inserted.
std::optional<EjectionChain> ejection_chain_search(const Solution& sol, int root, EvalContext& ctx,
                                                   int max_length = kMaxChainLength);

/// Commits a chain returned by ejection_chain_search on the same solution.
void apply_chain(Solution& sol, const EjectionChain& chain);

/// Node selector of CHAIN and TREE: 1 = uniform random, 2 = largest
/// removal gain among customers not yet picked in this call.
class NodeSelector {
  public:
    NodeSelector(const Solution& sol, int heuristic);
    /// Next customer to reinsert, or -1 when nothing is left.
    int next(const Solution& sol, EvalContext& ctx);

  private:
    int heuristic_;
    std::vector<char> picked_;
};

/// CHAIN(n, m): n times, pull a selected customer and put it back with the
/// best ejection chain; keep the result when the score does not worsen.
void chain_optimize(Solution& sol, EvalContext& ctx, int n, int m);

struct TreeParams {
    int fan_out = 3;       // routes tried per forced insertion
    int depth = 4;         // maximum tree depth
    int discrepancies = 2; // non-best route choices allowed per tree
};

struct TreeResult {
    Solution solution;
    double cost = 0;  // change of total length, root insertion included
    int nodes = 0;    // search nodes expanded
};

/// Customers to eject from `nodes` so that c fits: the smallest consecutive
/// block (up to three customers) that makes c insertable, cheapest first;
/// when capacity is the obstacle and no block works, the largest loads.
/// Returns the new route with c inserted and the ejected customers, or
/// nullopt.
struct ForcedInsertion {
    std::vector<int> route;
    std::vector<int> ejected;
    double delta = 0;  // new route length minus old
};
std::optional<ForcedInsertion> forced_insertion(const Instance& inst, const std::vector<int>& nodes, int c);

/// Stack-driven ejection-tree search from an unassigned root. Ejected
/// customers are reinserted freely into untouched routes when possible and
/// otherwise pushed on the stack. Returns the cheapest complete tree.
std::optional<TreeResult> ejection_tree_search(const Solution& sol, int root, EvalContext& ctx, const TreeParams& p);

/// TREE(n, m, k): as chain_optimize with ejection trees, k discrepancies.
void tree_optimize(Solution& sol, EvalContext& ctx, int n, int m, int k);

}  // namespace pushpull
