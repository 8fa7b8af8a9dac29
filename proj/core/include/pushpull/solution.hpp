#pragma once

#include <span>
#include <utility>
#include <vector>

#include "pushpull/instance.hpp"

namespace pushpull {

/// One vehicle tour. The depot is implicit at both ends.
///
/// `start[k]` is the earliest service start of `nodes[k]` (waiting allowed),
/// `latest[k]` the latest start that keeps the rest of the route on time,
/// including the return to the depot before its due date.
struct Route {
    std::vector<int> nodes;
    std::vector<double> start;
    std::vector<double> latest;
    double load = 0;
    double length = 0;

    bool empty() const noexcept { return nodes.empty(); }
    int size() const noexcept { return static_cast<int>(nodes.size()); }
    /// Node at position k, with the depot standing in at -1 and size().
    int at(int k) const noexcept { return k < 0 || k >= size() ? 0 : nodes[static_cast<std::size_t>(k)]; }
    /// Arrival time back at the depot.
    double end_time(const Instance& inst) const noexcept;
    bool feasible(const Instance& inst) const noexcept;
    void recompute(const Instance& inst);
};

/// Length of a depot-to-depot sequence.
double sequence_length(const Instance& inst, std::span<const int> nodes) noexcept;
/// Capacity and time-window feasibility of a depot-to-depot sequence, by full
/// forward propagation of start times.
bool sequence_feasible(const Instance& inst, std::span<const int> nodes) noexcept;

/// Routes plus the pool of unassigned customers.
///
/// Every customer is either on exactly one route or unassigned; the class
/// enforces that on every edit. It does not enforce capacity or windows;
/// callers check feasibility before committing and `validate` audits it.
class Solution {
  public:
    explicit Solution(const Instance& inst);

    const Instance& instance() const noexcept { return *inst_; }
    const std::vector<Route>& routes() const noexcept { return routes_; }
    const Route& route(int r) const { return routes_[static_cast<std::size_t>(r)]; }
    int route_slots() const noexcept { return static_cast<int>(routes_.size()); }
    /// Number of non-empty routes.
    int route_count() const noexcept;

    bool assigned(int c) const noexcept { return route_of_[c] >= 0; }
    int route_of(int c) const noexcept { return route_of_[c]; }
    int position_of(int c) const noexcept { return pos_of_[c]; }
    double start_time(int c) const noexcept;
    int predecessor(int c) const noexcept;
    int successor(int c) const noexcept;

    /// Unassigned customers in ascending id order.
    std::vector<int> unassigned() const;
    int unassigned_count() const noexcept { return unassigned_count_; }
    double total_length() const noexcept;

    /// Inserts an unassigned customer. `route == route_slots()` opens a new route.
    void insert(int c, int route, int position);
    /// Unassigns a customer; its route is dropped when it becomes empty.
    void remove(int c);
    /// Replaces the node lists of several routes at once. Nodes leaving the
    /// edited routes become unassigned unless another edit picks them up.
    /// Does not drop routes left empty.
    void rewrite(std::span<const std::pair<int, std::vector<int>>> edits);
    void rewrite(int route, std::vector<int> nodes);
    /// Appends a new route; returns its index.
    int open_route(std::vector<int> nodes);
    void drop_empty_routes();

    /// Routes as plain id lists.
    std::vector<std::vector<int>> plan() const;

    friend bool operator==(const Solution& a, const Solution& b) noexcept;

  private:
    void reindex(int r);

    const Instance* inst_;
    std::vector<Route> routes_;
    std::vector<int> route_of_;
    std::vector<int> pos_of_;
    int unassigned_count_ = 0;
};

}  // namespace pushpull
