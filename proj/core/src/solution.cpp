#include "pushpull/solution.hpp"

#include <algorithm>

#include "pushpull/common.hpp"

namespace pushpull {

double Route::end_time(const Instance& inst) const noexcept {
    if (nodes.empty()) return inst.ready(0);
    const int last = nodes.back();
    return start.back() + inst.service(last) + inst.dist(last, 0);
}

bool Route::feasible(const Instance& inst) const noexcept {
    if (load > inst.capacity() + kEpsilon) return false;
    for (std::size_t k = 0; k < nodes.size(); ++k)
        if (start[k] > inst.due(nodes[k]) + kEpsilon) return false;
    return end_time(inst) <= inst.due(0) + kEpsilon;
}

void Route::recompute(const Instance& inst) {
    const std::size_t n = nodes.size();
    start.resize(n);
    latest.resize(n);
    load = 0;
    length = 0;
    int prev = 0;
    double t = inst.ready(0);
    double leave = t;
    for (std::size_t k = 0; k < n; ++k) {
        const int c = nodes[k];
        load += inst.load(c);
        length += inst.dist(prev, c);
        t = std::max(inst.ready(c), leave + inst.dist(prev, c));
        start[k] = t;
        leave = t + inst.service(c);
        prev = c;
    }
    length += inst.dist(prev, 0);

    double next_latest = inst.due(0);
    int next = 0;
    for (std::size_t k = n; k-- > 0;) {
        const int c = nodes[k];
        latest[k] = std::min(inst.due(c), next_latest - inst.service(c) - inst.dist(c, next));
        next_latest = latest[k];
        next = c;
    }
}

double sequence_length(const Instance& inst, std::span<const int> nodes) noexcept {
    double length = 0;
    int prev = 0;
    for (int c : nodes) {
        length += inst.dist(prev, c);
        prev = c;
    }
    return length + inst.dist(prev, 0);
}

bool sequence_feasible(const Instance& inst, std::span<const int> nodes) noexcept {
    double load = 0;
    int prev = 0;
    double leave = inst.ready(0);
    for (int c : nodes) {
        load += inst.load(c);
        if (load > inst.capacity() + kEpsilon) return false;
        const double t = std::max(inst.ready(c), leave + inst.dist(prev, c));
        if (t > inst.due(c) + kEpsilon) return false;
        leave = t + inst.service(c);
        prev = c;
    }
    return leave + inst.dist(prev, 0) <= inst.due(0) + kEpsilon;
}

Solution::Solution(const Instance& inst)
    : inst_(&inst),
      route_of_(static_cast<std::size_t>(inst.node_count()), -1),
      pos_of_(static_cast<std::size_t>(inst.node_count()), -1),
      unassigned_count_(inst.customers()) {}

int Solution::route_count() const noexcept {
    return static_cast<int>(std::count_if(routes_.begin(), routes_.end(), [](const Route& r) { return !r.empty(); }));
}

double Solution::start_time(int c) const noexcept {
    const int r = route_of_[c];
    return r < 0 ? 0.0 : routes_[r].start[pos_of_[c]];
}

int Solution::predecessor(int c) const noexcept { return routes_[route_of_[c]].at(pos_of_[c] - 1); }
int Solution::successor(int c) const noexcept { return routes_[route_of_[c]].at(pos_of_[c] + 1); }

std::vector<int> Solution::unassigned() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(unassigned_count_));
    for (int c = 1; c < inst_->node_count(); ++c)
        if (route_of_[c] < 0) out.push_back(c);
    return out;
}

double Solution::total_length() const noexcept {
    double total = 0;
    for (const auto& r : routes_) total += r.length;
    return total;
}

void Solution::reindex(int r) {
    const auto& nodes = routes_[r].nodes;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        route_of_[nodes[k]] = r;
        pos_of_[nodes[k]] = static_cast<int>(k);
    }
}

void Solution::insert(int c, int route, int position) {
    PUSHPULL_EXPECTS(c >= 1 && c < inst_->node_count(), "customer id out of range");
    PUSHPULL_EXPECTS(route_of_[c] < 0, "customer already assigned");
    PUSHPULL_EXPECTS(route >= 0 && route <= route_slots(), "route index out of range");
    if (route == route_slots()) routes_.emplace_back();
    auto& r = routes_[route];
    PUSHPULL_EXPECTS(position >= 0 && position <= r.size(), "insertion position out of range");
    r.nodes.insert(r.nodes.begin() + position, c);
    r.recompute(*inst_);
    reindex(route);
    --unassigned_count_;
}

void Solution::remove(int c) {
    PUSHPULL_EXPECTS(c >= 1 && c < inst_->node_count() && route_of_[c] >= 0, "customer is not assigned");
    const int route = route_of_[c];
    auto& r = routes_[route];
    r.nodes.erase(r.nodes.begin() + pos_of_[c]);
    route_of_[c] = -1;
    pos_of_[c] = -1;
    ++unassigned_count_;
    if (r.nodes.empty()) {
        routes_.erase(routes_.begin() + route);
        for (int k = route; k < route_slots(); ++k) reindex(k);
    } else {
        r.recompute(*inst_);
        reindex(route);
    }
}

void Solution::rewrite(std::span<const std::pair<int, std::vector<int>>> edits) {
    for (const auto& [r, nodes] : edits) {
        PUSHPULL_EXPECTS(r >= 0 && r < route_slots(), "route index out of range");
        for (int c : routes_[r].nodes) {
            route_of_[c] = -1;
            pos_of_[c] = -1;
            ++unassigned_count_;
        }
        routes_[r].nodes.clear();
    }
    for (const auto& [r, nodes] : edits) {
        for (int c : nodes) {
            PUSHPULL_EXPECTS(c >= 1 && c < inst_->node_count(), "customer id out of range");
            PUSHPULL_EXPECTS(route_of_[c] < 0, "customer would appear twice");
            route_of_[c] = r;
            --unassigned_count_;
        }
        routes_[r].nodes = nodes;
        routes_[r].recompute(*inst_);
        reindex(r);
    }
}

void Solution::rewrite(int route, std::vector<int> nodes) {
    const std::pair<int, std::vector<int>> edit{route, std::move(nodes)};
    rewrite(std::span(&edit, 1));
}

int Solution::open_route(std::vector<int> nodes) {
    routes_.emplace_back();
    const int r = route_slots() - 1;
    rewrite(r, std::move(nodes));
    return r;
}

void Solution::drop_empty_routes() {
    const auto it = std::remove_if(routes_.begin(), routes_.end(), [](const Route& r) { return r.empty(); });
    if (it == routes_.end()) return;
    routes_.erase(it, routes_.end());
    for (int k = 0; k < route_slots(); ++k) reindex(k);
}

std::vector<std::vector<int>> Solution::plan() const {
    std::vector<std::vector<int>> out;
    out.reserve(routes_.size());
    for (const auto& r : routes_) out.push_back(r.nodes);
    return out;
}

bool operator==(const Solution& a, const Solution& b) noexcept {
    if (a.inst_ != b.inst_ || a.routes_.size() != b.routes_.size()) return false;
    for (std::size_t k = 0; k < a.routes_.size(); ++k)
        if (a.routes_[k].nodes != b.routes_[k].nodes) return false;
    return a.route_of_ == b.route_of_;
}

}  // namespace pushpull
