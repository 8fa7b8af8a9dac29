#include "pushpull/validate.hpp"

#include <cmath>

#include "pushpull/common.hpp"

namespace pushpull {

std::string_view to_string(ViolationKind kind) noexcept {
    switch (kind) {
        case ViolationKind::coverage: return "coverage";
        case ViolationKind::capacity: return "capacity";
        case ViolationKind::window: return "window";
        case ViolationKind::chronology: return "chronology";
        case ViolationKind::cache: return "cache";
    }
    return "unknown";
}

namespace {

constexpr double kTimeTolerance = 1e-6;

std::string fmt_customer(int c) { return "customer " + std::to_string(c); }

}  // namespace

std::vector<Violation> validate(const Instance& inst, const RoutePlan& plan) {
    std::vector<Violation> out;
    std::vector<int> seen(static_cast<std::size_t>(inst.node_count()), 0);

    if (plan.times && plan.times->size() != plan.routes.size()) {
        out.push_back({ViolationKind::chronology, -1, -1, "times do not match the route list"});
        return out;
    }

    for (std::size_t r = 0; r < plan.routes.size(); ++r) {
        const auto& nodes = plan.routes[r];
        const int ri = static_cast<int>(r);
        const std::vector<double>* times = plan.times ? &(*plan.times)[r] : nullptr;
        if (times && times->size() != nodes.size()) {
            out.push_back({ViolationKind::chronology, ri, -1, "route " + std::to_string(r) + ": times do not match nodes"});
            times = nullptr;
        }

        double load = 0;
        bool ids_ok = true;
        for (int c : nodes) {
            if (c < 1 || c >= inst.node_count()) {
                out.push_back({ViolationKind::coverage, ri, c, "route " + std::to_string(r) + ": unknown " + fmt_customer(c)});
                ids_ok = false;
                continue;
            }
            if (++seen[c] == 2) out.push_back({ViolationKind::coverage, ri, c, fmt_customer(c) + " visited more than once"});
            load += inst.load(c);
        }
        if (load > inst.capacity() + kEpsilon)
            out.push_back({ViolationKind::capacity, ri, -1,
                           "route " + std::to_string(r) + ": load " + std::to_string(load) + " exceeds capacity"});
        if (!ids_ok) continue;

        int prev = 0;
        double leave = inst.ready(0);
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            const int c = nodes[k];
            const double earliest = leave + inst.dist(prev, c);
            const double t = times ? (*times)[k] : std::max(inst.ready(c), earliest);
            if (t < earliest - kTimeTolerance)
                out.push_back({ViolationKind::chronology, ri, c, fmt_customer(c) + " starts before it can be reached"});
            if (t < inst.ready(c) - kTimeTolerance || t > inst.due(c) + kTimeTolerance)
                out.push_back({ViolationKind::window, ri, c, fmt_customer(c) + " served outside its time window"});
            leave = t + inst.service(c);
            prev = c;
        }
        if (!nodes.empty() && leave + inst.dist(prev, 0) > inst.due(0) + kTimeTolerance)
            out.push_back({ViolationKind::window, ri, 0, "route " + std::to_string(r) + " returns to the depot too late"});
    }

    if (plan.unassigned) {
        for (int c : *plan.unassigned) {
            if (c < 1 || c >= inst.node_count()) {
                out.push_back({ViolationKind::coverage, -1, c, "unknown unassigned " + fmt_customer(c)});
            } else if (++seen[c] >= 2) {
                out.push_back({ViolationKind::coverage, -1, c, fmt_customer(c) + " both routed and unassigned"});
            }
        }
    }
    return out;
}

RoutePlan to_plan(const Solution& sol) {
    RoutePlan plan;
    plan.routes = sol.plan();
    std::vector<std::vector<double>> times;
    for (const auto& r : sol.routes()) times.push_back(r.start);
    plan.times = std::move(times);
    plan.unassigned = sol.unassigned();
    return plan;
}

std::vector<Violation> validate(const Solution& sol) {
    const auto& inst = sol.instance();
    auto out = validate(inst, to_plan(sol));
    for (int r = 0; r < sol.route_slots(); ++r) {
        const auto& route = sol.route(r);
        const double length = sequence_length(inst, route.nodes);
        if (std::abs(length - route.length) > 1e-6)
            out.push_back({ViolationKind::cache, r, -1, "route " + std::to_string(r) + ": cached length is stale"});
    }
    return out;
}

}  // namespace pushpull
