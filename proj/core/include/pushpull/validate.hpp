#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pushpull/solution.hpp"

namespace pushpull {

enum class ViolationKind { coverage, capacity, window, chronology, cache };

std::string_view to_string(ViolationKind kind) noexcept;

struct Violation {
    ViolationKind kind;
    int route = -1;     // -1 when not tied to a route
    int customer = -1;  // -1 when not tied to a customer
    std::string message;
};

/// Routes as id lists, optionally with explicit service start times and an
/// explicit unassigned list. This is what gets imported from JSON; it may be
/// arbitrarily broken.
struct RoutePlan {
    std::vector<std::vector<int>> routes;
    std::optional<std::vector<std::vector<double>>> times;
    std::optional<std::vector<int>> unassigned;
};

/// Audits a plan against every model constraint. Total: never throws.
/// When `times` is absent the earliest start times are used.
std::vector<Violation> validate(const Instance& inst, const RoutePlan& plan);

/// Audits a live solution, including its cached route data.
std::vector<Violation> validate(const Solution& sol);

RoutePlan to_plan(const Solution& sol);

}  // namespace pushpull
