#pragma once

#include <cstdint>
#include <functional>
#include <string_view>

#include "pushpull/common.hpp"

namespace pushpull {

enum class Mode {
    trucks,  // penalize routes above the instance's target count
    travel,  // target is the fleet limit, so only travel counts
};

std::string_view to_string(Mode mode) noexcept;
Mode parse_mode(std::string_view text);

/// One step of an optimizer, reported through EvalContext::on_step.
struct StepEvent {
    std::string_view op;
    double before = 0;
    double after = 0;
};

/// Optimization context threaded through every build and optimize call.
///
/// Single owner. The insertion counter only grows; it counts evaluations of
/// the insertion procedure (one per candidate route examined).
struct EvalContext {
    Mode mode = Mode::travel;
    /// Travel and service are reported in tenths of a distance unit, the
    /// scale of the published benchmark tables. LDS thresholds use the
    /// same scale.
    double value_scale = 10.0;
    /// 0 examines every route in push; otherwise only the N routes closest
    /// to the customer plus a fresh route.
    int candidate_route_limit = 0;
    std::uint64_t insertions = 0;
    /// Optimizers become no-ops once `insertions` reaches this (0: no
    /// limit). Builds always complete, so solutions stay whole.
    std::uint64_t insertion_limit = 0;
    Rng rng;
    /// Optional observer of optimizer applications.
    std::function<void(const StepEvent&)> on_step;

    explicit EvalContext(std::uint64_t seed = 0, Mode m = Mode::travel) : mode(m), rng(seed) {}

    void count_insertions(std::uint64_t n = 1) noexcept { insertions += n; }
    bool budget_spent() const noexcept { return insertion_limit != 0 && insertions >= insertion_limit; }
};

}  // namespace pushpull
