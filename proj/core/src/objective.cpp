#include "pushpull/objective.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace pushpull {

std::string_view to_string(Mode mode) noexcept { return mode == Mode::trucks ? "trucks" : "travel"; }

Mode parse_mode(std::string_view text) {
    if (text == "trucks") return Mode::trucks;
    if (text == "travel") return Mode::travel;
    throw std::invalid_argument("unknown objective mode '" + std::string(text) + "' (expected trucks|travel)");
}

ObjectiveBreakdown evaluate(const Solution& sol, const EvalContext& ctx) {
    const auto& inst = sol.instance();
    ObjectiveBreakdown out;
    out.routes = sol.route_count();
    out.unassigned = sol.unassigned_count();
    out.travel = sol.total_length();
    out.service = inst.total_service();
    if (ctx.mode == Mode::trucks) {
        const auto target = inst.target_routes();
        if (!target) throw std::invalid_argument("instance " + inst.id() + " has no target route count (trucks mode)");
        out.target = *target;
    } else {
        out.target = inst.fleet_limit();
    }
    const double excess = std::min(1.0, std::max(0.0, static_cast<double>(out.routes - out.target)));
    out.penalty = out.routes * kRoutePenalty * excess;
    out.value = out.penalty + ctx.value_scale * (out.travel + out.service);
    return out;
}

double objective(const Solution& sol, const EvalContext& ctx) { return evaluate(sol, ctx).value; }

double dataset_value(std::span<const double> values) noexcept {
    if (values.empty()) return 0;
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

Score score(const Solution& sol, const EvalContext& ctx) { return {sol.unassigned_count(), objective(sol, ctx)}; }

}  // namespace pushpull
