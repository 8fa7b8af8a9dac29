#include "pushpull/solution_io.hpp"

#include <json.hpp>

#include "pushpull/objective.hpp"

namespace pushpull {

using nlohmann::json;

std::string solution_to_json(const Solution& sol, const EvalContext& ctx, const RunMeta& meta, int indent) {
    const auto b = evaluate(sol, ctx);
    json doc;
    doc["instance"] = sol.instance().id();
    doc["routes"] = sol.plan();
    json times = json::array();
    for (const auto& r : sol.routes()) times.push_back(r.start);
    doc["times"] = std::move(times);
    doc["unassigned"] = sol.unassigned();
    doc["E"] = b.routes;
    doc["D"] = b.travel;
    doc["value"] = b.value;
    doc["mode"] = std::string(to_string(ctx.mode));
    doc["seed"] = meta.seed;
    doc["term"] = meta.term;
    doc["insertions"] = meta.insertions;
    doc["version"] = std::string(kVersion);
    return doc.dump(indent);
}

SolutionDocument parse_solution_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SolutionFormatError(std::string("malformed JSON: ") + e.what());
    }
    try {
        SolutionDocument out;
        if (!doc.is_object()) throw SolutionFormatError("solution must be a JSON object");
        if (!doc.contains("instance") || !doc.contains("routes")) throw SolutionFormatError("missing 'instance' or 'routes'");
        out.instance = doc.at("instance").get<std::string>();
        out.plan.routes = doc.at("routes").get<std::vector<std::vector<int>>>();
        if (doc.contains("times")) out.plan.times = doc.at("times").get<std::vector<std::vector<double>>>();
        if (doc.contains("unassigned")) out.plan.unassigned = doc.at("unassigned").get<std::vector<int>>();
        if (doc.contains("value")) out.value = doc.at("value").get<double>();
        return out;
    } catch (const json::exception& e) {
        throw SolutionFormatError(std::string("bad solution document: ") + e.what());
    }
}

}  // namespace pushpull
