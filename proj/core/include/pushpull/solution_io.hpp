#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "pushpull/context.hpp"
#include "pushpull/validate.hpp"

namespace pushpull {

inline constexpr std::string_view kVersion = "1.0.0";

/// Run metadata embedded in exported solutions.
struct RunMeta {
    std::string term;
    std::uint64_t seed = 0;
    std::uint64_t insertions = 0;
};

/// {"instance", "routes", "times", "E", "D", "value", "mode", "seed",
///  "term", "insertions", "version", "unassigned"}
std::string solution_to_json(const Solution& sol, const EvalContext& ctx, const RunMeta& meta, int indent = 2);

class SolutionFormatError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct SolutionDocument {
    std::string instance;
    RoutePlan plan;
    std::optional<double> value;
};

/// Reads the routes (and times/unassigned when present) of an exported
/// solution. Throws SolutionFormatError on malformed documents.
SolutionDocument parse_solution_json(std::string_view text);

}  // namespace pushpull
