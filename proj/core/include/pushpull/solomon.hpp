#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include "pushpull/instance.hpp"

namespace pushpull {

/// Malformed input file; carries the 1-based line number of the fault.
class ParseFileError : public std::runtime_error {
  public:
    ParseFileError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const noexcept { return line_; }

  private:
    int line_;
};

/// Parses the classic Solomon text layout: name line, VEHICLE section with
/// NUMBER/CAPACITY, CUSTOMER table of seven numeric columns with the depot
/// on row 0.
Instance parse_solomon(std::string_view text);
Instance load_solomon(const std::filesystem::path& path);

/// Route-count targets keyed by instance id. One `ID COUNT` pair per line,
/// `#` starts a comment.
using TargetTable = std::map<std::string, int>;
TargetTable parse_target_table(std::string_view text);
TargetTable load_target_table(const std::filesystem::path& path);

}  // namespace pushpull
