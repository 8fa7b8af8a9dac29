#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace pushpull::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kDataError = 2,
    kValidationFailure = 3,
};

/// Entry point shared by the executable and the tests. Reports go to `out`
/// (or to --out), diagnostics and timings to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Same, with argv[0] supplied.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Expands files, directories (every regular file, sorted) and glob
/// patterns into a sorted, de-duplicated file list.
std::vector<std::filesystem::path> expand_dataset(const std::vector<std::string>& specs);

}  // namespace pushpull::cli
