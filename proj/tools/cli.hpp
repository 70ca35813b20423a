#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace dunkl::cli {

/// Exit codes: 0 success, 1 validation or verification failure, 2 usage error.
int dispatch(int argc, const char* const* argv);
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Writes the data behind figure 1, 2 or 3 into `dir`; returns the files written.
std::vector<std::filesystem::path> reproduce_figure(int fig, const std::filesystem::path& dir, int grid);

}  // namespace dunkl::cli
