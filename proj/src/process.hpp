#pragma once

#include <string>
#include <vector>

namespace histslice::detail {

struct ProcessResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

/// Runs argv[0] (looked up on PATH) without a shell and captures both output
/// streams. `extra_env` entries are "NAME=value" and override the inherited
/// environment.
ProcessResult run_process(const std::vector<std::string> &argv,
                          const std::vector<std::string> &extra_env = {});

} // namespace histslice::detail
