#pragma once

#include "histslice/dependency_graph.hpp"
#include "histslice/history.hpp"
#include "histslice/report.hpp"
#include "histslice/slicer.hpp"
#include "histslice/systematic.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>

namespace histslice {

enum class Command { slice, detect, deps, report };
enum class OutputFormat { json, csv };

struct GitSource {
  std::filesystem::path repo;
  std::string from;
  std::string to;
};

struct FixtureSource {
  std::filesystem::path path;
};

struct RunConfig {
  Command command = Command::report;
  std::variant<FixtureSource, GitSource> source;
  std::optional<std::string> criterion; ///< absent: every commit is a criterion
  std::size_t context = 3;
  bool elimination = true;
  OutputFormat format = OutputFormat::json;
  std::optional<std::filesystem::path> patch_dir;
  std::size_t min_slice_size_report = 3;
};

struct RunResult {
  int exit_code = 0;
  std::string output; ///< stdout payload
  std::string error;  ///< diagnostic for a non-zero exit
};

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int input_error = 2;
inline constexpr int slicing_conflict = 3;
inline constexpr int internal_error = 4;
} // namespace exit_code

/// Everything the commands share: the history, its verdicts (empty when
/// elimination is off) and the validated, possibly eliminated, graph.
struct Analysis {
  History history;
  std::map<CommitId, SystematicVerdict> verdicts;
  DependencyGraph graph;
};

History load_history(const RunConfig &config);
Analysis analyze(History history, std::size_t context, bool elimination);

/// Exact id, or a unique prefix of at least four characters.
CommitId resolve_criterion(const History &history, const std::string &text);

std::string slice_to_json(const HistorySlice &slice);

/// Runs the configured command and maps errors to exit codes (2 input,
/// 3 patch conflict, 4 invariant violation or internal failure).
RunResult run(const RunConfig &config);

} // namespace histslice
