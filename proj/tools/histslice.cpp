// histslice: slice a linear history down to the changes a commit needs.
//
//   histslice slice  --fixture h.json --criterion c16 --patches out/
//   histslice report --repo . --range v1.0..v1.1 --format csv
//   histslice detect --fixture h.json
//   histslice deps   --fixture h.json --format csv

#include "histslice/pipeline.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

struct Options {
  std::string repo;
  std::string range;
  std::string fixture;
  std::string criterion;
  std::size_t context = 3;
  bool no_elimination = false;
  std::string format = "json";
  std::string patches;
  std::size_t min_size = 3;
};

void add_common(CLI::App &cmd, Options &o) {
  cmd.add_option("--repo", o.repo, "Git repository to read");
  cmd.add_option("--range", o.range, "Commit range A..B (A excluded)");
  cmd.add_option("--fixture", o.fixture, "JSON history fixture");
  cmd.add_option("--criterion", o.criterion,
                 "Commit to slice from (default: every commit)");
  cmd.add_option("--context", o.context, "Context lines around hunks")
      ->check(CLI::NonNegativeNumber);
  cmd.add_flag("--no-elimination", o.no_elimination,
               "Keep commit dependencies of systematic commits");
  cmd.add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));
}

int fail(const std::string &message) {
  std::cerr << "histslice: " << message << "\n";
  return histslice::exit_code::input_error;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Systematic-edit-aware history slicing"};
  app.require_subcommand(1);
  Options o;

  auto *slice = app.add_subcommand("slice", "Compute history slices");
  add_common(*slice, o);
  slice->add_option("--patches", o.patches,
                    "Write the sliced history as a patch series");

  auto *detect = app.add_subcommand("detect", "Classify commits");
  add_common(*detect, o);

  auto *deps = app.add_subcommand("deps", "Print the dependency graph");
  add_common(*deps, o);

  auto *report = app.add_subcommand("report", "Slice-size reduction report");
  add_common(*report, o);
  report->add_option("--min-size", o.min_size,
                     "Smallest original slice counted in the mean");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : histslice::exit_code::input_error;
  }

  histslice::RunConfig config;
  if (slice->parsed())
    config.command = histslice::Command::slice;
  else if (detect->parsed())
    config.command = histslice::Command::detect;
  else if (deps->parsed())
    config.command = histslice::Command::deps;
  else
    config.command = histslice::Command::report;

  const bool git = !o.repo.empty() || !o.range.empty();
  if (git == !o.fixture.empty())
    return fail("give either --fixture or --repo with --range");
  if (git) {
    if (o.repo.empty() || o.range.empty())
      return fail("--repo and --range go together");
    auto dots = o.range.find("..");
    if (dots == std::string::npos || dots == 0 || dots + 2 >= o.range.size() ||
        o.range.find("..", dots + 2) != std::string::npos)
      return fail("--range must look like A..B");
    config.source = histslice::GitSource{o.repo, o.range.substr(0, dots),
                                         o.range.substr(dots + 2)};
  } else {
    config.source = histslice::FixtureSource{o.fixture};
  }
  if (!o.criterion.empty())
    config.criterion = o.criterion;
  config.context = o.context;
  config.elimination = !o.no_elimination;
  config.format = o.format == "csv" ? histslice::OutputFormat::csv
                                    : histslice::OutputFormat::json;
  if (!o.patches.empty())
    config.patch_dir = o.patches;
  config.min_slice_size_report = o.min_size;

  histslice::RunResult result = histslice::run(config);
  if (result.exit_code != 0) {
    std::cerr << "histslice: " << result.error << "\n";
    return result.exit_code;
  }
  std::cout << result.output;
  return 0;
}
