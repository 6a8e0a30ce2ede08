#include "histslice/pipeline.hpp"

#include "histslice/error.hpp"
#include "histslice/patch.hpp"

#include <json.hpp>

namespace histslice {

using nlohmann::ordered_json;

History load_history(const RunConfig &config) {
  if (const auto *fixture = std::get_if<FixtureSource>(&config.source))
    return load_fixture_history(fixture->path);
  const auto &git = std::get<GitSource>(config.source);
  return load_git_history(git.repo, git.from, git.to);
}

Analysis analyze(History history, std::size_t context, bool elimination) {
  Analysis a;
  a.history = std::move(history);
  a.graph = build_graph(a.history, context);
  if (elimination) {
    a.verdicts = detect_all(a.history);
    a.graph = eliminate(std::move(a.graph), a.verdicts);
  }
  validate(a.graph);
  return a;
}

CommitId resolve_criterion(const History &history, const std::string &text) {
  if (history.index_of(CommitId{text}))
    return CommitId{text};
  std::optional<CommitId> match;
  if (text.size() >= 4) {
    for (const auto &c : history.commits()) {
      if (c.id.value.compare(0, text.size(), text) != 0)
        continue;
      if (match)
        throw UnknownCriterion("ambiguous criterion " + text);
      match = c.id;
    }
  }
  if (!match)
    throw UnknownCriterion("criterion " + text + " is not in the history");
  return *match;
}

namespace {

ordered_json slice_json(const HistorySlice &s) {
  ordered_json j;
  j["criterion"] = s.criterion.value;
  j["size"] = s.size;
  j["original_size"] = s.original_size;
  j["commit_count"] = s.commits.size();
  j["original_commit_count"] = s.original_commit_count;
  j["reduction_pct"] = 100.0 * s.reduction_ratio();
  j["elements"] = ordered_json::array();
  for (const auto &e : s.elements)
    j["elements"].push_back(to_string(e));
  j["commits"] = ordered_json::array();
  for (const auto &c : s.commits) {
    ordered_json files = ordered_json::array();
    for (const auto &f : c.included_files)
      files.push_back(f.value);
    j["commits"].push_back(
        {{"source", c.source.value}, {"split", c.split}, {"files", files}});
  }
  return j;
}

std::string slice_csv(const std::vector<HistorySlice> &slices) {
  std::string out = "criterion,original_size,reduced_size,reduction_pct\n";
  for (const auto &s : slices)
    out += csv_field(s.criterion.value) + "," + std::to_string(s.original_size) +
           "," + std::to_string(s.size) + "," +
           format_pct(100.0 * s.reduction_ratio()) + "\n";
  return out;
}

std::string run_slice(const RunConfig &config, const Analysis &a) {
  std::vector<HistorySlice> slices;
  if (config.criterion) {
    slices.push_back(
        slice(a.graph, {resolve_criterion(a.history, *config.criterion)}));
  } else {
    slices = slice_all(a.graph, a.history);
  }
  if (config.patch_dir) {
    for (const auto &s : slices) {
      auto dir = config.criterion ? *config.patch_dir
                                  : *config.patch_dir / s.criterion.value;
      materialize(a.history, s, dir, config.context);
    }
  }
  if (config.format == OutputFormat::csv)
    return slice_csv(slices);
  if (config.criterion)
    return slice_json(slices.front()).dump(2) + "\n";
  ordered_json doc;
  doc["slices"] = ordered_json::array();
  for (const auto &s : slices)
    doc["slices"].push_back(slice_json(s));
  return doc.dump(2) + "\n";
}

std::string run_detect(const RunConfig &config, const Analysis &a) {
  const auto &history = a.history;
  std::map<CommitId, SystematicVerdict> verdicts =
      a.verdicts.empty() ? detect_all(history) : a.verdicts;
  if (config.format == OutputFormat::csv) {
    std::string out = "commit,kind,splittable,witness\n";
    for (const auto &c : history.commits()) {
      const auto &v = verdicts.at(c.id);
      std::string witness;
      if (v.witness)
        witness = to_string(v.witness->first) + " | " +
                  to_string(v.witness->second);
      out += csv_field(c.id.value) + "," + std::string(to_string(v.kind)) +
             "," + (v.splittable ? "true" : "false") + "," +
             csv_field(witness) + "\n";
    }
    return out;
  }
  ordered_json doc;
  doc["commits"] = ordered_json::array();
  for (const auto &c : history.commits()) {
    const auto &v = verdicts.at(c.id);
    ordered_json j;
    j["commit"] = c.id.value;
    j["kind"] = to_string(v.kind);
    j["splittable"] = v.splittable;
    j["witness"] = v.witness ? ordered_json::array({to_string(v.witness->first),
                                                    to_string(v.witness->second)})
                             : ordered_json(nullptr);
    j["reason"] = v.reason;
    if (v.uniform_script_set) {
      j["uniform_scripts"] = ordered_json::array();
      for (const auto &s : *v.uniform_script_set)
        j["uniform_scripts"].push_back(to_string(s));
    }
    doc["commits"].push_back(std::move(j));
  }
  const auto counts = count_systematic(verdicts);
  doc["systematic"] = {{"total", counts.total},
                       {"ast", counts.ast},
                       {"whitespace_comment", counts.whitespace_comment}};
  return doc.dump(2) + "\n";
}

std::string run_report(const RunConfig &config, const Analysis &a) {
  std::vector<HistorySlice> slices;
  if (config.criterion)
    slices.push_back(
        slice(a.graph, {resolve_criterion(a.history, *config.criterion)}));
  else
    slices = slice_all(a.graph, a.history);
  ReductionReport report = compare_reports(
      reduced_sizes(slices), original_sizes(slices), config.min_slice_size_report);
  report.systematic_counts = count_systematic(a.verdicts);
  return config.format == OutputFormat::csv ? to_csv(report) : to_json(report);
}

} // namespace

std::string slice_to_json(const HistorySlice &slice) {
  return slice_json(slice).dump(2) + "\n";
}

RunResult run(const RunConfig &config) {
  RunResult result;
  try {
    Analysis a = analyze(load_history(config), config.context, config.elimination);
    switch (config.command) {
    case Command::slice:
      result.output = run_slice(config, a);
      break;
    case Command::detect:
      result.output = run_detect(config, a);
      break;
    case Command::deps:
      result.output = config.format == OutputFormat::csv ? to_edge_list(a.graph)
                                                         : to_json(a.graph);
      break;
    case Command::report:
      result.output = run_report(config, a);
      break;
    }
  } catch (const PatchConflict &e) {
    result.exit_code = exit_code::slicing_conflict;
    result.error = e.what();
  } catch (const InputError &e) {
    result.exit_code = exit_code::input_error;
    result.error = e.what();
  } catch (const std::exception &e) {
    result.exit_code = exit_code::internal_error;
    result.error = e.what();
  }
  if (result.exit_code != 0)
    result.output.clear();
  return result;
}

} // namespace histslice
