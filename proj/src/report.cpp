#include "histslice/report.hpp"

#include "histslice/error.hpp"

#include <json.hpp>

#include <cstdio>

namespace histslice {

double ReductionRow::reduction_pct() const {
  if (original_size == 0)
    return 0.0;
  return 100.0 * (1.0 - double(reduced_size) / double(original_size));
}

std::vector<SizeRow> reduced_sizes(const std::vector<HistorySlice> &slices) {
  std::vector<SizeRow> rows;
  for (const auto &s : slices)
    rows.push_back({s.criterion, s.size, s.commits.size()});
  return rows;
}

std::vector<SizeRow> original_sizes(const std::vector<HistorySlice> &slices) {
  std::vector<SizeRow> rows;
  for (const auto &s : slices)
    rows.push_back({s.criterion, s.original_size, s.original_commit_count});
  return rows;
}

ReductionReport compare_reports(const std::vector<SizeRow> &with_elimination,
                                const std::vector<SizeRow> &without_elimination,
                                std::size_t min_slice_size) {
  if (with_elimination.size() != without_elimination.size())
    throw MismatchedCriteria("reports cover " +
                             std::to_string(with_elimination.size()) + " and " +
                             std::to_string(without_elimination.size()) +
                             " criteria");
  ReductionReport report;
  report.min_slice_size = min_slice_size;
  double sum = 0.0;
  for (std::size_t i = 0; i < with_elimination.size(); ++i) {
    const SizeRow &reduced = with_elimination[i];
    const SizeRow &original = without_elimination[i];
    if (reduced.criterion != original.criterion)
      throw MismatchedCriteria("criterion " + reduced.criterion.value +
                               " is paired with " + original.criterion.value);
    if (reduced.elements > original.elements)
      throw InvariantViolation("reduced slice of " + reduced.criterion.value +
                               " is larger than the original");
    ReductionRow row{reduced.criterion, original.elements, reduced.elements,
                     original.commits, reduced.commits};
    if (row.original_size >= min_slice_size) {
      sum += row.reduction_pct();
      ++report.rows_in_mean;
    }
    report.per_criterion.push_back(std::move(row));
  }
  if (report.rows_in_mean > 0)
    report.mean_reduction_pct = sum / double(report.rows_in_mean);
  return report;
}

SystematicCounts
count_systematic(const std::map<CommitId, SystematicVerdict> &verdicts) {
  SystematicCounts counts;
  for (const auto &[id, v] : verdicts) {
    if (v.kind == SystematicKind::ast_systematic)
      ++counts.ast;
    else if (v.kind == SystematicKind::whitespace_or_comment_only)
      ++counts.whitespace_comment;
  }
  counts.total = counts.ast + counts.whitespace_comment;
  return counts;
}

std::string format_pct(double pct) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", pct);
  return buf;
}

std::string csv_field(const std::string &value) {
  if (value.find_first_of(",\"\n\r") == std::string::npos)
    return value;
  std::string out = "\"";
  for (char c : value) {
    if (c == '"')
      out += '"';
    out += c;
  }
  return out + "\"";
}

std::string to_csv(const ReductionReport &report) {
  std::string out = "criterion,original_size,reduced_size,reduction_pct\n";
  for (const auto &row : report.per_criterion) {
    out += csv_field(row.criterion.value) + "," +
           std::to_string(row.original_size) + "," +
           std::to_string(row.reduced_size) + "," +
           format_pct(row.reduction_pct()) + "\n";
  }
  return out;
}

std::string to_json(const ReductionReport &report) {
  nlohmann::ordered_json doc;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto &row : report.per_criterion) {
    doc["rows"].push_back({{"criterion", row.criterion.value},
                           {"original_size", row.original_size},
                           {"reduced_size", row.reduced_size},
                           {"original_commits", row.original_commits},
                           {"reduced_commits", row.reduced_commits},
                           {"reduction_pct", row.reduction_pct()}});
  }
  doc["mean_reduction_pct"] = report.mean_reduction_pct;
  doc["rows_in_mean"] = report.rows_in_mean;
  doc["min_slice_size"] = report.min_slice_size;
  doc["systematic"] = {{"total", report.systematic_counts.total},
                       {"ast", report.systematic_counts.ast},
                       {"whitespace_comment",
                        report.systematic_counts.whitespace_comment}};
  return doc.dump(2) + "\n";
}

} // namespace histslice
