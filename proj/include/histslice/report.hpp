#pragma once

#include "histslice/history.hpp"
#include "histslice/slicer.hpp"
#include "histslice/systematic.hpp"

#include <map>
#include <string>
#include <vector>

namespace histslice {

/// Size of one criterion's slice under one configuration.
struct SizeRow {
  CommitId criterion;
  std::size_t elements = 0;
  std::size_t commits = 0;

  bool operator==(const SizeRow &) const = default;
};

struct ReductionRow {
  CommitId criterion;
  std::size_t original_size = 0;
  std::size_t reduced_size = 0;
  std::size_t original_commits = 0;
  std::size_t reduced_commits = 0;

  /// 100 * (1 - reduced / original); 0 for an empty slice.
  double reduction_pct() const;

  bool operator==(const ReductionRow &) const = default;
};

struct SystematicCounts {
  std::size_t total = 0;
  std::size_t ast = 0;
  std::size_t whitespace_comment = 0;

  bool operator==(const SystematicCounts &) const = default;
};

struct ReductionReport {
  std::vector<ReductionRow> per_criterion;
  /// Mean of reduction_pct over rows whose original size is at least
  /// min_slice_size; 0 when no row qualifies.
  double mean_reduction_pct = 0.0;
  std::size_t rows_in_mean = 0;
  std::size_t min_slice_size = 3;
  SystematicCounts systematic_counts;

  bool operator==(const ReductionReport &) const = default;
};

/// Rows for the effective (possibly eliminated) slices.
std::vector<SizeRow> reduced_sizes(const std::vector<HistorySlice> &slices);

/// Rows for the same slices computed over every edge.
std::vector<SizeRow> original_sizes(const std::vector<HistorySlice> &slices);

/// Pairs the two row lists criterion by criterion. Throws MismatchedCriteria
/// when they do not list the same criteria in the same order, and
/// InvariantViolation when a reduced slice is larger than its original.
ReductionReport compare_reports(const std::vector<SizeRow> &with_elimination,
                                const std::vector<SizeRow> &without_elimination,
                                std::size_t min_slice_size = 3);

SystematicCounts
count_systematic(const std::map<CommitId, SystematicVerdict> &verdicts);

/// "criterion,original_size,reduced_size,reduction_pct" plus one row per
/// criterion.
std::string to_csv(const ReductionReport &report);
std::string to_json(const ReductionReport &report);

/// Fixed two-decimal rendering used by every CSV surface.
std::string format_pct(double pct);

/// Quotes a CSV field when it contains a separator, quote or newline.
std::string csv_field(const std::string &value);

} // namespace histslice
