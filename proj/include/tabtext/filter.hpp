#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tabtext/fidelity.hpp"

namespace tabtext {

struct FilterPolicy {
  std::optional<Dimension> dimension;  // absent -> select the weakest
  double tau_start = 1.00;
  double tau_end = 0.70;
  double tau_step = 0.05;

  void validate() const;
  std::vector<double> taus() const;  // tau_start down to tau_end inclusive
};

struct DimensionMacro {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double min_pr = 0.0;  // macro mean of per-report min(precision, recall)
};

struct FilterOutcome {
  double tau = 0.0;
  std::vector<std::pair<int, std::string>> retained_ids;  // (row_id, report_type), sorted
  double retention_fraction = 0.0;
  std::optional<DimensionMacro> numeric;   // absent when nothing retained
  std::optional<DimensionMacro> temporal;
};

/// The dimension whose macro-averaged min(precision, recall) is lowest;
/// ties break toward temporal.
Dimension select_weakest_dimension(const std::vector<FidelityResult>& fidelity);

/// Retain exactly the reports with precision >= tau AND recall >= tau on the
/// chosen dimension; recompute macro averages for all dimensions on the
/// retained set.
FilterOutcome apply_threshold(const std::vector<FidelityResult>& fidelity,
                              Dimension dimension, double tau);

/// One FilterOutcome per tau in the policy's sweep (default 1.00 down to
/// 0.70 in 0.05 steps -> 7 outcomes).
std::vector<FilterOutcome> sweep(const std::vector<FidelityResult>& fidelity,
                                 const FilterPolicy& policy);

}  // namespace tabtext
