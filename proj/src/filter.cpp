#include "tabtext/filter.hpp"

#include <algorithm>
#include <cmath>

#include "tabtext/errors.hpp"

namespace tabtext {

void FilterPolicy::validate() const {
  if (tau_step <= 0.0) throw FilterError("tau_step must be positive");
  if (tau_end > tau_start) throw FilterError("tau_end must not exceed tau_start");
}

std::vector<double> FilterPolicy::taus() const {
  validate();
  // Work in integer hundredth-of-a-point steps so 0.05 never drifts.
  const long start = std::lround(tau_start * 100.0);
  const long end = std::lround(tau_end * 100.0);
  const long step = std::lround(tau_step * 100.0);
  if (step <= 0) throw FilterError("tau_step too small");
  std::vector<double> out;
  for (long c = start; c >= end; c -= step) {
    out.push_back(static_cast<double>(c) / 100.0);
  }
  return out;
}

namespace {

double min_pr(const DimensionScore& s) { return std::min(s.precision, s.recall); }

double macro_min_pr(const std::vector<FidelityResult>& fidelity, Dimension d) {
  double total = 0.0;
  for (const auto& r : fidelity) total += min_pr(r.score(d));
  return total / static_cast<double>(fidelity.size());
}

DimensionMacro macro_over(const std::vector<const FidelityResult*>& retained, Dimension d) {
  DimensionMacro m;
  for (const auto* r : retained) {
    const DimensionScore& s = r->score(d);
    m.precision += s.precision;
    m.recall += s.recall;
    m.f1 += s.f1;
    m.min_pr += min_pr(s);
  }
  const double n = static_cast<double>(retained.size());
  m.precision /= n;
  m.recall /= n;
  m.f1 /= n;
  m.min_pr /= n;
  return m;
}

}  // namespace

Dimension select_weakest_dimension(const std::vector<FidelityResult>& fidelity) {
  if (fidelity.empty()) throw FilterError("no fidelity results to select a dimension from");
  const double numeric = macro_min_pr(fidelity, Dimension::numeric);
  const double temporal = macro_min_pr(fidelity, Dimension::temporal);
  return numeric < temporal ? Dimension::numeric : Dimension::temporal;
}

FilterOutcome apply_threshold(const std::vector<FidelityResult>& fidelity,
                              Dimension dimension, double tau) {
  FilterOutcome outcome;
  outcome.tau = tau;

  std::vector<const FidelityResult*> retained;
  for (const auto& r : fidelity) {
    const DimensionScore& s = r.score(dimension);
    if (s.precision >= tau && s.recall >= tau) retained.push_back(&r);
  }
  for (const auto* r : retained) outcome.retained_ids.push_back({r->row_id, r->report_type});
  std::sort(outcome.retained_ids.begin(), outcome.retained_ids.end());

  outcome.retention_fraction =
      fidelity.empty() ? 0.0
                       : static_cast<double>(retained.size()) /
                             static_cast<double>(fidelity.size());
  if (!retained.empty()) {
    outcome.numeric = macro_over(retained, Dimension::numeric);
    outcome.temporal = macro_over(retained, Dimension::temporal);
  }
  return outcome;
}

std::vector<FilterOutcome> sweep(const std::vector<FidelityResult>& fidelity,
                                 const FilterPolicy& policy) {
  const Dimension dimension =
      policy.dimension.value_or(select_weakest_dimension(fidelity));
  std::vector<FilterOutcome> outcomes;
  for (double tau : policy.taus()) {
    outcomes.push_back(apply_threshold(fidelity, dimension, tau));
  }
  return outcomes;
}

}  // namespace tabtext
