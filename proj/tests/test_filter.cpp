#include <doctest.h>

#include <random>
#include <set>

#include "tabtext/errors.hpp"
#include "tabtext/filter.hpp"

using namespace tabtext;

namespace {

FidelityResult result_with(int row_id, double np, double nr, double tp, double tr) {
  FidelityResult r;
  r.row_id = row_id;
  r.report_type = "t";
  r.numeric.precision = np;
  r.numeric.recall = nr;
  r.numeric.f1 = (np + nr) > 0 ? 2 * np * nr / (np + nr) : 0.0;
  r.temporal.precision = tp;
  r.temporal.recall = tr;
  r.temporal.f1 = (tp + tr) > 0 ? 2 * tp * tr / (tp + tr) : 0.0;
  return r;
}

// Random corpus with quantized metrics so threshold comparisons are exact.
std::vector<FidelityResult> random_corpus(unsigned seed, int n) {
  std::mt19937_64 rng(seed);
  std::vector<FidelityResult> out;
  auto quantized = [&] { return static_cast<double>(60 + rng() % 41) / 100.0; };
  for (int i = 0; i < n; ++i) {
    out.push_back(result_with(i, quantized(), quantized(), quantized(), quantized()));
  }
  // Guarantee at least one report retained at the top of the sweep.
  out.push_back(result_with(n, 1.0, 1.0, 1.0, 1.0));
  return out;
}

}  // namespace

TEST_CASE("weakest dimension follows the lowest macro min(P,R)") {
  // numeric macro (0.941, 0.924), temporal macro (0.818, 0.977)
  std::vector<FidelityResult> sec_like = {
      result_with(0, 0.941, 0.924, 0.818, 0.977),
      result_with(1, 0.941, 0.924, 0.818, 0.977),
  };
  CHECK(select_weakest_dimension(sec_like) == Dimension::temporal);

  std::vector<FidelityResult> equal = {result_with(0, 0.9, 0.9, 0.9, 0.9)};
  CHECK(select_weakest_dimension(equal) == Dimension::temporal);  // tie rule

  std::vector<FidelityResult> numeric_low = {result_with(0, 0.5, 0.9, 0.9, 0.9)};
  CHECK(select_weakest_dimension(numeric_low) == Dimension::numeric);

  CHECK_THROWS_AS(select_weakest_dimension({}), FilterError);
}

TEST_CASE("tau = 0 retains everything") {
  const auto corpus = random_corpus(1, 40);
  const FilterOutcome outcome = apply_threshold(corpus, Dimension::temporal, 0.0);
  CHECK(outcome.retention_fraction == 1.0);
  CHECK(outcome.retained_ids.size() == corpus.size());
}

TEST_CASE("hand-computed threshold case: one of two retained") {
  std::vector<FidelityResult> two = {
      result_with(0, 1.0, 1.0, 1.0, 1.0),
      result_with(1, 1.0, 1.0, 0.8, 1.0),
  };
  const FilterOutcome outcome = apply_threshold(two, Dimension::temporal, 0.9);
  CHECK(outcome.retention_fraction == doctest::Approx(0.5));
  REQUIRE(outcome.retained_ids.size() == 1);
  CHECK(outcome.retained_ids[0].first == 0);
}

TEST_CASE("default policy sweeps seven thresholds") {
  FilterPolicy policy;
  const auto taus = policy.taus();
  REQUIRE(taus.size() == 7);
  CHECK(taus.front() == doctest::Approx(1.00));
  CHECK(taus.back() == doctest::Approx(0.70));
  CHECK(taus[2] == doctest::Approx(0.90));

  const auto outcomes = sweep(random_corpus(3, 30), policy);
  CHECK(outcomes.size() == 7);
}

TEST_CASE("policy validation") {
  FilterPolicy bad_step;
  bad_step.tau_step = 0.0;
  CHECK_THROWS_AS(bad_step.validate(), FilterError);
  FilterPolicy inverted;
  inverted.tau_end = 1.0;
  inverted.tau_start = 0.7;
  CHECK_THROWS_AS(inverted.validate(), FilterError);
}

TEST_CASE("retained sets are nested as tau decreases") {
  FilterPolicy policy;
  policy.dimension = Dimension::temporal;
  for (unsigned seed : {11u, 12u, 13u}) {
    const auto corpus = random_corpus(seed, 60);
    const auto outcomes = sweep(corpus, policy);
    for (std::size_t i = 1; i < outcomes.size(); ++i) {
      const std::set<std::pair<int, std::string>> tighter(outcomes[i - 1].retained_ids.begin(),
                                                          outcomes[i - 1].retained_ids.end());
      for (const auto& id : tighter) {
        const auto& looser = outcomes[i].retained_ids;
        CHECK(std::find(looser.begin(), looser.end(), id) != looser.end());
      }
      CHECK(outcomes[i].retention_fraction >= outcomes[i - 1].retention_fraction);
    }
  }
}

TEST_CASE("filter soundness: every retained report has min(P,R) >= tau") {
  for (unsigned seed : {21u, 22u}) {
    const auto corpus = random_corpus(seed, 50);
    FilterPolicy policy;
    policy.dimension = Dimension::numeric;
    for (const auto& outcome : sweep(corpus, policy)) {
      std::set<int> retained;
      for (const auto& id : outcome.retained_ids) retained.insert(id.first);
      for (const auto& r : corpus) {
        if (retained.count(r.row_id)) {
          CHECK(std::min(r.numeric.precision, r.numeric.recall) >= outcome.tau);
        }
      }
    }
  }
}

TEST_CASE("thresholding at 0.9 never lowers the dimension's macro min(P,R)") {
  for (unsigned seed : {31u, 32u, 33u, 34u}) {
    const auto corpus = random_corpus(seed, 80);
    const Dimension dim = select_weakest_dimension(corpus);
    double unfiltered = 0.0;
    for (const auto& r : corpus) {
      unfiltered += std::min(r.score(dim).precision, r.score(dim).recall);
    }
    unfiltered /= static_cast<double>(corpus.size());

    const FilterOutcome outcome = apply_threshold(corpus, dim, 0.90);
    const auto& macro = dim == Dimension::numeric ? outcome.numeric : outcome.temporal;
    REQUIRE(macro.has_value());
    CHECK(macro->min_pr >= unfiltered);
  }
}

TEST_CASE("reweighting covers both dimensions on the retained set") {
  const auto corpus = random_corpus(41, 30);
  const FilterOutcome outcome = apply_threshold(corpus, Dimension::temporal, 0.8);
  REQUIRE(outcome.numeric.has_value());
  REQUIRE(outcome.temporal.has_value());
  CHECK(outcome.numeric->precision > 0.0);
  CHECK(outcome.temporal->precision >= 0.8);
}

TEST_CASE("an empty retained set leaves the macros absent") {
  std::vector<FidelityResult> low = {result_with(0, 0.2, 0.2, 0.2, 0.2)};
  const FilterOutcome outcome = apply_threshold(low, Dimension::numeric, 0.9);
  CHECK(outcome.retained_ids.empty());
  CHECK_FALSE(outcome.numeric.has_value());
  CHECK_FALSE(outcome.temporal.has_value());
}
