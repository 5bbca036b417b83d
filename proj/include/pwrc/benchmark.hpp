#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pwrc/core.hpp"

namespace pwrc {

/// Push accuracy of one prediction: score gap between its top-N items and the rest.
struct PushAccuracy {
    std::vector<double> perN;  // N = 1..n-1
    double mean = 0.0;         // delta MOS
};

/// Mean subjective score of the N items with the highest predicted rank
/// (q in {n-N+1..n}) minus the mean score of the remaining items. `scores`
/// and `q` are aligned by position; any score scale works.
double delta_d_n(std::span<const double> scores, const RankVector& q, int topN);
double delta_d_n(const NormalizedScoreSet& xHat, const RankVector& q, int topN);

PushAccuracy delta_mos(std::span<const double> scores, const RankVector& q);
PushAccuracy delta_mos(const NormalizedScoreSet& xHat, const RankVector& q);

struct GroupedEvaluation {
    std::map<std::string, double> perGroup;
    double mean = 0.0;
};

/// Unweighted mean over content groups.
GroupedEvaluation grouped_mean(const std::map<std::string, double>& perGroupValues);

/// Number of unordered id pairs the two rankings order differently.
std::int64_t disagreement_count(std::span<const std::string> indicatorRanking,
                                std::span<const std::string> benchmarkRanking);

struct Disagreements {
    std::int64_t count = 0;
    std::vector<std::pair<std::string, std::string>> pairs;
};

/// Compares two scorings of the same metrics pair by pair. A pair disagrees
/// when the signs of the two differences differ, so a tie on one side against
/// a strict order on the other counts as a disagreement.
Disagreements value_disagreements(std::span<const std::string> metrics,
                                  std::span<const double> indicatorValues,
                                  std::span<const double> benchmarkValues);

/// Metric names sorted best first (descending value), ties kept in input order.
std::vector<std::string> ranking_by_value(std::span<const std::string> metrics,
                                          std::span<const double> values);

}  // namespace pwrc
