#include "pwrc/benchmark.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include <fmt/format.h>

#include "pwrc/error.hpp"

namespace pwrc {

namespace {

/// Positions ordered by descending predicted rank.
std::vector<std::size_t> push_order(std::span<const double> scores, const RankVector& q) {
    if (scores.size() != q.size())
        fail(fmt::format("{} scores but {} predicted ranks", scores.size(), q.size()));
    if (q.size() < 2) fail("push accuracy needs at least 2 items");
    if (!q.is_permutation()) fail("predicted ranks must be an untied permutation of 1..n");
    std::vector<std::size_t> order(q.size());
    for (std::size_t i = 0; i < q.size(); ++i)
        order[q.size() - static_cast<std::size_t>(q[i])] = i;
    return order;
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

double delta_d_n(std::span<const double> scores, const RankVector& q, int topN) {
    const auto order = push_order(scores, q);
    const auto n = static_cast<int>(order.size());
    if (topN < 1 || topN > n - 1) fail(fmt::format("N = {} outside [1, {}]", topN, n - 1));
    double top = 0.0;
    double rest = 0.0;
    for (int k = 0; k < n; ++k) (k < topN ? top : rest) += scores[order[static_cast<std::size_t>(k)]];
    return top / topN - rest / (n - topN);
}

double delta_d_n(const NormalizedScoreSet& xHat, const RankVector& q, int topN) {
    return delta_d_n(xHat.scores, q, topN);
}

PushAccuracy delta_mos(std::span<const double> scores, const RankVector& q) {
    const auto order = push_order(scores, q);
    const auto n = order.size();
    const double total = std::accumulate(scores.begin(), scores.end(), 0.0);
    PushAccuracy out;
    out.perN.reserve(n - 1);
    double top = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        top += scores[order[k]];
        const auto topN = static_cast<double>(k + 1);
        out.perN.push_back(top / topN - (total - top) / (static_cast<double>(n) - topN));
    }
    out.mean = std::accumulate(out.perN.begin(), out.perN.end(), 0.0) /
               static_cast<double>(out.perN.size());
    return out;
}

PushAccuracy delta_mos(const NormalizedScoreSet& xHat, const RankVector& q) {
    return delta_mos(xHat.scores, q);
}

GroupedEvaluation grouped_mean(const std::map<std::string, double>& perGroupValues) {
    if (perGroupValues.empty()) fail("grouped mean over an empty set of groups");
    GroupedEvaluation out;
    out.perGroup = perGroupValues;
    double sum = 0.0;
    for (const auto& [group, value] : perGroupValues) sum += value;
    out.mean = sum / static_cast<double>(perGroupValues.size());
    return out;
}

std::int64_t disagreement_count(std::span<const std::string> indicatorRanking,
                                std::span<const std::string> benchmarkRanking) {
    if (indicatorRanking.size() != benchmarkRanking.size())
        fail("rankings cover different numbers of metrics");
    std::unordered_map<std::string, std::size_t> position;
    for (std::size_t i = 0; i < benchmarkRanking.size(); ++i)
        if (!position.emplace(benchmarkRanking[i], i).second)
            fail(fmt::format("duplicate metric '{}' in benchmark ranking", benchmarkRanking[i]));
    std::vector<std::size_t> mapped;
    mapped.reserve(indicatorRanking.size());
    for (const auto& id : indicatorRanking) {
        auto it = position.find(id);
        if (it == position.end()) fail(fmt::format("metric '{}' missing from benchmark ranking", id));
        mapped.push_back(it->second);
    }
    {
        auto sorted = mapped;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            fail("duplicate metric in indicator ranking");
    }
    std::int64_t count = 0;
    for (std::size_t i = 0; i < mapped.size(); ++i)
        for (std::size_t j = i + 1; j < mapped.size(); ++j)
            if (mapped[i] > mapped[j]) ++count;
    return count;
}

Disagreements value_disagreements(std::span<const std::string> metrics,
                                  std::span<const double> indicatorValues,
                                  std::span<const double> benchmarkValues) {
    if (indicatorValues.size() != metrics.size() || benchmarkValues.size() != metrics.size())
        fail("indicator and benchmark values must cover the same metrics");
    Disagreements out;
    for (std::size_t i = 0; i < metrics.size(); ++i)
        for (std::size_t j = i + 1; j < metrics.size(); ++j)
            if (sign_of(indicatorValues[i] - indicatorValues[j]) !=
                sign_of(benchmarkValues[i] - benchmarkValues[j])) {
                ++out.count;
                out.pairs.emplace_back(metrics[i], metrics[j]);
            }
    return out;
}

std::vector<std::string> ranking_by_value(std::span<const std::string> metrics,
                                          std::span<const double> values) {
    if (values.size() != metrics.size()) fail("one value per metric required");
    std::vector<std::size_t> order(metrics.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    std::vector<std::string> out;
    for (auto k : order) out.push_back(metrics[k]);
    return out;
}

}  // namespace pwrc
