#include "pwrc/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "pwrc/error.hpp"

namespace pwrc {

std::vector<double> ScoreSet::scores() const {
    std::vector<double> out;
    out.reserve(items.size());
    for (const auto& item : items) out.push_back(item.score);
    return out;
}

std::vector<double> ScoreSet::stddevs() const {
    std::vector<double> out;
    out.reserve(items.size());
    for (const auto& item : items) out.push_back(item.stddev);
    return out;
}

std::vector<std::string> ScoreSet::ids() const {
    std::vector<std::string> out;
    out.reserve(items.size());
    for (const auto& item : items) out.push_back(item.id);
    return out;
}

ScoreSet ScoreSet::subset(std::span<const std::size_t> positions) const {
    ScoreSet out;
    out.polarity = polarity;
    out.items.reserve(positions.size());
    for (auto pos : positions) out.items.push_back(items.at(pos));
    return out;
}

PredictionSet PredictionSet::subset(std::span<const std::size_t> positions) const {
    PredictionSet out;
    out.metric = metric;
    out.polarity = polarity;
    out.values.reserve(positions.size());
    for (auto pos : positions) {
        out.values.push_back(values.at(pos));
        if (!ids.empty()) out.ids.push_back(ids.at(pos));
    }
    return out;
}

bool RankVector::is_permutation() const {
    const auto n = ranks.size();
    std::vector<bool> seen(n + 1, false);
    for (double r : ranks) {
        if (r != std::floor(r) || r < 1.0 || r > static_cast<double>(n)) return false;
        auto k = static_cast<std::size_t>(r);
        if (seen[k]) return false;
        seen[k] = true;
    }
    return true;
}

void validate(const ScoreSet& scores) {
    std::unordered_set<std::string> seen;
    for (const auto& item : scores.items) {
        if (!std::isfinite(item.score)) fail(fmt::format("score of '{}' is not finite", item.id));
        if (!std::isfinite(item.stddev) || item.stddev < 0.0)
            fail(fmt::format("stddev of '{}' must be finite and >= 0", item.id));
        if (!seen.insert(item.id).second) fail(fmt::format("duplicate id '{}'", item.id));
    }
}

NormalizationFit fit_normalization(std::span<const double> pool) {
    if (pool.empty()) fail("empty score pool");
    for (double v : pool)
        if (std::isnan(v)) fail("NaN in score pool");
    auto [lo, hi] = std::minmax_element(pool.begin(), pool.end());
    if (!(*hi > *lo)) fail_degenerate("constant score pool");
    return {*lo, *hi};
}

NormalizedScoreSet normalize_with(const ScoreSet& scores, const NormalizationFit& fit) {
    NormalizedScoreSet out;
    out.omega = fit.omega();
    out.epsilon = fit.epsilon();
    const double span = fit.maximum - fit.minimum;
    const auto n = scores.size();
    out.ids.reserve(n);
    out.scores.reserve(n);
    out.stddevs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& item = scores.items[i];
        if (std::isnan(item.score) || std::isnan(item.stddev))
            fail(fmt::format("NaN in subjective data for '{}'", item.id));
        // (x - min) / (max - min) equals omega * x + epsilon and hits 0 and 1
        // exactly at the pool extremes.
        double unit = (item.score - fit.minimum) / span;
        if (unit < 0.0 || unit > 1.0) {
            out.clamped.push_back(i);
            unit = std::clamp(unit, 0.0, 1.0);
        }
        const double mapped = scores.polarity == ScorePolarity::Mos ? unit : 1.0 - unit;
        out.ids.push_back(item.id);
        out.scores.push_back(mapped * 100.0);
        out.stddevs.push_back(out.omega * item.stddev * 100.0);
    }
    return out;
}

NormalizedScoreSet normalize(const ScoreSet& scores, const std::optional<ScoreSet>& pool) {
    const auto raw = pool ? pool->scores() : scores.scores();
    return normalize_with(scores, fit_normalization(raw));
}

RankVector rank_transform(std::span<const double> values, TiePolicy policy,
                          std::span<const std::string> ids) {
    const auto n = values.size();
    if (n < 2) fail("rank_transform needs at least 2 values");
    for (std::size_t i = 0; i < n; ++i)
        if (!std::isfinite(values[i])) fail(fmt::format("non-finite value at position {}", i));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    auto label = [&](std::size_t pos) {
        return pos < ids.size() ? ids[pos] : fmt::format("#{}", pos);
    };

    RankVector out;
    out.tiePolicy = policy;
    out.ranks.assign(n, 0.0);
    std::size_t k = 0;
    while (k < n) {
        std::size_t end = k + 1;
        while (end < n && values[order[end]] == values[order[k]]) ++end;
        if (end - k > 1 && policy == TiePolicy::Strict) {
            std::vector<std::string> tied;
            for (std::size_t t = k; t < end; ++t) tied.push_back(label(order[t]));
            fail(fmt::format("tied values under strict tie policy: {}", fmt::join(tied, ", ")));
        }
        for (std::size_t t = k; t < end; ++t) {
            if (policy == TiePolicy::Average)
                out.ranks[order[t]] = 0.5 * static_cast<double>(k + 1 + end);
            else
                out.ranks[order[t]] = static_cast<double>(t + 1);
        }
        k = end;
    }
    return out;
}

RankVector identity_ranks(std::size_t n) {
    RankVector out;
    out.ranks.resize(n);
    std::iota(out.ranks.begin(), out.ranks.end(), 1.0);
    return out;
}

GroundTruthPairing ground_truth_pairing(const NormalizedScoreSet& subjective,
                                        const PredictionSet& prediction, TiePolicy policy) {
    const auto n = subjective.size();
    if (policy == TiePolicy::Average) fail("ground truth pairing requires Strict or StableOrder ties");
    if (prediction.size() != n)
        fail(fmt::format("prediction '{}' has {} values for {} subjective items", prediction.metric,
                         prediction.size(), n));
    if (!prediction.ids.empty()) {
        for (std::size_t i = 0; i < n; ++i)
            if (prediction.ids[i] != subjective.ids.at(i))
                fail(fmt::format("misaligned ids at position {}: '{}' vs '{}'", i,
                                 subjective.ids.at(i), prediction.ids[i]));
    }
    // Validates ties in the subjective scores under the requested policy.
    const auto p0 = rank_transform(subjective.scores, policy, subjective.ids);

    GroundTruthPairing out;
    out.order.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) out.order[static_cast<std::size_t>(p0[i]) - 1] = i;

    auto& x = out.xHat;
    x.omega = subjective.omega;
    x.epsilon = subjective.epsilon;
    std::vector<std::size_t> canonical_of(n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto src = out.order[k];
        canonical_of[src] = k;
        if (!subjective.ids.empty()) x.ids.push_back(subjective.ids[src]);
        x.scores.push_back(subjective.scores[src]);
        x.stddevs.push_back(subjective.stddevs.at(src));
        const double v = prediction.values[src];
        out.orientedPrediction.push_back(
            prediction.polarity == PredictionPolarity::LowerIsBetter ? -v : v);
    }
    for (auto pos : subjective.clamped) x.clamped.push_back(canonical_of[pos]);
    std::sort(x.clamped.begin(), x.clamped.end());

    out.p = identity_ranks(n);
    out.p.tiePolicy = policy;
    out.q = rank_transform(out.orientedPrediction, policy, x.ids);
    return out;
}

GroundTruthPairing ground_truth_pairing(const ScoreSet& subjective,
                                        const PredictionSet& prediction, TiePolicy policy) {
    validate(subjective);
    auto normalized = normalize(subjective);
    return ground_truth_pairing(normalized, prediction, policy);
}

}  // namespace pwrc
