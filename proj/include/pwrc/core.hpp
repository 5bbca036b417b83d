#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pwrc {

enum class ScorePolarity { Mos, Dmos };
enum class PredictionPolarity { HigherIsBetter, LowerIsBetter };

/// How equal values are resolved when scores are turned into ranks.
enum class TiePolicy {
    Strict,       // ties are an error
    StableOrder,  // earlier input position gets the lower rank
    Average,      // mid-ranks; only meaningful for Spearman
};

struct ScoreItem {
    std::string id;
    double score = 0.0;
    double stddev = 0.0;
    std::string group;
};

/// Subjective scores of one database (or a subset of it) in the source scale.
struct ScoreSet {
    std::vector<ScoreItem> items;
    ScorePolarity polarity = ScorePolarity::Mos;

    std::size_t size() const { return items.size(); }
    std::vector<double> scores() const;
    std::vector<double> stddevs() const;
    std::vector<std::string> ids() const;

    /// Items at the given positions, same polarity.
    ScoreSet subset(std::span<const std::size_t> positions) const;
};

/// Scores mapped to [0, 100] with higher always meaning better quality.
struct NormalizedScoreSet {
    std::vector<std::string> ids;
    std::vector<double> scores;
    std::vector<double> stddevs;
    double omega = 0.0;
    double epsilon = 0.0;
    /// Positions whose mapped score fell outside [0, 100] and were clamped.
    std::vector<std::size_t> clamped;

    std::size_t size() const { return scores.size(); }
};

/// Metric outputs aligned by position with a ScoreSet.
struct PredictionSet {
    std::string metric;
    /// Item ids in the same order as values; may be empty when alignment is implicit.
    std::vector<std::string> ids;
    std::vector<double> values;
    PredictionPolarity polarity = PredictionPolarity::HigherIsBetter;

    std::size_t size() const { return values.size(); }
    PredictionSet subset(std::span<const std::size_t> positions) const;
};

/// Ranks in ascending quality order: 1 is the worst item, n the best.
struct RankVector {
    std::vector<double> ranks;
    TiePolicy tiePolicy = TiePolicy::Strict;

    std::size_t size() const { return ranks.size(); }
    double operator[](std::size_t i) const { return ranks[i]; }
    /// True when the ranks are exactly the integers 1..n in some order.
    bool is_permutation() const;
};

/// Checks the ScoreSet invariants (finite scores, stddev >= 0, unique ids).
void validate(const ScoreSet& scores);

/// Score range the [0, 100] mapping is fitted on.
struct NormalizationFit {
    double minimum = 0.0;
    double maximum = 1.0;

    double omega() const { return 1.0 / (maximum - minimum); }
    double epsilon() const { return -minimum / (maximum - minimum); }
};

/// Fits the mapping on a pool of raw scores. Throws on NaN or a constant pool.
NormalizationFit fit_normalization(std::span<const double> pool);

/// Maps scores to [0, 100] using constants fitted on `pool` (defaults to
/// `scores`). Scores outside the pool range are clamped and reported in
/// NormalizedScoreSet::clamped.
NormalizedScoreSet normalize(const ScoreSet& scores,
                             const std::optional<ScoreSet>& pool = std::nullopt);

NormalizedScoreSet normalize_with(const ScoreSet& scores, const NormalizationFit& fit);

RankVector rank_transform(std::span<const double> values, TiePolicy policy,
                          std::span<const std::string> ids = {});

RankVector identity_ranks(std::size_t n);

/// Subjective and predicted ranks in canonical orientation: items sorted by
/// ascending normalized subjective quality, so that p = [1..n].
struct GroundTruthPairing {
    RankVector p;
    RankVector q;
    NormalizedScoreSet xHat;
    /// order[k] is the input position of the item placed at canonical position k.
    std::vector<std::size_t> order;
    /// Prediction values reordered to canonical order, oriented higher-is-better.
    std::vector<double> orientedPrediction;
};

GroundTruthPairing ground_truth_pairing(const NormalizedScoreSet& subjective,
                                        const PredictionSet& prediction,
                                        TiePolicy policy = TiePolicy::Strict);

/// Convenience overload that normalizes the subjective set on itself.
GroundTruthPairing ground_truth_pairing(const ScoreSet& subjective,
                                        const PredictionSet& prediction,
                                        TiePolicy policy = TiePolicy::Strict);

}  // namespace pwrc
