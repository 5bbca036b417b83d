#pragma once

#include <span>
#include <utility>
#include <vector>

#include "pwrc/classic.hpp"
#include "pwrc/core.hpp"

namespace pwrc {

/// Activation steepness shared across databases, 3 / (2 * 8.577).
inline constexpr double kDefaultC1 = 0.175;
/// Samples of the trapezoidal AUC grid on [tMin, tMax].
inline constexpr int kDefaultAucSamples = 101;
/// Display grid: this many evenly spaced thresholds on [0, 100].
inline constexpr int kDefaultCurveSamples = 20;

enum class ActivationMode {
    Soft,       // logistic in (score gap - threshold)
    Constant1,  // every comparison fully active
};

struct ActivationConfig {
    double c1 = kDefaultC1;
    ActivationMode mode = ActivationMode::Soft;
};

enum class Weighting {
    Perceptual,  // rank-deviation and rank-level importance
    Uniform,     // 1 / (n^2 - n) per ordered pair; reduces PWRC to Kendall's tau
};

/// Steepness for which a gap of two standard deviations is activated with
/// roughly 0.95 confidence. Uses the closed form 3 / (2 sigma) rather than
/// the exact ln(19) / (2 sigma).
double derive_c1(double meanNormalizedStddev);

/// Soft sensory-threshold gate on the subjective score gap |xi - xj|.
double activation(double xi, double xj, double threshold, const ActivationConfig& config);

/// -1 for a discordant pair, +1 otherwise. Throws on equal ranks.
int detection(double pi, double pj, double qi, double qj);

/// Per ordered pair importance. Diagonal entries are zero and unused.
struct ImportanceWeights {
    SquareMatrix weight;  // normalized, sums to 1 over i != j
    SquareMatrix dTerm;   // (|i - q_i| + |j - q_j|) / (2n - 2)
    SquareMatrix lTerm;   // (max(i, j) - 1) / (n - 1)

    std::size_t size() const { return weight.dim(); }
    double total() const;
};

/// Requires canonical p = [1..n] and an untied permutation q.
ImportanceWeights importance_weights(const RankVector& p, const RankVector& q);

/// Sorting accuracy S(x, y, T): sum over ordered pairs i != j of activation
/// times detection times importance. xHat must be in canonical order, i.e.
/// xHat.scores[i] belongs to the item with p = i + 1.
double pwrc(const NormalizedScoreSet& xHat, const RankVector& p, const RankVector& q,
            double threshold, const ActivationConfig& config,
            Weighting weighting = Weighting::Perceptual);

struct SaStCurve {
    std::vector<double> thresholds;
    std::vector<double> accuracies;
    double c1 = kDefaultC1;

    std::size_t size() const { return thresholds.size(); }
};

SaStCurve sa_st_curve(const NormalizedScoreSet& xHat, const RankVector& p, const RankVector& q,
                      std::span<const double> thresholds, const ActivationConfig& config,
                      Weighting weighting = Weighting::Perceptual);

/// `count` evenly spaced values from lo to hi inclusive.
std::vector<double> threshold_grid(double lo, double hi, int count);

/// Trapezoidal integral of the piecewise-linear curve over [tMin, tMax].
double auc_ca(const SaStCurve& curve, double tMin, double tMax);

/// (2 min sigma, 2 max sigma) over normalized standard deviations.
std::pair<double, double> threshold_range(std::span<const double> normalizedStddevs);

/// Samples the curve on a uniform grid over [tMin, tMax] and integrates it.
double confidence_aware_auc(const NormalizedScoreSet& xHat, const RankVector& p,
                            const RankVector& q, double tMin, double tMax,
                            const ActivationConfig& config,
                            Weighting weighting = Weighting::Perceptual,
                            int samples = kDefaultAucSamples);

}  // namespace pwrc
