#include "pwrc/indicator.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "pwrc/classic.hpp"
#include "pwrc/error.hpp"

using namespace pwrc;

namespace {

RankVector ranks(const std::vector<int>& r) {
    RankVector v;
    v.ranks.assign(r.begin(), r.end());
    return v;
}

NormalizedScoreSet scores(std::vector<double> s) {
    NormalizedScoreSet x;
    x.scores = std::move(s);
    x.stddevs.assign(x.scores.size(), 1.0);
    return x;
}

std::vector<int> identity(int n) {
    std::vector<int> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i + 1;
    return v;
}

const NormalizedScoreSet kToy = scores({0, 10, 30, 60, 100});  // {5,10,20,35,55} normalized

constexpr ActivationConfig kConstant{kDefaultC1, ActivationMode::Constant1};

}  // namespace

TEST(DeriveC1, Examples) {
    EXPECT_NEAR(derive_c1(8.577), 0.175, 5e-4);
    EXPECT_DOUBLE_EQ(derive_c1(1.5), 1.0);
    const double sigma = 8.577;
    ActivationConfig cfg{derive_c1(sigma), ActivationMode::Soft};
    EXPECT_NEAR(activation(2 * sigma, 0.0, 0.0, cfg), 0.9526, 1e-4);
    EXPECT_THROW(derive_c1(0.0), Error);
    EXPECT_THROW(derive_c1(-1.0), Error);
}

TEST(Activation, Examples) {
    ActivationConfig cfg{0.175, ActivationMode::Soft};
    EXPECT_DOUBLE_EQ(activation(40, 20, 20, cfg), 0.5);
    EXPECT_NEAR(activation(17.154, 0, 0, cfg), 0.9526621436, 1e-9);
    EXPECT_NEAR(activation(0, 0, 17.154, cfg), 0.0473378564, 1e-9);
    EXPECT_DOUBLE_EQ(activation(0, 80, 50, kConstant), 1.0);
}

TEST(Detection, Examples) {
    EXPECT_EQ(detection(1, 2, 1, 2), 1);
    EXPECT_EQ(detection(1, 2, 2, 1), -1);
    EXPECT_EQ(detection(2, 1, 2, 1), 1);
    EXPECT_THROW(detection(1, 1, 1, 2), Error);
}

TEST(ImportanceWeights, TwoItems) {
    const auto w = importance_weights(ranks({1, 2}), ranks({1, 2}));
    EXPECT_DOUBLE_EQ(w.dTerm(0, 1), 0.0);
    EXPECT_DOUBLE_EQ(w.lTerm(0, 1), 1.0);
    EXPECT_DOUBLE_EQ(w.weight(0, 1), 0.5);
    EXPECT_DOUBLE_EQ(w.weight(1, 0), 0.5);
}

TEST(ImportanceWeights, IdentityPutsTheMaximumOnTheTopPair) {
    for (int n = 3; n <= 9; ++n) {
        const auto w = importance_weights(ranks(identity(n)), ranks(identity(n)));
        const auto top = static_cast<std::size_t>(n - 1);
        double best = 0;
        for (std::size_t i = 0; i < top + 1; ++i)
            for (std::size_t j = 0; j < top + 1; ++j)
                if (i != j) best = std::max(best, w.weight(i, j));
        EXPECT_DOUBLE_EQ(w.weight(top - 1, top), best);
        EXPECT_GT(w.weight(top - 1, top), w.weight(0, 1));
    }
}

TEST(ImportanceWeights, ReversedFiveItems) {
    const auto w = importance_weights(ranks(identity(5)), ranks({5, 4, 3, 2, 1}));
    EXPECT_DOUBLE_EQ(w.dTerm(0, 1), 0.75);
    EXPECT_DOUBLE_EQ(w.lTerm(0, 1), 0.25);
}

TEST(ImportanceWeights, InvariantsOverRandomPermutations) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + trial % 12;
        auto q = identity(n);
        std::shuffle(q.begin(), q.end(), rng);
        const auto w = importance_weights(ranks(identity(n)), ranks(q));
        EXPECT_NEAR(w.total(), 1.0, 1e-12);
        for (std::size_t i = 0; i < w.size(); ++i)
            for (std::size_t j = 0; j < w.size(); ++j) {
                if (i == j) continue;
                EXPECT_DOUBLE_EQ(w.weight(i, j), w.weight(j, i));
                EXPECT_GE(w.dTerm(i, j), 0.0);
                EXPECT_LE(w.dTerm(i, j), 1.0);
                EXPECT_GE(w.lTerm(i, j), 0.0);
                EXPECT_LE(w.lTerm(i, j), 1.0);
                EXPECT_GE(w.weight(i, j), 0.0);
                EXPECT_LE(w.weight(i, j), 1.0);
            }
    }
}

TEST(ImportanceWeights, IncreasingInDeviationAndLevel) {
    // Within one weighting, a pair with larger d (same l) or larger l (same d)
    // gets strictly more weight.
    const auto w = importance_weights(ranks(identity(6)), ranks({2, 1, 3, 4, 6, 5}));
    // pairs (3,4) and (3,6) share d = 0/10 and 1/10 respectively? Check via terms.
    for (std::size_t a = 0; a < 6; ++a)
        for (std::size_t b = 0; b < 6; ++b)
            for (std::size_t c = 0; c < 6; ++c)
                for (std::size_t d = 0; d < 6; ++d) {
                    if (a == b || c == d) continue;
                    const bool dGreater = w.dTerm(a, b) > w.dTerm(c, d) && w.lTerm(a, b) >= w.lTerm(c, d);
                    const bool lGreater = w.lTerm(a, b) > w.lTerm(c, d) && w.dTerm(a, b) >= w.dTerm(c, d);
                    if (dGreater || lGreater) EXPECT_GT(w.weight(a, b), w.weight(c, d));
                }
}

TEST(ImportanceWeights, Errors) {
    EXPECT_THROW(importance_weights(ranks({1}), ranks({1})), Error);
    EXPECT_THROW(importance_weights(ranks({2, 1, 3}), ranks({1, 2, 3})), Error);
    EXPECT_THROW(importance_weights(ranks({1, 2, 3}), ranks({1, 1, 3})), Error);
}

TEST(Pwrc, Extremes) {
    const auto p = ranks(identity(5));
    EXPECT_NEAR(pwrc::pwrc(kToy, p, p, 0.0, kConstant), 1.0, 1e-15);
    EXPECT_NEAR(pwrc::pwrc(kToy, p, ranks({5, 4, 3, 2, 1}), 0.0, kConstant), -1.0, 1e-15);
}

TEST(Pwrc, ReducesToKendallWithConstantActivationAndUniformWeights) {
    const auto p = ranks(identity(5));
    for (const auto& perm : oracle::permutations(5)) {
        const auto q = ranks(perm);
        EXPECT_NEAR(pwrc::pwrc(kToy, p, q, 37.0, kConstant, Weighting::Uniform), kendall_tau(p, q), 1e-12);
    }
}

TEST(Pwrc, MatchesLiteralOracle) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> gap(0.5, 30.0);
    std::uniform_real_distribution<double> thr(0.0, 100.0);
    for (int trial = 0; trial < 150; ++trial) {
        const int n = 2 + trial % 10;
        std::vector<double> x{0.0};
        for (int i = 1; i < n; ++i) x.push_back(x.back() + gap(rng));
        auto q = identity(n);
        std::shuffle(q.begin(), q.end(), rng);
        const double T = thr(rng);
        const double c1 = 0.05 + 0.3 * (trial % 5);
        const ActivationConfig soft{c1, ActivationMode::Soft};
        EXPECT_NEAR(pwrc::pwrc(scores(x), ranks(identity(n)), ranks(q), T, soft),
                    oracle::pwrc(x, q, T, c1, false, false), 1e-12);
        EXPECT_NEAR(pwrc::pwrc(scores(x), ranks(identity(n)), ranks(q), T, soft, Weighting::Uniform),
                    oracle::pwrc(x, q, T, c1, false, true), 1e-12);
    }
}

TEST(Pwrc, UniqueMaximumNeedsWellSeparatedScores) {
    const double c1 = 0.175, T = 5.0;
    const double spacing = T + 60.0 / c1;
    std::vector<double> x;
    for (int i = 0; i < 5; ++i) x.push_back(spacing * i);
    const auto xs = scores(x);
    const auto p = ranks(identity(5));
    const ActivationConfig soft{c1, ActivationMode::Soft};
    const double best = pwrc::pwrc(xs, p, p, T, soft);
    EXPECT_GT(best, 0.999);
    EXPECT_LT(best, 1.0 + 1e-15);
    for (const auto& perm : oracle::permutations(5)) {
        if (perm == identity(5)) continue;
        EXPECT_LT(pwrc::pwrc(xs, p, ranks(perm), T, soft), best);
    }
}

TEST(Pwrc, SymmetryAttributeDoesNotHoldForGenericInputs) {
    // Swapping the roles of x and y changes both the activation input and the
    // anchoring of the weights, so S(x, y) != S(y, x) in general.
    const std::vector<double> x{0, 10, 30, 60, 100};
    const std::vector<double> y{0, 45, 20, 100, 70};  // ranks q = [1,3,2,5,4]
    const auto forward = pwrc::pwrc(scores(x), ranks(identity(5)), ranks({1, 3, 2, 5, 4}), 10.0,
                              ActivationConfig{0.175, ActivationMode::Soft});
    // With y as ground truth: y sorted ascending is items {0,2,1,4,3}; x ranks in that order.
    const auto backward = pwrc::pwrc(scores({0, 20, 45, 70, 100}), ranks(identity(5)),
                               ranks({1, 3, 2, 5, 4}), 10.0,
                               ActivationConfig{0.175, ActivationMode::Soft});
    EXPECT_GT(std::abs(forward - backward), 1e-6);
}

TEST(Pwrc, Errors) {
    const auto p = ranks(identity(3));
    EXPECT_THROW(pwrc::pwrc(scores({0, 50, 100}), p, p, -1.0, kConstant), Error);
    EXPECT_THROW(pwrc::pwrc(scores({0, 50}), p, p, 0.0, kConstant), Error);
    EXPECT_THROW(pwrc::pwrc(scores({0, 50, 100}), ranks({3, 2, 1}), p, 0.0, kConstant), Error);
}

TEST(SaStCurve, IdentityOnSeparatedScoresDecreasesBelowOne) {
    const auto x = scores({0, 25, 50, 75, 100});
    const auto p = ranks(identity(5));
    const auto grid = threshold_grid(0, 100, kDefaultCurveSamples);
    ASSERT_EQ(grid.size(), 20u);
    EXPECT_DOUBLE_EQ(grid.front(), 0.0);
    EXPECT_DOUBLE_EQ(grid.back(), 100.0);
    const auto curve = sa_st_curve(x, p, p, grid, ActivationConfig{});
    for (std::size_t k = 0; k < curve.size(); ++k) {
        EXPECT_LT(curve.accuracies[k], 1.0);
        if (k > 0) EXPECT_LT(curve.accuracies[k], curve.accuracies[k - 1]);
    }
}

TEST(SaStCurve, SamplesMatchPointEvaluations) {
    const auto p = ranks(identity(5));
    const auto q = ranks({2, 1, 3, 5, 4});
    const auto grid = threshold_grid(0, 100, 20);
    const auto curve = sa_st_curve(kToy, p, q, grid, ActivationConfig{});
    for (std::size_t k = 0; k < grid.size(); ++k)
        EXPECT_EQ(curve.accuracies[k], pwrc::pwrc(kToy, p, q, grid[k], ActivationConfig{}));
    EXPECT_EQ(curve.c1, kDefaultC1);
}

TEST(SaStCurve, CurvesOfDifferentPredictionsCanCross) {
    const auto p = ranks(identity(5));
    const auto grid = threshold_grid(0, 100, 101);
    const auto perms = oracle::permutations(5);
    std::vector<std::vector<double>> curves;
    for (const auto& perm : perms) curves.push_back(sa_st_curve(kToy, p, ranks(perm), grid, ActivationConfig{}).accuracies);
    bool crossing = false;
    for (std::size_t a = 0; a < curves.size() && !crossing; ++a)
        for (std::size_t b = a + 1; b < curves.size() && !crossing; ++b) {
            bool above = false, below = false;
            for (std::size_t k = 0; k < grid.size(); ++k) {
                const double diff = curves[a][k] - curves[b][k];
                above = above || diff > 1e-9;
                below = below || diff < -1e-9;
            }
            crossing = above && below;
        }
    EXPECT_TRUE(crossing);
}

TEST(SaStCurve, Errors) {
    const auto p = ranks(identity(5));
    std::vector<double> empty;
    EXPECT_THROW(sa_st_curve(kToy, p, p, empty, ActivationConfig{}), Error);
    std::vector<double> unsorted{10, 5};
    EXPECT_THROW(sa_st_curve(kToy, p, p, unsorted, ActivationConfig{}), Error);
}

TEST(AucCa, ClosedForms) {
    SaStCurve ones{threshold_grid(0, 100, 21), std::vector<double>(21, 1.0), kDefaultC1};
    EXPECT_NEAR(auc_ca(ones, 10, 30), 20.0, 1e-12);
    SaStCurve minus{threshold_grid(0, 50, 11), std::vector<double>(11, -1.0), kDefaultC1};
    EXPECT_NEAR(auc_ca(minus, 0, 50), -50.0, 1e-12);
    SaStCurve linear;
    linear.thresholds = threshold_grid(0, 100, 101);
    for (double t : linear.thresholds) linear.accuracies.push_back(1.0 - t / 100.0);
    EXPECT_NEAR(auc_ca(linear, 0, 100), 50.0, 1e-9);
    // Interpolated endpoints between samples stay exact on a linear function.
    EXPECT_NEAR(auc_ca(linear, 12.345, 67.891),
                (67.891 - 12.345) - (67.891 * 67.891 - 12.345 * 12.345) / 200.0, 1e-9);
}

TEST(AucCa, Errors) {
    SaStCurve c{threshold_grid(0, 10, 11), std::vector<double>(11, 1.0), kDefaultC1};
    EXPECT_THROW(auc_ca(c, 5, 5), Error);
    EXPECT_THROW(auc_ca(c, 6, 5), Error);
    EXPECT_THROW(auc_ca(c, -1, 5), Error);
    EXPECT_THROW(auc_ca(c, 1, 11), Error);
}

TEST(ThresholdRange, Examples) {
    std::vector<double> single{8.577};
    const auto [lo, hi] = threshold_range(single);
    EXPECT_DOUBLE_EQ(lo, 17.154);
    EXPECT_DOUBLE_EQ(hi, 17.154);
    std::vector<double> pair{2, 10};
    EXPECT_EQ(threshold_range(pair), std::make_pair(4.0, 20.0));
    std::vector<double> zero{0, 5};
    EXPECT_EQ(threshold_range(zero), std::make_pair(0.0, 10.0));
    std::vector<double> none;
    EXPECT_THROW(threshold_range(none), Error);
}

TEST(ConfidenceAwareAuc, DegenerateRangeIsAnError) {
    const auto p = ranks(identity(5));
    try {
        confidence_aware_auc(kToy, p, p, 17.154, 17.154, ActivationConfig{});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Degenerate);
    }
}

TEST(ConfidenceAwareAuc, ConstantActivationGivesWidthTimesPwrc) {
    const auto p = ranks(identity(5));
    const auto q = ranks({1, 3, 2, 5, 4});
    const double s = pwrc::pwrc(kToy, p, q, 0.0, kConstant);
    EXPECT_NEAR(confidence_aware_auc(kToy, p, q, 4.0, 20.0, kConstant), 16.0 * s, 1e-12);
}
