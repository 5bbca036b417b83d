#include "pwrc/indicator.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "pwrc/error.hpp"

namespace pwrc {

namespace {

void check_canonical(const RankVector& p) {
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] != static_cast<double>(i + 1))
            fail("p must be the canonical ranking [1..n]; use ground_truth_pairing");
}

void check_inputs(const NormalizedScoreSet& xHat, const RankVector& p, const RankVector& q) {
    if (p.size() < 2) fail("PWRC needs at least 2 items");
    if (q.size() != p.size() || xHat.size() != p.size())
        fail(fmt::format("size mismatch: {} scores, {} p ranks, {} q ranks", xHat.size(),
                         p.size(), q.size()));
    check_canonical(p);
    if (!q.is_permutation()) fail("q must be an untied permutation of 1..n");
}

void check_threshold(double t) {
    if (!std::isfinite(t) || t < 0.0) fail(fmt::format("invalid sensory threshold {}", t));
}

/// Detection times importance for every ordered pair, in row-major order.
std::vector<double> signed_weights(const RankVector& p, const RankVector& q, Weighting weighting) {
    const auto n = p.size();
    std::vector<double> out;
    out.reserve(n * (n - 1));
    if (weighting == Weighting::Uniform) {
        const double nd = static_cast<double>(n);
        // 2 / (n^2 - n) per unordered pair, split over its two orderings.
        const double m = 1.0 / (nd * nd - nd);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) out.push_back(detection(p[i], p[j], q[i], q[j]) * m);
        return out;
    }
    const auto w = importance_weights(p, q);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) out.push_back(detection(p[i], p[j], q[i], q[j]) * w.weight(i, j));
    return out;
}

double accumulate(const NormalizedScoreSet& xHat, std::span<const double> dm, double threshold,
                  const ActivationConfig& config) {
    const auto n = xHat.size();
    const auto& x = xHat.scores;
    double sum = 0.0;
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) sum += activation(x[i], x[j], threshold, config) * dm[k++];
    // rounding guard
    return std::clamp(sum, -1.0, 1.0);
}

}  // namespace

double derive_c1(double meanNormalizedStddev) {
    if (!std::isfinite(meanNormalizedStddev) || meanNormalizedStddev <= 0.0)
        fail(fmt::format("mean normalized stddev must be positive, got {}", meanNormalizedStddev));
    return 3.0 / (2.0 * meanNormalizedStddev);
}

double activation(double xi, double xj, double threshold, const ActivationConfig& config) {
    if (config.mode == ActivationMode::Constant1) return 1.0;
    return 1.0 / (1.0 + std::exp(-config.c1 * (std::abs(xi - xj) - threshold)));
}

int detection(double pi, double pj, double qi, double qj) {
    return strict_sign(pi - pj) * strict_sign(qi - qj);
}

double ImportanceWeights::total() const {
    double sum = 0.0;
    for (std::size_t i = 0; i < weight.dim(); ++i)
        for (std::size_t j = 0; j < weight.dim(); ++j)
            if (i != j) sum += weight(i, j);
    return sum;
}

ImportanceWeights importance_weights(const RankVector& p, const RankVector& q) {
    const auto n = p.size();
    if (n < 2) fail("importance weights need at least 2 items");
    if (q.size() != n) fail("p and q differ in length");
    check_canonical(p);
    if (!q.is_permutation()) fail("q must be an untied permutation of 1..n");

    const double nd = static_cast<double>(n);
    ImportanceWeights w{SquareMatrix(n), SquareMatrix(n), SquareMatrix(n)};
    std::vector<double> deviation(n);
    for (std::size_t i = 0; i < n; ++i) deviation[i] = std::abs(static_cast<double>(i + 1) - q[i]);

    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double d = (deviation[i] + deviation[j]) / (2.0 * nd - 2.0);
            const double l = static_cast<double>(std::max(i, j)) / (nd - 1.0);
            w.dTerm(i, j) = d;
            w.lTerm(i, j) = l;
            // l > 0 for every off-diagonal pair, so each raw weight is positive.
            w.weight(i, j) = std::exp(d) + std::exp(l) - 2.0;
            total += w.weight(i, j);
        }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) w.weight(i, j) /= total;
    return w;
}

double pwrc(const NormalizedScoreSet& xHat, const RankVector& p, const RankVector& q,
            double threshold, const ActivationConfig& config, Weighting weighting) {
    check_inputs(xHat, p, q);
    check_threshold(threshold);
    const auto dm = signed_weights(p, q, weighting);
    return accumulate(xHat, dm, threshold, config);
}

SaStCurve sa_st_curve(const NormalizedScoreSet& xHat, const RankVector& p, const RankVector& q,
                      std::span<const double> thresholds, const ActivationConfig& config,
                      Weighting weighting) {
    if (thresholds.size() < 2) fail("an SA-ST curve needs at least 2 thresholds");
    for (std::size_t k = 0; k < thresholds.size(); ++k) {
        check_threshold(thresholds[k]);
        if (k > 0 && !(thresholds[k] > thresholds[k - 1]))
            fail("curve thresholds must be strictly increasing");
    }
    check_inputs(xHat, p, q);
    const auto dm = signed_weights(p, q, weighting);

    SaStCurve curve;
    curve.c1 = config.c1;
    curve.thresholds.assign(thresholds.begin(), thresholds.end());
    curve.accuracies.reserve(thresholds.size());
    for (double t : thresholds) curve.accuracies.push_back(accumulate(xHat, dm, t, config));
    return curve;
}

std::vector<double> threshold_grid(double lo, double hi, int count) {
    if (count < 2) fail("a threshold grid needs at least 2 samples");
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo))
        fail(fmt::format("invalid grid range [{}, {}]", lo, hi));
    std::vector<double> grid(static_cast<std::size_t>(count));
    const double step = (hi - lo) / static_cast<double>(count - 1);
    for (int k = 0; k < count; ++k) grid[static_cast<std::size_t>(k)] = lo + step * k;
    grid.back() = hi;
    return grid;
}

double auc_ca(const SaStCurve& curve, double tMin, double tMax) {
    const auto& t = curve.thresholds;
    const auto& s = curve.accuracies;
    if (t.size() < 2 || s.size() != t.size()) fail("malformed SA-ST curve");
    if (!(tMin < tMax)) fail_degenerate(fmt::format("empty AUC interval [{}, {}]", tMin, tMax));
    if (tMin < t.front() || tMax > t.back())
        fail(fmt::format("AUC interval [{}, {}] outside sampled range [{}, {}]", tMin, tMax,
                         t.front(), t.back()));

    auto value_at = [&](std::size_t k, double at) {
        const double frac = (at - t[k]) / (t[k + 1] - t[k]);
        return s[k] + frac * (s[k + 1] - s[k]);
    };
    double area = 0.0;
    for (std::size_t k = 0; k + 1 < t.size(); ++k) {
        const double a = std::max(t[k], tMin);
        const double b = std::min(t[k + 1], tMax);
        if (!(b > a)) continue;
        const double sa = a == t[k] ? s[k] : value_at(k, a);
        const double sb = b == t[k + 1] ? s[k + 1] : value_at(k, b);
        area += 0.5 * (b - a) * (sa + sb);
    }
    return area;
}

std::pair<double, double> threshold_range(std::span<const double> normalizedStddevs) {
    if (normalizedStddevs.empty()) fail("threshold range needs at least one stddev");
    for (double s : normalizedStddevs)
        if (!std::isfinite(s) || s < 0.0) fail(fmt::format("invalid normalized stddev {}", s));
    auto [lo, hi] = std::minmax_element(normalizedStddevs.begin(), normalizedStddevs.end());
    return {2.0 * *lo, 2.0 * *hi};
}

double confidence_aware_auc(const NormalizedScoreSet& xHat, const RankVector& p,
                            const RankVector& q, double tMin, double tMax,
                            const ActivationConfig& config, Weighting weighting, int samples) {
    if (!(tMin < tMax))
        fail_degenerate(fmt::format("zero-width sensory threshold range [{}, {}]", tMin, tMax));
    const auto grid = threshold_grid(tMin, tMax, samples);
    return auc_ca(sa_st_curve(xHat, p, q, grid, config, weighting), tMin, tMax);
}

}  // namespace pwrc
