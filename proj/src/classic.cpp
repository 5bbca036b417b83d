#include "pwrc/classic.hpp"

#include <cmath>
#include <numeric>
#include <unordered_set>

#include <fmt/format.h>

#include "pwrc/error.hpp"

namespace pwrc {

namespace {

void check_pair(const RankVector& p, const RankVector& q) {
    if (p.size() != q.size())
        fail(fmt::format("rank vectors differ in length ({} vs {})", p.size(), q.size()));
    if (p.size() < 2) fail("rank correlation needs at least 2 items");
}

void check_untied(const RankVector& r, const char* name) {
    std::unordered_set<double> seen;
    for (double v : r.ranks)
        if (!seen.insert(v).second)
            fail(fmt::format("tied ranks in {} (value {}); sign comparison is undefined", name, v));
}

double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

int strict_sign(double difference) {
    if (difference > 0.0) return 1;
    if (difference < 0.0) return -1;
    fail("signum is undefined for equal ranks");
}

PairwiseCorrelates rank_difference_correlates(const RankVector& p, const RankVector& q) {
    check_pair(p, q);
    const auto n = p.size();
    PairwiseCorrelates c{SquareMatrix(n), SquareMatrix(n)};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            c.a(i, j) = p[i] - p[j];
            c.b(i, j) = q[i] - q[j];
        }
    return c;
}

PairwiseCorrelates sign_correlates(const RankVector& p, const RankVector& q) {
    check_pair(p, q);
    const auto n = p.size();
    PairwiseCorrelates c{SquareMatrix(n), SquareMatrix(n)};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            c.a(i, j) = sign_of(p[i] - p[j]);
            c.b(i, j) = sign_of(q[i] - q[j]);
        }
    return c;
}

double generalized_gamma(const PairwiseCorrelates& correlates) {
    const auto& a = correlates.a;
    const auto& b = correlates.b;
    const auto n = a.dim();
    if (b.dim() != n) fail("correlate matrices differ in size");
    double ab = 0.0;
    double aa = 0.0;
    double bb = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (a(i, j) != -a(j, i) || b(i, j) != -b(j, i))
                fail(fmt::format("correlates are not anti-symmetric at ({}, {})", i, j));
            ab += a(i, j) * b(i, j);
            aa += a(i, j) * a(i, j);
            bb += b(i, j) * b(i, j);
        }
    if (aa == 0.0 || bb == 0.0) fail_degenerate("degenerate correlates");
    return ab / std::sqrt(aa * bb);
}

double spearman_rho_general(const RankVector& p, const RankVector& q) {
    check_pair(p, q);
    // sum_{i,j} (p_i - p_j)(q_i - q_j) = 2n sum_i (p_i - mean p)(q_i - mean q),
    // so the ordered-pair form reduces to the centred product-moment sums.
    const auto n = static_cast<double>(p.size());
    const double pm = std::accumulate(p.ranks.begin(), p.ranks.end(), 0.0) / n;
    const double qm = std::accumulate(q.ranks.begin(), q.ranks.end(), 0.0) / n;
    double pq = 0.0;
    double pp = 0.0;
    double qq = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double dp = p[i] - pm;
        const double dq = q[i] - qm;
        pq += dp * dq;
        pp += dp * dp;
        qq += dq * dq;
    }
    if (pp == 0.0 || qq == 0.0) fail_degenerate("constant ranks; Spearman's rho is undefined");
    return pq / std::sqrt(pp * qq);
}

double spearman_rho_shortcut(const RankVector& p, const RankVector& q) {
    check_pair(p, q);
    if (!p.is_permutation() || !q.is_permutation())
        fail("the sum-of-squared-differences form requires untied permutations");
    std::int64_t sum_d2 = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const auto d = static_cast<std::int64_t>(p[i]) - static_cast<std::int64_t>(q[i]);
        sum_d2 += d * d;
    }
    const auto n = static_cast<double>(p.size());
    return 1.0 - 6.0 * static_cast<double>(sum_d2) / (n * n * n - n);
}

double spearman_rho(const RankVector& p, const RankVector& q) {
    check_pair(p, q);
    if (p.is_permutation() && q.is_permutation()) return spearman_rho_shortcut(p, q);
    return spearman_rho_general(p, q);
}

double spearman_rho(std::span<const double> x, std::span<const double> y) {
    return spearman_rho(rank_transform(x, TiePolicy::Average),
                        rank_transform(y, TiePolicy::Average));
}

double kendall_tau(const RankVector& p, const RankVector& q) {
    check_pair(p, q);
    check_untied(p, "p");
    check_untied(q, "q");
    const auto n = p.size();
    // w = 2 / (n^2 - n) normalizes the sum over unordered pairs; summing
    // ordered pairs instead would double the result.
    std::int64_t concordance = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            concordance += strict_sign(p[i] - p[j]) * strict_sign(q[i] - q[j]);
    const auto nd = static_cast<double>(n);
    return 2.0 * static_cast<double>(concordance) / (nd * nd - nd);
}

std::int64_t mistaken_pair_count(const RankVector& p, const RankVector& q) {
    check_pair(p, q);
    check_untied(p, "p");
    check_untied(q, "q");
    std::int64_t count = 0;
    const auto n = p.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (strict_sign(p[i] - p[j]) != strict_sign(q[i] - q[j])) ++count;
    return count;
}

}  // namespace pwrc
