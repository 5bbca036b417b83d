#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pwrc/core.hpp"

namespace pwrc {

/// Dense n x n matrix, row-major.
class SquareMatrix {
public:
    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

    std::size_t dim() const { return n_; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

/// Anti-symmetric x- and y-correlation scores for every item pair.
struct PairwiseCorrelates {
    SquareMatrix a;
    SquareMatrix b;
};

/// a_ij = p_i - p_j, b_ij = q_i - q_j.
PairwiseCorrelates rank_difference_correlates(const RankVector& p, const RankVector& q);
/// a_ij = sgn(p_i - p_j), b_ij = sgn(q_i - q_j); zero on the diagonal.
PairwiseCorrelates sign_correlates(const RankVector& p, const RankVector& q);

/// Kendall's generalized coefficient sum(a*b) / sqrt(sum(a^2) * sum(b^2)).
double generalized_gamma(const PairwiseCorrelates& correlates);

/// Spearman's rho. Untied permutations use 1 - 6 sum(d^2) / (n^3 - n);
/// anything else (mid-ranks) goes through the product-moment form.
double spearman_rho(const RankVector& p, const RankVector& q);

/// Product-moment form over all ordered pairs, valid with mid-ranks.
double spearman_rho_general(const RankVector& p, const RankVector& q);
/// 1 - 6 sum(d^2) / (n^3 - n); requires untied permutations.
double spearman_rho_shortcut(const RankVector& p, const RankVector& q);

/// Spearman's rho of two raw samples, ranked with mid-ranks.
double spearman_rho(std::span<const double> x, std::span<const double> y);

/// Kendall's tau, 2 / (n^2 - n) times the concordance sum over unordered pairs.
/// Ties are rejected.
double kendall_tau(const RankVector& p, const RankVector& q);

/// Number of discordant unordered pairs, in [0, n(n-1)/2].
std::int64_t mistaken_pair_count(const RankVector& p, const RankVector& q);

/// Signum that is undefined at zero; throws on equal arguments.
int strict_sign(double difference);

}  // namespace pwrc
