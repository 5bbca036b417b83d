#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pwrc/benchmark.hpp"
#include "pwrc/core.hpp"
#include "pwrc/dataset.hpp"
#include "pwrc/indicator.hpp"

namespace pwrc {

enum class SplitUnit { ByGroup, ByItem };

struct SplitSpec {
    double trainRatio = 0.8;
    int trials = 1000;
    std::uint64_t seed = 0;
    SplitUnit unit = SplitUnit::ByGroup;
};

/// One non-overlapping partition of the split units (group ids or item ids).
struct Split {
    std::vector<std::string> train;
    std::vector<std::string> test;
};

/// Number of training units: round(ratio * units), clamped to [1, units - 1].
std::size_t train_unit_count(std::size_t units, double trainRatio);

/// The split of a single trial; depends only on (units, spec.seed, trialIndex).
Split generate_split(std::span<const std::string> units, const SplitSpec& spec, int trialIndex);

std::vector<Split> generate_splits(std::span<const std::string> units, const SplitSpec& spec);

/// Split units of a dataset: distinct groups (first-appearance order) or item ids.
std::vector<std::string> split_units(const ScoreSet& scores, SplitUnit unit);

struct IndicatorConfig {
    ActivationConfig activation;
    Weighting weighting = Weighting::Perceptual;
    TiePolicy tiePolicy = TiePolicy::Strict;
    /// Threshold of the single-valued PWRC column.
    double threshold = 0.0;
    int aucSamples = kDefaultAucSamples;
    std::vector<double> curveGrid = threshold_grid(0.0, 100.0, kDefaultCurveSamples);
    /// Explicit [tMin, tMax]; otherwise 2 min / 2 max of the database's normalized stddevs.
    std::optional<double> tMin;
    std::optional<double> tMax;
    /// Delta MOS on raw scores (sign flipped for DMOS) instead of the [0, 100] scale.
    bool rawScale = false;
    /// Average indicators per content group (enhancement data) instead of pooling.
    bool imageWise = false;
};

struct IndicatorValues {
    double srcc = 0.0;
    double krcc = 0.0;
    double pwrc = 0.0;
    double aucCa = 0.0;
    double dMos = 0.0;
};

/// Database-level constants shared by every subset evaluation.
struct EvaluationContext {
    NormalizationFit fit;
    double tMin = 0.0;
    double tMax = 0.0;
    double meanNormalizedStddev = 0.0;
};

EvaluationContext make_context(const ScoreSet& database, const IndicatorConfig& config);

struct SubsetEvaluation {
    std::vector<IndicatorValues> values;       // one per metric
    std::vector<std::vector<double>> curves;   // on config.curveGrid, one per metric
    std::vector<std::string> warnings;
    /// Groups that contributed in image-wise mode.
    std::size_t groupsUsed = 0;
};

/// Evaluates every metric on the items at `positions`.
SubsetEvaluation evaluate_subset(const ScoreSet& scores,
                                 const std::vector<PredictionSet>& predictions,
                                 std::span<const std::size_t> positions,
                                 const EvaluationContext& context, const IndicatorConfig& config);

/// All items, no splitting.
SubsetEvaluation evaluate_dataset(const Dataset& dataset, const IndicatorConfig& config);

struct TrialResult {
    int trialIndex = 0;
    bool skipped = false;
    std::vector<IndicatorValues> perMetric;
    std::vector<std::vector<double>> curves;
};

struct ProtocolResult {
    std::vector<std::string> metrics;
    std::vector<TrialResult> trials;  // every trial, skipped ones flagged
    int effectiveTrials = 0;
    std::vector<IndicatorValues> medians;
    std::vector<double> curveGrid;
    std::vector<std::vector<double>> medianCurves;
    /// Indicator name (SRCC, KRCC, AUCca) -> disagreements with the dMOS ranking.
    std::map<std::string, Disagreements> disagreements;
    EvaluationContext context;
    std::vector<std::string> warnings;
};

struct ProtocolOptions {
    int threads = 1;
    /// Per-trial predictions of retrained metrics; empty means one global table.
    std::vector<std::vector<PredictionSet>> perTrialPredictions;
};

ProtocolResult run_protocol(const Dataset& dataset, const SplitSpec& spec,
                            const IndicatorConfig& config, const ProtocolOptions& options = {});

/// Median of a sample; mean of the two middle values for even sizes.
double median(std::vector<double> values);

/// Disagreements of SRCC, KRCC and AUCca rankings with the dMOS ranking.
std::map<std::string, Disagreements> indicator_disagreements(
    std::span<const std::string> metrics, std::span<const IndicatorValues> values);

struct SyntheticPanel {
    std::vector<double> trueScores;
    std::vector<double> stddevs;
    std::vector<std::vector<double>> drawnOpinions;

    std::vector<double> mos() const;
    /// Sample standard deviation (n - 1 denominator; 0 for a single subject).
    std::vector<double> sample_stddevs() const;
};

SyntheticPanel synthesize_panel(std::span<const double> trueScores,
                                std::span<const double> stddevs, int subjectsPerImage,
                                std::uint64_t seed);

struct SyntheticDatasetSpec {
    int groups = 30;
    int itemsPerGroup = 5;
    int subjectsPerImage = 25;
    double opinionStddev = 8.577;
    std::uint64_t seed = 0;
};

/// Panel-based MOS table plus a fixed family of simulated metrics of varying
/// quality (including ones that fail mostly on good or on poor images).
Dataset synthesize_dataset(const SyntheticDatasetSpec& spec);

/// One row of the exhaustive comparison over every predicted permutation.
struct PermutationRow {
    std::vector<int> q;
    std::int64_t mistakenPairs = 0;
    double srcc = 0.0;
    double krcc = 0.0;
    double pwrc = 0.0;
    double dMos = 0.0;
};

/// Every permutation q of the canonically ordered raw MOS values. PWRC uses
/// normalized scores at `threshold`; delta MOS is on the raw scale.
std::vector<PermutationRow> permutation_table(std::span<const double> rawMos,
                                              const ActivationConfig& activation,
                                              Weighting weighting, double threshold);

/// Plain `key = value` run configuration; `#` starts a comment.
struct RunConfig {
    SplitSpec split;
    IndicatorConfig indicators;
    bool c1Auto = false;
    int threads = 1;
};

RunConfig parse_run_config(const std::string& text, const std::string& origin = "config");
RunConfig load_run_config(const std::filesystem::path& path);

/// Parses `lo:hi:count` into an evenly spaced grid.
std::vector<double> parse_grid(const std::string& spec);

TiePolicy parse_tie_policy(const std::string& token);

}  // namespace pwrc
