#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "pwrc/core.hpp"

namespace pwrc {

/// Subjective scores plus every metric's predictions, all in the row order of
/// the subjective file.
struct Dataset {
    ScoreSet scores;
    std::vector<PredictionSet> predictions;  // prediction-file column order

    std::vector<std::string> metric_names() const;
    const PredictionSet& metric(const std::string& name) const;
};

/// Minimal RFC 4180 reader: comma separated, optional double quotes.
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path);

/// `id,score,stddev,group,polarity`; polarity is `mos` or `dmos` on every row.
ScoreSet load_scores(const std::filesystem::path& path);

/// `metric,polarity` with polarity `higher` or `lower`.
std::map<std::string, PredictionPolarity> load_polarity_map(const std::filesystem::path& path);

/// `id,<metric>,...` aligned to `scores` by id.
std::vector<PredictionSet> load_predictions(const std::filesystem::path& path,
                                            const ScoreSet& scores,
                                            const std::map<std::string, PredictionPolarity>& polarity);

Dataset load_dataset(const std::filesystem::path& scoresPath,
                     const std::filesystem::path& predictionsPath,
                     const std::filesystem::path& polarityPath);

std::string scores_csv(const ScoreSet& scores);
std::string predictions_csv(const ScoreSet& scores, const std::vector<PredictionSet>& predictions);
std::string polarity_csv(const std::vector<PredictionSet>& predictions);

/// Writes the three canonical files into `dir` as scores.csv, preds.csv and polarity.csv.
void save_dataset(const Dataset& dataset, const std::filesystem::path& dir);

}  // namespace pwrc
