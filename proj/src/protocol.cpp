#include "pwrc/protocol.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>

#include <fmt/format.h>

#include "pwrc/classic.hpp"
#include "pwrc/error.hpp"
#include "pwrc/random.hpp"

namespace pwrc {

namespace {

struct MetricOutcome {
    IndicatorValues values;
    std::vector<double> curve;
    std::vector<double> aucCurve;
};

std::vector<double> auc_grid(const EvaluationContext& context, const IndicatorConfig& config) {
    return threshold_grid(context.tMin, context.tMax, config.aucSamples);
}

MetricOutcome evaluate_metric(const NormalizedScoreSet& xHat, std::span<const double> rawScores,
                              ScorePolarity polarity, const PredictionSet& prediction,
                              const EvaluationContext& context, const IndicatorConfig& config) {
    const auto pairing = ground_truth_pairing(xHat, prediction, config.tiePolicy);
    const auto& p = pairing.p;
    const auto& q = pairing.q;

    MetricOutcome out;
    out.values.srcc = spearman_rho(pairing.xHat.scores, pairing.orientedPrediction);
    out.values.krcc = kendall_tau(p, q);
    out.values.pwrc = pwrc(pairing.xHat, p, q, config.threshold, config.activation, config.weighting);

    out.curve = sa_st_curve(pairing.xHat, p, q, config.curveGrid, config.activation, config.weighting)
                    .accuracies;
    const auto aucCurve = sa_st_curve(pairing.xHat, p, q, auc_grid(context, config),
                                      config.activation, config.weighting);
    out.values.aucCa = auc_ca(aucCurve, context.tMin, context.tMax);
    out.aucCurve = aucCurve.accuracies;

    if (config.rawScale) {
        std::vector<double> raw;
        raw.reserve(pairing.order.size());
        for (auto src : pairing.order)
            raw.push_back(polarity == ScorePolarity::Dmos ? -rawScores[src] : rawScores[src]);
        out.values.dMos = delta_mos(raw, q).mean;
    } else {
        out.values.dMos = delta_mos(pairing.xHat.scores, q).mean;
    }
    return out;
}

std::vector<double> mean_of(const std::vector<std::vector<double>>& rows) {
    std::vector<double> out(rows.front().size(), 0.0);
    for (const auto& row : rows)
        for (std::size_t k = 0; k < out.size(); ++k) out[k] += row[k];
    for (auto& v : out) v /= static_cast<double>(rows.size());
    return out;
}

/// Positions grouped by content group in first-appearance order.
std::vector<std::pair<std::string, std::vector<std::size_t>>> by_group(
    const ScoreSet& scores, std::span<const std::size_t> positions) {
    std::vector<std::pair<std::string, std::vector<std::size_t>>> groups;
    std::unordered_map<std::string, std::size_t> index;
    for (auto pos : positions) {
        const auto& g = scores.items.at(pos).group;
        auto [it, inserted] = index.emplace(g, groups.size());
        if (inserted) groups.push_back({g, {}});
        groups[it->second].second.push_back(pos);
    }
    return groups;
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

double parse_double(const std::string& token, const std::string& where) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(v))
        fail(fmt::format("{}: expected a number, got '{}'", where, token));
    return v;
}

template <typename Int>
Int parse_int(const std::string& token, const std::string& where) {
    Int v = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size())
        fail(fmt::format("{}: expected an integer, got '{}'", where, token));
    return v;
}

bool parse_bool(const std::string& token, const std::string& where) {
    if (token == "true" || token == "1" || token == "yes") return true;
    if (token == "false" || token == "0" || token == "no") return false;
    fail(fmt::format("{}: expected true or false, got '{}'", where, token));
}

}  // namespace

std::size_t train_unit_count(std::size_t units, double trainRatio) {
    if (!(trainRatio > 0.0 && trainRatio < 1.0))
        fail(fmt::format("train ratio must lie in (0, 1), got {}", trainRatio));
    if (units < 2) fail(fmt::format("{} split unit(s) cannot form non-empty train and test sets", units));
    const auto wanted = static_cast<long long>(std::llround(trainRatio * static_cast<double>(units)));
    return static_cast<std::size_t>(std::clamp<long long>(wanted, 1, static_cast<long long>(units) - 1));
}

Split generate_split(std::span<const std::string> units, const SplitSpec& spec, int trialIndex) {
    const auto trainCount = train_unit_count(units.size(), spec.trainRatio);
    std::vector<std::size_t> order(units.size());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(derive_seed(spec.seed, static_cast<std::uint64_t>(trialIndex)));
    for (std::size_t i = order.size() - 1; i > 0; --i)
        std::swap(order[i], order[rng.below(i + 1)]);

    std::vector<std::size_t> train(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(trainCount));
    std::vector<std::size_t> test(order.begin() + static_cast<std::ptrdiff_t>(trainCount), order.end());
    std::sort(train.begin(), train.end());
    std::sort(test.begin(), test.end());
    Split split;
    for (auto k : train) split.train.push_back(units[k]);
    for (auto k : test) split.test.push_back(units[k]);
    return split;
}

std::vector<Split> generate_splits(std::span<const std::string> units, const SplitSpec& spec) {
    if (spec.trials < 1) fail("at least one trial is required");
    std::set<std::string> distinct(units.begin(), units.end());
    if (distinct.size() != units.size()) fail("split units must be distinct");
    std::vector<Split> out;
    out.reserve(static_cast<std::size_t>(spec.trials));
    for (int k = 0; k < spec.trials; ++k) out.push_back(generate_split(units, spec, k));
    return out;
}

std::vector<std::string> split_units(const ScoreSet& scores, SplitUnit unit) {
    std::vector<std::string> out;
    if (unit == SplitUnit::ByItem) return scores.ids();
    std::set<std::string> seen;
    for (const auto& item : scores.items)
        if (seen.insert(item.group).second) out.push_back(item.group);
    return out;
}

EvaluationContext make_context(const ScoreSet& database, const IndicatorConfig& config) {
    EvaluationContext ctx;
    ctx.fit = fit_normalization(database.scores());
    const auto normalized = normalize_with(database, ctx.fit);
    ctx.meanNormalizedStddev =
        std::accumulate(normalized.stddevs.begin(), normalized.stddevs.end(), 0.0) /
        static_cast<double>(normalized.stddevs.size());
    const auto [lo, hi] = threshold_range(normalized.stddevs);
    ctx.tMin = config.tMin.value_or(lo);
    ctx.tMax = config.tMax.value_or(hi);
    if (!(ctx.tMin < ctx.tMax))
        fail_degenerate(fmt::format("zero-width sensory threshold range [{}, {}]", ctx.tMin, ctx.tMax));
    if (ctx.tMin < 0.0) fail(fmt::format("negative tMin {}", ctx.tMin));
    return ctx;
}

SubsetEvaluation evaluate_subset(const ScoreSet& scores,
                                 const std::vector<PredictionSet>& predictions,
                                 std::span<const std::size_t> positions,
                                 const EvaluationContext& context, const IndicatorConfig& config) {
    if (config.activation.mode == ActivationMode::Soft &&
        !(std::isfinite(config.activation.c1) && config.activation.c1 > 0.0))
        fail(fmt::format("C1 must be finite and positive, got {}", config.activation.c1));
    SubsetEvaluation out;

    auto evaluate_positions = [&](std::span<const std::size_t> pos) {
        const auto sub = scores.subset(pos);
        const auto xHat = normalize_with(sub, context.fit);
        if (!xHat.clamped.empty())
            out.warnings.push_back(fmt::format(
                "{} score(s) outside the normalization pool were clamped to [0, 100]",
                xHat.clamped.size()));
        const auto raw = sub.scores();
        std::vector<MetricOutcome> outcomes;
        for (const auto& prediction : predictions)
            outcomes.push_back(evaluate_metric(xHat, raw, scores.polarity, prediction.subset(pos),
                                               context, config));
        return outcomes;
    };

    if (!config.imageWise) {
        if (positions.size() < 2) fail_degenerate("evaluation subset has fewer than 2 items");
        for (auto& outcome : evaluate_positions(positions)) {
            out.values.push_back(outcome.values);
            out.curves.push_back(std::move(outcome.curve));
        }
        return out;
    }

    std::vector<std::vector<MetricOutcome>> perGroup;
    for (const auto& [group, pos] : by_group(scores, positions)) {
        if (pos.size() < 2) {
            out.warnings.push_back(fmt::format("group '{}' has a single item and was skipped", group));
            continue;
        }
        perGroup.push_back(evaluate_positions(pos));
    }
    if (perGroup.empty()) fail_degenerate("no content group with at least 2 items");
    out.groupsUsed = perGroup.size();

    for (std::size_t m = 0; m < predictions.size(); ++m) {
        std::map<std::string, double> srcc, krcc, pw, dmos;
        std::vector<std::vector<double>> curves, aucCurves;
        for (std::size_t g = 0; g < perGroup.size(); ++g) {
            const auto key = fmt::format("{:08d}", g);
            const auto& o = perGroup[g][m];
            srcc[key] = o.values.srcc;
            krcc[key] = o.values.krcc;
            pw[key] = o.values.pwrc;
            dmos[key] = o.values.dMos;
            curves.push_back(o.curve);
            aucCurves.push_back(o.aucCurve);
        }
        IndicatorValues v;
        v.srcc = grouped_mean(srcc).mean;
        v.krcc = grouped_mean(krcc).mean;
        v.pwrc = grouped_mean(pw).mean;
        v.dMos = grouped_mean(dmos).mean;
        SaStCurve averaged;
        averaged.thresholds = auc_grid(context, config);
        averaged.accuracies = mean_of(aucCurves);
        v.aucCa = auc_ca(averaged, context.tMin, context.tMax);
        out.values.push_back(v);
        out.curves.push_back(mean_of(curves));
    }
    return out;
}

SubsetEvaluation evaluate_dataset(const Dataset& dataset, const IndicatorConfig& config) {
    const auto context = make_context(dataset.scores, config);
    std::vector<std::size_t> all(dataset.scores.size());
    std::iota(all.begin(), all.end(), 0);
    return evaluate_subset(dataset.scores, dataset.predictions, all, context, config);
}

double median(std::vector<double> values) {
    if (values.empty()) fail("median of an empty sample");
    std::sort(values.begin(), values.end());
    const auto mid = values.size() / 2;
    if (values.size() % 2 == 1) return values[mid];
    return 0.5 * (values[mid - 1] + values[mid]);
}

std::map<std::string, Disagreements> indicator_disagreements(
    std::span<const std::string> metrics, std::span<const IndicatorValues> values) {
    std::vector<double> srcc, krcc, auc, dmos;
    for (const auto& v : values) {
        srcc.push_back(v.srcc);
        krcc.push_back(v.krcc);
        auc.push_back(v.aucCa);
        dmos.push_back(v.dMos);
    }
    return {
        {"SRCC", value_disagreements(metrics, srcc, dmos)},
        {"KRCC", value_disagreements(metrics, krcc, dmos)},
        {"AUCca", value_disagreements(metrics, auc, dmos)},
    };
}

ProtocolResult run_protocol(const Dataset& dataset, const SplitSpec& spec,
                            const IndicatorConfig& config, const ProtocolOptions& options) {
    if (spec.trials < 1) fail("at least one trial is required");
    if (dataset.predictions.empty()) fail("no metrics to evaluate");
    if (!options.perTrialPredictions.empty()) {
        if (options.perTrialPredictions.size() != static_cast<std::size_t>(spec.trials))
            fail(fmt::format("{} per-trial prediction tables for {} trials",
                             options.perTrialPredictions.size(), spec.trials));
        for (const auto& table : options.perTrialPredictions) {
            if (table.size() != dataset.predictions.size())
                fail("per-trial prediction tables must list the same metrics as the dataset");
            for (std::size_t m = 0; m < table.size(); ++m)
                if (table[m].metric != dataset.predictions[m].metric ||
                    table[m].size() != dataset.scores.size())
                    fail(fmt::format("per-trial predictions for '{}' are misaligned", table[m].metric));
        }
    }

    ProtocolResult result;
    result.metrics = dataset.metric_names();
    result.context = make_context(dataset.scores, config);
    result.curveGrid = config.curveGrid;

    const auto units = split_units(dataset.scores, spec.unit);
    train_unit_count(units.size(), spec.trainRatio);
    std::unordered_map<std::string, std::vector<std::size_t>> positionsOf;
    for (std::size_t i = 0; i < dataset.scores.size(); ++i) {
        const auto& item = dataset.scores.items[i];
        positionsOf[spec.unit == SplitUnit::ByGroup ? item.group : item.id].push_back(i);
    }

    const auto trials = static_cast<std::size_t>(spec.trials);
    result.trials.resize(trials);
    std::vector<std::vector<std::string>> trialWarnings(trials);
    std::vector<std::exception_ptr> errors(trials);

    auto run_trial = [&](std::size_t k) {
        auto& trial = result.trials[k];
        trial.trialIndex = static_cast<int>(k);
        try {
            const auto split = generate_split(units, spec, static_cast<int>(k));
            std::vector<std::size_t> test;
            for (const auto& unit : split.test) {
                const auto& pos = positionsOf.at(unit);
                test.insert(test.end(), pos.begin(), pos.end());
            }
            std::sort(test.begin(), test.end());
            bool usable = test.size() >= 2;
            if (usable && config.imageWise) {
                usable = false;
                for (const auto& [group, pos] : by_group(dataset.scores, test))
                    if (pos.size() >= 2) usable = true;
            }
            if (!usable) {
                trial.skipped = true;
                trialWarnings[k].push_back(
                    fmt::format("trial {}: test partition too small, skipped", k));
                return;
            }
            const auto& predictions = options.perTrialPredictions.empty()
                                          ? dataset.predictions
                                          : options.perTrialPredictions[k];
            auto eval = evaluate_subset(dataset.scores, predictions, test, result.context, config);
            trial.perMetric = std::move(eval.values);
            trial.curves = std::move(eval.curves);
            trialWarnings[k] = std::move(eval.warnings);
        } catch (...) {
            errors[k] = std::current_exception();
        }
    };

    const auto threads = static_cast<std::size_t>(std::max(1, options.threads));
    if (threads == 1) {
        for (std::size_t k = 0; k < trials; ++k) run_trial(k);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < std::min(threads, trials); ++t)
            pool.emplace_back([&] {
                for (auto k = next.fetch_add(1); k < trials; k = next.fetch_add(1)) run_trial(k);
            });
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    std::set<std::string> seen;
    for (const auto& warnings : trialWarnings)
        for (const auto& w : warnings)
            if (seen.insert(w).second) result.warnings.push_back(w);

    std::vector<const TrialResult*> effective;
    for (const auto& trial : result.trials)
        if (!trial.skipped) effective.push_back(&trial);
    result.effectiveTrials = static_cast<int>(effective.size());
    if (effective.empty()) fail_degenerate("every trial was skipped");

    const auto metrics = result.metrics.size();
    for (std::size_t m = 0; m < metrics; ++m) {
        std::vector<double> srcc, krcc, pw, auc, dmos;
        for (const auto* trial : effective) {
            const auto& v = trial->perMetric[m];
            srcc.push_back(v.srcc);
            krcc.push_back(v.krcc);
            pw.push_back(v.pwrc);
            auc.push_back(v.aucCa);
            dmos.push_back(v.dMos);
        }
        result.medians.push_back({median(srcc), median(krcc), median(pw), median(auc), median(dmos)});

        std::vector<double> curve(result.curveGrid.size());
        for (std::size_t k = 0; k < curve.size(); ++k) {
            std::vector<double> samples;
            for (const auto* trial : effective) samples.push_back(trial->curves[m][k]);
            curve[k] = median(std::move(samples));
        }
        result.medianCurves.push_back(std::move(curve));
    }
    result.disagreements = indicator_disagreements(result.metrics, result.medians);
    return result;
}

std::vector<double> SyntheticPanel::mos() const {
    std::vector<double> out;
    for (const auto& draws : drawnOpinions)
        out.push_back(std::accumulate(draws.begin(), draws.end(), 0.0) /
                      static_cast<double>(draws.size()));
    return out;
}

std::vector<double> SyntheticPanel::sample_stddevs() const {
    std::vector<double> out;
    const auto means = mos();
    for (std::size_t i = 0; i < drawnOpinions.size(); ++i) {
        const auto& draws = drawnOpinions[i];
        if (draws.size() < 2) {
            out.push_back(0.0);
            continue;
        }
        double ss = 0.0;
        for (double d : draws) ss += (d - means[i]) * (d - means[i]);
        out.push_back(std::sqrt(ss / static_cast<double>(draws.size() - 1)));
    }
    return out;
}

SyntheticPanel synthesize_panel(std::span<const double> trueScores,
                                std::span<const double> stddevs, int subjectsPerImage,
                                std::uint64_t seed) {
    if (trueScores.size() != stddevs.size())
        fail(fmt::format("{} true scores but {} stddevs", trueScores.size(), stddevs.size()));
    if (subjectsPerImage < 1) fail("at least one subject per image is required");
    for (double s : stddevs)
        if (!std::isfinite(s) || s < 0.0) fail(fmt::format("invalid opinion stddev {}", s));
    for (double x : trueScores)
        if (!std::isfinite(x)) fail("non-finite true score");

    SyntheticPanel panel;
    panel.trueScores.assign(trueScores.begin(), trueScores.end());
    panel.stddevs.assign(stddevs.begin(), stddevs.end());
    Rng rng(seed);
    for (std::size_t i = 0; i < trueScores.size(); ++i) {
        std::vector<double> draws;
        draws.reserve(static_cast<std::size_t>(subjectsPerImage));
        for (int s = 0; s < subjectsPerImage; ++s) draws.push_back(rng.normal(trueScores[i], stddevs[i]));
        panel.drawnOpinions.push_back(std::move(draws));
    }
    return panel;
}

Dataset synthesize_dataset(const SyntheticDatasetSpec& spec) {
    if (spec.groups < 2 || spec.itemsPerGroup < 1) fail("need at least 2 groups of 1 item");
    Rng rng(derive_seed(spec.seed, 0));
    std::vector<double> truth, sigma;
    std::vector<std::string> ids, groups;
    for (int g = 0; g < spec.groups; ++g) {
        const double content = 20.0 * rng.uniform() - 10.0;
        const auto group = fmt::format("g{:02d}", g + 1);
        for (int k = 0; k < spec.itemsPerGroup; ++k) {
            const double level = (static_cast<double>(k) + rng.uniform()) / spec.itemsPerGroup;
            truth.push_back(std::clamp(15.0 + 70.0 * level + content, 1.0, 99.0));
            sigma.push_back(spec.opinionStddev * (0.6 + 0.8 * rng.uniform()));
            ids.push_back(fmt::format("{}_d{}", group, k + 1));
            groups.push_back(group);
        }
    }
    const auto panel = synthesize_panel(truth, sigma, spec.subjectsPerImage, derive_seed(spec.seed, 1));
    const auto mos = panel.mos();
    const auto sd = panel.sample_stddevs();

    auto round6 = [](double v) { return std::round(v * 1e6) / 1e6; };
    Dataset out;
    out.scores.polarity = ScorePolarity::Mos;
    for (std::size_t i = 0; i < truth.size(); ++i)
        out.scores.items.push_back({ids[i], round6(mos[i]), round6(sd[i]), groups[i]});

    struct Simulated {
        const char* name;
        PredictionPolarity polarity;
        double (*noise)(double quality);
        bool inverted;
    };
    const Simulated family[] = {
        {"fidelity", PredictionPolarity::HigherIsBetter, [](double) { return 3.0; }, false},
        {"coarse", PredictionPolarity::HigherIsBetter, [](double) { return 12.0; }, false},
        {"distortion_energy", PredictionPolarity::LowerIsBetter, [](double) { return 6.0; }, true},
        {"top_blind", PredictionPolarity::HigherIsBetter,
         [](double x) { return 2.0 + 0.2 * x; }, false},
        {"bottom_blind", PredictionPolarity::HigherIsBetter,
         [](double x) { return 2.0 + 0.2 * (100.0 - x); }, false},
    };
    std::uint64_t stream = 2;
    for (const auto& metric : family) {
        Rng noise(derive_seed(spec.seed, stream++));
        PredictionSet set;
        set.metric = metric.name;
        set.polarity = metric.polarity;
        set.ids = ids;
        for (std::size_t i = 0; i < truth.size(); ++i) {
            const double base = metric.inverted ? 100.0 - truth[i] : truth[i];
            set.values.push_back(round6(noise.normal(base, metric.noise(truth[i]))));
        }
        out.predictions.push_back(std::move(set));
    }
    return out;
}

std::vector<PermutationRow> permutation_table(std::span<const double> rawMos,
                                              const ActivationConfig& activation,
                                              Weighting weighting, double threshold) {
    const auto n = rawMos.size();
    if (n < 2 || n > 9) fail(fmt::format("permutation enumeration supports 2..9 items, got {}", n));
    std::vector<double> sorted(rawMos.begin(), rawMos.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        fail("permutation enumeration needs distinct MOS values");

    ScoreSet set;
    for (std::size_t i = 0; i < n; ++i) set.items.push_back({fmt::format("x{}", i + 1), sorted[i], 0.0, ""});
    const auto xHat = normalize(set);
    const auto p = identity_ranks(n);

    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 1);
    std::vector<PermutationRow> rows;
    do {
        RankVector q;
        q.ranks.assign(perm.begin(), perm.end());
        PermutationRow row;
        row.q = perm;
        row.mistakenPairs = mistaken_pair_count(p, q);
        row.srcc = spearman_rho(p, q);
        row.krcc = kendall_tau(p, q);
        row.pwrc = pwrc(xHat, p, q, threshold, activation, weighting);
        row.dMos = delta_mos(sorted, q).mean;
        rows.push_back(std::move(row));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return rows;
}

std::vector<double> parse_grid(const std::string& spec) {
    const auto first = spec.find(':');
    const auto second = first == std::string::npos ? first : spec.find(':', first + 1);
    if (second == std::string::npos)
        fail(fmt::format("grid '{}' must have the form lo:hi:count", spec));
    const double lo = parse_double(spec.substr(0, first), "grid");
    const double hi = parse_double(spec.substr(first + 1, second - first - 1), "grid");
    const int count = parse_int<int>(spec.substr(second + 1), "grid");
    if (lo < 0.0) fail("grid thresholds must be >= 0");
    return threshold_grid(lo, hi, count);
}

TiePolicy parse_tie_policy(const std::string& token) {
    if (token == "strict") return TiePolicy::Strict;
    if (token == "stable") return TiePolicy::StableOrder;
    fail(fmt::format("unknown tie policy '{}' (expected strict or stable)", token));
}

RunConfig parse_run_config(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const auto where = fmt::format("{}:{}", origin, number);
        if (eq == std::string::npos) fail(fmt::format("{}: expected key = value", where));
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        auto& ind = cfg.indicators;
        if (key == "seed") {
            cfg.split.seed = parse_int<std::uint64_t>(value, where);
        } else if (key == "ratio" || key == "train_ratio") {
            cfg.split.trainRatio = parse_double(value, where);
        } else if (key == "trials") {
            cfg.split.trials = parse_int<int>(value, where);
        } else if (key == "unit") {
            if (value == "group") cfg.split.unit = SplitUnit::ByGroup;
            else if (value == "item") cfg.split.unit = SplitUnit::ByItem;
            else fail(fmt::format("{}: unit must be group or item", where));
        } else if (key == "c1") {
            cfg.c1Auto = value == "auto";
            if (!cfg.c1Auto) ind.activation.c1 = parse_double(value, where);
        } else if (key == "activation") {
            if (value == "soft") ind.activation.mode = ActivationMode::Soft;
            else if (value == "constant") ind.activation.mode = ActivationMode::Constant1;
            else fail(fmt::format("{}: activation must be soft or constant", where));
        } else if (key == "weighting") {
            if (value == "perceptual") ind.weighting = Weighting::Perceptual;
            else if (value == "uniform") ind.weighting = Weighting::Uniform;
            else fail(fmt::format("{}: weighting must be perceptual or uniform", where));
        } else if (key == "tie_policy") {
            ind.tiePolicy = parse_tie_policy(value);
        } else if (key == "threshold") {
            ind.threshold = parse_double(value, where);
        } else if (key == "curve_grid") {
            ind.curveGrid = parse_grid(value);
        } else if (key == "auc_samples") {
            ind.aucSamples = parse_int<int>(value, where);
        } else if (key == "t_min") {
            ind.tMin = value == "auto" ? std::nullopt : std::optional(parse_double(value, where));
        } else if (key == "t_max") {
            ind.tMax = value == "auto" ? std::nullopt : std::optional(parse_double(value, where));
        } else if (key == "raw_scale") {
            ind.rawScale = parse_bool(value, where);
        } else if (key == "image_wise") {
            ind.imageWise = parse_bool(value, where);
        } else if (key == "threads") {
            cfg.threads = parse_int<int>(value, where);
        } else {
            fail(fmt::format("{}: unknown key '{}'", where, key));
        }
    }
    if (cfg.split.trials < 1) fail(fmt::format("{}: trials must be >= 1", origin));
    if (cfg.indicators.aucSamples < 2) fail(fmt::format("{}: auc_samples must be >= 2", origin));
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail_io(fmt::format("cannot open '{}'", path.string()));
    std::ostringstream text;
    text << in.rdbuf();
    return parse_run_config(text.str(), path.string());
}

}  // namespace pwrc
