// Command-line front end: eval, curve, auc, compare, split-run, synth.
//
// Exit codes: 0 success, 1 unexpected failure, 2 bad flags or invalid input,
// 3 I/O failure, 4 degenerate data (e.g. zero-width threshold range).

#include <CLI11.hpp>
#include <fmt/format.h>

#include <charconv>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pwrc/dataset.hpp"
#include "pwrc/error.hpp"
#include "pwrc/indicator.hpp"
#include "pwrc/protocol.hpp"
#include "pwrc/report.hpp"

namespace fs = std::filesystem;
using namespace pwrc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitDegenerate = 4;

struct DataOptions {
    std::string scores;
    std::string preds;
    std::string polarity;
};

struct IndicatorOptions {
    std::string tiePolicy = "strict";
    std::string c1 = "0.175";
    bool constantActivation = false;
    bool uniformWeights = false;
    double threshold = 0.0;
    std::string tMin = "auto";
    std::string tMax = "auto";
    int aucSamples = kDefaultAucSamples;
    std::string grid = "0:100:20";
    bool rawScale = false;
    bool imageWise = false;
};

void add_data_options(CLI::App* cmd, DataOptions& data) {
    cmd->add_option("--scores", data.scores, "Subjective score CSV (id,score,stddev,group,polarity)")
        ->required();
    cmd->add_option("--preds", data.preds, "Prediction CSV (id,<metric>,...)")->required();
    cmd->add_option("--polarity", data.polarity, "Metric polarity CSV (metric,polarity)")->required();
}

void add_indicator_options(CLI::App* cmd, IndicatorOptions& opt) {
    cmd->add_option("--tie-policy", opt.tiePolicy, "strict or stable")->capture_default_str();
    cmd->add_option("--c1", opt.c1, "Activation steepness, or 'auto' to derive from the data")
        ->capture_default_str();
    cmd->add_flag("--constant-activation", opt.constantActivation, "Activate every comparison fully");
    cmd->add_flag("--uniform-weights", opt.uniformWeights, "Uniform pair weights (Kendall reduction)");
    cmd->add_option("--threshold", opt.threshold, "Sensory threshold of the PWRC column")
        ->capture_default_str();
    cmd->add_option("--tmin", opt.tMin, "Lower AUC bound, or 'auto'")->capture_default_str();
    cmd->add_option("--tmax", opt.tMax, "Upper AUC bound, or 'auto'")->capture_default_str();
    cmd->add_option("--auc-samples", opt.aucSamples, "Trapezoid samples on [tmin, tmax]")
        ->capture_default_str();
    cmd->add_option("--grid", opt.grid, "Curve grid lo:hi:count")->capture_default_str();
    cmd->add_flag("--raw-scale", opt.rawScale, "Delta MOS on the raw score scale");
    cmd->add_flag("--image-wise", opt.imageWise, "Average indicators over content groups");
}

double parse_number(const std::string& token, const char* flag) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size())
        fail(fmt::format("{}: expected a number or 'auto', got '{}'", flag, token));
    return v;
}

std::vector<double> parse_list(const std::string& text, const char* flag) {
    std::vector<double> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(parse_number(item, flag));
    if (out.empty()) fail(fmt::format("{}: empty list", flag));
    return out;
}

std::optional<double> auto_or_number(const std::string& token, const char* flag) {
    if (token == "auto") return std::nullopt;
    return parse_number(token, flag);
}

IndicatorConfig make_config(const IndicatorOptions& opt, const ScoreSet* scores) {
    IndicatorConfig cfg;
    cfg.tiePolicy = parse_tie_policy(opt.tiePolicy);
    cfg.activation.mode = opt.constantActivation ? ActivationMode::Constant1 : ActivationMode::Soft;
    cfg.weighting = opt.uniformWeights ? Weighting::Uniform : Weighting::Perceptual;
    cfg.threshold = opt.threshold;
    cfg.tMin = auto_or_number(opt.tMin, "--tmin");
    cfg.tMax = auto_or_number(opt.tMax, "--tmax");
    cfg.aucSamples = opt.aucSamples;
    cfg.curveGrid = parse_grid(opt.grid);
    cfg.rawScale = opt.rawScale;
    cfg.imageWise = opt.imageWise;
    if (opt.c1 == "auto") {
        if (!scores) fail("--c1 auto needs a dataset");
        cfg.activation.c1 = derive_c1(make_context(*scores, IndicatorConfig{}).meanNormalizedStddev);
    } else {
        cfg.activation.c1 = parse_number(opt.c1, "--c1");
    }
    return cfg;
}

Dataset load(const DataOptions& data) { return load_dataset(data.scores, data.preds, data.polarity); }

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

std::string file_stem_for(const std::string& metric) {
    std::string out;
    for (char c : metric) {
        const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
        out += ok ? c : '_';
    }
    return out;
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) fail_io(fmt::format("cannot create '{}': {}", dir.string(), ec.message()));
}

std::vector<std::vector<std::string>> indicator_rows(const std::vector<std::string>& metrics,
                                                     const std::vector<IndicatorValues>& values) {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t m = 0; m < metrics.size(); ++m) {
        const auto& v = values[m];
        rows.push_back({metrics[m], fixed(v.srcc), fixed(v.krcc), fixed(v.pwrc), fixed(v.aucCa),
                        fixed(v.dMos)});
    }
    return rows;
}

const std::vector<std::string> kIndicatorHeader = {"metric", "SRCC", "KRCC", "PWRC", "AUCca", "dMOS"};

std::string disagreement_table(const std::map<std::string, Disagreements>& d, bool porcelain) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& name : {"SRCC", "KRCC", "AUCca"}) {
        const auto& entry = d.at(name);
        std::string pairs;
        for (std::size_t k = 0; k < entry.pairs.size(); ++k)
            pairs += (k ? ";" : "") + entry.pairs[k].first + "|" + entry.pairs[k].second;
        rows.push_back({name, std::to_string(entry.count), pairs.empty() ? "-" : pairs});
    }
    return format_table({"indicator", "disagreements_vs_dMOS", "pairs"}, rows, porcelain);
}

void write_curves(const fs::path& dir, const std::vector<std::string>& metrics,
                  const std::vector<double>& grid, const std::vector<std::vector<double>>& curves,
                  double c1, const std::string& title) {
    std::vector<CurveSeries> series;
    for (std::size_t m = 0; m < metrics.size(); ++m) {
        SaStCurve curve;
        curve.thresholds = grid;
        curve.accuracies = curves[m];
        curve.c1 = c1;
        write_file_atomic(dir / fmt::format("curve_{}.csv", file_stem_for(metrics[m])), curve_csv(curve));
        series.push_back({metrics[m], std::move(curve)});
    }
    write_file_atomic(dir / "curves.svg", sa_st_svg(series, title));
}

int run(int argc, char** argv) {
    CLI::App app{"Perceptually weighted rank correlation for image quality metrics", "pwrc"};
    app.set_version_flag("--version", std::string("pwrc ") + PWRC_VERSION);
    app.require_subcommand(1, 1);
    bool porcelain = false;
    app.add_flag("--porcelain", porcelain, "Tab-separated machine-readable output");

    // eval
    DataOptions evalData;
    IndicatorOptions evalOpt;
    std::string evalOut;
    auto* eval = app.add_subcommand("eval", "SRCC, KRCC, PWRC, AUCca and dMOS per metric");
    add_data_options(eval, evalData);
    add_indicator_options(eval, evalOpt);
    eval->add_option("--out", evalOut, "Also write metric,SRCC,KRCC,AUCca,dMOS CSV here");

    // curve
    DataOptions curveData;
    IndicatorOptions curveOpt;
    std::string curveDir;
    std::vector<std::string> curveMetrics;
    auto* curve = app.add_subcommand("curve", "SA-ST curves as CSV and SVG");
    add_data_options(curve, curveData);
    add_indicator_options(curve, curveOpt);
    curve->add_option("--out-dir", curveDir, "Output directory")->required();
    curve->add_option("--metric", curveMetrics, "Restrict to these metrics");

    // auc
    DataOptions aucData;
    IndicatorOptions aucOpt;
    auto* auc = app.add_subcommand("auc", "Confidence-aware AUC per metric");
    add_data_options(auc, aucData);
    add_indicator_options(auc, aucOpt);

    // compare
    DataOptions cmpData;
    IndicatorOptions cmpOpt;
    std::string cmpConfig;
    std::string cmpOut;
    auto* compare = app.add_subcommand("compare", "Disagreements of SRCC/KRCC/AUCca with dMOS");
    add_data_options(compare, cmpData);
    add_indicator_options(compare, cmpOpt);
    compare->add_option("--config", cmpConfig, "Run the split protocol from this config and compare medians");
    compare->add_option("--out", cmpOut, "Also write the disagreement CSV here");

    // split-run
    DataOptions splitData;
    std::string splitConfig;
    std::string splitDir;
    std::string trialPreds;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::optional<double> ratio;
    std::optional<int> threads;
    std::optional<std::string> unit;
    auto* split = app.add_subcommand("split-run", "Random split protocol with median aggregation");
    add_data_options(split, splitData);
    split->add_option("--config", splitConfig, "Run configuration (key = value)");
    split->add_option("--out-dir", splitDir, "Output directory")->required();
    split->add_option("--seed", seed, "Override the configured seed");
    split->add_option("--trials", trials, "Override the number of trials");
    split->add_option("--ratio", ratio, "Override the training ratio");
    split->add_option("--threads", threads, "Worker threads");
    split->add_option("--unit", unit, "group or item");
    split->add_option("--trial-preds", trialPreds,
                      "Directory of per-trial prediction tables trial_<k>.csv (0-based)");

    // synth
    std::string synthScores;
    std::string synthStddevs;
    int synthN = 0;
    bool enumerate = false;
    std::string synthActivation = "constant";
    double synthC1 = kDefaultC1;
    double synthThreshold = 0.0;
    bool synthUniform = false;
    int subjects = 25;
    std::uint64_t synthSeed = 0;
    std::string synthOut;
    std::string synthDataset;
    int groups = 30;
    int perGroup = 5;
    auto* synth = app.add_subcommand("synth", "Synthetic experiments and datasets");
    synth->add_flag("--enumerate-permutations", enumerate, "Tabulate every predicted permutation");
    synth->add_option("--scores", synthScores, "Comma-separated MOS values");
    synth->add_option("--n", synthN, "Expected number of scores");
    synth->add_option("--activation", synthActivation, "constant or soft")->capture_default_str();
    synth->add_option("--c1", synthC1, "Activation steepness for soft activation")->capture_default_str();
    synth->add_option("--threshold", synthThreshold, "Sensory threshold")->capture_default_str();
    synth->add_flag("--uniform-weights", synthUniform, "Uniform pair weights");
    synth->add_option("--stddevs", synthStddevs, "Comma-separated opinion stddevs (panel mode)");
    synth->add_option("--subjects", subjects, "Subjects per image")->capture_default_str();
    synth->add_option("--seed", synthSeed, "Random seed")->capture_default_str();
    synth->add_option("--out", synthOut, "Output CSV");
    synth->add_option("--dataset", synthDataset, "Write a synthetic dataset into this directory");
    synth->add_option("--groups", groups, "Content groups (dataset mode)")->capture_default_str();
    synth->add_option("--per-group", perGroup, "Items per group (dataset mode)")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (*eval) {
        const auto data = load(evalData);
        const auto cfg = make_config(evalOpt, &data.scores);
        const auto result = evaluate_dataset(data, cfg);
        print_warnings(result.warnings);
        const auto metrics = data.metric_names();
        std::cout << format_table(kIndicatorHeader, indicator_rows(metrics, result.values), porcelain);
        if (!evalOut.empty()) write_file_atomic(evalOut, report_csv(metrics, result.values));
        return kExitOk;
    }

    if (*curve) {
        auto data = load(curveData);
        if (!curveMetrics.empty()) {
            std::vector<PredictionSet> chosen;
            for (const auto& name : curveMetrics) chosen.push_back(data.metric(name));
            data.predictions = std::move(chosen);
        }
        const auto cfg = make_config(curveOpt, &data.scores);
        const auto result = evaluate_dataset(data, cfg);
        print_warnings(result.warnings);
        ensure_dir(curveDir);
        write_curves(curveDir, data.metric_names(), cfg.curveGrid, result.curves, cfg.activation.c1,
                     "SA-ST curves");
        std::vector<std::vector<std::string>> rows;
        for (std::size_t k = 0; k < cfg.curveGrid.size(); ++k) {
            std::vector<std::string> row{fixed(cfg.curveGrid[k])};
            for (const auto& c : result.curves) row.push_back(fixed(c[k]));
            rows.push_back(std::move(row));
        }
        auto header = data.metric_names();
        header.insert(header.begin(), "T");
        std::cout << format_table(header, rows, porcelain);
        return kExitOk;
    }

    if (*auc) {
        const auto data = load(aucData);
        const auto cfg = make_config(aucOpt, &data.scores);
        const auto context = make_context(data.scores, cfg);
        const auto result = evaluate_dataset(data, cfg);
        print_warnings(result.warnings);
        std::vector<std::vector<std::string>> rows;
        const auto metrics = data.metric_names();
        for (std::size_t m = 0; m < metrics.size(); ++m)
            rows.push_back({metrics[m], fixed(context.tMin), fixed(context.tMax),
                            fixed(result.values[m].aucCa)});
        std::cout << format_table({"metric", "tMin", "tMax", "AUCca"}, rows, porcelain);
        return kExitOk;
    }

    if (*compare) {
        const auto data = load(cmpData);
        std::map<std::string, Disagreements> d;
        std::vector<IndicatorValues> values;
        if (!cmpConfig.empty()) {
            auto run = load_run_config(cmpConfig);
            if (run.c1Auto)
                run.indicators.activation.c1 =
                    derive_c1(make_context(data.scores, run.indicators).meanNormalizedStddev);
            const auto result = run_protocol(data, run.split, run.indicators, {run.threads, {}});
            print_warnings(result.warnings);
            d = result.disagreements;
            values = result.medians;
        } else {
            const auto cfg = make_config(cmpOpt, &data.scores);
            const auto result = evaluate_dataset(data, cfg);
            print_warnings(result.warnings);
            values = result.values;
            d = indicator_disagreements(data.metric_names(), result.values);
        }
        std::cout << format_table(kIndicatorHeader, indicator_rows(data.metric_names(), values), porcelain);
        std::cout << '\n' << disagreement_table(d, porcelain);
        if (!cmpOut.empty()) write_file_atomic(cmpOut, disagreements_csv(d));
        return kExitOk;
    }

    if (*split) {
        const auto data = load(splitData);
        RunConfig run = splitConfig.empty() ? RunConfig{} : load_run_config(splitConfig);
        if (seed) run.split.seed = *seed;
        if (trials) run.split.trials = *trials;
        if (ratio) run.split.trainRatio = *ratio;
        if (threads) run.threads = *threads;
        if (unit) {
            if (*unit == "group") run.split.unit = SplitUnit::ByGroup;
            else if (*unit == "item") run.split.unit = SplitUnit::ByItem;
            else fail("--unit must be group or item");
        }
        if (run.split.trials < 1) fail("--trials must be >= 1");
        if (run.c1Auto)
            run.indicators.activation.c1 =
                derive_c1(make_context(data.scores, run.indicators).meanNormalizedStddev);

        ProtocolOptions options;
        options.threads = run.threads;
        if (!trialPreds.empty()) {
            const auto polarity = load_polarity_map(splitData.polarity);
            for (int k = 0; k < run.split.trials; ++k)
                options.perTrialPredictions.push_back(load_predictions(
                    fs::path(trialPreds) / fmt::format("trial_{}.csv", k), data.scores, polarity));
        }
        const auto result = run_protocol(data, run.split, run.indicators, options);
        print_warnings(result.warnings);

        ensure_dir(splitDir);
        const fs::path dir(splitDir);
        write_file_atomic(dir / "trials.csv", trials_csv(result));
        write_file_atomic(dir / "medians.csv", report_csv(result.metrics, result.medians));
        write_file_atomic(dir / "disagreements.csv", disagreements_csv(result.disagreements));
        write_curves(dir, result.metrics, result.curveGrid, result.medianCurves,
                     run.indicators.activation.c1, "Median SA-ST curves");

        std::cout << fmt::format("effective trials: {} of {}\n", result.effectiveTrials,
                                 run.split.trials);
        std::cout << format_table(kIndicatorHeader, indicator_rows(result.metrics, result.medians), porcelain);
        std::cout << '\n' << disagreement_table(result.disagreements, porcelain);
        return kExitOk;
    }

    if (*synth) {
        if (!synthDataset.empty()) {
            SyntheticDatasetSpec spec;
            spec.groups = groups;
            spec.itemsPerGroup = perGroup;
            spec.subjectsPerImage = subjects;
            spec.seed = synthSeed;
            save_dataset(synthesize_dataset(spec), synthDataset);
            std::cout << fmt::format("wrote {} items in {} groups to {}\n", groups * perGroup, groups,
                                     synthDataset);
            return kExitOk;
        }
        if (synthScores.empty()) fail("synth needs --scores, or --dataset");
        const auto scores = parse_list(synthScores, "--scores");
        if (synthN != 0 && static_cast<std::size_t>(synthN) != scores.size())
            fail(fmt::format("--n {} does not match {} scores", synthN, scores.size()));

        if (enumerate) {
            ActivationConfig activation;
            activation.c1 = synthC1;
            if (synthActivation == "constant") activation.mode = ActivationMode::Constant1;
            else if (synthActivation == "soft") activation.mode = ActivationMode::Soft;
            else fail("--activation must be constant or soft");
            const auto rows = permutation_table(
                scores, activation, synthUniform ? Weighting::Uniform : Weighting::Perceptual,
                synthThreshold);
            std::vector<std::vector<std::string>> table;
            for (const auto& r : rows) {
                std::string q;
                for (std::size_t i = 0; i < r.q.size(); ++i) q += (i ? " " : "") + std::to_string(r.q[i]);
                table.push_back({q, std::to_string(r.mistakenPairs), fixed(r.srcc), fixed(r.krcc),
                                 fixed(r.pwrc), fixed(r.dMos)});
            }
            const std::vector<std::string> header{"q", "L", "SRCC", "KRCC", "PWRC", "dMOS"};
            std::cout << format_table(header, table, porcelain);
            if (!synthOut.empty()) {
                std::ostringstream csv;
                csv << "q,L,SRCC,KRCC,PWRC,dMOS\n";
                for (const auto& row : table)
                    csv << row[0] << ',' << row[1] << ',' << row[2] << ',' << row[3] << ','
                        << row[4] << ',' << row[5] << '\n';
                write_file_atomic(synthOut, csv.str());
            }
            return kExitOk;
        }

        if (synthStddevs.empty()) fail("panel mode needs --stddevs (or use --enumerate-permutations)");
        const auto stddevs = parse_list(synthStddevs, "--stddevs");
        const auto panel = synthesize_panel(scores, stddevs, subjects, synthSeed);
        const auto mos = panel.mos();
        const auto sd = panel.sample_stddevs();
        std::vector<std::vector<std::string>> table;
        for (std::size_t i = 0; i < scores.size(); ++i)
            table.push_back({std::to_string(i + 1), fixed(scores[i]), fixed(stddevs[i]), fixed(mos[i]),
                             fixed(sd[i])});
        const std::vector<std::string> header{"image", "true_score", "stddev", "mos", "sample_stddev"};
        std::cout << format_table(header, table, porcelain);
        if (!synthOut.empty()) {
            std::ostringstream csv;
            csv << "image,true_score,stddev,mos,sample_stddev\n";
            for (const auto& row : table)
                csv << row[0] << ',' << row[1] << ',' << row[2] << ',' << row[3] << ',' << row[4] << '\n';
            write_file_atomic(synthOut, csv.str());
        }
        return kExitOk;
    }
    return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        switch (e.kind()) {
            case ErrorKind::InvalidInput: return kExitUsage;
            case ErrorKind::Io: return kExitIo;
            case ErrorKind::Degenerate: return kExitDegenerate;
        }
        return kExitFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}
