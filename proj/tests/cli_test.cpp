#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <sstream>
#include <sys/wait.h>

#include "test_util.hpp"

using testutil::TempDir;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
};

/// Runs the CLI through the shell; stderr is folded into `out` when `mergeErr` is set.
RunResult run(const std::string& args, bool mergeErr = false) {
    const std::string cmd = std::string("\"") + PWRC_CLI + "\" " + args + (mergeErr ? " 2>&1" : " 2>/dev/null");
    RunResult r;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
    const int status = ::pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string data_args() {
    const std::string d = PWRC_DATA_DIR;
    return "--scores " + d + "/scores.csv --preds " + d + "/preds.csv --polarity " + d + "/polarity.csv";
}

std::vector<std::vector<std::string>> tsv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, '\t')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

}  // namespace

TEST(Cli, VersionAndUsage) {
    const auto v = run("--version");
    EXPECT_EQ(v.code, 0);
    EXPECT_NE(v.out.find("1.0.0"), std::string::npos);
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("eval --bogus").code, 2);
    EXPECT_EQ(run("eval").code, 2);
}

TEST(Cli, EvalPrintsOneRowPerMetric) {
    const auto r = run("--porcelain eval " + data_args());
    ASSERT_EQ(r.code, 0);
    const auto rows = tsv(r.out);
    ASSERT_EQ(rows.size(), 6u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"metric", "SRCC", "KRCC", "PWRC", "AUCca", "dMOS"}));
    EXPECT_EQ(rows[1][0], "fidelity");
}

TEST(Cli, EvalWritesCsvAndIsReproducible) {
    TempDir dir("cli_eval");
    const auto a = dir.file("a.csv").string();
    const auto b = dir.file("b.csv").string();
    ASSERT_EQ(run("eval " + data_args() + " --out " + a).code, 0);
    ASSERT_EQ(run("eval " + data_args() + " --out " + b).code, 0);
    const auto text = testutil::slurp(a);
    EXPECT_EQ(text.rfind("metric,SRCC,KRCC,AUCca,dMOS\n", 0), 0u);
    EXPECT_EQ(text, testutil::slurp(b));
}

TEST(Cli, ConstantActivationWithUniformWeightsReproducesKendall) {
    const auto r = run("--porcelain eval " + data_args() + " --constant-activation --uniform-weights");
    ASSERT_EQ(r.code, 0);
    const auto rows = tsv(r.out);
    for (std::size_t k = 1; k < rows.size(); ++k) EXPECT_EQ(rows[k][2], rows[k][3]) << rows[k][0];
}

TEST(Cli, StrictTiesExitWithInvalidInput) {
    TempDir dir("cli_ties");
    const auto s = dir.write("s.csv", "id,score,stddev,group,polarity\na,1,1,a,mos\nb,2,2,b,mos\nc,3,3,c,mos\n");
    const auto p = dir.write("p.csv", "id,m\na,7\nb,7\nc,3\n");
    const auto pol = dir.write("pol.csv", "metric,polarity\nm,higher\n");
    const std::string args = "--scores " + s.string() + " --preds " + p.string() + " --polarity " + pol.string();
    const auto r = run("eval " + args, true);
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("a"), std::string::npos);
    EXPECT_EQ(run("eval " + args + " --tie-policy stable").code, 0);
}

TEST(Cli, ExitCodesForIoAndDegenerateInput) {
    EXPECT_EQ(run("eval --scores /nonexistent.csv --preds /nonexistent.csv --polarity /nonexistent.csv").code, 3);
    TempDir dir("cli_degenerate");
    const auto s = dir.write("s.csv", "id,score,stddev,group,polarity\na,1,2,a,mos\nb,2,2,b,mos\nc,3,2,c,mos\n");
    const auto p = dir.write("p.csv", "id,m\na,1\nb,2\nc,3\n");
    const auto pol = dir.write("pol.csv", "metric,polarity\nm,higher\n");
    const std::string args = "--scores " + s.string() + " --preds " + p.string() + " --polarity " + pol.string();
    EXPECT_EQ(run("auc " + args).code, 4);
    EXPECT_EQ(run("auc " + args + " --tmin 0 --tmax 10").code, 0);
    const auto flat = dir.write("flat.csv", "id,score,stddev,group,polarity\na,2,1,a,mos\nb,2,2,b,mos\nc,2,3,c,mos\n");
    EXPECT_EQ(run("eval --scores " + flat.string() + " --preds " + p.string() + " --polarity " + pol.string()).code, 4);
}

TEST(Cli, CurveWritesCsvPerMetricAndSvg) {
    TempDir dir("cli_curve");
    ASSERT_EQ(run("curve " + data_args() + " --out-dir " + dir.path().string() + " --metric fidelity").code, 0);
    const auto csv = testutil::slurp(dir.file("curve_fidelity.csv"));
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 21);
    EXPECT_EQ(csv.rfind("T,S\n0.000000,", 0), 0u);
    EXPECT_NE(csv.find("\n100.000000,"), std::string::npos);
    const auto svg = testutil::slurp(dir.file("curves.svg"));
    EXPECT_NE(svg.find("<svg"), std::string::npos);
    EXPECT_FALSE(std::filesystem::exists(dir.file("curve_coarse.csv")));
}

TEST(Cli, AucReportsTheAutomaticRange) {
    const auto rows = tsv(run("--porcelain auc " + data_args()).out);
    ASSERT_EQ(rows.size(), 6u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"metric", "tMin", "tMax", "AUCca"}));
    EXPECT_LT(std::stod(rows[1][1]), std::stod(rows[1][2]));
}

TEST(Cli, EnumeratesEveryPermutation) {
    const auto r = run("--porcelain synth --enumerate-permutations --scores 5,10,20,35,55 --activation constant");
    ASSERT_EQ(r.code, 0);
    const auto rows = tsv(r.out);
    ASSERT_EQ(rows.size(), 121u);
    EXPECT_EQ(rows[1][1], "0");
    EXPECT_EQ(rows[1][5], "31.250000");
    EXPECT_EQ(run("synth --enumerate-permutations --scores 5,10,20 --n 4").code, 2);
}

TEST(Cli, SplitRunIsByteIdenticalAcrossRunsAndThreads) {
    TempDir dir("cli_split");
    const auto a = dir.file("a").string();
    const auto b = dir.file("b").string();
    const std::string base = "split-run " + data_args() + " --trials 20 --seed 5 --out-dir ";
    ASSERT_EQ(run(base + a + " --threads 1").code, 0);
    ASSERT_EQ(run(base + b + " --threads 3").code, 0);
    for (const char* f : {"medians.csv", "trials.csv", "disagreements.csv"}) {
        const auto x = testutil::slurp(dir.file(std::string("a/") + f));
        EXPECT_FALSE(x.empty()) << f;
        EXPECT_EQ(x, testutil::slurp(dir.file(std::string("b/") + f))) << f;
    }
    EXPECT_TRUE(std::filesystem::exists(dir.file("a/curves.svg")));
}

TEST(Cli, SplitRunReadsConfig) {
    TempDir dir("cli_config");
    const auto cfg = dir.write("run.cfg", "seed = 5\ntrials = 20\n");
    ASSERT_EQ(run("split-run " + data_args() + " --config " + cfg.string() + " --out-dir " +
                  dir.file("c").string()).code, 0);
    ASSERT_EQ(run("split-run " + data_args() + " --trials 20 --seed 5 --out-dir " + dir.file("d").string()).code, 0);
    EXPECT_EQ(testutil::slurp(dir.file("c/medians.csv")), testutil::slurp(dir.file("d/medians.csv")));
    const auto bad = dir.write("bad.cfg", "colour = red\n");
    EXPECT_EQ(run("split-run " + data_args() + " --config " + bad.string() + " --out-dir " +
                  dir.file("e").string()).code, 2);
}

TEST(Cli, SynthDatasetIsDeterministic) {
    TempDir dir("cli_synth");
    const auto a = dir.file("a").string();
    const auto b = dir.file("b").string();
    ASSERT_EQ(run("synth --dataset " + a + " --groups 4 --per-group 3 --seed 8").code, 0);
    ASSERT_EQ(run("synth --dataset " + b + " --groups 4 --per-group 3 --seed 8").code, 0);
    for (const char* f : {"scores.csv", "preds.csv", "polarity.csv"})
        EXPECT_EQ(testutil::slurp(dir.file(std::string("a/") + f)), testutil::slurp(dir.file(std::string("b/") + f)));
}
