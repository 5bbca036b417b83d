#include "pwrc/report.hpp"

#include <gtest/gtest.h>

#include "pwrc/error.hpp"
#include "test_util.hpp"

using namespace pwrc;

TEST(Fixed, SixDecimalsWithoutNegativeZero) {
    EXPECT_EQ(fixed(0.5), "0.500000");
    EXPECT_EQ(fixed(-1e-12), "0.000000");
    EXPECT_EQ(fixed(-31.25), "-31.250000");
}

TEST(CurveCsv, HeaderAndRows) {
    SaStCurve c{{0, 50}, {1, 0.25}, kDefaultC1};
    EXPECT_EQ(curve_csv(c), "T,S\n0.000000,1.000000\n50.000000,0.250000\n");
}

TEST(ReportCsv, OneRowPerMetric) {
    IndicatorValues v{0.9, 0.8, 0.7, 12.5, -3};
    EXPECT_EQ(report_csv({"m"}, {v}), "metric,SRCC,KRCC,AUCca,dMOS\nm,0.900000,0.800000,12.500000,-3.000000\n");
}

TEST(TrialsCsv, SkippedTrialsAreOmitted) {
    ProtocolResult r;
    r.metrics = {"a"};
    r.trials.resize(2);
    r.trials[0].trialIndex = 0;
    r.trials[0].skipped = true;
    r.trials[1].trialIndex = 1;
    r.trials[1].perMetric = {IndicatorValues{1, 1, 1, 1, 1}};
    EXPECT_EQ(trials_csv(r),
              "trial,metric,SRCC,KRCC,AUCca,dMOS\n1,a,1.000000,1.000000,1.000000,1.000000\n");
}

TEST(DisagreementsCsv, PairsAreJoined) {
    std::map<std::string, Disagreements> d;
    d["SRCC"] = {2, {{"a", "b"}, {"c", "d"}}};
    d["KRCC"] = {0, {}};
    EXPECT_EQ(disagreements_csv(d), "indicator,disagreements,pairs\nKRCC,0,\nSRCC,2,a|b;c|d\n");
}

TEST(Svg, SelfContainedWithLabelsAndLegend) {
    SaStCurve c{threshold_grid(0, 100, 20), std::vector<double>(20, 0.5), kDefaultC1};
    const auto svg = sa_st_svg({{"metric <A>", c}, {"B", c}}, "title");
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
    EXPECT_NE(svg.find("Sensory threshold T"), std::string::npos);
    EXPECT_NE(svg.find(">SA<"), std::string::npos);
    EXPECT_NE(svg.find("metric &lt;A&gt;"), std::string::npos);
    EXPECT_EQ(svg.find("href"), std::string::npos);
    std::size_t lines = 0;
    for (auto pos = svg.find("<polyline"); pos != std::string::npos; pos = svg.find("<polyline", pos + 1))
        ++lines;
    EXPECT_EQ(lines, 2u);
    EXPECT_EQ(svg, sa_st_svg({{"metric <A>", c}, {"B", c}}, "title"));
    EXPECT_THROW(sa_st_svg({}), Error);
}

TEST(FormatTable, AlignedAndPorcelain) {
    const std::vector<std::string> header{"metric", "SRCC"};
    const std::vector<std::vector<std::string>> rows{{"long_name", "1.0"}, {"b", "-0.25"}};
    EXPECT_EQ(format_table(header, rows, true), "metric\tSRCC\nlong_name\t1.0\nb\t-0.25\n");
    EXPECT_EQ(format_table(header, rows, false),
              "metric      SRCC\nlong_name    1.0\nb          -0.25\n");
}

TEST(WriteFileAtomic, ReplacesContentAndLeavesNoTemporaries) {
    testutil::TempDir dir("atomic");
    const auto path = dir.file("out.csv");
    write_file_atomic(path, "first\n");
    write_file_atomic(path, "second\n");
    EXPECT_EQ(testutil::slurp(path), "second\n");
    std::size_t entries = 0;
    for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir.path())) ++entries;
    EXPECT_EQ(entries, 1u);
    try {
        write_file_atomic(dir.file("missing/out.csv"), "x");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Io);
    }
}
