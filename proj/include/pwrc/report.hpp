#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "pwrc/benchmark.hpp"
#include "pwrc/indicator.hpp"
#include "pwrc/protocol.hpp"

namespace pwrc {

/// Writes to a temporary sibling and renames it over `path`, so a failed
/// write never leaves a partial file behind.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// `T,S` rows.
std::string curve_csv(const SaStCurve& curve);

/// `metric,SRCC,KRCC,AUCca,dMOS` rows.
std::string report_csv(const std::vector<std::string>& metrics,
                       const std::vector<IndicatorValues>& values);

/// `trial,metric,SRCC,KRCC,AUCca,dMOS`, skipped trials omitted.
std::string trials_csv(const ProtocolResult& result);

/// `indicator,disagreements,pairs` with pairs written as `a|b` joined by `;`.
std::string disagreements_csv(const std::map<std::string, Disagreements>& disagreements);

struct CurveSeries {
    std::string label;
    SaStCurve curve;
};

/// Self-contained SVG line chart of one or more SA-ST curves with a legend.
std::string sa_st_svg(const std::vector<CurveSeries>& series, const std::string& title = {});

/// Fixed-width text table, or tab separated when `porcelain` is set.
std::string format_table(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows, bool porcelain);

/// Six-decimal rendering used in every report.
std::string fixed(double value);

}  // namespace pwrc
