#include "pwrc/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <unistd.h>

#include "pwrc/error.hpp"

namespace pwrc {

namespace {

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

/// Step of roughly `target` ticks over `range`, rounded to 1, 2 or 5 times a power of ten.
double nice_step(double range, int target) {
    const double raw = range / target;
    const double magnitude = std::pow(10.0, std::floor(std::log10(raw)));
    const double residual = raw / magnitude;
    if (residual <= 1.0) return magnitude;
    if (residual <= 2.0) return 2.0 * magnitude;
    if (residual <= 5.0) return 5.0 * magnitude;
    return 10.0 * magnitude;
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

}  // namespace

std::string fixed(double value) {
    auto s = fmt::format("{:.6f}", value);
    if (s == "-0.000000") s = "0.000000";
    return s;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    const auto dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    const auto tmp = dir / fmt::format(".{}.tmp{}", path.filename().string(), ::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail_io(fmt::format("cannot write '{}'", tmp.string()));
        out << content;
        out.flush();
        if (!out) {
            out.close();
            std::remove(tmp.c_str());
            fail_io(fmt::format("error writing '{}'", tmp.string()));
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        fail_io(fmt::format("cannot move output into place at '{}': {}", path.string(), ec.message()));
    }
}

std::string curve_csv(const SaStCurve& curve) {
    std::ostringstream out;
    out << "T,S\n";
    for (std::size_t k = 0; k < curve.size(); ++k)
        out << fixed(curve.thresholds[k]) << ',' << fixed(curve.accuracies[k]) << '\n';
    return out.str();
}

std::string report_csv(const std::vector<std::string>& metrics,
                       const std::vector<IndicatorValues>& values) {
    std::ostringstream out;
    out << "metric,SRCC,KRCC,AUCca,dMOS\n";
    for (std::size_t m = 0; m < metrics.size(); ++m) {
        const auto& v = values.at(m);
        out << metrics[m] << ',' << fixed(v.srcc) << ',' << fixed(v.krcc) << ',' << fixed(v.aucCa)
            << ',' << fixed(v.dMos) << '\n';
    }
    return out.str();
}

std::string trials_csv(const ProtocolResult& result) {
    std::ostringstream out;
    out << "trial,metric,SRCC,KRCC,AUCca,dMOS\n";
    for (const auto& trial : result.trials) {
        if (trial.skipped) continue;
        for (std::size_t m = 0; m < result.metrics.size(); ++m) {
            const auto& v = trial.perMetric[m];
            out << trial.trialIndex << ',' << result.metrics[m] << ',' << fixed(v.srcc) << ','
                << fixed(v.krcc) << ',' << fixed(v.aucCa) << ',' << fixed(v.dMos) << '\n';
        }
    }
    return out.str();
}

std::string disagreements_csv(const std::map<std::string, Disagreements>& disagreements) {
    std::ostringstream out;
    out << "indicator,disagreements,pairs\n";
    for (const auto& [name, d] : disagreements) {
        out << name << ',' << d.count << ',';
        for (std::size_t k = 0; k < d.pairs.size(); ++k)
            out << (k ? ";" : "") << d.pairs[k].first << '|' << d.pairs[k].second;
        out << '\n';
    }
    return out.str();
}

std::string sa_st_svg(const std::vector<CurveSeries>& series, const std::string& title) {
    if (series.empty()) fail("no curves to plot");
    constexpr double width = 720.0, height = 480.0;
    constexpr double left = 70.0, right = 190.0, top = 40.0, bottom = 60.0;
    const double plotW = width - left - right;
    const double plotH = height - top - bottom;

    double tLo = series.front().curve.thresholds.front();
    double tHi = series.front().curve.thresholds.back();
    double sLo = 0.0;
    double sHi = 1.0;
    for (const auto& s : series) {
        if (s.curve.size() < 2) fail(fmt::format("curve '{}' has fewer than 2 samples", s.label));
        tLo = std::min(tLo, s.curve.thresholds.front());
        tHi = std::max(tHi, s.curve.thresholds.back());
        for (double a : s.curve.accuracies) {
            sLo = std::min(sLo, a);
            sHi = std::max(sHi, a);
        }
    }
    sLo = std::max(-1.0, std::floor(sLo * 5.0) / 5.0);
    sHi = std::min(1.0, std::ceil(sHi * 5.0) / 5.0);
    if (!(sHi > sLo)) sHi = sLo + 1.0;

    auto px = [&](double t) { return left + (t - tLo) / (tHi - tLo) * plotW; };
    auto py = [&](double s) { return top + (sHi - s) / (sHi - sLo) * plotH; };
    auto num = [](double v) { return fmt::format("{:.2f}", v); };

    std::ostringstream svg;
    svg << fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
        "font-family=\"Helvetica, Arial, sans-serif\" font-size=\"12\">\n",
        width, height);
    svg << fmt::format("<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"#ffffff\"/>\n", width, height);
    if (!title.empty())
        svg << fmt::format("<text x=\"{}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
                           num(left + plotW / 2), xml_escape(title));

    const double xStep = nice_step(tHi - tLo, 8);
    for (double t = std::ceil(tLo / xStep) * xStep; t <= tHi + 1e-9; t += xStep) {
        svg << fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"#e0e0e0\"/>\n",
                           num(px(t)), num(top), num(top + plotH));
        svg << fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", num(px(t)),
                           num(top + plotH + 18), fmt::format("{:g}", std::abs(t) < 1e-9 ? 0.0 : t));
    }
    const double yStep = nice_step(sHi - sLo, 6);
    for (double s = std::ceil(sLo / yStep - 1e-9) * yStep; s <= sHi + 1e-9; s += yStep) {
        svg << fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"#e0e0e0\"/>\n",
                           num(left), num(py(s)), num(left + plotW));
        svg << fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n", num(left - 8),
                           num(py(s) + 4), fmt::format("{:.1f}", std::abs(s) < 1e-9 ? 0.0 : s));
    }
    svg << fmt::format(
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#000000\"/>\n",
        num(left), num(top), num(plotW), num(plotH));
    svg << fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">Sensory threshold T</text>\n",
                       num(left + plotW / 2), num(height - 18));
    svg << fmt::format(
        "<text x=\"18\" y=\"{0}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {0})\">SA</text>\n",
        num(top + plotH / 2));

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* colour = kPalette[k % std::size(kPalette)];
        svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < s.curve.size(); ++i)
            svg << (i ? " " : "") << num(px(s.curve.thresholds[i])) << ','
                << num(py(s.curve.accuracies[i]));
        svg << "\"/>\n";
        for (std::size_t i = 0; i < s.curve.size(); ++i)
            svg << fmt::format("<circle cx=\"{}\" cy=\"{}\" r=\"2.5\" fill=\"{}\"/>\n",
                               num(px(s.curve.thresholds[i])), num(py(s.curve.accuracies[i])), colour);

        const double ly = top + 10.0 + 20.0 * static_cast<double>(k);
        const double lx = left + plotW + 16.0;
        svg << fmt::format(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"2\"/>\n",
            num(lx), num(ly), num(lx + 24), num(ly), colour);
        svg << fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", num(lx + 30), num(ly + 4),
                           xml_escape(s.label));
    }
    svg << "</svg>\n";
    return svg.str();
}

std::string format_table(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows, bool porcelain) {
    std::ostringstream out;
    if (porcelain) {
        auto line = [&](const std::vector<std::string>& cells) {
            for (std::size_t c = 0; c < cells.size(); ++c) out << (c ? "\t" : "") << cells[c];
            out << '\n';
        };
        line(header);
        for (const auto& row : rows) line(row);
        return out.str();
    }
    std::vector<std::size_t> width(header.size(), 0);
    for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
    for (const auto& row : rows)
        for (std::size_t c = 0; c < row.size() && c < width.size(); ++c)
            width[c] = std::max(width[c], row[c].size());
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (c == 0)
                out << fmt::format("{:<{}}", cells[c], width[c]);
            else
                out << "  " << fmt::format("{:>{}}", cells[c], width[c]);
        }
        out << '\n';
    };
    line(header);
    for (const auto& row : rows) line(row);
    return out.str();
}

}  // namespace pwrc
