#include "pwrc/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "pwrc/error.hpp"
#include "pwrc/report.hpp"

namespace pwrc {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::vector<std::string> split_line(const std::string& line, const std::string& where) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(trim(field));
            field.clear();
        } else {
            field += c;
        }
    }
    if (quoted) fail(fmt::format("{}: unterminated quoted field", where));
    fields.push_back(trim(field));
    return fields;
}

double parse_number(const std::string& cell, const std::string& where) {
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    if (!cell.empty() && *begin == '+') ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (cell.empty() || ec != std::errc() || ptr != end || !std::isfinite(value))
        fail(fmt::format("{}: non-numeric value '{}'", where, cell));
    return value;
}

std::string at(const std::filesystem::path& path, std::size_t row, const std::string& column) {
    return fmt::format("{}: row {}, column '{}'", path.string(), row, column);
}

void expect_header(const std::filesystem::path& path, const std::vector<std::string>& header,
                   const std::vector<std::string>& expected) {
    std::vector<std::string> got;
    for (const auto& h : header) got.push_back(lower(h));
    if (got != expected)
        fail(fmt::format("{}: expected header '{}'", path.string(), fmt::join(expected, ",")));
}

std::string quote(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::vector<std::string> Dataset::metric_names() const {
    std::vector<std::string> out;
    for (const auto& p : predictions) out.push_back(p.metric);
    return out;
}

const PredictionSet& Dataset::metric(const std::string& name) const {
    for (const auto& p : predictions)
        if (p.metric == name) return p;
    fail(fmt::format("unknown metric '{}'", name));
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail_io(fmt::format("cannot open '{}'", path.string()));
    std::vector<std::vector<std::string>> rows;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (number == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
        if (trim(line).empty()) continue;
        rows.push_back(split_line(line, fmt::format("{}: line {}", path.string(), number)));
    }
    if (in.bad()) fail_io(fmt::format("error reading '{}'", path.string()));
    if (rows.empty()) fail(fmt::format("{}: empty file", path.string()));
    return rows;
}

ScoreSet load_scores(const std::filesystem::path& path) {
    const auto rows = read_csv(path);
    expect_header(path, rows[0], {"id", "score", "stddev", "group", "polarity"});
    ScoreSet out;
    std::string polarity_token;
    std::unordered_set<std::string> ids;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != 5)
            fail(fmt::format("{}: row {} has {} fields, expected 5", path.string(), r + 1, row.size()));
        ScoreItem item;
        item.id = row[0];
        if (item.id.empty()) fail(fmt::format("{}: empty id", at(path, r + 1, "id")));
        if (!ids.insert(item.id).second)
            fail(fmt::format("{}: duplicate id '{}'", at(path, r + 1, "id"), item.id));
        item.score = parse_number(row[1], at(path, r + 1, "score"));
        item.stddev = parse_number(row[2], at(path, r + 1, "stddev"));
        if (item.stddev < 0.0) fail(fmt::format("{}: negative stddev", at(path, r + 1, "stddev")));
        item.group = row[3].empty() ? item.id : row[3];
        const auto token = lower(row[4]);
        if (token != "mos" && token != "dmos")
            fail(fmt::format("{}: unknown polarity '{}'", at(path, r + 1, "polarity"), row[4]));
        if (polarity_token.empty()) polarity_token = token;
        if (token != polarity_token)
            fail(fmt::format("{}: polarity must be constant per file", at(path, r + 1, "polarity")));
        out.items.push_back(std::move(item));
    }
    if (out.items.size() < 2) fail(fmt::format("{}: need at least 2 items", path.string()));
    out.polarity = polarity_token == "dmos" ? ScorePolarity::Dmos : ScorePolarity::Mos;
    return out;
}

std::map<std::string, PredictionPolarity> load_polarity_map(const std::filesystem::path& path) {
    const auto rows = read_csv(path);
    expect_header(path, rows[0], {"metric", "polarity"});
    std::map<std::string, PredictionPolarity> out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != 2)
            fail(fmt::format("{}: row {} has {} fields, expected 2", path.string(), r + 1, row.size()));
        const auto token = lower(row[1]);
        PredictionPolarity polarity;
        if (token == "higher")
            polarity = PredictionPolarity::HigherIsBetter;
        else if (token == "lower")
            polarity = PredictionPolarity::LowerIsBetter;
        else
            fail(fmt::format("{}: unknown polarity '{}'", at(path, r + 1, "polarity"), row[1]));
        if (!out.emplace(row[0], polarity).second)
            fail(fmt::format("{}: duplicate metric '{}'", at(path, r + 1, "metric"), row[0]));
    }
    return out;
}

std::vector<PredictionSet> load_predictions(const std::filesystem::path& path,
                                            const ScoreSet& scores,
                                            const std::map<std::string, PredictionPolarity>& polarity) {
    const auto rows = read_csv(path);
    const auto& header = rows[0];
    if (header.size() < 2 || lower(header[0]) != "id")
        fail(fmt::format("{}: expected header 'id,<metric>,...'", path.string()));

    std::vector<PredictionSet> out;
    for (std::size_t c = 1; c < header.size(); ++c) {
        const auto& name = header[c];
        auto it = polarity.find(name);
        if (it == polarity.end())
            fail(fmt::format("{}: metric '{}' has no entry in the polarity map", path.string(), name));
        for (const auto& seen : out)
            if (seen.metric == name)
                fail(fmt::format("{}: duplicate metric column '{}'", path.string(), name));
        PredictionSet set;
        set.metric = name;
        set.polarity = it->second;
        set.ids = scores.ids();
        set.values.assign(scores.size(), 0.0);
        out.push_back(std::move(set));
    }

    std::unordered_map<std::string, std::size_t> position;
    for (std::size_t i = 0; i < scores.size(); ++i) position.emplace(scores.items[i].id, i);
    std::vector<bool> filled(scores.size(), false);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != header.size())
            fail(fmt::format("{}: row {} has {} fields, expected {}", path.string(), r + 1,
                             row.size(), header.size()));
        auto it = position.find(row[0]);
        if (it == position.end())
            fail(fmt::format("{}: id '{}' not present in the subjective scores",
                             at(path, r + 1, "id"), row[0]));
        if (filled[it->second])
            fail(fmt::format("{}: duplicate id '{}'", at(path, r + 1, "id"), row[0]));
        filled[it->second] = true;
        for (std::size_t c = 1; c < header.size(); ++c)
            out[c - 1].values[it->second] = parse_number(row[c], at(path, r + 1, header[c]));
    }
    for (std::size_t i = 0; i < scores.size(); ++i)
        if (!filled[i])
            fail(fmt::format("{}: missing predictions for id '{}'", path.string(), scores.items[i].id));
    return out;
}

Dataset load_dataset(const std::filesystem::path& scoresPath,
                     const std::filesystem::path& predictionsPath,
                     const std::filesystem::path& polarityPath) {
    Dataset out;
    out.scores = load_scores(scoresPath);
    validate(out.scores);
    out.predictions = load_predictions(predictionsPath, out.scores, load_polarity_map(polarityPath));
    return out;
}

std::string scores_csv(const ScoreSet& scores) {
    std::ostringstream out;
    const char* polarity = scores.polarity == ScorePolarity::Mos ? "mos" : "dmos";
    out << "id,score,stddev,group,polarity\n";
    for (const auto& item : scores.items)
        out << fmt::format("{},{},{},{},{}\n", quote(item.id), item.score, item.stddev,
                           quote(item.group), polarity);
    return out.str();
}

std::string predictions_csv(const ScoreSet& scores, const std::vector<PredictionSet>& predictions) {
    std::ostringstream out;
    out << "id";
    for (const auto& p : predictions) out << ',' << quote(p.metric);
    out << '\n';
    for (std::size_t i = 0; i < scores.size(); ++i) {
        out << quote(scores.items[i].id);
        for (const auto& p : predictions) out << fmt::format(",{}", p.values.at(i));
        out << '\n';
    }
    return out.str();
}

std::string polarity_csv(const std::vector<PredictionSet>& predictions) {
    std::ostringstream out;
    out << "metric,polarity\n";
    for (const auto& p : predictions)
        out << quote(p.metric) << ','
            << (p.polarity == PredictionPolarity::HigherIsBetter ? "higher" : "lower") << '\n';
    return out.str();
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) fail_io(fmt::format("cannot create '{}': {}", dir.string(), ec.message()));
    write_file_atomic(dir / "scores.csv", scores_csv(dataset.scores));
    write_file_atomic(dir / "preds.csv", predictions_csv(dataset.scores, dataset.predictions));
    write_file_atomic(dir / "polarity.csv", polarity_csv(dataset.predictions));
}

}  // namespace pwrc
