#include "crossq/data/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <string_view>

#include "crossq/error.hpp"
#include "crossq/util/log.hpp"

namespace crossq::data {

namespace {

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::string where(const std::string &source, std::size_t line) {
    return source + ":" + std::to_string(line);
}

/// Empty field -> missing; anything else must be a finite decimal.
double parse_number(std::string_view field, const std::string &column, const std::string &source,
                    std::size_t line) {
    field = trim(field);
    if (field.empty()) {
        return kMissing;
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw DataError(where(source, line) + ": column '" + column + "' is not a number: '" +
                        std::string(field) + "'");
    }
    if (!std::isfinite(value)) {
        throw DataError(where(source, line) + ": column '" + column + "' is not finite");
    }
    return value;
}

bool next_line(std::istream &in, std::string &line, std::size_t &number) {
    while (std::getline(in, line)) {
        ++number;
        if (!trim(line).empty()) {
            return true;
        }
    }
    return false;
}

std::ifstream open(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open '" + path.string() + "'");
    }
    return in;
}

} // namespace

std::string format_double(double v) {
    if (is_missing(v)) {
        return "";
    }
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

PanelData read_panel_csv(std::istream &in, const std::string &source) {
    std::string line;
    std::size_t number = 0;
    if (!next_line(in, line, number)) {
        throw DataError(source + ": empty file, expected a header");
    }
    const auto header = split(line);
    if (header.size() < 4 || trim(header[0]) != "date" || trim(header[1]) != "stock_id" ||
        trim(header[2]) != "price") {
        throw DataError(where(source, number) +
                        ": header must be 'date,stock_id,price,<feature columns...>' with at least one feature");
    }
    PanelData panel;
    for (std::size_t c = 3; c < header.size(); ++c) {
        const std::string name(trim(header[c]));
        if (name.empty()) {
            throw DataError(where(source, number) + ": empty feature column name");
        }
        if (std::find(panel.feature_names.begin(), panel.feature_names.end(), name) != panel.feature_names.end()) {
            throw DataError(where(source, number) + ": repeated column '" + name + "'");
        }
        panel.feature_names.push_back(name);
    }

    std::map<YearMonth, std::map<std::string, Observation>> months;
    std::map<std::pair<YearMonth, std::string>, std::size_t> seen;
    bool out_of_order = false;
    std::optional<YearMonth> previous;
    while (next_line(in, line, number)) {
        const auto fields = split(line);
        if (fields.size() != header.size()) {
            throw DataError(where(source, number) + ": expected " + std::to_string(header.size()) +
                            " fields, found " + std::to_string(fields.size()));
        }
        YearMonth date;
        try {
            date = YearMonth::parse(trim(fields[0]));
        } catch (const DataError &e) {
            throw DataError(where(source, number) + ": " + e.what());
        }
        const std::string stock(trim(fields[1]));
        if (stock.empty()) {
            throw DataError(where(source, number) + ": empty stock_id");
        }
        auto [it, inserted] = seen.emplace(std::make_pair(date, stock), number);
        if (!inserted) {
            throw DataError(where(source, number) + ": duplicate (date, stock_id) = (" + date.str() + ", " + stock +
                            "), first seen on line " + std::to_string(it->second));
        }
        if (previous && date < *previous) {
            out_of_order = true;
        }
        previous = date;

        Observation o;
        o.stock_id = stock;
        o.price = parse_number(fields[2], "price", source, number);
        if (!is_missing(o.price) && !(o.price > 0.0)) {
            throw DataError(where(source, number) + ": non-positive price for stock '" + stock + "' at " + date.str());
        }
        o.features.reserve(panel.feature_names.size());
        for (std::size_t c = 3; c < fields.size(); ++c) {
            o.features.push_back(parse_number(fields[c], panel.feature_names[c - 3], source, number));
        }
        months[date].emplace(stock, std::move(o));
    }
    if (out_of_order) {
        log::warn(source + ": rows are not in date order; sorted on load");
    }
    for (auto &[date, rows] : months) {
        CrossSection cs{date, {}};
        cs.rows.reserve(rows.size());
        for (auto &[id, o] : rows) {
            cs.rows.push_back(std::move(o));
        }
        panel.sections.push_back(std::move(cs));
    }
    panel = compute_forward_returns(std::move(panel));
    panel.validate();
    return panel;
}

PanelData load_panel_csv(const std::filesystem::path &path) {
    auto in = open(path);
    return read_panel_csv(in, path.string());
}

void write_panel_csv(const PanelData &panel, std::ostream &out) {
    out << "date,stock_id,price";
    for (const auto &name : panel.feature_names) {
        out << ',' << name;
    }
    out << '\n';
    for (const CrossSection &cs : panel.sections) {
        const std::string date = cs.date.str();
        for (const Observation &o : cs.rows) {
            out << date << ',' << o.stock_id << ',' << format_double(o.price);
            for (double f : o.features) {
                out << ',' << format_double(f);
            }
            out << '\n';
        }
    }
}

BenchmarkSeries read_benchmark_csv(std::istream &in, const std::string &source) {
    std::string line;
    std::size_t number = 0;
    if (!next_line(in, line, number)) {
        throw DataError(source + ": empty file, expected a header");
    }
    const auto header = split(line);
    if (header.size() != 2 || trim(header[0]) != "date" || trim(header[1]) != "return") {
        throw DataError(where(source, number) + ": header must be 'date,return'");
    }
    BenchmarkSeries series;
    while (next_line(in, line, number)) {
        const auto fields = split(line);
        if (fields.size() != 2) {
            throw DataError(where(source, number) + ": expected 2 fields, found " + std::to_string(fields.size()));
        }
        YearMonth date;
        try {
            date = YearMonth::parse(trim(fields[0]));
        } catch (const DataError &e) {
            throw DataError(where(source, number) + ": " + e.what());
        }
        const double r = parse_number(fields[1], "return", source, number);
        if (is_missing(r)) {
            continue;
        }
        if (!series.returns.emplace(date, r).second) {
            throw DataError(where(source, number) + ": duplicate date " + date.str());
        }
    }
    return series;
}

BenchmarkSeries load_benchmark_csv(const std::filesystem::path &path) {
    auto in = open(path);
    return read_benchmark_csv(in, path.string());
}

void write_benchmark_csv(const BenchmarkSeries &series, std::ostream &out) {
    out << "date,return\n";
    for (const auto &[date, r] : series.returns) {
        out << date.str() << ',' << format_double(r) << '\n';
    }
}

} // namespace crossq::data
