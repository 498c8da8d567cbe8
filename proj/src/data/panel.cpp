#include "crossq/data/panel.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "crossq/error.hpp"

namespace crossq::data {

namespace {
bool same_value(double a, double b) { return (is_missing(a) && is_missing(b)) || a == b; }
} // namespace

bool Observation::operator==(const Observation &other) const {
    if (stock_id != other.stock_id || !same_value(price, other.price) ||
        !same_value(forward_return, other.forward_return) || features.size() != other.features.size()) {
        return false;
    }
    for (std::size_t i = 0; i < features.size(); ++i) {
        if (!same_value(features[i], other.features[i])) {
            return false;
        }
    }
    return true;
}

const Observation *CrossSection::find(const std::string &stock_id) const {
    auto it = std::lower_bound(rows.begin(), rows.end(), stock_id,
                               [](const Observation &o, const std::string &id) { return o.stock_id < id; });
    return (it != rows.end() && it->stock_id == stock_id) ? &*it : nullptr;
}

const CrossSection *PanelData::find(YearMonth date) const {
    auto it = std::lower_bound(sections.begin(), sections.end(), date,
                               [](const CrossSection &s, YearMonth d) { return s.date < d; });
    return (it != sections.end() && it->date == date) ? &*it : nullptr;
}

std::optional<YearMonth> PanelData::first_date() const {
    if (sections.empty()) {
        return std::nullopt;
    }
    return sections.front().date;
}

std::optional<YearMonth> PanelData::last_date() const {
    if (sections.empty()) {
        return std::nullopt;
    }
    return sections.back().date;
}

void PanelData::validate() const {
    for (std::size_t s = 0; s < sections.size(); ++s) {
        const CrossSection &cs = sections[s];
        if (s > 0 && !(sections[s - 1].date < cs.date)) {
            throw DataError("panel months not strictly increasing at " + cs.date.str());
        }
        const CrossSection *next = find(cs.date + 1);
        for (std::size_t i = 0; i < cs.rows.size(); ++i) {
            const Observation &o = cs.rows[i];
            if (i > 0 && !(cs.rows[i - 1].stock_id < o.stock_id)) {
                throw DataError("duplicate or unsorted stock '" + o.stock_id + "' at " + cs.date.str());
            }
            if (o.features.size() != feature_names.size()) {
                throw DataError("stock '" + o.stock_id + "' at " + cs.date.str() + " has " +
                                std::to_string(o.features.size()) + " features, expected " +
                                std::to_string(feature_names.size()));
            }
            if (!is_missing(o.price) && !(o.price > 0.0 && std::isfinite(o.price))) {
                throw DataError("non-positive price for stock '" + o.stock_id + "' at " + cs.date.str());
            }
            const Observation *later = next ? next->find(o.stock_id) : nullptr;
            if (!is_missing(o.forward_return)) {
                if (!later || is_missing(o.price) || is_missing(later->price)) {
                    throw DataError("forward return without consecutive prices for stock '" + o.stock_id +
                                    "' at " + cs.date.str());
                }
                if (std::abs(o.forward_return - simple_return(o.price, later->price)) > 1e-12) {
                    throw DataError("forward return inconsistent with prices for stock '" + o.stock_id +
                                    "' at " + cs.date.str());
                }
            }
        }
    }
}

std::optional<double> BenchmarkSeries::at(YearMonth date) const {
    auto it = returns.find(date);
    if (it == returns.end()) {
        return std::nullopt;
    }
    return it->second;
}

PanelData compute_forward_returns(PanelData panel) {
    for (CrossSection &cs : panel.sections) {
        for (Observation &o : cs.rows) {
            if (!is_missing(o.price) && !(o.price > 0.0)) {
                throw DataError("non-positive price " + std::to_string(o.price) + " for stock '" + o.stock_id +
                                "' at " + cs.date.str());
            }
        }
    }
    for (CrossSection &cs : panel.sections) {
        const CrossSection *next = panel.find(cs.date + 1);
        for (Observation &o : cs.rows) {
            o.forward_return = kMissing;
            if (is_missing(o.price) || next == nullptr) {
                continue;
            }
            const Observation *later = next->find(o.stock_id);
            if (later && !is_missing(later->price)) {
                o.forward_return = simple_return(o.price, later->price);
            }
        }
    }
    return panel;
}

BenchmarkSeries equal_weight_benchmark(const PanelData &panel) {
    BenchmarkSeries series;
    for (const CrossSection &cs : panel.sections) {
        double total = 0.0;
        std::size_t count = 0;
        for (const Observation &o : cs.rows) {
            if (!is_missing(o.forward_return)) {
                total += o.forward_return;
                ++count;
            }
        }
        if (count > 0) {
            series.returns[cs.date] = total / static_cast<double>(count);
        }
    }
    return series;
}

} // namespace crossq::data
