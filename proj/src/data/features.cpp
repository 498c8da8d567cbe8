#include "crossq/data/features.hpp"

#include <algorithm>
#include <cmath>

#include "crossq/error.hpp"

namespace crossq::data {

double momentum(const std::map<YearMonth, double> &prices, YearMonth t, int k_months) {
    if (k_months < 1) {
        throw UsageError("momentum horizon must be >= 1 month");
    }
    auto now = prices.find(t);
    auto past = prices.find(t - k_months);
    if (now == prices.end() || past == prices.end() || is_missing(now->second) || is_missing(past->second)) {
        return kMissing;
    }
    return now->second / past->second - 1.0;
}

double size_feature(double market_value) {
    if (!(market_value > 0.0)) {
        throw DataError("market value must be positive, got " + std::to_string(market_value));
    }
    return std::log(market_value);
}

double beta_feature(std::span<const double> stock_returns, std::span<const double> market_returns, int window) {
    if (stock_returns.size() != market_returns.size()) {
        throw UsageError("beta needs paired stock and market returns");
    }
    if (window < 2 || stock_returns.size() < static_cast<std::size_t>(window)) {
        return kMissing;
    }
    const auto w = static_cast<std::size_t>(window);
    const auto s = stock_returns.last(w);
    const auto m = market_returns.last(w);
    double mean_s = 0.0;
    double mean_m = 0.0;
    for (std::size_t i = 0; i < w; ++i) {
        mean_s += s[i];
        mean_m += m[i];
    }
    mean_s /= static_cast<double>(w);
    mean_m /= static_cast<double>(w);
    double cov = 0.0;
    double var = 0.0;
    for (std::size_t i = 0; i < w; ++i) {
        cov += (s[i] - mean_s) * (m[i] - mean_m);
        var += (m[i] - mean_m) * (m[i] - mean_m);
    }
    if (!(var > 0.0)) {
        return kMissing;
    }
    return cov / var;
}

std::string to_string(FeatureSource source) {
    switch (source) {
    case FeatureSource::ingested: return "ingested";
    case FeatureSource::momentum: return "momentum";
    case FeatureSource::size: return "size";
    case FeatureSource::beta: return "beta";
    }
    return "ingested";
}

FeatureSource parse_feature_source(const std::string &name) {
    for (auto s : {FeatureSource::ingested, FeatureSource::momentum, FeatureSource::size, FeatureSource::beta}) {
        if (to_string(s) == name) {
            return s;
        }
    }
    throw ConfigError("unknown feature source '" + name + "' (ingested, momentum, size, beta)");
}

std::vector<FeatureSpec> default_feature_specs() {
    return {
        {"book_to_price", FeatureSource::ingested, 0, "book_to_price"},
        {"earnings_to_price", FeatureSource::ingested, 0, "earnings_to_price"},
        {"sales_to_price", FeatureSource::ingested, 0, "sales_to_price"},
        {"return_on_equity", FeatureSource::ingested, 0, "return_on_equity"},
        {"momentum_1m", FeatureSource::momentum, 1, ""},
        {"momentum_3m", FeatureSource::momentum, 3, ""},
        {"momentum_6m", FeatureSource::momentum, 6, ""},
        {"momentum_12m", FeatureSource::momentum, 12, ""},
        {"market_cap", FeatureSource::size, 0, "market_value"},
        {"beta", FeatureSource::beta, kBetaWindow, ""},
    };
}

PanelData build_features(const PanelData &raw, const BenchmarkSeries &market,
                         const std::vector<FeatureSpec> &specs) {
    if (specs.empty()) {
        throw ConfigError("at least one feature must be configured");
    }
    std::vector<std::size_t> columns(specs.size(), 0);
    for (std::size_t f = 0; f < specs.size(); ++f) {
        const FeatureSpec &spec = specs[f];
        if (spec.source == FeatureSource::ingested || spec.source == FeatureSource::size) {
            auto it = std::find(raw.feature_names.begin(), raw.feature_names.end(), spec.column);
            if (it == raw.feature_names.end()) {
                throw ConfigError("feature '" + spec.name + "' reads column '" + spec.column +
                                  "' which the panel does not have");
            }
            columns[f] = static_cast<std::size_t>(it - raw.feature_names.begin());
        }
        if (spec.source == FeatureSource::momentum && spec.months < 1) {
            throw ConfigError("feature '" + spec.name + "': momentum months must be >= 1");
        }
        if (spec.source == FeatureSource::beta && spec.months < 2) {
            throw ConfigError("feature '" + spec.name + "': beta window must be >= 2");
        }
    }

    std::map<std::string, std::map<YearMonth, double>> prices;
    for (const CrossSection &cs : raw.sections) {
        for (const Observation &o : cs.rows) {
            if (!is_missing(o.price)) {
                prices[o.stock_id][cs.date] = o.price;
            }
        }
    }

    PanelData out;
    for (const FeatureSpec &spec : specs) {
        out.feature_names.push_back(spec.name);
    }
    out.sections.reserve(raw.sections.size());
    std::vector<double> stock_window;
    std::vector<double> market_window;
    for (const CrossSection &cs : raw.sections) {
        CrossSection section{cs.date, {}};
        section.rows.reserve(cs.rows.size());
        for (const Observation &o : cs.rows) {
            Observation row{o.stock_id, o.price, std::vector<double>(specs.size(), kMissing), o.forward_return};
            const auto &history = prices[o.stock_id];
            for (std::size_t f = 0; f < specs.size(); ++f) {
                const FeatureSpec &spec = specs[f];
                switch (spec.source) {
                case FeatureSource::ingested:
                    row.features[f] = o.features[columns[f]];
                    break;
                case FeatureSource::momentum:
                    row.features[f] = momentum(history, cs.date, spec.months);
                    break;
                case FeatureSource::size: {
                    const double mv = o.features[columns[f]];
                    row.features[f] = is_missing(mv) ? kMissing : size_feature(mv);
                    break;
                }
                case FeatureSource::beta: {
                    // pairs for the months s -> s+1 that end at or before t
                    stock_window.clear();
                    market_window.clear();
                    for (int lag = spec.months; lag >= 1; --lag) {
                        const YearMonth s = cs.date - lag;
                        auto p0 = history.find(s);
                        auto p1 = history.find(s + 1);
                        auto m = market.at(s);
                        if (p0 == history.end() || p1 == history.end() || !m) {
                            break;
                        }
                        stock_window.push_back(simple_return(p0->second, p1->second));
                        market_window.push_back(*m);
                    }
                    row.features[f] = beta_feature(stock_window, market_window, spec.months);
                    break;
                }
                }
            }
            section.rows.push_back(std::move(row));
        }
        out.sections.push_back(std::move(section));
    }
    return out;
}

} // namespace crossq::data
