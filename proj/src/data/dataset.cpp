#include "crossq/data/dataset.hpp"

#include <algorithm>

#include "crossq/data/rank.hpp"
#include "crossq/util/log.hpp"

namespace crossq::data {

namespace {

bool complete(const Observation &o) {
    return std::none_of(o.features.begin(), o.features.end(), is_missing);
}

/// Ranks each column of `raw` in place.
void rank_columns(FeatureMatrix &raw) {
    std::vector<double> column(static_cast<std::size_t>(raw.rows()));
    for (Eigen::Index c = 0; c < raw.cols(); ++c) {
        for (Eigen::Index r = 0; r < raw.rows(); ++r) {
            column[static_cast<std::size_t>(r)] = raw(r, c);
        }
        const auto ranked = rank_transform(column);
        for (Eigen::Index r = 0; r < raw.rows(); ++r) {
            raw(r, c) = ranked[static_cast<std::size_t>(r)];
        }
    }
}

FeatureMatrix gather(const std::vector<const Observation *> &rows, std::size_t n_features) {
    FeatureMatrix x(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(n_features));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < n_features; ++c) {
            x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r]->features[c];
        }
    }
    return x;
}

} // namespace

RankedWindow ranked_training_window(const PanelData &panel, YearMonth first, YearMonth last) {
    const std::size_t n = panel.n_features();
    std::vector<FeatureMatrix> blocks;
    std::vector<std::vector<double>> targets;
    RankedWindow window;
    for (const CrossSection &cs : panel.sections) {
        if (cs.date < first || cs.date > last) {
            continue;
        }
        std::vector<const Observation *> rows;
        for (const Observation &o : cs.rows) {
            if (complete(o) && !is_missing(o.forward_return)) {
                rows.push_back(&o);
            }
        }
        if (rows.size() < 2) {
            log::warn("training month " + cs.date.str() + " has fewer than two complete rows; skipped");
            continue;
        }
        FeatureMatrix x = gather(rows, n);
        rank_columns(x);
        std::vector<double> returns;
        returns.reserve(rows.size());
        for (const Observation *o : rows) {
            returns.push_back(o->forward_return);
            window.dates.push_back(cs.date);
            window.stock_ids.push_back(o->stock_id);
        }
        targets.push_back(rank_transform(returns));
        blocks.push_back(std::move(x));
    }
    Eigen::Index total = 0;
    for (const auto &b : blocks) {
        total += b.rows();
    }
    window.x.resize(total, static_cast<Eigen::Index>(n));
    window.y.reserve(static_cast<std::size_t>(total));
    Eigen::Index offset = 0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        window.x.middleRows(offset, blocks[b].rows()) = blocks[b];
        offset += blocks[b].rows();
        window.y.insert(window.y.end(), targets[b].begin(), targets[b].end());
    }
    return window;
}

std::optional<RankedMonth> ranked_month(const PanelData &panel, YearMonth date) {
    const CrossSection *cs = panel.find(date);
    if (cs == nullptr) {
        log::warn("month " + date.str() + " is absent from the panel");
        return std::nullopt;
    }
    std::vector<const Observation *> rows;
    for (const Observation &o : cs->rows) {
        if (complete(o)) {
            rows.push_back(&o);
        }
    }
    if (rows.size() < 2) {
        log::warn("month " + date.str() + " has fewer than two complete rows");
        return std::nullopt;
    }
    RankedMonth month;
    month.date = date;
    month.x = gather(rows, panel.n_features());
    rank_columns(month.x);
    for (const Observation *o : rows) {
        month.stock_ids.push_back(o->stock_id);
        month.forward_returns.push_back(o->forward_return);
    }
    return month;
}

} // namespace crossq::data
