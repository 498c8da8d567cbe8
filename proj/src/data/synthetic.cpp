#include "crossq/data/synthetic.hpp"

#include <algorithm>
#include <cstdio>
#include <string>

#include "crossq/error.hpp"
#include "crossq/util/rng.hpp"

namespace crossq::data {

namespace {

std::string stock_name(int serial) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "S%05d", serial);
    return buf;
}

struct LiveStock {
    std::string id;
    double price;
};

} // namespace

void SyntheticSpec::validate() const {
    if (n_stocks < 5) {
        throw ConfigError("synthetic.n_stocks must be >= 5");
    }
    if (n_stocks > 99999) {
        throw ConfigError("synthetic.n_stocks must be <= 99999");
    }
    if (n_months < 1) {
        throw ConfigError("synthetic.n_months must be >= 1");
    }
    if (n_features < 1) {
        throw ConfigError("synthetic.n_features must be >= 1");
    }
    if (!linear_weights.empty() && static_cast<int>(linear_weights.size()) != n_features) {
        throw ConfigError("synthetic.linear_weights has " + std::to_string(linear_weights.size()) +
                          " entries, expected n_features = " + std::to_string(n_features));
    }
    bool any_interaction = false;
    for (const auto &term : interactions) {
        if (term.j < 0 || term.j >= n_features || term.k < 0 || term.k >= n_features || term.j == term.k) {
            throw ConfigError("synthetic.interactions: pair (" + std::to_string(term.j) + ", " +
                              std::to_string(term.k) + ") must name two distinct features");
        }
        any_interaction = any_interaction || term.coefficient != 0.0;
    }
    if (nonlinear && !any_interaction) {
        throw ConfigError("synthetic.interactions: nonlinear mode needs a nonzero interaction coefficient");
    }
    if (!(noise_sigma >= 0.0)) {
        throw ConfigError("synthetic.noise_sigma must be >= 0");
    }
    if (!(market_sigma >= 0.0)) {
        throw ConfigError("synthetic.market_sigma must be >= 0");
    }
    if (!(delist_probability >= 0.0 && delist_probability < 1.0)) {
        throw ConfigError("synthetic.delist_probability must lie in [0, 1)");
    }
}

SyntheticMarket generate_synthetic(const SyntheticSpec &spec) {
    spec.validate();
    const auto n = static_cast<std::size_t>(spec.n_features);
    std::vector<double> weights = spec.linear_weights;
    weights.resize(n, 0.0);

    Rng rng(spec.seed);
    int serial = 0;
    std::vector<LiveStock> live;
    for (int i = 0; i < spec.n_stocks; ++i) {
        live.push_back({stock_name(serial++), rng.uniform(20.0, 200.0)});
    }

    PanelData panel;
    for (std::size_t f = 0; f < n; ++f) {
        panel.feature_names.push_back("f_" + std::to_string(f + 1));
    }

    for (int t = 0; t <= spec.n_months; ++t) {
        CrossSection cs{spec.start + t, {}};
        cs.rows.reserve(live.size());
        for (const LiveStock &s : live) {
            Observation o{s.id, s.price, std::vector<double>(n), kMissing};
            for (double &x : o.features) {
                x = rng.uniform(-1.0, 1.0);
            }
            cs.rows.push_back(std::move(o));
        }
        if (t == spec.n_months) {
            panel.sections.push_back(std::move(cs));
            break;
        }

        const double market = spec.market_drift + spec.market_sigma * rng.normal();
        std::vector<LiveStock> next;
        next.reserve(live.size());
        for (std::size_t i = 0; i < live.size(); ++i) {
            const auto &x = cs.rows[i].features;
            double r = market;
            for (std::size_t f = 0; f < n; ++f) {
                r += weights[f] * x[f];
            }
            for (const auto &term : spec.interactions) {
                r += term.coefficient * x[static_cast<std::size_t>(term.j)] * x[static_cast<std::size_t>(term.k)];
            }
            r += spec.noise_sigma * rng.normal();
            r = std::max(r, -0.9);
            const bool delisted = spec.delist_probability > 0.0 && rng.uniform() < spec.delist_probability;
            if (!delisted) {
                next.push_back({live[i].id, live[i].price * (1.0 + r)});
            }
        }
        while (static_cast<int>(next.size()) < spec.n_stocks) {
            next.push_back({stock_name(serial++), rng.uniform(20.0, 200.0)});
        }
        live = std::move(next);
        panel.sections.push_back(std::move(cs));
    }

    SyntheticMarket out;
    out.panel = compute_forward_returns(std::move(panel));
    out.benchmark = equal_weight_benchmark(out.panel);
    return out;
}

} // namespace crossq::data
