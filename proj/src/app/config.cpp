#include "crossq/app/config.hpp"

#include <fstream>
#include <set>

#include "crossq/error.hpp"

namespace crossq::app {

namespace {

/// Typed access to one JSON object; finish() rejects keys nobody asked for.
class Section {
  public:
    Section(const Json &doc, std::string path) : doc_(doc), path_(std::move(path)) {
        if (!doc_.is_object()) {
            throw ConfigError(where() + "must be an object");
        }
    }

    bool has(const std::string &key) {
        seen_.insert(key);
        return doc_.contains(key) && !doc_.at(key).is_null();
    }

    const Json &raw(const std::string &key) { return doc_.at(key); }
    std::string field(const std::string &key) const { return path_.empty() ? key : path_ + "." + key; }

    template <class T>
    void read(const std::string &key, T &out) {
        if (has(key)) {
            out = get<T>(key);
        }
    }

    template <class T>
    void read(const std::string &key, std::optional<T> &out) {
        if (has(key)) {
            out = get<T>(key);
        }
    }

    template <class T>
    T get(const std::string &key) {
        const Json &v = doc_.at(key);
        if constexpr (std::is_same_v<T, bool>) {
            if (!v.is_boolean()) {
                throw ConfigError(field(key) + " must be true or false");
            }
            return v.get<bool>();
        } else if constexpr (std::is_same_v<T, std::string>) {
            if (!v.is_string()) {
                throw ConfigError(field(key) + " must be a string");
            }
            return v.get<std::string>();
        } else if constexpr (std::is_same_v<T, std::uint64_t>) {
            if (!v.is_number_unsigned()) {
                throw ConfigError(field(key) + " must be a non-negative integer");
            }
            return v.get<std::uint64_t>();
        } else if constexpr (std::is_same_v<T, int>) {
            if (!v.is_number_integer()) {
                throw ConfigError(field(key) + " must be an integer");
            }
            const auto i = v.get<std::int64_t>();
            if (i < std::numeric_limits<int>::min() || i > std::numeric_limits<int>::max()) {
                throw ConfigError(field(key) + " is out of range");
            }
            return static_cast<int>(i);
        } else if constexpr (std::is_same_v<T, double>) {
            if (!v.is_number()) {
                throw ConfigError(field(key) + " must be a number");
            }
            return v.get<double>();
        } else if constexpr (std::is_same_v<T, YearMonth>) {
            const std::string text = get<std::string>(key);
            try {
                return YearMonth::parse(text);
            } catch (const DataError &e) {
                throw ConfigError(field(key) + ": " + e.what());
            }
        } else if constexpr (std::is_same_v<T, std::vector<int>> || std::is_same_v<T, std::vector<double>>) {
            if (!v.is_array()) {
                throw ConfigError(field(key) + " must be an array");
            }
            T out;
            for (std::size_t i = 0; i < v.size(); ++i) {
                const bool ok = std::is_same_v<T, std::vector<int>> ? v[i].is_number_integer() : v[i].is_number();
                if (!ok) {
                    throw ConfigError(field(key) + "[" + std::to_string(i) + "] has the wrong type");
                }
                out.push_back(v[i].get<typename T::value_type>());
            }
            return out;
        } else {
            static_assert(sizeof(T) == 0, "unsupported config type");
        }
    }

    void finish() const {
        for (const auto &[key, value] : doc_.items()) {
            if (!seen_.count(key)) {
                throw ConfigError("unknown config field '" + field(key) + "'");
            }
        }
    }

  private:
    std::string where() const { return path_.empty() ? "config " : path_ + " "; }

    const Json &doc_;
    std::string path_;
    std::set<std::string> seen_;
};

void reject_for(const std::string &field, bool present, const std::string &family) {
    if (present) {
        throw ConfigError("model." + field + " does not apply to family '" + family + "'");
    }
}

ModelConfig parse_model(const Json &doc) {
    Section s(doc, "model");
    ModelConfig m;
    s.read("preset", m.preset);
    if (s.has("family")) {
        try {
            m.family = training::parse_family(s.get<std::string>("family"));
        } catch (const Error &e) {
            throw ConfigError(std::string("model.family: ") + e.what());
        }
    }
    s.read("fit_intercept", m.fit_intercept);
    s.read("hidden_layers", m.hidden_layers);
    s.read("depth", m.depth);
    s.read("tau", m.tau);
    s.read("hamiltonian_seed", m.hamiltonian_seed);
    s.read("bond_dim", m.bond_dim);
    s.read("init_noise", m.init_noise);
    s.finish();
    return m;
}

training::TrainConfig parse_train(const Json &doc) {
    Section s(doc, "train");
    training::TrainConfig t;
    if (s.has("optimizer")) {
        try {
            t.optimizer = training::parse_optimizer(s.get<std::string>("optimizer"));
        } catch (const Error &e) {
            throw ConfigError(std::string("train.optimizer: ") + e.what());
        }
    }
    s.read("learning_rate", t.learning_rate);
    s.read("adam_beta1", t.adam_beta1);
    s.read("adam_beta2", t.adam_beta2);
    s.read("adam_eps", t.adam_eps);
    s.read("epochs", t.epochs);
    s.read("batch_size", t.batch_size);
    if (s.has("target_rescale")) {
        try {
            t.target_rescale = training::parse_target_rescale(s.get<std::string>("target_rescale"));
        } catch (const Error &e) {
            throw ConfigError(std::string("train.target_rescale: ") + e.what());
        }
    }
    s.finish();
    return t;
}

} // namespace

training::ModelSpec ModelConfig::resolve(int n_features) const {
    training::ModelSpec spec;
    if (preset == "custom") {
        if (!family) {
            throw ConfigError("model.family is required when model.preset is 'custom'");
        }
        switch (*family) {
        case training::ModelFamily::linear: spec = training::make_preset("linear", n_features); break;
        case training::ModelFamily::nn:
            if (!hidden_layers) {
                throw ConfigError("model.hidden_layers is required for a custom nn");
            }
            spec = training::make_preset("nn1", n_features);
            break;
        case training::ModelFamily::qcl: spec = training::make_preset("qcl", n_features); break;
        case training::ModelFamily::tn: spec = training::make_preset("tn", n_features); break;
        case training::ModelFamily::random: spec = training::make_preset("random", n_features); break;
        }
        spec.preset = "custom";
    } else {
        spec = training::make_preset(preset, n_features);
        if (family && *family != spec.family) {
            throw ConfigError("model.family '" + training::to_string(*family) + "' contradicts preset '" + preset +
                              "'");
        }
    }
    const std::string fam = training::to_string(spec.family);
    using training::ModelFamily;
    reject_for("fit_intercept", fit_intercept && spec.family != ModelFamily::linear, fam);
    reject_for("hidden_layers", hidden_layers && spec.family != ModelFamily::nn, fam);
    reject_for("depth", depth && spec.family != ModelFamily::qcl, fam);
    reject_for("tau", tau && spec.family != ModelFamily::qcl, fam);
    reject_for("hamiltonian_seed", hamiltonian_seed && spec.family != ModelFamily::qcl, fam);
    reject_for("bond_dim", bond_dim && spec.family != ModelFamily::tn, fam);
    reject_for("init_noise", init_noise && spec.family != ModelFamily::tn, fam);

    if (fit_intercept) {
        spec.fit_intercept = *fit_intercept;
    }
    if (hidden_layers) {
        spec.layer_sizes = {n_features};
        spec.layer_sizes.insert(spec.layer_sizes.end(), hidden_layers->begin(), hidden_layers->end());
        spec.layer_sizes.push_back(1);
    }
    if (depth) {
        spec.depth = *depth;
    }
    if (tau) {
        spec.tau = *tau;
    }
    spec.hamiltonian_seed = hamiltonian_seed;
    if (bond_dim) {
        spec.bond_dim = *bond_dim;
    }
    if (init_noise) {
        spec.init_noise = *init_noise;
    }
    spec.validate(n_features);
    return spec;
}

backtest::BacktestConfig RunConfig::backtest_config() const {
    backtest::BacktestConfig b;
    b.train_months = train_months;
    b.test_months = test_months;
    b.first_month = first_month;
    b.last_month = last_month;
    b.include_partial = include_partial;
    b.threads = threads;
    return b;
}

training::TrainConfig RunConfig::train_config() const {
    training::TrainConfig t = train;
    t.seed = seed;
    return t;
}

data::SyntheticSpec parse_synthetic(const Json &doc) {
    Section s(doc, "synthetic");
    data::SyntheticSpec spec;
    s.read("n_stocks", spec.n_stocks);
    s.read("n_months", spec.n_months);
    s.read("n_features", spec.n_features);
    s.read("seed", spec.seed);
    s.read("linear_weights", spec.linear_weights);
    if (s.has("interactions")) {
        const Json &list = s.raw("interactions");
        if (!list.is_array()) {
            throw ConfigError("synthetic.interactions must be an array");
        }
        for (std::size_t i = 0; i < list.size(); ++i) {
            Section term(list[i], "synthetic.interactions[" + std::to_string(i) + "]");
            data::InteractionTerm t;
            if (!term.has("j") || !term.has("k") || !term.has("coefficient")) {
                throw ConfigError("synthetic.interactions[" + std::to_string(i) + "] needs j, k and coefficient");
            }
            t.j = term.get<int>("j");
            t.k = term.get<int>("k");
            t.coefficient = term.get<double>("coefficient");
            term.finish();
            spec.interactions.push_back(t);
        }
    }
    s.read("noise_sigma", spec.noise_sigma);
    s.read("market_drift", spec.market_drift);
    s.read("market_sigma", spec.market_sigma);
    s.read("delist_probability", spec.delist_probability);
    s.read("start", spec.start);
    s.read("nonlinear", spec.nonlinear);
    s.finish();
    spec.validate();
    return spec;
}

RunConfig parse_run_config(const Json &doc) {
    Section s(doc, "");
    RunConfig c;
    if (s.has("model")) {
        c.model = parse_model(s.raw("model"));
    }
    if (s.has("train")) {
        c.train = parse_train(s.raw("train"));
    }
    s.read("seed", c.seed);
    if (s.has("schedule")) {
        Section sch(s.raw("schedule"), "schedule");
        sch.read("train_months", c.train_months);
        sch.read("test_months", c.test_months);
        sch.read("first_month", c.first_month);
        sch.read("last_month", c.last_month);
        sch.read("include_partial", c.include_partial);
        sch.finish();
    }
    if (s.has("data")) {
        Section d(s.raw("data"), "data");
        if (!d.has("panel") || !d.has("benchmark")) {
            throw ConfigError("data needs both 'panel' and 'benchmark' paths");
        }
        c.paths = DataPaths{d.get<std::string>("panel"), d.get<std::string>("benchmark")};
        d.finish();
    }
    if (s.has("synthetic")) {
        c.synthetic = parse_synthetic(s.raw("synthetic"));
    }
    if (s.has("output_dir")) {
        c.output_dir = s.get<std::string>("output_dir");
    }
    if (s.has("threads")) {
        const int threads = s.get<int>("threads");
        if (threads < 1) {
            throw ConfigError("threads must be at least 1");
        }
        c.threads = static_cast<unsigned>(threads);
    }
    s.finish();

    if (c.paths.has_value() == c.synthetic.has_value()) {
        throw ConfigError("config needs exactly one data source: 'data' (CSV paths) or 'synthetic'");
    }
    if (c.first_month && c.last_month && *c.last_month < *c.first_month) {
        throw ConfigError("schedule.last_month precedes schedule.first_month");
    }
    if (c.train_months < 1) {
        throw ConfigError("schedule.train_months must be at least 1");
    }
    if (c.test_months < 1) {
        throw ConfigError("schedule.test_months must be at least 1");
    }
    if (c.model.preset != "custom") {
        training::make_preset(c.model.preset, 1);
    } else if (!c.model.family) {
        throw ConfigError("model.family is required when model.preset is 'custom'");
    }
    c.train.validate();
    return c;
}

RunConfig load_run_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config '" + path.string() + "'");
    }
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const Json::parse_error &e) {
        throw ConfigError("config '" + path.string() + "' is not valid JSON: " + e.what());
    }
    return parse_run_config(doc);
}

Json to_json(const data::SyntheticSpec &spec) {
    Json interactions = Json::array();
    for (const auto &t : spec.interactions) {
        interactions.push_back(Json{{"j", t.j}, {"k", t.k}, {"coefficient", t.coefficient}});
    }
    return Json{{"n_stocks", spec.n_stocks},
                {"n_months", spec.n_months},
                {"n_features", spec.n_features},
                {"seed", spec.seed},
                {"linear_weights", spec.linear_weights},
                {"interactions", std::move(interactions)},
                {"noise_sigma", spec.noise_sigma},
                {"market_drift", spec.market_drift},
                {"market_sigma", spec.market_sigma},
                {"delist_probability", spec.delist_probability},
                {"start", spec.start.str()},
                {"nonlinear", spec.nonlinear}};
}

Json to_json(const RunConfig &c) {
    Json model{{"preset", c.model.preset}};
    if (c.model.family) {
        model["family"] = training::to_string(*c.model.family);
    }
    if (c.model.fit_intercept) {
        model["fit_intercept"] = *c.model.fit_intercept;
    }
    if (c.model.hidden_layers) {
        model["hidden_layers"] = *c.model.hidden_layers;
    }
    if (c.model.depth) {
        model["depth"] = *c.model.depth;
    }
    if (c.model.tau) {
        model["tau"] = *c.model.tau;
    }
    if (c.model.hamiltonian_seed) {
        model["hamiltonian_seed"] = *c.model.hamiltonian_seed;
    }
    if (c.model.bond_dim) {
        model["bond_dim"] = *c.model.bond_dim;
    }
    if (c.model.init_noise) {
        model["init_noise"] = *c.model.init_noise;
    }
    Json schedule{{"train_months", c.train_months},
                  {"test_months", c.test_months},
                  {"first_month", c.first_month ? Json(c.first_month->str()) : Json(nullptr)},
                  {"last_month", c.last_month ? Json(c.last_month->str()) : Json(nullptr)},
                  {"include_partial", c.include_partial}};
    Json doc{{"model", std::move(model)},
             {"train",
              {{"optimizer", training::to_string(c.train.optimizer)},
               {"learning_rate", c.train.learning_rate},
               {"adam_beta1", c.train.adam_beta1},
               {"adam_beta2", c.train.adam_beta2},
               {"adam_eps", c.train.adam_eps},
               {"epochs", c.train.epochs},
               {"batch_size", c.train.batch_size},
               {"target_rescale", training::to_string(c.train.target_rescale)}}},
             {"seed", c.seed},
             {"schedule", std::move(schedule)}};
    if (c.paths) {
        doc["data"] = Json{{"panel", c.paths->panel.string()}, {"benchmark", c.paths->benchmark.string()}};
    }
    if (c.synthetic) {
        doc["synthetic"] = to_json(*c.synthetic);
    }
    doc["output_dir"] = c.output_dir.string();
    doc["threads"] = c.threads;
    return doc;
}

} // namespace crossq::app
