#include "crossq/app/commands.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "crossq/app/gradcheck.hpp"
#include "crossq/backtest/report.hpp"
#include "crossq/backtest/runner.hpp"
#include "crossq/data/csv.hpp"
#include "crossq/data/dataset.hpp"
#include "crossq/error.hpp"

namespace crossq::app {

namespace fs = std::filesystem;

namespace {

void ensure_writable(const std::vector<fs::path> &paths, bool force) {
    for (const fs::path &p : paths) {
        if (!force && fs::exists(p)) {
            throw UsageError("'" + p.string() + "' already exists; pass --force to overwrite");
        }
    }
}

void make_dir(const fs::path &dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw DataError("cannot create output directory '" + dir.string() + "': " + ec.message());
    }
}

} // namespace

std::string train_file(int fold) { return "train_fold_" + std::to_string(fold) + ".json"; }

void write_atomic(const fs::path &path, const std::string &content, bool force) {
    if (!force && fs::exists(path)) {
        throw UsageError("'" + path.string() + "' already exists; pass --force to overwrite");
    }
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) {
            throw DataError("cannot write '" + tmp.string() + "'");
        }
        f << content;
        f.flush();
        if (!f) {
            throw DataError("write to '" + tmp.string() + "' failed");
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw DataError("cannot move '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
    }
}

data::SyntheticMarket load_market(const RunConfig &config) {
    if (config.synthetic) {
        return data::generate_synthetic(*config.synthetic);
    }
    return {data::load_panel_csv(config.paths->panel), data::load_benchmark_csv(config.paths->benchmark)};
}

Json result_echo(const RunConfig &config) {
    Json echo = to_json(config);
    echo.erase("output_dir");
    echo.erase("threads");
    return echo;
}

void cmd_synth(const RunConfig &config, const fs::path &out_dir, bool force, std::ostream &out) {
    if (!config.synthetic) {
        throw ConfigError("synth needs a 'synthetic' section, not CSV data paths");
    }
    const fs::path panel_path = out_dir / kPanelFile;
    const fs::path bench_path = out_dir / kBenchmarkFile;
    ensure_writable({panel_path, bench_path}, force);
    const data::SyntheticMarket market = data::generate_synthetic(*config.synthetic);
    std::ostringstream panel_text;
    data::write_panel_csv(market.panel, panel_text);
    std::ostringstream bench_text;
    data::write_benchmark_csv(market.benchmark, bench_text);
    make_dir(out_dir);
    write_atomic(panel_path, panel_text.str(), force);
    write_atomic(bench_path, bench_text.str(), force);
    out << "wrote " << panel_path.string() << " (" << market.panel.sections.size() << " months) and "
        << bench_path.string() << '\n';
}

void cmd_backtest(const RunConfig &config, const fs::path &out_dir, bool force, std::ostream &out) {
    const fs::path report_path = out_dir / kReportFile;
    const fs::path monthly_path = out_dir / kMonthlyFile;
    const fs::path cumulative_path = out_dir / kCumulativeFile;
    ensure_writable({report_path, monthly_path, cumulative_path}, force);

    const data::SyntheticMarket market = load_market(config);
    const training::ModelSpec spec = config.model.resolve(static_cast<int>(market.panel.n_features()));
    const backtest::BacktestReport report =
        backtest::run_backtest(market.panel, market.benchmark, spec, config.train_config(), config.backtest_config());

    std::ostringstream monthly;
    backtest::write_monthly_csv(report, monthly);
    std::ostringstream cumulative;
    backtest::write_cumulative_csv(report, cumulative);
    make_dir(out_dir);
    write_atomic(report_path, backtest::report_json(report, result_echo(config), spec.preset).dump(2) + "\n", force);
    write_atomic(monthly_path, monthly.str(), force);
    write_atomic(cumulative_path, cumulative.str(), force);

    out << backtest::metrics_table(report.metrics, spec.preset);
    out << "parameters: " << report.parameter_count << ", folds: " << report.schedule.folds.size() << '\n';
}

void cmd_train(const RunConfig &config, int fold, const fs::path &out_dir, bool force, std::ostream &out) {
    const fs::path path = out_dir / train_file(fold);
    ensure_writable({path}, force);

    const data::SyntheticMarket market = load_market(config);
    const int n_features = static_cast<int>(market.panel.n_features());
    const training::ModelSpec spec = config.model.resolve(n_features);
    const auto first = config.first_month ? config.first_month : market.panel.first_date();
    const auto last = config.last_month ? config.last_month : backtest::last_realized_month(market.panel);
    if (!first || !last) {
        throw DataError("panel holds no realized forward returns");
    }
    const backtest::FoldSchedule schedule =
        backtest::build_schedule(*first, *last, config.train_months, config.test_months);
    if (fold < 0 || static_cast<std::size_t>(fold) >= schedule.folds.size()) {
        throw UsageError("fold " + std::to_string(fold) + " is out of range; the schedule has " +
                         std::to_string(schedule.folds.size()) + " folds");
    }
    const backtest::Fold &f = schedule.folds[static_cast<std::size_t>(fold)];
    const data::RankedWindow window = data::ranked_training_window(market.panel, f.train_start, f.train_end);
    if (window.x.rows() == 0) {
        throw DataError("training window " + f.train_start.str() + ".." + f.train_end.str() + " has no complete rows");
    }
    const training::TrainedPredictor trained =
        training::fit(spec, window.x, window.y, config.train_config(), config.threads);

    const Json doc{{"schema_version", backtest::kReportSchemaVersion},
                   {"config", result_echo(config)},
                   {"fold",
                    {{"index", f.index},
                     {"train_start", f.train_start.str()},
                     {"train_end", f.train_end.str()},
                     {"partial", f.partial}}},
                   {"train_rows", window.x.rows()},
                   {"parameter_count", trained.model->parameter_count()},
                   {"loss_trace", trained.loss_trace},
                   {"fitted", trained.model->to_json()}};
    make_dir(out_dir);
    write_atomic(path, doc.dump(2) + "\n", force);
    out << "fold " << f.index << " (" << f.train_start.str() << ".." << f.train_end.str() << "), "
        << window.x.rows() << " rows\n";
    for (std::size_t e = 0; e < trained.loss_trace.size(); ++e) {
        out << "epoch " << (e + 1) << "  loss " << data::format_double(trained.loss_trace[e]) << '\n';
    }
}

bool cmd_gradcheck(const std::string &model, const std::vector<int> &sizes, int fixtures, std::uint64_t seed,
                   std::ostream &out) {
    GradcheckResult result;
    if (model == "qcl") {
        const std::vector<int> s = sizes.empty() ? std::vector<int>{4, 2} : sizes;
        if (s.size() != 2) {
            throw UsageError("qcl sizes are 'n_qubits,depth'");
        }
        result = gradcheck_qcl(s[0], s[1], fixtures, seed);
    } else if (model == "tn") {
        const std::vector<int> s = sizes.empty() ? std::vector<int>{5, 2} : sizes;
        if (s.size() != 2) {
            throw UsageError("tn sizes are 'n_sites,bond_dim'");
        }
        result = gradcheck_mps(s[0], s[1], fixtures, seed);
    } else if (model == "nn") {
        result = gradcheck_nn(sizes.empty() ? std::vector<int>{6, 4, 1} : sizes, fixtures, seed);
    } else {
        throw UsageError("gradcheck model must be qcl, tn or nn, got '" + model + "'");
    }
    out << result.summary() << '\n';
    return result.passed();
}

} // namespace crossq::app
