#include "crossq/backtest/runner.hpp"

#include <exception>

#include "crossq/backtest/portfolio.hpp"
#include "crossq/data/dataset.hpp"
#include "crossq/error.hpp"
#include "crossq/util/log.hpp"
#include "crossq/util/parallel.hpp"

namespace crossq::backtest {

namespace {

std::string fold_label(const Fold &f) {
    return "fold " + std::to_string(f.index) + " (train " + f.train_start.str() + ".." + f.train_end.str() +
           ", test " + f.test_start.str() + ".." + f.test_end.str() + "): ";
}

[[noreturn]] void rethrow_with_fold(const Fold &f) {
    const std::string prefix = fold_label(f);
    try {
        throw;
    } catch (const ConfigError &e) {
        throw ConfigError(prefix + e.what());
    } catch (const UsageError &e) {
        throw UsageError(prefix + e.what());
    } catch (const DataError &e) {
        throw DataError(prefix + e.what());
    } catch (const NumericalError &e) {
        throw NumericalError(prefix + e.what());
    } catch (const Error &e) {
        throw Error(prefix + e.what());
    }
}

FoldResult run_fold(const data::PanelData &panel, const data::BenchmarkSeries &benchmark,
                    const training::ModelSpec &model, const training::TrainConfig &train, const Fold &fold,
                    unsigned threads) {
    FoldResult result;
    result.fold = fold;

    const data::RankedWindow window = data::ranked_training_window(panel, fold.train_start, fold.train_end);
    if (window.x.rows() == 0) {
        throw DataError("training window has no complete rows");
    }
    result.train_rows = static_cast<std::size_t>(window.x.rows());
    training::TrainedPredictor trained = training::fit(model, window.x, window.y, train, threads);
    result.loss_trace = std::move(trained.loss_trace);
    result.fitted = trained.model->to_json();

    for (YearMonth t = fold.test_start; t <= fold.test_end; t = t + 1) {
        const auto month = data::ranked_month(panel, t);
        if (!month) {
            result.skipped.push_back(t);
            continue;
        }
        const std::vector<double> scores = trained.model->score(month->x, t);
        std::vector<std::string> holdings = select_top_quintile(month->stock_ids, scores);
        if (holdings.empty()) {
            result.skipped.push_back(t);
            continue;
        }
        const auto bench = benchmark.at(t);
        if (!bench) {
            throw DataError("benchmark has no return for " + t.str());
        }
        std::vector<double> returns;
        returns.reserve(holdings.size());
        for (const std::string &id : holdings) {
            const data::Observation *o = panel.find(t)->find(id);
            double r = o->forward_return;
            if (data::is_missing(r)) {
                log::info("holding " + id + " has no price after " + t.str() + "; exits with zero return");
                r = 0.0;
            }
            returns.push_back(r);
        }
        MonthlyRecord rec;
        rec.date = t;
        rec.fold = fold.index;
        rec.holdings = std::move(holdings);
        rec.portfolio_return = portfolio_return(returns);
        rec.benchmark_return = *bench;
        rec.alpha = rec.portfolio_return - rec.benchmark_return;
        result.records.push_back(std::move(rec));
    }
    return result;
}

} // namespace

std::optional<YearMonth> last_realized_month(const data::PanelData &panel) {
    for (auto it = panel.sections.rbegin(); it != panel.sections.rend(); ++it) {
        for (const data::Observation &o : it->rows) {
            if (!data::is_missing(o.forward_return)) {
                return it->date;
            }
        }
    }
    return std::nullopt;
}

BacktestReport run_backtest(const data::PanelData &panel, const data::BenchmarkSeries &benchmark,
                            const training::ModelSpec &model, const training::TrainConfig &train,
                            const BacktestConfig &config) {
    const int n_features = static_cast<int>(panel.n_features());
    model.validate(n_features);
    train.validate();

    const auto first = config.first_month ? config.first_month : panel.first_date();
    const auto last = config.last_month ? config.last_month : last_realized_month(panel);
    if (!first || !last) {
        throw DataError("panel holds no realized forward returns");
    }

    BacktestReport report;
    report.schedule = build_schedule(*first, *last, config.train_months, config.test_months);
    report.n_features = n_features;
    report.parameter_count = training::parameter_count(model, n_features);

    const auto &folds = report.schedule.folds;
    const unsigned threads = std::max(1u, config.threads);
    const unsigned outer = static_cast<unsigned>(std::min<std::size_t>(threads, folds.size()));
    const unsigned inner = std::max(1u, threads / std::max(1u, outer));
    std::vector<FoldResult> results(folds.size());
    parallel_for(folds.size(), outer, [&](std::size_t k) {
        try {
            results[k] = run_fold(panel, benchmark, model, train, folds[k], inner);
        } catch (const Error &) {
            rethrow_with_fold(folds[k]);
        }
    });
    report.folds = std::move(results);

    std::vector<double> alphas;
    for (const FoldResult &f : report.folds) {
        if (f.fold.partial && !config.include_partial) {
            continue;
        }
        for (const MonthlyRecord &r : f.records) {
            report.records.push_back(r);
            alphas.push_back(r.alpha);
        }
    }
    if (alphas.empty()) {
        throw DataError("no test month produced a portfolio");
    }
    report.metrics = compute_metrics(alphas);
    return report;
}

} // namespace crossq::backtest
