#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "crossq/backtest/metrics.hpp"
#include "crossq/backtest/schedule.hpp"
#include "crossq/data/panel.hpp"
#include "crossq/models/predictor.hpp"
#include "crossq/training/trainer.hpp"

namespace crossq::backtest {

struct BacktestConfig {
    int train_months = 36;
    int test_months = 12;
    /// Defaults: the panel's first month and the last month with a realized
    /// forward return.
    std::optional<YearMonth> first_month;
    std::optional<YearMonth> last_month;
    /// Count a trailing partial fold in the headline metrics.
    bool include_partial = false;
    unsigned threads = 1;
};

struct MonthlyRecord {
    YearMonth date;
    int fold = 0;
    std::vector<std::string> holdings;
    double portfolio_return = 0.0;
    double benchmark_return = 0.0;
    /// portfolio_return - benchmark_return
    double alpha = 0.0;
};

struct FoldResult {
    Fold fold;
    std::size_t train_rows = 0;
    std::vector<double> loss_trace;
    Json fitted;
    std::vector<MonthlyRecord> records;
    /// Test months without a usable cross-section or holdings.
    std::vector<YearMonth> skipped;
};

struct BacktestReport {
    FoldSchedule schedule;
    std::vector<FoldResult> folds;
    /// Records of the folds that enter the headline metrics, in date order.
    std::vector<MonthlyRecord> records;
    Metrics metrics;
    int n_features = 0;
    std::size_t parameter_count = 0;
};

/// Walk-forward evaluation. Errors raised inside a fold keep their type and
/// gain a prefix naming the fold.
BacktestReport run_backtest(const data::PanelData &panel, const data::BenchmarkSeries &benchmark,
                            const training::ModelSpec &model, const training::TrainConfig &train,
                            const BacktestConfig &config);

/// Last month whose cross-section holds at least one realized forward return.
std::optional<YearMonth> last_realized_month(const data::PanelData &panel);

} // namespace crossq::backtest
