#pragma once

#include <iosfwd>
#include <string>

#include "crossq/backtest/runner.hpp"

namespace crossq::backtest {

inline constexpr int kReportSchemaVersion = 1;

/// Report document: schema version, the caller's config echo, parameter
/// counts, headline metrics, per-fold summaries and monthly records.
Json report_json(const BacktestReport &report, const Json &config_echo, const std::string &preset);

/// `date,portfolio_return,benchmark_return,alpha`
void write_monthly_csv(const BacktestReport &report, std::ostream &out);

/// `date,cum_portfolio,cum_benchmark,cum_excess`: compounded growth of one
/// unit minus one; cum_excess compounds alpha.
void write_cumulative_csv(const BacktestReport &report, std::ostream &out);

/// Fixed-width ER % / TE % / IR table.
std::string metrics_table(const Metrics &metrics, const std::string &label);

} // namespace crossq::backtest
