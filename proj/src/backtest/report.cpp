#include "crossq/backtest/report.hpp"

#include <cstdio>
#include <ostream>

#include "crossq/data/csv.hpp"

namespace crossq::backtest {

namespace {

Json optional_number(const std::optional<double> &v) {
    return v ? Json(*v) : Json(nullptr);
}

/// Why a preset's count differs from the figure quoted for the ten-feature
/// reference configuration.
std::string count_note(const std::string &preset) {
    if (preset == "tn") {
        return "boundary sites hold 1 x m and m x 1 matrices per physical index, giving "
               "4m + (n-2)*2m^2 = 72 for n=10, m=2; the quoted 76 does not match this layout";
    }
    if (preset == "nn1") {
        return "dense layers with one bias per unit: (10+1)*7 + (7+1)*1 = 85; the quoted 92 does not match";
    }
    if (preset == "nn2") {
        return "dense layers with one bias per unit: (10+1)*5 + (5+1)*4 + (4+1)*1 = 84; the quoted 93 does "
               "not match";
    }
    return "";
}

Json fold_json(const FoldResult &f) {
    Json skipped = Json::array();
    for (YearMonth m : f.skipped) {
        skipped.push_back(m.str());
    }
    return Json{{"index", f.fold.index},
                {"train_start", f.fold.train_start.str()},
                {"train_end", f.fold.train_end.str()},
                {"test_start", f.fold.test_start.str()},
                {"test_end", f.fold.test_end.str()},
                {"partial", f.fold.partial},
                {"train_rows", f.train_rows},
                {"test_records", f.records.size()},
                {"skipped_months", std::move(skipped)},
                {"loss_trace", f.loss_trace},
                {"fitted", f.fitted}};
}

} // namespace

Json report_json(const BacktestReport &report, const Json &config_echo, const std::string &preset) {
    Json model{{"preset", preset}, {"n_features", report.n_features}, {"parameter_count", report.parameter_count}};
    const auto reference = report.n_features == 10 ? training::reference_parameter_count(preset) : std::nullopt;
    model["reference_parameter_count"] = reference ? Json(*reference) : Json(nullptr);
    if (reference && *reference != report.parameter_count) {
        model["parameter_count_note"] = count_note(preset);
    }

    Json folds = Json::array();
    for (const FoldResult &f : report.folds) {
        folds.push_back(fold_json(f));
    }
    Json records = Json::array();
    for (const MonthlyRecord &r : report.records) {
        records.push_back(Json{{"date", r.date.str()},
                               {"fold", r.fold},
                               {"portfolio_return", r.portfolio_return},
                               {"benchmark_return", r.benchmark_return},
                               {"alpha", r.alpha},
                               {"holdings", r.holdings}});
    }
    return Json{{"schema_version", kReportSchemaVersion},
                {"config", config_echo},
                {"model", std::move(model)},
                {"schedule",
                 {{"train_months", report.schedule.train_months},
                  {"test_months", report.schedule.test_months},
                  {"folds", report.schedule.folds.size()},
                  {"full_folds", report.schedule.full_folds()}}},
                {"metrics",
                 {{"months", report.metrics.months},
                  {"er", report.metrics.er},
                  {"te", optional_number(report.metrics.te)},
                  {"ir", optional_number(report.metrics.ir)}}},
                {"folds", std::move(folds)},
                {"records", std::move(records)}};
}

void write_monthly_csv(const BacktestReport &report, std::ostream &out) {
    out << "date,portfolio_return,benchmark_return,alpha\n";
    for (const MonthlyRecord &r : report.records) {
        out << r.date.str() << ',' << data::format_double(r.portfolio_return) << ','
            << data::format_double(r.benchmark_return) << ',' << data::format_double(r.alpha) << '\n';
    }
}

void write_cumulative_csv(const BacktestReport &report, std::ostream &out) {
    out << "date,cum_portfolio,cum_benchmark,cum_excess\n";
    double port = 1.0;
    double bench = 1.0;
    double excess = 1.0;
    for (const MonthlyRecord &r : report.records) {
        port *= 1.0 + r.portfolio_return;
        bench *= 1.0 + r.benchmark_return;
        excess *= 1.0 + r.alpha;
        out << r.date.str() << ',' << data::format_double(port - 1.0) << ',' << data::format_double(bench - 1.0)
            << ',' << data::format_double(excess - 1.0) << '\n';
    }
}

std::string metrics_table(const Metrics &metrics, const std::string &label) {
    auto cell = [](const std::optional<double> &v, double scale) {
        char buf[32];
        if (v) {
            std::snprintf(buf, sizeof(buf), "%8.2f", *v * scale);
        } else {
            std::snprintf(buf, sizeof(buf), "%8s", "n/a");
        }
        return std::string(buf);
    };
    char head[96];
    std::snprintf(head, sizeof(head), "%-10s %8s %8s %8s %7s\n", "model", "ER %", "TE %", "IR", "months");
    char row[128];
    std::snprintf(row, sizeof(row), "%-10s %s %s %s %7zu\n", label.c_str(), cell(metrics.er, 100.0).c_str(),
                  cell(metrics.te, 100.0).c_str(), cell(metrics.ir, 1.0).c_str(), metrics.months);
    return std::string(head) + row;
}

} // namespace crossq::backtest
