#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "crossq/backtest/metrics.hpp"
#include "crossq/backtest/portfolio.hpp"
#include "crossq/backtest/report.hpp"
#include "crossq/backtest/runner.hpp"
#include "crossq/backtest/schedule.hpp"
#include "crossq/data/synthetic.hpp"
#include "crossq/error.hpp"

using namespace crossq;
using namespace crossq::backtest;

namespace {

data::SyntheticMarket market(std::uint64_t seed, int months = 60) {
    data::SyntheticSpec spec;
    spec.n_stocks = 40;
    spec.n_months = months;
    spec.n_features = 3;
    spec.seed = seed;
    spec.linear_weights = {0.01, -0.005, 0.0};
    return data::generate_synthetic(spec);
}

BacktestConfig short_windows() {
    BacktestConfig cfg;
    cfg.train_months = 24;
    cfg.test_months = 12;
    return cfg;
}

training::TrainConfig quick_training() {
    training::TrainConfig cfg;
    cfg.epochs = 3;
    cfg.seed = 11;
    return cfg;
}

} // namespace

TEST_CASE("default schedule over the reference span") {
    const FoldSchedule s = build_schedule(YearMonth(2008, 6), YearMonth(2021, 5));
    REQUIRE(s.folds.size() == 10);
    CHECK(s.full_folds() == 10);
    const Fold &f = s.folds.front();
    CHECK(f.train_start == YearMonth(2008, 6));
    CHECK(f.train_end == YearMonth(2011, 5));
    CHECK(f.test_start == YearMonth(2011, 6));
    CHECK(f.test_end == YearMonth(2012, 5));
    CHECK(s.folds.back().test_end == YearMonth(2021, 5));
    int months = 0;
    for (std::size_t k = 0; k < s.folds.size(); ++k) {
        const Fold &g = s.folds[k];
        CHECK(g.index == static_cast<int>(k));
        CHECK(g.train_length() == 36);
        CHECK(g.train_end + 1 == g.test_start);
        if (k > 0) {
            CHECK(s.folds[k - 1].test_end + 1 == g.test_start);
        }
        months += g.test_length();
    }
    CHECK(months == 120);
}

TEST_CASE("short spans and partial folds") {
    const FoldSchedule one = build_schedule(YearMonth(2010, 1), YearMonth(2013, 12));
    CHECK(one.folds.size() == 1);
    const FoldSchedule partial = build_schedule(YearMonth(2010, 1), YearMonth(2014, 2));
    REQUIRE(partial.folds.size() == 2);
    CHECK(partial.full_folds() == 1);
    CHECK(partial.folds[1].partial);
    CHECK(partial.folds[1].test_length() == 2);
    CHECK_THROWS_AS(build_schedule(YearMonth(2010, 1), YearMonth(2013, 10)), ConfigError);
    CHECK_THROWS_AS(build_schedule(YearMonth(2010, 1), YearMonth(2020, 1), 0, 12), ConfigError);
}

TEST_CASE("top quintile selection") {
    std::vector<std::string> ids;
    std::vector<double> scores;
    for (int i = 0; i < 500; ++i) {
        ids.push_back("S" + std::to_string(1000 + i));
        scores.push_back(std::sin(i * 1.3));
    }
    const auto top = select_top_quintile(ids, scores);
    CHECK(top.size() == 100);
    double cutoff = 1e9;
    for (const auto &id : top) {
        const auto i = static_cast<std::size_t>(std::stoi(id.substr(1)) - 1000);
        cutoff = std::min(cutoff, scores[i]);
    }
    int above = 0;
    for (double s : scores) {
        above += s >= cutoff ? 1 : 0;
    }
    CHECK(above == 100);

    std::vector<double> squashed(scores.size());
    std::transform(scores.begin(), scores.end(), squashed.begin(), [](double s) { return std::atan(5 * s) - 3; });
    CHECK(select_top_quintile(ids, squashed) == top);

    const std::vector<std::string> seven{"g", "f", "e", "d", "c", "b", "a"};
    CHECK(select_top_quintile(seven, std::vector<double>{1, 2, 3, 4, 5, 6, 7}) == std::vector<std::string>{"a"});
    CHECK(select_top_quintile(seven, std::vector<double>(7, 0.2)) == std::vector<std::string>{"a"});
    const std::vector<std::string> ten{"j", "i", "h", "g", "f", "e", "d", "c", "b", "a"};
    CHECK(select_top_quintile(ten, std::vector<double>(10, 1.0)) == std::vector<std::string>{"a", "b"});
    CHECK(select_top_quintile(std::vector<std::string>{"a", "b", "c", "d"}, std::vector<double>{1, 2, 3, 4}).empty());
    CHECK_THROWS_AS(select_top_quintile(seven, std::vector<double>{1, 2}), UsageError);
    std::vector<double> bad(7, 0.0);
    bad[3] = std::nan("");
    CHECK_THROWS_AS(select_top_quintile(seven, bad), NumericalError);
}

TEST_CASE("portfolio return") {
    CHECK(portfolio_return(std::vector<double>{0.02, 0.04}) == doctest::Approx(0.03));
    CHECK(portfolio_return(std::vector<double>{-0.1}) == doctest::Approx(-0.1));
    CHECK_THROWS_AS(portfolio_return(std::vector<double>{}), UsageError);
}

TEST_CASE("metric fixtures") {
    const Metrics flat = compute_metrics(std::vector<double>(12, 0.01));
    CHECK(flat.months == 12);
    CHECK(flat.er == doctest::Approx(0.12682503013196977).epsilon(1e-12));
    REQUIRE(flat.te.has_value());
    CHECK(*flat.te < kZeroTrackingError);
    CHECK_FALSE(flat.ir.has_value());

    const Metrics pair = compute_metrics(std::vector<double>{0.01, -0.01});
    CHECK(pair.er == doctest::Approx(-0.0005998500199984047).epsilon(1e-10));
    CHECK(*pair.te == doctest::Approx(0.048989794855663564).epsilon(1e-12));
    CHECK(*pair.ir == doctest::Approx(-0.0005998500199984047 / 0.048989794855663564).epsilon(1e-10));

    const Metrics single = compute_metrics(std::vector<double>{0.02});
    CHECK_FALSE(single.te.has_value());
    CHECK_FALSE(single.ir.has_value());
    CHECK(single.er == doctest::Approx(std::pow(1.02, 12.0) - 1.0));

    CHECK_THROWS_AS(compute_metrics(std::vector<double>{}), UsageError);
    CHECK_THROWS_AS(compute_metrics(std::vector<double>{0.1, -1.0}), NumericalError);
}

TEST_CASE("backtest records satisfy the alpha identity") {
    const auto m = market(3);
    const auto report = run_backtest(m.panel, m.benchmark, training::make_preset("linear", 3), quick_training(),
                                     short_windows());
    REQUIRE(report.folds.size() == 3);
    CHECK(report.schedule.folds.front().test_start == YearMonth(2010, 6));
    CHECK(report.records.size() == 36);
    CHECK(report.metrics.months == 36);
    CHECK(report.parameter_count == 4);
    std::vector<double> alphas;
    for (const auto &r : report.records) {
        CHECK(r.alpha == doctest::Approx(r.portfolio_return - r.benchmark_return).epsilon(1e-15));
        CHECK(r.benchmark_return == m.benchmark.at(r.date).value());
        CHECK(r.holdings.size() == 8);
        const auto *cs = m.panel.find(r.date);
        double sum = 0;
        for (const auto &id : r.holdings) {
            sum += cs->find(id)->forward_return;
        }
        CHECK(r.portfolio_return == doctest::Approx(sum / 8.0));
        alphas.push_back(r.alpha);
    }
    const Metrics again = compute_metrics(alphas);
    CHECK(again.er == report.metrics.er);
    CHECK(*report.metrics.ir > 0.5); // planted linear signal
}

TEST_CASE("partial folds stay out of the headline unless requested") {
    const auto m = market(4, 62);
    auto cfg = short_windows();
    const auto base = run_backtest(m.panel, m.benchmark, training::make_preset("linear", 3), quick_training(), cfg);
    REQUIRE(base.folds.size() == 4);
    CHECK(base.folds.back().fold.partial);
    CHECK(base.folds.back().records.size() == 2);
    CHECK(base.records.size() == 36);
    cfg.include_partial = true;
    const auto all = run_backtest(m.panel, m.benchmark, training::make_preset("linear", 3), quick_training(), cfg);
    CHECK(all.records.size() == 38);
}

TEST_CASE("report is byte-identical across runs and thread counts") {
    const auto m = market(5, 48);
    const auto spec = training::make_preset("nn1", 3);
    auto cfg = short_windows();
    const Json echo{{"note", "x"}};
    const auto a = report_json(run_backtest(m.panel, m.benchmark, spec, quick_training(), cfg), echo, "nn1").dump();
    const auto b = report_json(run_backtest(m.panel, m.benchmark, spec, quick_training(), cfg), echo, "nn1").dump();
    cfg.threads = 2;
    const auto c = report_json(run_backtest(m.panel, m.benchmark, spec, quick_training(), cfg), echo, "nn1").dump();
    CHECK(a == b);
    CHECK(a == c);
}

TEST_CASE("data beyond the evaluation window cannot move the result") {
    const auto m = market(6, 70);
    auto cfg = short_windows();
    cfg.last_month = YearMonth(2012, 5);
    const auto spec = training::make_preset("nn1", 3);
    const auto clean = run_backtest(m.panel, m.benchmark, spec, quick_training(), cfg);

    data::PanelData poisoned = m.panel;
    data::BenchmarkSeries bench = m.benchmark;
    for (auto &cs : poisoned.sections) {
        if (cs.date > YearMonth(2012, 6)) {
            for (auto &o : cs.rows) {
                o.price *= 3.0;
                o.features[0] = -o.features[0];
            }
        }
    }
    for (auto &[date, r] : bench.returns) {
        if (date > YearMonth(2012, 5)) {
            r = 0.5;
        }
    }
    poisoned = data::compute_forward_returns(poisoned);
    const auto dirty = run_backtest(poisoned, bench, spec, quick_training(), cfg);
    CHECK(report_json(clean, Json::object(), "nn1").dump() == report_json(dirty, Json::object(), "nn1").dump());
}

TEST_CASE("fold parameters ignore data from the test window onward") {
    const auto m = market(7, 60);
    const auto spec = training::make_preset("nn1", 3);
    const auto clean = run_backtest(m.panel, m.benchmark, spec, quick_training(), short_windows());
    const Fold &f = clean.folds[1].fold;

    data::PanelData poisoned = m.panel;
    for (auto &cs : poisoned.sections) {
        for (auto &o : cs.rows) {
            if (cs.date > f.test_start) {
                o.price *= 1.0 + 0.1 * o.features[1];
            }
            if (cs.date >= f.test_start) {
                o.features[2] = 0.5 - o.features[2];
            }
        }
    }
    poisoned = data::compute_forward_returns(poisoned);
    const auto dirty = run_backtest(poisoned, data::equal_weight_benchmark(poisoned), spec, quick_training(),
                                    short_windows());
    for (std::size_t k = 0; k <= 1; ++k) {
        CHECK(clean.folds[k].fitted == dirty.folds[k].fitted);
        CHECK(clean.folds[k].loss_trace == dirty.folds[k].loss_trace);
    }
    CHECK(clean.folds[2].fitted != dirty.folds[2].fitted);
}

TEST_CASE("fold errors keep their type and name the fold") {
    const auto m = market(8, 48);
    data::BenchmarkSeries bench = m.benchmark;
    bench.returns.erase(YearMonth(2010, 9));
    try {
        run_backtest(m.panel, bench, training::make_preset("linear", 3), quick_training(), short_windows());
        FAIL("expected a data error");
    } catch (const DataError &e) {
        const std::string what = e.what();
        CHECK(what.find("fold 0") != std::string::npos);
        CHECK(what.find("2010-09") != std::string::npos);
    }
}

TEST_CASE("report files") {
    const auto m = market(9, 48);
    const auto report =
        run_backtest(m.panel, m.benchmark, training::make_preset("linear", 3), quick_training(), short_windows());
    std::stringstream monthly;
    write_monthly_csv(report, monthly);
    std::string line;
    std::getline(monthly, line);
    CHECK(line == "date,portfolio_return,benchmark_return,alpha");
    std::getline(monthly, line);
    CHECK(line.rfind("2010-06,", 0) == 0);

    std::stringstream cumulative;
    write_cumulative_csv(report, cumulative);
    std::getline(cumulative, line);
    CHECK(line == "date,cum_portfolio,cum_benchmark,cum_excess");
    std::string last;
    while (std::getline(cumulative, line)) {
        last = line;
    }
    double growth = 1.0;
    for (const auto &r : report.records) {
        growth *= 1.0 + r.portfolio_return;
    }
    const auto comma = last.find(',');
    CHECK(std::stod(last.substr(comma + 1, last.find(',', comma + 1) - comma - 1)) ==
          doctest::Approx(growth - 1.0).epsilon(1e-12));

    const Json doc = report_json(report, Json::object(), "linear");
    CHECK(doc["schema_version"] == kReportSchemaVersion);
    CHECK(doc["records"].size() == 24);
    CHECK(doc["model"]["parameter_count"] == 4);
    CHECK(doc["model"]["reference_parameter_count"].is_null());
    CHECK_FALSE(doc["model"].contains("parameter_count_note"));

    const std::string table = metrics_table(compute_metrics(std::vector<double>{0.02}), "x");
    CHECK(table.find("n/a") != std::string::npos);
}
