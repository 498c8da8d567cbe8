#include "crossq/backtest/schedule.hpp"

#include <algorithm>

#include "crossq/error.hpp"

namespace crossq::backtest {

std::size_t FoldSchedule::full_folds() const {
    return static_cast<std::size_t>(
        std::count_if(folds.begin(), folds.end(), [](const Fold &f) { return !f.partial; }));
}

FoldSchedule build_schedule(YearMonth first, YearMonth last, int train_months, int test_months) {
    if (train_months < 1) {
        throw ConfigError("train_months must be at least 1, got " + std::to_string(train_months));
    }
    if (test_months < 1) {
        throw ConfigError("test_months must be at least 1, got " + std::to_string(test_months));
    }
    const int span = last - first + 1;
    if (span < train_months + test_months) {
        throw ConfigError("schedule span " + first.str() + ".." + last.str() + " holds " + std::to_string(span) +
                          " months; need at least train_months + test_months = " +
                          std::to_string(train_months + test_months));
    }
    FoldSchedule schedule;
    schedule.train_months = train_months;
    schedule.test_months = test_months;
    for (YearMonth start = first + train_months; start <= last; start = start + test_months) {
        Fold f;
        f.index = static_cast<int>(schedule.folds.size());
        f.train_start = start - train_months;
        f.train_end = start - 1;
        f.test_start = start;
        f.test_end = std::min(start + (test_months - 1), last);
        f.partial = f.test_length() < test_months;
        schedule.folds.push_back(f);
    }
    return schedule;
}

} // namespace crossq::backtest
