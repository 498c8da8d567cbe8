#pragma once

#include <vector>

#include "crossq/util/year_month.hpp"

namespace crossq::backtest {

/// One walk-forward step. Dates are formation months: the test month t earns
/// the return from t to t+1.
struct Fold {
    int index = 0;
    YearMonth train_start;
    YearMonth train_end;
    YearMonth test_start;
    YearMonth test_end;
    /// Trailing window shorter than the configured test length.
    bool partial = false;

    int train_length() const { return train_end - train_start + 1; }
    int test_length() const { return test_end - test_start + 1; }
    bool operator==(const Fold &) const = default;
};

struct FoldSchedule {
    int train_months = 36;
    int test_months = 12;
    std::vector<Fold> folds;

    std::size_t full_folds() const;
};

/// Tiles [first + train_months, last] with consecutive test windows, each
/// trained on the train_months immediately before it. ConfigError when the
/// span holds fewer than train_months + test_months months.
FoldSchedule build_schedule(YearMonth first, YearMonth last, int train_months = 36, int test_months = 12);

} // namespace crossq::backtest
