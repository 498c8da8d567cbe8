#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace crossq {

/// Calendar month identifier (the panel's time step).
class YearMonth {
  public:
    constexpr YearMonth() = default;
    constexpr YearMonth(int year, int month) : ordinal_(year * 12 + (month - 1)) {}

    static constexpr YearMonth from_ordinal(int ordinal) {
        YearMonth ym;
        ym.ordinal_ = ordinal;
        return ym;
    }

    /// Parses "YYYY-MM"; throws DataError on malformed input.
    static YearMonth parse(std::string_view text);

    constexpr int year() const { return ordinal_ / 12; }
    constexpr int month() const { return ordinal_ % 12 + 1; }
    constexpr int ordinal() const { return ordinal_; }

    constexpr YearMonth operator+(int months) const { return from_ordinal(ordinal_ + months); }
    constexpr YearMonth operator-(int months) const { return from_ordinal(ordinal_ - months); }
    constexpr int operator-(YearMonth other) const { return ordinal_ - other.ordinal_; }

    constexpr auto operator<=>(const YearMonth &) const = default;

    std::string str() const;

  private:
    int ordinal_ = 0;
};

} // namespace crossq
