#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace oifuse {

/// Calendar date stored as a day count since 1970-01-01 (proleptic Gregorian).
/// Day arithmetic is exact integer arithmetic; there are no time zones or
/// times of day anywhere in this library.
class Date {
public:
    Date() = default;

    static Date from_days(std::int64_t days) { return Date(days); }
    static Date from_ymd(int year, int month, int day);

    /// Strict ISO-8601 "YYYY-MM-DD". Returns nullopt on any deviation,
    /// including out-of-range month/day combinations.
    static std::optional<Date> parse(std::string_view text);

    std::int64_t days_since_epoch() const { return days_; }
    std::string to_string() const; // "YYYY-MM-DD"

    int year() const;
    int month() const;
    int day() const;

    Date operator+(std::int64_t days) const { return Date(days_ + days); }
    Date operator-(std::int64_t days) const { return Date(days_ - days); }
    std::int64_t operator-(Date other) const { return days_ - other.days_; }
    Date& operator++() { ++days_; return *this; }

    auto operator<=>(const Date&) const = default;

private:
    explicit Date(std::int64_t days) : days_(days) {}

    std::int64_t days_ = 0;
};

} // namespace oifuse
