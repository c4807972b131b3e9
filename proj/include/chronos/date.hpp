#pragma once
// Day-granularity calendar dates and inclusive time windows.

#include <compare>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace chronos {

class DateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A proleptic Gregorian calendar date stored as days since 1970-01-01.
class Date {
public:
    constexpr Date() = default;

    static constexpr Date from_days(std::int64_t days) { return Date(days); }

    static constexpr bool valid_ymd(int y, int m, int d) {
        if (m < 1 || m > 12 || d < 1) return false;
        return d <= days_in_month(y, m);
    }

    static constexpr Date from_ymd(int y, int m, int d) {
        if (!valid_ymd(y, m, d)) {
            throw DateError("invalid calendar date " + std::to_string(y) + "-" +
                            std::to_string(m) + "-" + std::to_string(d));
        }
        return Date(days_from_civil(y, m, d));
    }

    /// Parses strict "YYYY-MM-DD".
    static Date parse(std::string_view text) {
        auto fail = [&] { return DateError("invalid date '" + std::string(text) + "'"); };
        if (text.size() != 10 || text[4] != '-' || text[7] != '-') throw fail();
        auto digits = [&](std::size_t pos, std::size_t len) {
            int v = 0;
            for (std::size_t i = pos; i < pos + len; ++i) {
                char c = text[i];
                if (c < '0' || c > '9') throw fail();
                v = v * 10 + (c - '0');
            }
            return v;
        };
        int y = digits(0, 4), m = digits(5, 2), d = digits(8, 2);
        if (!valid_ymd(y, m, d)) throw fail();
        return Date(days_from_civil(y, m, d));
    }

    static bool try_parse(std::string_view text, Date& out) {
        try {
            out = parse(text);
            return true;
        } catch (const DateError&) {
            return false;
        }
    }

    static constexpr Date min() { return Date(std::numeric_limits<std::int32_t>::min()); }
    static constexpr Date max() { return Date(std::numeric_limits<std::int32_t>::max()); }

    constexpr std::int64_t days() const { return days_; }

    struct Ymd {
        int year;
        int month;
        int day;
    };

    constexpr Ymd ymd() const {
        // civil_from_days (H. Hinnant)
        std::int64_t z = days_ + 719468;
        const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
        const auto doe = static_cast<unsigned>(z - era * 146097);
        const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
        const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
        const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
        const unsigned mp = (5 * doy + 2) / 153;
        const unsigned d = doy - (153 * mp + 2) / 5 + 1;
        const unsigned m = mp < 10 ? mp + 3 : mp - 9;
        return {static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(d)};
    }

    std::string to_string() const {
        auto [y, m, d] = ymd();
        char buf[32];
        std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", y, m, d);
        return buf;
    }

    constexpr Date operator+(std::int64_t n) const { return Date(days_ + n); }
    constexpr Date operator-(std::int64_t n) const { return Date(days_ - n); }
    constexpr std::int64_t operator-(Date other) const { return days_ - other.days_; }

    constexpr auto operator<=>(const Date&) const = default;

    static constexpr bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

    static constexpr int days_in_month(int y, int m) {
        constexpr int table[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
        return m == 2 && is_leap(y) ? 29 : table[m - 1];
    }

private:
    constexpr explicit Date(std::int64_t days) : days_(days) {}

    static constexpr std::int64_t days_from_civil(int y, int m, int d) {
        y -= m <= 2;
        const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
        const auto yoe = static_cast<unsigned>(y - era * 400);
        const unsigned doy = (153 * (m > 2 ? m - 3 : m + 9) + 2) / 5 + d - 1;
        const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
        return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
    }

    std::int64_t days_ = 0;
};

/// Inclusive interval [start, end]; a point-in-time window has start == end.
struct TimeWindow {
    Date start;
    Date end;

    static TimeWindow make(Date start, Date end) {
        if (end < start) {
            throw DateError("time window start " + start.to_string() + " is after end " +
                            end.to_string());
        }
        return {start, end};
    }

    static TimeWindow point(Date d) { return {d, d}; }

    bool is_point() const { return start == end; }
    bool contains(Date d) const { return start <= d && d <= end; }

    std::string to_string() const { return "[" + start.to_string() + ", " + end.to_string() + "]"; }

    friend bool operator==(const TimeWindow&, const TimeWindow&) = default;
};

}  // namespace chronos
