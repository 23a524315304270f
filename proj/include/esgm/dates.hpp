#ifndef ESGM_DATES_HPP
#define ESGM_DATES_HPP

#include <compare>
#include <string>

namespace esgm {

// Plain calendar date. Conversions use the civil-calendar algorithms of
// Howard Hinnant (public domain), exact over the proleptic Gregorian
// calendar.
struct Date {
    int year = 1970;
    int month = 1;  // 1..12
    int day = 1;    // 1..31

    auto operator<=>(const Date&) const = default;
};

// Days since 1970-01-01.
long days_from_civil(const Date& d);
Date civil_from_days(long z);

// 0 = Monday ... 6 = Sunday.
int weekday(const Date& d);

bool is_valid_date(const Date& d);

// Strict "YYYY-MM-DD"; throws std::invalid_argument on malformed input.
Date parse_iso_date(const std::string& s);
std::string format_iso_date(const Date& d);

}  // namespace esgm

#endif  // ESGM_DATES_HPP
