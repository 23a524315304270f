#include "esgm/dates.hpp"

#include <array>
#include <cstdio>
#include <stdexcept>

namespace esgm {

long days_from_civil(const Date& d) {
    long y = d.year;
    const unsigned m = static_cast<unsigned>(d.month);
    const unsigned dd = static_cast<unsigned>(d.day);
    y -= m <= 2;
    const long era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + dd - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long>(doe) - 719468;
}

Date civil_from_days(long z) {
    z += 719468;
    const long era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const long y = static_cast<long>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned dd = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return Date{static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(dd)};
}

int weekday(const Date& d) {
    // 1970-01-01 (day 0) was a Thursday.
    const long z = days_from_civil(d);
    const long w = (z + 3) % 7;
    return static_cast<int>(w < 0 ? w + 7 : w);
}

bool is_valid_date(const Date& d) {
    if (d.month < 1 || d.month > 12 || d.day < 1) return false;
    static constexpr std::array<int, 12> len{31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    int maxd = len[static_cast<std::size_t>(d.month - 1)];
    const bool leap = (d.year % 4 == 0 && d.year % 100 != 0) || d.year % 400 == 0;
    if (d.month == 2 && leap) maxd = 29;
    return d.day <= maxd;
}

Date parse_iso_date(const std::string& s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-')
        throw std::invalid_argument("malformed ISO date: '" + s + "'");
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
        if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("malformed ISO date: '" + s + "'");
    Date d;
    d.year = std::stoi(s.substr(0, 4));
    d.month = std::stoi(s.substr(5, 2));
    d.day = std::stoi(s.substr(8, 2));
    if (!is_valid_date(d)) throw std::invalid_argument("invalid calendar date: '" + s + "'");
    return d;
}

std::string format_iso_date(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
    return buf;
}

}  // namespace esgm
