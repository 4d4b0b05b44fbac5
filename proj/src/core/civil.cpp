#include "hybridtherm/core/civil.hpp"

#include <cstdio>
#include <stdexcept>

namespace hybridtherm {

std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yy + (m <= 2));
}

std::int64_t to_epoch_seconds(const CivilTime& c) {
    return days_from_civil(c.year, c.month, c.day) * 86400 + c.hour * 3600 +
           c.minute * 60 + c.second;
}

CivilTime from_epoch_seconds(std::int64_t t) {
    std::int64_t days = t / 86400;
    std::int64_t rem = t % 86400;
    if (rem < 0) {
        rem += 86400;
        days -= 1;
    }
    CivilTime c{};
    civil_from_days(days, c.year, c.month, c.day);
    c.hour = static_cast<int>(rem / 3600);
    c.minute = static_cast<int>((rem % 3600) / 60);
    c.second = static_cast<int>(rem % 60);
    return c;
}

std::string to_iso8601(std::int64_t epoch_seconds) {
    const CivilTime c = from_epoch_seconds(epoch_seconds);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", c.year, c.month,
                  c.day, c.hour, c.minute, c.second);
    return buf;
}

std::int64_t parse_iso8601(const std::string& text) {
    CivilTime c{};
    char sep = 0;
    const int n = std::sscanf(text.c_str(), "%d-%d-%d%c%d:%d:%d", &c.year, &c.month,
                              &c.day, &sep, &c.hour, &c.minute, &c.second);
    if (n < 3 || c.month < 1 || c.month > 12 || c.day < 1 || c.day > 31)
        throw std::runtime_error("bad ISO-8601 timestamp: '" + text + "'");
    if (n >= 4 && sep != 'T' && sep != ' ')
        throw std::runtime_error("bad ISO-8601 timestamp: '" + text + "'");
    return to_epoch_seconds(c);
}

int day_of_year(std::int64_t epoch_seconds) {
    const CivilTime c = from_epoch_seconds(epoch_seconds);
    const std::int64_t jan1 = days_from_civil(c.year, 1, 1);
    return static_cast<int>(days_from_civil(c.year, c.month, c.day) - jan1) + 1;
}

int day_of_week(std::int64_t epoch_seconds) {
    std::int64_t days = epoch_seconds / 86400;
    if (epoch_seconds % 86400 < 0) days -= 1;
    // 1970-01-01 was a Thursday.
    return static_cast<int>(((days % 7) + 7 + 3) % 7);
}

}  // namespace hybridtherm
