#pragma once

#include <cstdint>
#include <string>

namespace hybridtherm {

/// Broken-down UTC instant. No timezone arithmetic anywhere; everything is UTC.
struct CivilTime {
    int year;
    int month;   // 1..12
    int day;     // 1..31
    int hour;    // 0..23
    int minute;  // 0..59
    int second;  // 0..59
};

/// Days since 1970-01-01 for a proleptic Gregorian date (Howard Hinnant's algorithm).
std::int64_t days_from_civil(int y, int m, int d);

/// Inverse of days_from_civil.
void civil_from_days(std::int64_t z, int& y, int& m, int& d);

/// Epoch seconds (UTC) for a civil time.
std::int64_t to_epoch_seconds(const CivilTime& c);

/// Civil time (UTC) for epoch seconds.
CivilTime from_epoch_seconds(std::int64_t t);

/// "2021-01-01T00:00:00Z"
std::string to_iso8601(std::int64_t epoch_seconds);

/// Parses ISO-8601 UTC ("YYYY-MM-DDTHH:MM:SSZ", the Z optional).
/// Throws std::runtime_error on malformed input.
std::int64_t parse_iso8601(const std::string& text);

/// Day of year, 1-based.
int day_of_year(std::int64_t epoch_seconds);

/// 0 = Monday .. 6 = Sunday.
int day_of_week(std::int64_t epoch_seconds);

}  // namespace hybridtherm
