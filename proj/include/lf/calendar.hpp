#pragma once

#include <cstdint>
#include <set>
#include <string>

namespace lf {

// Calendar date (proleptic Gregorian, UTC). Time handling in this project
// is a single epoch anchor plus 15-minute index arithmetic; this type covers
// the date side of that (weekday and holiday lookups, CSV timestamps).
struct CivilDate {
    int year = 1970;
    int month = 1;  // 1..12
    int day = 1;    // 1..31

    auto operator<=>(const CivilDate&) const = default;
};

// Days since 1970-01-01.
std::int64_t days_from_civil(CivilDate date);
CivilDate civil_from_days(std::int64_t days);

// 0 = Monday .. 6 = Sunday.
int weekday(CivilDate date);

// Parses "YYYY-MM-DDTHH:MM:SSZ" (strict UTC). Returns epoch seconds.
std::int64_t parse_iso8601_utc(const std::string& text);
std::string format_iso8601_utc(std::int64_t epoch_seconds);

// "YYYY-MM-DD"
CivilDate parse_date(const std::string& text);
std::string format_date(CivilDate date);

enum class DayType { working_day, weekend_or_holiday };

// weekend_or_holiday iff Saturday, Sunday, or listed in holidays.
DayType day_type(CivilDate date, const std::set<CivilDate>& holidays);

// Maps day indices of a series (0 = the day containing the start timestamp)
// to calendar dates and day types.
struct Calendar {
    CivilDate start_date;
    std::set<CivilDate> holidays;

    CivilDate date_of_day(int day_index) const;
    DayType type_of_day(int day_index) const;
};

}  // namespace lf
