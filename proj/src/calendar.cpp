#include "lf/calendar.hpp"

#include <charconv>
#include <cstdio>

#include "lf/errors.hpp"

namespace lf {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::schema: return "schema";
        case ErrorKind::granularity: return "granularity";
        case ErrorKind::duplicate: return "duplicate";
        case ErrorKind::unfillable: return "unfillable";
        case ErrorKind::range: return "range";
        case ErrorKind::alignment: return "alignment";
        case ErrorKind::history: return "history";
        case ErrorKind::coverage: return "coverage";
        case ErrorKind::shape: return "shape";
        case ErrorKind::length: return "length";
        case ErrorKind::singular: return "singular";
        case ErrorKind::domain: return "domain";
        case ErrorKind::input: return "input";
        case ErrorKind::numeric: return "numeric";
        case ErrorKind::validation: return "validation";
        case ErrorKind::usage: return "usage";
        case ErrorKind::io: return "io";
    }
    return "unknown";
}

// Howard Hinnant's civil-days algorithm.
std::int64_t days_from_civil(CivilDate date) {
    std::int64_t y = date.year;
    const int m = date.month;
    const int d = date.day;
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

CivilDate civil_from_days(std::int64_t z) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return CivilDate{static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(d)};
}

int weekday(CivilDate date) {
    // days_from_civil(1970-01-01) == 0, a Thursday.
    std::int64_t z = days_from_civil(date);
    return static_cast<int>(((z % 7) + 10) % 7);
}

namespace {

int parse_int_field(const std::string& text, std::size_t pos, std::size_t len) {
    int value = 0;
    const char* first = text.data() + pos;
    auto [ptr, ec] = std::from_chars(first, first + len, value);
    if (ec != std::errc() || ptr != first + len)
        throw Error(ErrorKind::schema, "unparseable timestamp field in '" + text + "'");
    return value;
}

}  // namespace

std::int64_t parse_iso8601_utc(const std::string& text) {
    // YYYY-MM-DDTHH:MM:SSZ, 20 chars
    if (text.size() != 20 || text[4] != '-' || text[7] != '-' || text[10] != 'T' ||
        text[13] != ':' || text[16] != ':' || text[19] != 'Z')
        throw Error(ErrorKind::schema, "timestamp '" + text + "' is not YYYY-MM-DDTHH:MM:SSZ");
    CivilDate date{parse_int_field(text, 0, 4), parse_int_field(text, 5, 2), parse_int_field(text, 8, 2)};
    if (date.month < 1 || date.month > 12 || date.day < 1 || date.day > 31)
        throw Error(ErrorKind::schema, "timestamp '" + text + "' has an out-of-range date");
    const int hh = parse_int_field(text, 11, 2);
    const int mm = parse_int_field(text, 14, 2);
    const int ss = parse_int_field(text, 17, 2);
    if (hh > 23 || mm > 59 || ss > 59)
        throw Error(ErrorKind::schema, "timestamp '" + text + "' has an out-of-range time");
    return days_from_civil(date) * 86400 + hh * 3600 + mm * 60 + ss;
}

std::string format_iso8601_utc(std::int64_t epoch_seconds) {
    std::int64_t days = epoch_seconds / 86400;
    std::int64_t rem = epoch_seconds % 86400;
    if (rem < 0) {
        rem += 86400;
        days -= 1;
    }
    CivilDate date = civil_from_days(days);
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", date.year, date.month,
                  date.day, static_cast<int>(rem / 3600), static_cast<int>((rem / 60) % 60),
                  static_cast<int>(rem % 60));
    return buf;
}

CivilDate parse_date(const std::string& text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-')
        throw Error(ErrorKind::schema, "date '" + text + "' is not YYYY-MM-DD");
    CivilDate date{parse_int_field(text, 0, 4), parse_int_field(text, 5, 2), parse_int_field(text, 8, 2)};
    if (date.month < 1 || date.month > 12 || date.day < 1 || date.day > 31)
        throw Error(ErrorKind::schema, "date '" + text + "' is out of range");
    return date;
}

std::string format_date(CivilDate date) {
    char buf[12];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", date.year, date.month, date.day);
    return buf;
}

DayType day_type(CivilDate date, const std::set<CivilDate>& holidays) {
    const int wd = weekday(date);
    if (wd >= 5 || holidays.count(date) > 0) return DayType::weekend_or_holiday;
    return DayType::working_day;
}

CivilDate Calendar::date_of_day(int day_index) const {
    return civil_from_days(days_from_civil(start_date) + day_index);
}

DayType Calendar::type_of_day(int day_index) const {
    return day_type(date_of_day(day_index), holidays);
}

}  // namespace lf
