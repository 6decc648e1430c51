#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lf/calendar.hpp"

namespace lf {

inline constexpr int kSamplesPerDay = 96;
inline constexpr int kSlotSeconds = 900;

inline bool is_missing(double v) { return std::isnan(v); }
inline double missing_marker() { return std::nan(""); }

// Uniformly spaced 15-minute load measurements for one building or a
// community, day-indexed from the start timestamp. Values are kW average
// power per slot; NaN marks a missing sample. Treat as immutable after
// construction: operations return new series.
struct LoadSeries {
    std::int64_t start_epoch_s = 0;  // midnight-aligned, UTC
    std::vector<double> values;

    int num_days() const { return static_cast<int>(values.size()) / kSamplesPerDay; }
    CivilDate start_date() const { return civil_from_days(start_epoch_s / 86400); }
    Calendar calendar(std::set<CivilDate> holidays = {}) const {
        return Calendar{start_date(), std::move(holidays)};
    }

    // First `days` whole days as a new series.
    LoadSeries truncated(int days) const;
};

// Exactly one day of a LoadSeries.
struct DayProfile {
    int day_index = 0;
    std::vector<double> values;  // exactly kSamplesPerDay entries
};

// Solar radiation (W/m^2) and outdoor temperature (degC) aligned sample by
// sample with a companion LoadSeries.
struct WeatherSeries {
    std::int64_t start_epoch_s = 0;
    std::vector<double> solar_wm2;
    std::vector<double> temp_c;

    WeatherSeries truncated(int days) const;
};

// Column mapping for CSV ingestion. `load_is_kwh_per_slot` accepts a
// kWh-per-slot column and converts to kW by multiplying by 4.
struct CsvSchema {
    std::string timestamp_col = "timestamp";
    std::string load_col = "load_kw";
    std::string solar_col = "solar_wm2";
    std::string temp_col = "temp_c";
    bool load_is_kwh_per_slot = false;
};

// Parses CSV text into a series snapped to the 15-minute grid. Unparseable
// load cells become missing markers; rows are sorted by timestamp; leading
// and trailing partial days are dropped. Grid slots covered by no row are
// missing.
LoadSeries load_csv(const std::string& text, const CsvSchema& schema = {});

// Weather companion from the same CSV format (solar/temp columns required).
WeatherSeries load_weather_csv(const std::string& text, const CsvSchema& schema = {});

// Emits the CSV interchange format. Weather columns are appended when
// `weather` is non-null. Finite values round-trip bit-exactly.
std::string write_csv(const LoadSeries& series, const WeatherSeries* weather = nullptr);

enum class FillPolicy { linear_interpolate, same_time_prev_day };

// Replaces every missing marker per the policy; non-missing values are
// untouched. Gaps the policy cannot cover raise an unfillable error naming
// the day index.
LoadSeries fill_missing(const LoadSeries& series, FillPolicy policy);

// Samples [96*d, 96*d+95] verbatim.
DayProfile day_slice(const LoadSeries& series, int d);

// Pointwise sum of aligned, gap-free series.
LoadSeries aggregate_community(std::span<const LoadSeries> buildings);

}  // namespace lf
