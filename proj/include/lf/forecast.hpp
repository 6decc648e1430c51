#pragma once

#include <string>
#include <vector>

namespace lf {

// 96 predicted values for one target day from one model. origin_day is the
// last day of data the forecast used; target_day is always origin_day + 1.
struct DayForecast {
    std::string model_id;
    int origin_day = -1;
    int target_day = 0;
    std::vector<double> values;  // exactly kSamplesPerDay entries, kW
};

}  // namespace lf
