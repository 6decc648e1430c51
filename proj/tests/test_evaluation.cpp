#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "lf/errors.hpp"
#include "lf/evaluation.hpp"
#include "lf/model_registry.hpp"
#include "lf/rng.hpp"
#include "lf/synth.hpp"

using namespace lf;

namespace {

constexpr double kTau = 2.0 * 3.14159265358979323846;

// Distinct integer level per weekday plus an exactly representable ramp, so
// day-over-day differences (and their RMSE) are exact in floating point.
LoadSeries weekly_fixture(int days) {
    static const double levels[7] = {10, 12, 14, 16, 18, 11, 13};
    LoadSeries s;
    s.start_epoch_s = days_from_civil({2016, 1, 4}) * 86400;  // a Monday
    for (int d = 0; d < days; ++d)
        for (int t = 0; t < kSamplesPerDay; ++t) s.values.push_back(levels[d % 7] + 0.25 * t);
    return s;
}

double weekly_level(int d) {
    static const double levels[7] = {10, 12, 14, 16, 18, 11, 13};
    return levels[d % 7];
}

// Observes how the harness drives a model. Forecasts by repeating the last
// window day.
class ProbeModel final : public ForecastModel {
public:
    std::string id() const override { return "probe"; }

    void fit(const LoadSeries& window, const WeatherSeries* weather) override {
        ++fits;
        fit_window_days.push_back(static_cast<int>(window.start_epoch_s / 86400));
        fit_weather_samples = weather != nullptr ? weather->solar_wm2.size() : 0;
    }

    DayForecast forecast(const LoadSeries& window, const WeatherSeries* weather) override {
        ++forecasts;
        window_start_days.push_back(static_cast<int>(window.start_epoch_s / 86400));
        window_lengths.push_back(window.num_days());
        forecast_weather_samples = weather != nullptr ? weather->solar_wm2.size() : 0;
        DayForecast f;
        f.values.assign(window.values.end() - kSamplesPerDay, window.values.end());
        return f;
    }

    int fits = 0;
    int forecasts = 0;
    std::vector<int> fit_window_days;
    std::vector<int> window_start_days;
    std::vector<int> window_lengths;
    std::size_t fit_weather_samples = 0;
    std::size_t forecast_weather_samples = 0;
};

// Fails on odd target days (day index measured from a zero-epoch series).
class FlakyModel final : public ForecastModel {
public:
    std::string id() const override { return "flaky"; }
    bool needs_fit() const override { return false; }
    void fit(const LoadSeries&, const WeatherSeries*) override {}

    DayForecast forecast(const LoadSeries& window, const WeatherSeries*) override {
        const int target = static_cast<int>(window.start_epoch_s / 86400) + window.num_days();
        if (target % 2 == 1) throw Error(ErrorKind::numeric, "flaky model refuses odd days");
        DayForecast f;
        f.values.assign(window.values.end() - kSamplesPerDay, window.values.end());
        return f;
    }
};

class WrongShapeModel final : public ForecastModel {
public:
    std::string id() const override { return "wrong_shape"; }
    bool needs_fit() const override { return false; }
    void fit(const LoadSeries&, const WeatherSeries*) override {}
    DayForecast forecast(const LoadSeries&, const WeatherSeries*) override {
        DayForecast f;
        f.values.assign(13, 1.0);
        return f;
    }
};

std::vector<std::unique_ptr<ForecastModel>> one_model(std::unique_ptr<ForecastModel> m) {
    std::vector<std::unique_ptr<ForecastModel>> models;
    models.push_back(std::move(m));
    return models;
}

}  // namespace

TEST_CASE("rmse basics") {
    std::vector<double> a{1.0, 2.0, 3.0, 4.0};
    CHECK(rmse(a, a) == 0.0);

    std::vector<double> b{2.5, 3.5, 4.5, 5.5};  // constant offset 1.5, exact in fp
    CHECK(rmse(b, a) == 1.5);
    CHECK(rmse(a, b) == 1.5);
}

TEST_CASE("rmse matches an independent accumulation") {
    SplitMix64 rng(11);
    std::vector<double> f, y;
    for (int i = 0; i < kSamplesPerDay; ++i) {
        f.push_back(10.0 * rng.next_uniform());
        y.push_back(10.0 * rng.next_uniform());
    }
    long double se = 0.0L;
    for (int i = 0; i < kSamplesPerDay; ++i) {
        const long double d = static_cast<long double>(f[i]) - static_cast<long double>(y[i]);
        se += d * d;
    }
    const double expected = static_cast<double>(std::sqrt(se / kSamplesPerDay));
    CHECK(std::abs(rmse(f, y) - expected) < 1e-12);
}

TEST_CASE("rmse rejects bad input") {
    std::vector<double> a{1.0, 2.0}, b{1.0};
    CHECK_THROWS_AS(rmse(a, b), Error);
    CHECK_THROWS_AS(rmse(std::vector<double>{}, std::vector<double>{}), Error);
    std::vector<double> c{1.0, std::nan("")};
    CHECK_THROWS_AS(rmse(a, c), Error);
}

TEST_CASE("slice_days keeps values and absolute time") {
    const LoadSeries s = weekly_fixture(10);
    const LoadSeries w = slice_days(s, 3, 7);
    CHECK(w.num_days() == 4);
    CHECK(w.start_epoch_s == s.start_epoch_s + 3 * 86400);
    CHECK(w.values[0] == s.values[3 * kSamplesPerDay]);
    CHECK(w.values.back() == s.values[7 * kSamplesPerDay - 1]);
    CHECK(weekday(w.start_date()) == 3);  // Thursday: fixture starts Monday

    CHECK_THROWS_AS(slice_days(s, -1, 3), Error);
    CHECK_THROWS_AS(slice_days(s, 3, 3), Error);
    CHECK_THROWS_AS(slice_days(s, 3, 11), Error);
}

TEST_CASE("oracle model scores zero everywhere") {
    const LoadSeries data = weekly_fixture(30);
    auto models = one_model(make_oracle_model(data));
    RollingCvConfig cfg;
    cfg.train_days = 7;
    cfg.eval_begin = 7;
    cfg.eval_end = 15;
    const auto reports = rolling_cv(models, data, nullptr, cfg);
    REQUIRE(reports.size() == 1);
    const EvalReport& r = reports[0];
    CHECK(r.model_id == "oracle");
    REQUIRE(r.daily_rmse.size() == 8);
    for (const auto& e : r.daily_rmse) CHECK(e.rmse == 0.0);
    for (double v : r.running_avg_rmse) CHECK(v == 0.0);
    CHECK(r.relative_rmse == 0.0);
    CHECK(r.failures.empty());
}

TEST_CASE("persistence on the weekly fixture: same-day repeats exactly, last-day misses") {
    const LoadSeries data = weekly_fixture(30);
    std::vector<std::unique_ptr<ForecastModel>> models;
    models.push_back(make_model("n_same_days", {{"n", 1}}));
    models.push_back(make_model("n_days", {{"n", 1}}));
    RollingCvConfig cfg;
    cfg.train_days = 7;
    cfg.eval_begin = 7;
    cfg.eval_end = 21;
    const auto reports = rolling_cv(models, data, nullptr, cfg);
    REQUIRE(reports.size() == 2);

    const EvalReport& same = reports[0];
    REQUIRE(same.daily_rmse.size() == 14);
    for (const auto& e : same.daily_rmse) CHECK(e.rmse == 0.0);
    CHECK(same.relative_rmse == 0.0);

    const EvalReport& last = reports[1];
    REQUIRE(last.daily_rmse.size() == 14);
    for (const auto& e : last.daily_rmse) {
        const double expected = std::abs(weekly_level(e.day) - weekly_level(e.day - 1));
        CHECK(e.rmse == expected);  // integer level steps stay exact
        CHECK(e.rmse > 0.0);
    }
}

TEST_CASE("running average is the exact prefix mean") {
    const LoadSeries data = weekly_fixture(30);
    auto models = one_model(make_model("n_days", {{"n", 1}}));
    RollingCvConfig cfg;
    cfg.train_days = 7;
    cfg.eval_begin = 7;
    cfg.eval_end = 25;
    const auto reports = rolling_cv(models, data, nullptr, cfg);
    const EvalReport& r = reports[0];
    REQUIRE(r.running_avg_rmse.size() == r.daily_rmse.size());
    double cum = 0.0;
    for (std::size_t i = 0; i < r.daily_rmse.size(); ++i) {
        cum += r.daily_rmse[i].rmse;
        CHECK(r.running_avg_rmse[i] == cum / static_cast<double>(i + 1));
    }
    CHECK(relative_rmse(r) == r.relative_rmse);
}

TEST_CASE("corrupting data after the last target changes nothing") {
    SynthConfig sc;
    sc.n_days = 20;
    sc.noise_sd = 0.1;
    sc.seed = 3;
    const SynthOutput out = generate(sc);
    const LoadSeries data = aggregate_community(out.buildings);

    const auto run = [&](const LoadSeries& d) {
        std::vector<std::unique_ptr<ForecastModel>> models;
        models.push_back(make_model("n_days"));
        models.push_back(make_model("par"));
        models.push_back(make_model("gam_fourier", {{"daily_order", 2}, {"weekly_order", 1}}));
        RollingCvConfig cfg;
        cfg.train_days = 14;
        cfg.eval_begin = 14;
        cfg.eval_end = 17;
        return rolling_cv(models, d, &out.weather, cfg);
    };

    const auto before = run(data);
    LoadSeries corrupted = data;
    for (int i = 17 * kSamplesPerDay; i < 20 * kSamplesPerDay; ++i) corrupted.values[i] = 9999.0;
    const auto after = run(corrupted);

    REQUIRE(before.size() == after.size());
    for (std::size_t m = 0; m < before.size(); ++m) {
        CHECK(before[m].failures.empty());
        CHECK(before[m].daily_rmse == after[m].daily_rmse);
        CHECK(before[m].running_avg_rmse == after[m].running_avg_rmse);
        CHECK(before[m].relative_rmse == after[m].relative_rmse);
    }
}

TEST_CASE("model failures are recorded and the run continues") {
    LoadSeries data = weekly_fixture(20);
    data.start_epoch_s = 0;  // FlakyModel reads absolute days from the epoch
    auto models = one_model(std::make_unique<FlakyModel>());
    RollingCvConfig cfg;
    cfg.train_days = 7;
    cfg.eval_begin = 7;
    cfg.eval_end = 15;
    const auto reports = rolling_cv(models, data, nullptr, cfg);
    const EvalReport& r = reports[0];
    REQUIRE(r.failures.size() == 4);  // days 7, 9, 11, 13
    REQUIRE(r.daily_rmse.size() == 4);  // days 8, 10, 12, 14
    for (const auto& [day, message] : r.failures) {
        CHECK(day % 2 == 1);
        CHECK(message.find("flaky") != std::string::npos);
    }
    for (const auto& e : r.daily_rmse) CHECK(e.day % 2 == 0);
    CHECK(r.running_avg_rmse.size() == 4);
    CHECK(std::isfinite(r.relative_rmse));
}

TEST_CASE("a wrong-shaped forecast is a recorded failure, not a crash") {
    const LoadSeries data = weekly_fixture(20);
    auto models = one_model(std::make_unique<WrongShapeModel>());
    RollingCvConfig cfg;
    cfg.train_days = 7;
    cfg.eval_begin = 7;
    cfg.eval_end = 10;
    const auto reports = rolling_cv(models, data, nullptr, cfg);
    const EvalReport& r = reports[0];
    CHECK(r.daily_rmse.empty());
    CHECK(r.failures.size() == 3);
    CHECK(std::isnan(r.relative_rmse));
    CHECK_THROWS_AS(relative_rmse(r), Error);

    // The table renders the degenerate report as n/a rather than crashing.
    const std::string table = render_report(reports, ReportFormat::text_table);
    CHECK(table.find("n/a") != std::string::npos);
}

TEST_CASE("refit cadence and window geometry") {
    SynthConfig sc;
    sc.n_days = 25;
    const SynthOutput out = generate(sc);
    const LoadSeries data = aggregate_community(out.buildings);

    RollingCvConfig cfg;
    cfg.train_days = 7;
    cfg.eval_begin = 7;
    cfg.eval_end = 21;

    SUBCASE("weekly refits") {
        auto probe = std::make_unique<ProbeModel>();
        ProbeModel* p = probe.get();
        auto models = one_model(std::move(probe));
        rolling_cv(models, data, &out.weather, cfg);
        const int day0 = static_cast<int>(data.start_epoch_s / 86400);
        CHECK(p->fits == 2);  // day 7 and day 14
        CHECK(p->fit_window_days == std::vector<int>{day0, day0 + 7});
        CHECK(p->forecasts == 14);
        for (std::size_t i = 0; i < p->window_start_days.size(); ++i) {
            const int d = cfg.eval_begin + static_cast<int>(i);
            CHECK(p->window_start_days[i] - day0 == d - cfg.train_days);
            CHECK(p->window_lengths[i] == cfg.train_days);
        }
        // Fit windows exclude the target day; forecast weather includes it.
        CHECK(p->fit_weather_samples == static_cast<std::size_t>(7 * kSamplesPerDay));
        CHECK(p->forecast_weather_samples == static_cast<std::size_t>(8 * kSamplesPerDay));
    }

    SUBCASE("daily refits") {
        auto probe = std::make_unique<ProbeModel>();
        ProbeModel* p = probe.get();
        auto models = one_model(std::move(probe));
        cfg.refit_every = 1;
        rolling_cv(models, data, &out.weather, cfg);
        CHECK(p->fits == 14);
    }

    SUBCASE("a cadence longer than the range fits once") {
        auto probe = std::make_unique<ProbeModel>();
        ProbeModel* p = probe.get();
        auto models = one_model(std::move(probe));
        cfg.refit_every = 100;
        rolling_cv(models, data, &out.weather, cfg);
        CHECK(p->fits == 1);
    }
}

TEST_CASE("rolling_cv validates its configuration") {
    const LoadSeries data = weekly_fixture(20);
    auto models = one_model(make_model("n_days"));
    RollingCvConfig cfg;
    cfg.train_days = 7;
    cfg.eval_begin = 7;
    cfg.eval_end = 15;

    {
        std::vector<std::unique_ptr<ForecastModel>> empty;
        CHECK_THROWS_AS(rolling_cv(empty, data, nullptr, cfg), Error);
    }
    {
        RollingCvConfig c = cfg;
        c.eval_begin = 5;  // window would reach before day 0
        CHECK_THROWS_AS(rolling_cv(models, data, nullptr, c), Error);
    }
    {
        RollingCvConfig c = cfg;
        c.eval_end = c.eval_begin;
        CHECK_THROWS_AS(rolling_cv(models, data, nullptr, c), Error);
    }
    {
        RollingCvConfig c = cfg;
        c.eval_end = 21;  // beyond the data
        CHECK_THROWS_AS(rolling_cv(models, data, nullptr, c), Error);
    }
    {
        RollingCvConfig c = cfg;
        c.refit_every = 0;
        CHECK_THROWS_AS(rolling_cv(models, data, nullptr, c), Error);
    }
    {
        LoadSeries gappy = data;
        gappy.values[8 * kSamplesPerDay + 5] = missing_marker();
        CHECK_THROWS_AS(rolling_cv(models, gappy, nullptr, cfg), Error);
    }
    {
        WeatherSeries w;
        w.start_epoch_s = data.start_epoch_s + 3600;  // misaligned
        w.solar_wm2.assign(data.values.size(), 0.0);
        w.temp_c.assign(data.values.size(), 0.0);
        CHECK_THROWS_AS(rolling_cv(models, data, &w, cfg), Error);
        w.start_epoch_s = data.start_epoch_s;
        w.solar_wm2.resize(10 * kSamplesPerDay);  // too short
        w.temp_c.resize(10 * kSamplesPerDay);
        CHECK_THROWS_AS(rolling_cv(models, data, &w, cfg), Error);
    }
}

TEST_CASE("relative_rmse arithmetic and guards") {
    EvalReport r;
    r.model_id = "manual";
    r.daily_rmse = {{0, 2.0}, {1, 2.0}};
    r.running_avg_rmse = {2.0, 2.0};
    r.mean_load = 2.0;
    CHECK(relative_rmse(r) == 1.0);

    r.mean_load = 0.0;
    CHECK_THROWS_AS(relative_rmse(r), Error);

    EvalReport empty;
    empty.mean_load = 1.0;
    CHECK_THROWS_AS(relative_rmse(empty), Error);
}

TEST_CASE("a fitted seasonal model survives the sliding window between refits") {
    // Noiseless daily+weekly harmonics: if the adapter maps the sliding
    // window back to its fit frame correctly, every day between refits is
    // forecast almost exactly; a frame slip would shift the weekly phase.
    LoadSeries data;
    data.start_epoch_s = days_from_civil({2016, 1, 4}) * 86400;
    for (int t = 0; t < 30 * kSamplesPerDay; ++t)
        data.values.push_back(5.0 + 0.8 * std::cos(kTau * t / kSamplesPerDay) +
                              0.4 * std::sin(kTau * t / (7.0 * kSamplesPerDay)));

    auto models = one_model(make_model("gam_fourier", {{"daily_order", 1}, {"weekly_order", 1}}));
    RollingCvConfig cfg;
    cfg.train_days = 21;
    cfg.eval_begin = 21;
    cfg.eval_end = 30;
    cfg.refit_every = 7;  // days 22..27 reuse the day-21 fit through shifted windows
    const auto reports = rolling_cv(models, data, nullptr, cfg);
    REQUIRE(reports[0].failures.empty());
    REQUIRE(reports[0].daily_rmse.size() == 9);
    for (const auto& e : reports[0].daily_rmse) CHECK(e.rmse < 1e-6);
}

TEST_CASE("registry ids and validation") {
    const auto& ids = known_model_ids();
    CHECK(ids.size() == 10);
    for (const auto& id : ids) {
        auto m = make_model(id);
        REQUIRE(m != nullptr);
        CHECK(m->id() == id);
        CHECK(!m->config_summary().empty());
    }
    CHECK(!make_model("n_same_days")->needs_fit());
    CHECK(!make_model("n_days")->needs_fit());
    CHECK(make_model("par")->needs_fit());

    try {
        make_model("prophetx");
        FAIL("expected a usage error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::usage);
        CHECK(std::string(e.what()).find("prophetx") != std::string::npos);
        CHECK(std::string(e.what()).find("n_same_days") != std::string::npos);
        CHECK(std::string(e.what()).find("gam_fourier") != std::string::npos);
    }

    CHECK_THROWS_AS(make_model("n_days", {{"bogus", 1}}), Error);
    CHECK_THROWS_AS(make_model("n_days", {{"n", 0}}), Error);
    CHECK_THROWS_AS(make_model("hw", {{"period", "daily"}}), Error);
    CHECK_THROWS_AS(make_model("par", {{"pm_variant", "weekly"}}), Error);
    CHECK_THROWS_AS(make_model("spnn", {{"activation", "sigmoid"}}), Error);
    CHECK_THROWS_AS(make_model("lstm", {{"hidden", nlohmann::json::array({4, 0})}}), Error);
    CHECK_THROWS_AS(make_model("n_days", nlohmann::json::array()), Error);

    const std::string summary = make_model("n_same_days")->config_summary();
    CHECK(summary == "{\"n\":4}");
}

TEST_CASE("report renderers") {
    const LoadSeries data = weekly_fixture(30);
    std::vector<std::unique_ptr<ForecastModel>> models;
    models.push_back(make_model("n_same_days", {{"n", 1}}));
    models.push_back(make_model("n_days", {{"n", 1}}));
    RollingCvConfig cfg;
    cfg.train_days = 7;
    cfg.eval_begin = 7;
    cfg.eval_end = 10;
    const auto reports = rolling_cv(models, data, nullptr, cfg);

    SUBCASE("text table") {
        const std::string table = render_report(reports, ReportFormat::text_table);
        std::istringstream in(table);
        std::string line;
        int lines = 0;
        while (std::getline(in, line)) ++lines;
        CHECK(lines == 4);  // header, rule, one row per model
        CHECK(table.find("relative RMSE") != std::string::npos);
        CHECK(table.find("n_same_days") != std::string::npos);
        CHECK(table.find("n_days") != std::string::npos);
        CHECK(table.find("0.0000") != std::string::npos);  // the exact-repeat model
    }

    SUBCASE("csv round-trips bit-exactly") {
        const std::string csv = render_report(reports, ReportFormat::csv);
        std::istringstream in(csv);
        std::string line;
        std::getline(in, line);
        CHECK(line == "model_id,day,daily_rmse,running_avg_rmse");
        std::size_t row = 0, model_index = 0, i = 0;
        while (std::getline(in, line)) {
            const std::size_t c1 = line.find(',');
            const std::size_t c2 = line.find(',', c1 + 1);
            const std::size_t c3 = line.find(',', c2 + 1);
            REQUIRE(c3 != std::string::npos);
            if (i == reports[model_index].daily_rmse.size()) {
                ++model_index;
                i = 0;
            }
            const auto& rep = reports[model_index];
            CHECK(line.substr(0, c1) == rep.model_id);
            CHECK(std::atoi(line.substr(c1 + 1, c2 - c1 - 1).c_str()) == rep.daily_rmse[i].day);
            CHECK(std::strtod(line.c_str() + c2 + 1, nullptr) == rep.daily_rmse[i].rmse);
            CHECK(std::strtod(line.c_str() + c3 + 1, nullptr) == rep.running_avg_rmse[i]);
            ++i;
            ++row;
        }
        CHECK(row == reports[0].daily_rmse.size() + reports[1].daily_rmse.size());
    }

    SUBCASE("svg trace plot") {
        const std::string svg = render_report(reports, ReportFormat::svg_plot);
        CHECK(svg.rfind("<svg xmlns=", 0) == 0);
        CHECK(svg.find("</svg>") != std::string::npos);
        std::size_t polylines = 0, pos = 0;
        while ((pos = svg.find("<polyline", pos)) != std::string::npos) {
            ++polylines;
            pos += 9;
        }
        CHECK(polylines == reports.size());
    }

    SUBCASE("empty input is rejected") {
        CHECK_THROWS_AS(render_report({}, ReportFormat::csv), Error);
    }
}

TEST_CASE("overlay svg has one polyline per curve") {
    DayForecast f;
    f.model_id = "n_days";
    f.target_day = 9;
    std::vector<double> actual;
    for (int t = 0; t < kSamplesPerDay; ++t) {
        f.values.push_back(5.0 + 0.01 * t);
        actual.push_back(5.2 + 0.01 * t);
    }
    const std::string svg = render_overlay_svg(f, actual);
    CHECK(svg.rfind("<svg xmlns=", 0) == 0);
    std::size_t polylines = 0, pos = 0;
    while ((pos = svg.find("<polyline", pos)) != std::string::npos) {
        ++polylines;
        pos += 9;
    }
    CHECK(polylines == 2);
    CHECK(svg.find("actual") != std::string::npos);
    CHECK(svg.find("n_days") != std::string::npos);

    std::vector<double> wrong(50, 1.0);
    CHECK_THROWS_AS(render_overlay_svg(f, wrong), Error);
}

TEST_CASE("fnv1a64 known vectors and series hashing") {
    CHECK(fnv1a64("") == 14695981039346656037ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);

    const LoadSeries a = weekly_fixture(5);
    LoadSeries b = a;
    CHECK(series_hash(a) == series_hash(b));
    b.values[42] += 1.0;
    CHECK(series_hash(a) != series_hash(b));
    b = a;
    b.start_epoch_s += 86400;
    CHECK(series_hash(a) != series_hash(b));
}

TEST_CASE("manifest round trip and parse errors") {
    std::map<std::string, std::string> entries{
        {"cv.train_days", "60"},
        {"model.config", "{\"n\":4,\"x\":\"a=b\"}"},  // '=' in values is fine
        {"data.hash", "00ff00ff00ff00ff"},
    };
    const std::string text = render_manifest(entries);
    CHECK(parse_manifest(text) == entries);

    CHECK(parse_manifest("# comment\n\nkey=value\n").at("key") == "value");
    CHECK_THROWS_AS(parse_manifest("no equals sign\n"), Error);
    CHECK_THROWS_AS(parse_manifest("k=1\nk=2\n"), Error);
    CHECK_THROWS_AS(render_manifest({{"bad=key", "v"}}), Error);
    CHECK_THROWS_AS(render_manifest({{"key", "line\nbreak"}}), Error);
}

TEST_CASE("identical configuration reproduces reports byte for byte") {
    SynthConfig sc;
    sc.n_days = 35;
    sc.noise_sd = 0.1;
    sc.weather_coupling = -0.3;
    sc.seed = 7;
    const SynthOutput out = generate(sc);
    const LoadSeries data = aggregate_community(out.buildings);

    const auto run = [&]() {
        std::vector<std::unique_ptr<ForecastModel>> models;
        models.push_back(make_model("n_days"));
        models.push_back(make_model("par"));
        models.push_back(make_model("par_w"));
        models.push_back(make_model("gam_fourier", {{"daily_order", 3}, {"weekly_order", 1}}));
        RollingCvConfig cfg;
        cfg.train_days = 21;
        cfg.eval_begin = 21;
        cfg.eval_end = 31;
        return rolling_cv(models, data, &out.weather, cfg);
    };

    const auto first = run();
    const auto second = run();
    CHECK(render_report(first, ReportFormat::csv) == render_report(second, ReportFormat::csv));
    for (std::size_t m = 0; m < first.size(); ++m) {
        CHECK(first[m].failures.empty());
        CHECK(first[m].daily_rmse == second[m].daily_rmse);
        CHECK(first[m].relative_rmse == second[m].relative_rmse);
        CHECK(first[m].config_manifest == second[m].config_manifest);
        CHECK(first[m].config_manifest.at("data.hash").size() == 16);
        CHECK(first[m].config_manifest.count("weather.hash") == 1);
        CHECK(first[m].config_manifest.at("cv.train_days") == "21");
    }
}
