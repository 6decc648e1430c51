// loadfc: batch front end for the day-ahead load forecasting toolkit.
//
// Subcommands: synth | fit | forecast | evaluate | report. Configuration
// comes from a JSON file (--config); individual flags override it. Every
// run writes a manifest.txt into the output directory with the effective
// configuration and data fingerprints, sufficient to replay the run.
//
// On failure the process exits nonzero after printing a single line to
// stderr of the form:  error: [<kind>] <message>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lf/calendar.hpp"
#include "lf/errors.hpp"
#include "lf/evaluation.hpp"
#include "lf/model_registry.hpp"
#include "lf/synth.hpp"
#include "lf/timeseries.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct ModelSpec {
    std::string id;
    json params = json::object();
};

struct RunConfig {
    std::optional<std::string> csv_path;  // when absent, the synth block is used
    lf::SynthConfig synth;
    lf::FillPolicy fill_policy = lf::FillPolicy::linear_interpolate;
    std::vector<ModelSpec> models;  // empty selects the default catalogue
    int train_days = 60;
    std::optional<int> eval_begin;
    std::optional<int> eval_end;
    int refit_every = 7;
    int forecast_day = -1;  // -1 forecasts the day after the data ends
    std::string out_dir = "out";
};

struct Dataset {
    lf::LoadSeries load;
    std::optional<lf::WeatherSeries> weather;
};

[[noreturn]] void config_error(const std::string& path, const std::string& what) {
    throw lf::Error(lf::ErrorKind::validation, "config key '" + path + "' " + what);
}

int as_int(const json& v, const std::string& path) {
    if (!v.is_number_integer()) config_error(path, "must be an integer");
    return v.get<int>();
}

double as_real(const json& v, const std::string& path) {
    if (!v.is_number()) config_error(path, "must be a number");
    return v.get<double>();
}

std::string as_str(const json& v, const std::string& path) {
    if (!v.is_string()) config_error(path, "must be a string");
    return v.get<std::string>();
}

void reject_unknown_keys(const json& obj, const std::string& path,
                         std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed) known = known || it.key() == k;
        if (!known) config_error(path + "." + it.key(), "is not a recognized key");
    }
}

void parse_synth_block(const json& block, const std::string& path, lf::SynthConfig* out) {
    if (!block.is_object()) config_error(path, "must be an object");
    reject_unknown_keys(block, path,
                        {"n_buildings", "n_days", "seed", "morning_peak_slot",
                         "evening_peak_slot", "weekend_scale", "noise_sd", "weather_coupling",
                         "start_date"});
    if (block.contains("n_buildings"))
        out->n_buildings = as_int(block["n_buildings"], path + ".n_buildings");
    if (block.contains("n_days")) out->n_days = as_int(block["n_days"], path + ".n_days");
    if (block.contains("seed"))
        out->seed = static_cast<std::uint64_t>(as_int(block["seed"], path + ".seed"));
    if (block.contains("morning_peak_slot"))
        out->morning_peak_slot = as_int(block["morning_peak_slot"], path + ".morning_peak_slot");
    if (block.contains("evening_peak_slot"))
        out->evening_peak_slot = as_int(block["evening_peak_slot"], path + ".evening_peak_slot");
    if (block.contains("weekend_scale"))
        out->weekend_scale = as_real(block["weekend_scale"], path + ".weekend_scale");
    if (block.contains("noise_sd")) out->noise_sd = as_real(block["noise_sd"], path + ".noise_sd");
    if (block.contains("weather_coupling"))
        out->weather_coupling = as_real(block["weather_coupling"], path + ".weather_coupling");
    if (block.contains("start_date"))
        out->start_date = lf::parse_date(as_str(block["start_date"], path + ".start_date"));
}

RunConfig parse_config(const json& root) {
    RunConfig cfg;
    if (!root.is_object()) config_error("(root)", "must be an object");
    reject_unknown_keys(root, "(root)", {"data", "models", "cv", "out_dir", "forecast_day"});

    if (root.contains("data")) {
        const json& data = root["data"];
        if (!data.is_object()) config_error("data", "must be an object");
        reject_unknown_keys(data, "data", {"csv", "synth", "fill_policy"});
        if (data.contains("csv") && data.contains("synth"))
            config_error("data", "must name either a csv file or a synth block, not both");
        if (data.contains("csv")) cfg.csv_path = as_str(data["csv"], "data.csv");
        if (data.contains("synth")) parse_synth_block(data["synth"], "data.synth", &cfg.synth);
        if (data.contains("fill_policy")) {
            const std::string policy = as_str(data["fill_policy"], "data.fill_policy");
            if (policy == "linear_interpolate")
                cfg.fill_policy = lf::FillPolicy::linear_interpolate;
            else if (policy == "same_time_prev_day")
                cfg.fill_policy = lf::FillPolicy::same_time_prev_day;
            else
                config_error("data.fill_policy",
                             "must be \"linear_interpolate\" or \"same_time_prev_day\"");
        }
    }

    if (root.contains("models")) {
        const json& models = root["models"];
        if (!models.is_array()) config_error("models", "must be an array");
        for (std::size_t i = 0; i < models.size(); ++i) {
            const std::string path = "models[" + std::to_string(i) + "]";
            const json& entry = models[i];
            ModelSpec spec;
            if (entry.is_string()) {
                spec.id = entry.get<std::string>();
            } else if (entry.is_object()) {
                reject_unknown_keys(entry, path, {"id", "params"});
                if (!entry.contains("id")) config_error(path + ".id", "is required");
                spec.id = as_str(entry["id"], path + ".id");
                if (entry.contains("params")) {
                    if (!entry["params"].is_object())
                        config_error(path + ".params", "must be an object");
                    spec.params = entry["params"];
                }
            } else {
                config_error(path, "must be a model id string or an {id, params} object");
            }
            cfg.models.push_back(std::move(spec));
        }
    }

    if (root.contains("cv")) {
        const json& cv = root["cv"];
        if (!cv.is_object()) config_error("cv", "must be an object");
        reject_unknown_keys(cv, "cv", {"train_days", "eval_begin", "eval_end", "refit_every"});
        if (cv.contains("train_days")) cfg.train_days = as_int(cv["train_days"], "cv.train_days");
        if (cv.contains("eval_begin")) cfg.eval_begin = as_int(cv["eval_begin"], "cv.eval_begin");
        if (cv.contains("eval_end")) cfg.eval_end = as_int(cv["eval_end"], "cv.eval_end");
        if (cv.contains("refit_every"))
            cfg.refit_every = as_int(cv["refit_every"], "cv.refit_every");
    }

    if (root.contains("out_dir")) cfg.out_dir = as_str(root["out_dir"], "out_dir");
    if (root.contains("forecast_day")) cfg.forecast_day = as_int(root["forecast_day"], "forecast_day");
    return cfg;
}

// The effective configuration after flag overrides, echoed into manifests so
// a run can be replayed exactly.
json effective_config(const RunConfig& cfg) {
    json data;
    if (cfg.csv_path.has_value()) {
        data["csv"] = *cfg.csv_path;
    } else {
        data["synth"] = {{"n_buildings", cfg.synth.n_buildings},
                         {"n_days", cfg.synth.n_days},
                         {"seed", cfg.synth.seed},
                         {"morning_peak_slot", cfg.synth.morning_peak_slot},
                         {"evening_peak_slot", cfg.synth.evening_peak_slot},
                         {"weekend_scale", cfg.synth.weekend_scale},
                         {"noise_sd", cfg.synth.noise_sd},
                         {"weather_coupling", cfg.synth.weather_coupling},
                         {"start_date", lf::format_date(cfg.synth.start_date)}};
    }
    data["fill_policy"] = cfg.fill_policy == lf::FillPolicy::linear_interpolate
                              ? "linear_interpolate"
                              : "same_time_prev_day";

    json models = json::array();
    for (const ModelSpec& spec : cfg.models)
        models.push_back({{"id", spec.id}, {"params", spec.params}});

    json cv{{"train_days", cfg.train_days}, {"refit_every", cfg.refit_every}};
    if (cfg.eval_begin.has_value()) cv["eval_begin"] = *cfg.eval_begin;
    if (cfg.eval_end.has_value()) cv["eval_end"] = *cfg.eval_end;

    json root{{"data", std::move(data)},
              {"models", std::move(models)},
              {"cv", std::move(cv)},
              {"out_dir", cfg.out_dir}};
    if (cfg.forecast_day >= 0) root["forecast_day"] = cfg.forecast_day;
    return root;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw lf::Error(lf::ErrorKind::io, "cannot read '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw lf::Error(lf::ErrorKind::io, "cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw lf::Error(lf::ErrorKind::io, "failed writing '" + path.string() + "'");
}

Dataset load_dataset(const RunConfig& cfg) {
    if (cfg.csv_path.has_value()) {
        const std::string text = read_file(*cfg.csv_path);
        Dataset ds{lf::fill_missing(lf::load_csv(text), cfg.fill_policy), std::nullopt};
        try {
            ds.weather = lf::load_weather_csv(text);
        } catch (const lf::Error&) {
            // No weather columns: weather-dependent models will report it.
        }
        return ds;
    }
    lf::SynthOutput out = lf::generate(cfg.synth);
    return {lf::aggregate_community(out.buildings), std::move(out.weather)};
}

std::vector<std::unique_ptr<lf::ForecastModel>> build_models(const RunConfig& cfg,
                                                             const lf::LoadSeries& data) {
    std::vector<ModelSpec> specs = cfg.models;
    if (specs.empty())
        for (const char* id : {"n_same_days", "n_days", "hw", "sarima", "par", "par_w", "spr",
                               "gam_fourier"})
            specs.push_back({id, json::object()});

    std::vector<std::unique_ptr<lf::ForecastModel>> models;
    for (const ModelSpec& spec : specs) {
        if (spec.id == "oracle")
            models.push_back(lf::make_oracle_model(data));
        else
            models.push_back(lf::make_model(spec.id, spec.params));
    }
    return models;
}

void write_manifest(const RunConfig& cfg, const Dataset& ds, const std::string& subcommand) {
    std::map<std::string, std::string> entries;
    entries["run"] = subcommand;
    entries["config"] = effective_config(cfg).dump();
    entries["data.hash"] = [&] {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx",
                      static_cast<unsigned long long>(lf::series_hash(ds.load)));
        return std::string(buf);
    }();
    entries["data.days"] = std::to_string(ds.load.num_days());
    entries["data.start_date"] = lf::format_date(ds.load.start_date());
    if (ds.weather.has_value()) {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx",
                      static_cast<unsigned long long>(lf::weather_hash(*ds.weather)));
        entries["weather.hash"] = buf;
    }
    write_file(fs::path(cfg.out_dir) / "manifest.txt", lf::render_manifest(entries));
}

int run_synth(const RunConfig& cfg) {
    if (cfg.csv_path.has_value())
        throw lf::Error(lf::ErrorKind::usage, "synth generates data; configure a synth block, not a csv");
    const lf::SynthOutput out = lf::generate(cfg.synth);
    const lf::LoadSeries community = lf::aggregate_community(out.buildings);

    fs::create_directories(cfg.out_dir);
    write_file(fs::path(cfg.out_dir) / "community.csv", lf::write_csv(community, &out.weather));
    for (std::size_t i = 0; i < out.buildings.size(); ++i)
        write_file(fs::path(cfg.out_dir) / ("building_" + std::to_string(i) + ".csv"),
                   lf::write_csv(out.buildings[i]));
    write_manifest(cfg, {community, out.weather}, "synth");

    std::cout << "wrote " << out.buildings.size() << " building series and community.csv ("
              << community.num_days() << " days) to " << cfg.out_dir << "\n";
    return 0;
}

int run_fit(const RunConfig& cfg) {
    const Dataset ds = load_dataset(cfg);
    if (ds.load.num_days() < cfg.train_days)
        throw lf::Error(lf::ErrorKind::coverage,
                        "data has " + std::to_string(ds.load.num_days()) +
                            " days but train_days is " + std::to_string(cfg.train_days));
    const int end = ds.load.num_days();
    const lf::LoadSeries window = lf::slice_days(ds.load, end - cfg.train_days, end);
    std::optional<lf::WeatherSeries> weather;
    if (ds.weather.has_value())
        weather = lf::slice_days(*ds.weather, end - cfg.train_days, end);

    fs::create_directories(cfg.out_dir);
    auto models = build_models(cfg, ds.load);
    for (const auto& model : models) {
        if (!model->needs_fit()) {
            std::cout << model->id() << ": stateless, nothing to save\n";
            continue;
        }
        model->fit(window, weather.has_value() ? &*weather : nullptr);
        bool wrote = false;
        if (const auto ckpt = model->checkpoint(); ckpt.has_value()) {
            const fs::path path = fs::path(cfg.out_dir) / (model->id() + ".ckpt");
            lf::save_checkpoint(path.string(), *ckpt);
            std::cout << model->id() << ": wrote " << path.string() << "\n";
            wrote = true;
        }
        if (const std::string summary = model->fitted_summary(); summary != "{}") {
            const fs::path path = fs::path(cfg.out_dir) / (model->id() + "_params.json");
            write_file(path, summary + "\n");
            std::cout << model->id() << ": wrote " << path.string() << "\n";
            wrote = true;
        }
        if (!wrote) std::cout << model->id() << ": fitted\n";
    }
    write_manifest(cfg, ds, "fit");
    return 0;
}

int run_forecast(const RunConfig& cfg) {
    const Dataset ds = load_dataset(cfg);
    const int d = cfg.forecast_day >= 0 ? cfg.forecast_day : ds.load.num_days();
    if (d < cfg.train_days || d > ds.load.num_days())
        throw lf::Error(lf::ErrorKind::range,
                        "forecast day " + std::to_string(d) + " needs a full training window "
                        "inside the data (valid: " + std::to_string(cfg.train_days) + ".." +
                            std::to_string(ds.load.num_days()) + ")");

    const lf::LoadSeries window = lf::slice_days(ds.load, d - cfg.train_days, d);
    std::optional<lf::WeatherSeries> weather;
    if (ds.weather.has_value()) {
        const int weather_days =
            static_cast<int>(ds.weather->solar_wm2.size()) / lf::kSamplesPerDay;
        weather = lf::slice_days(*ds.weather, d - cfg.train_days, std::min(d + 1, weather_days));
    }
    const lf::WeatherSeries* weather_ptr = weather.has_value() ? &*weather : nullptr;

    fs::create_directories(cfg.out_dir);
    auto models = build_models(cfg, ds.load);
    int wrote = 0;
    for (const auto& model : models) {
        try {
            if (model->needs_fit()) model->fit(window, weather_ptr);
            lf::DayForecast f = model->forecast(window, weather_ptr);
            f.model_id = model->id();
            f.origin_day = d - 1;
            f.target_day = d;

            std::string csv = "slot,timestamp,forecast_kw\n";
            for (int t = 0; t < lf::kSamplesPerDay; ++t) {
                const std::int64_t epoch =
                    ds.load.start_epoch_s +
                    (static_cast<std::int64_t>(d) * lf::kSamplesPerDay + t) * lf::kSlotSeconds;
                char value[32];
                std::snprintf(value, sizeof value, "%.17g", f.values[t]);
                csv += std::to_string(t) + "," + lf::format_iso8601_utc(epoch) + "," + value + "\n";
            }
            const std::string stem = "forecast_" + model->id() + "_day" + std::to_string(d);
            write_file(fs::path(cfg.out_dir) / (stem + ".csv"), csv);

            if (d < ds.load.num_days()) {
                const lf::DayProfile actual = lf::day_slice(ds.load, d);
                write_file(fs::path(cfg.out_dir) / (stem + ".svg"),
                           lf::render_overlay_svg(f, actual.values));
                std::cout << model->id() << ": day " << d
                          << " RMSE = " << lf::rmse(f.values, actual.values) << " kW\n";
            } else {
                std::cout << model->id() << ": wrote day-ahead forecast for day " << d << "\n";
            }
            ++wrote;
        } catch (const std::exception& ex) {
            std::cerr << "warning: " << model->id() << " failed: " << ex.what() << "\n";
        }
    }
    write_manifest(cfg, ds, "forecast");
    if (wrote == 0)
        throw lf::Error(lf::ErrorKind::validation, "every model failed to produce a forecast");
    return 0;
}

json report_to_json(const lf::EvalReport& r) {
    json daily = json::array();
    for (const auto& e : r.daily_rmse) daily.push_back({{"day", e.day}, {"rmse", e.rmse}});
    json failures = json::array();
    for (const auto& [day, message] : r.failures)
        failures.push_back({{"day", day}, {"message", message}});
    json j{{"model_id", r.model_id},
           {"mean_load", r.mean_load},
           {"daily_rmse", std::move(daily)},
           {"running_avg_rmse", r.running_avg_rmse},
           {"failures", std::move(failures)},
           {"config_manifest", r.config_manifest}};
    if (std::isnan(r.relative_rmse))
        j["relative_rmse"] = nullptr;
    else
        j["relative_rmse"] = r.relative_rmse;
    return j;
}

lf::EvalReport report_from_json(const json& j, const std::string& path) {
    if (!j.is_object()) config_error(path, "must be an object");
    lf::EvalReport r;
    r.model_id = as_str(j.at("model_id"), path + ".model_id");
    r.mean_load = as_real(j.at("mean_load"), path + ".mean_load");
    const json& rel = j.at("relative_rmse");
    r.relative_rmse =
        rel.is_null() ? std::numeric_limits<double>::quiet_NaN() : as_real(rel, path);
    for (const json& e : j.at("daily_rmse"))
        r.daily_rmse.push_back({as_int(e.at("day"), path), as_real(e.at("rmse"), path)});
    for (const json& v : j.at("running_avg_rmse")) r.running_avg_rmse.push_back(as_real(v, path));
    for (const json& f : j.at("failures"))
        r.failures.emplace_back(as_int(f.at("day"), path), as_str(f.at("message"), path));
    for (auto it = j.at("config_manifest").begin(); it != j.at("config_manifest").end(); ++it)
        r.config_manifest[it.key()] = as_str(it.value(), path + ".config_manifest");
    return r;
}

void write_report_artifacts(const std::vector<lf::EvalReport>& reports,
                            const std::string& out_dir) {
    write_file(fs::path(out_dir) / "report.csv",
               lf::render_report(reports, lf::ReportFormat::csv));
    write_file(fs::path(out_dir) / "report.txt",
               lf::render_report(reports, lf::ReportFormat::text_table));
    write_file(fs::path(out_dir) / "report.svg",
               lf::render_report(reports, lf::ReportFormat::svg_plot));
}

int run_evaluate(const RunConfig& cfg) {
    const Dataset ds = load_dataset(cfg);
    lf::RollingCvConfig cv;
    cv.train_days = cfg.train_days;
    cv.eval_begin = cfg.eval_begin.value_or(cfg.train_days);
    cv.eval_end = cfg.eval_end.value_or(ds.load.num_days());
    cv.refit_every = cfg.refit_every;

    auto models = build_models(cfg, ds.load);
    const auto reports =
        lf::rolling_cv(models, ds.load, ds.weather.has_value() ? &*ds.weather : nullptr, cv);

    fs::create_directories(cfg.out_dir);
    json out = json::array();
    for (const auto& r : reports) out.push_back(report_to_json(r));
    write_file(fs::path(cfg.out_dir) / "reports.json", out.dump(2) + "\n");
    write_report_artifacts(reports, cfg.out_dir);
    write_manifest(cfg, ds, "evaluate");

    std::cout << lf::render_report(reports, lf::ReportFormat::text_table);
    return 0;
}

int run_report(const RunConfig& cfg, const std::string& reports_path) {
    const std::string path =
        reports_path.empty() ? (fs::path(cfg.out_dir) / "reports.json").string() : reports_path;
    json parsed;
    try {
        parsed = json::parse(read_file(path));
    } catch (const json::exception& ex) {
        throw lf::Error(lf::ErrorKind::schema,
                        "cannot parse reports file '" + path + "': " + ex.what());
    }
    if (!parsed.is_array())
        throw lf::Error(lf::ErrorKind::schema, "reports file must hold a JSON array");
    std::vector<lf::EvalReport> reports;
    for (std::size_t i = 0; i < parsed.size(); ++i)
        reports.push_back(report_from_json(parsed[i], "[" + std::to_string(i) + "]"));

    fs::create_directories(cfg.out_dir);
    write_report_artifacts(reports, cfg.out_dir);
    std::cout << lf::render_report(reports, lf::ReportFormat::text_table);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"day-ahead community load forecasting toolkit"};
    app.require_subcommand(1);
    app.fallthrough();  // let global options appear after the subcommand

    std::string config_path;
    std::string out_dir;
    std::string models_csv;
    std::string reports_path;
    int seed = -1;
    int train_days = -1;
    int eval_begin = -1;
    int eval_end = -1;
    int refit_every = -1;
    int forecast_day = -1;

    app.add_option("--config", config_path, "JSON configuration file");
    app.add_option("--out", out_dir, "output directory (default: out)");
    app.add_option("--seed", seed, "synthetic data seed override");
    app.add_option("--train-days", train_days, "trailing training window in days");
    app.add_option("--models", models_csv, "comma-separated model ids (default parameters)");

    CLI::App* synth_cmd = app.add_subcommand("synth", "generate a synthetic dataset as CSV");
    CLI::App* fit_cmd =
        app.add_subcommand("fit", "fit models on the trailing window and save parameters");
    CLI::App* forecast_cmd =
        app.add_subcommand("forecast", "write 96-slot day-ahead forecasts for one day");
    forecast_cmd->add_option("--day", forecast_day, "target day index (default: after data end)");
    CLI::App* evaluate_cmd =
        app.add_subcommand("evaluate", "rolling-origin day-ahead cross-validation");
    evaluate_cmd->add_option("--eval-begin", eval_begin, "first target day");
    evaluate_cmd->add_option("--eval-end", eval_end, "one past the last target day");
    evaluate_cmd->add_option("--refit-every", refit_every, "days between refits (default 7)");
    CLI::App* report_cmd = app.add_subcommand("report", "re-render table and plots from reports");
    report_cmd->add_option("--reports", reports_path, "reports.json path (default: <out>/reports.json)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        RunConfig cfg;
        if (!config_path.empty()) {
            json root;
            try {
                root = json::parse(read_file(config_path));
            } catch (const json::exception& ex) {
                throw lf::Error(lf::ErrorKind::schema, "cannot parse config '" + config_path +
                                                           "': " + ex.what());
            }
            cfg = parse_config(root);
        }

        // Flags win over the config file.
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (seed >= 0) cfg.synth.seed = static_cast<std::uint64_t>(seed);
        if (train_days >= 0) cfg.train_days = train_days;
        if (eval_begin >= 0) cfg.eval_begin = eval_begin;
        if (eval_end >= 0) cfg.eval_end = eval_end;
        if (refit_every >= 0) cfg.refit_every = refit_every;
        if (forecast_day >= 0) cfg.forecast_day = forecast_day;
        if (!models_csv.empty()) {
            cfg.models.clear();
            std::size_t start = 0;
            while (start <= models_csv.size()) {
                const std::size_t comma = models_csv.find(',', start);
                const std::string id =
                    models_csv.substr(start, comma == std::string::npos ? std::string::npos
                                                                        : comma - start);
                if (!id.empty()) cfg.models.push_back({id, json::object()});
                if (comma == std::string::npos) break;
                start = comma + 1;
            }
        }

        if (synth_cmd->parsed()) return run_synth(cfg);
        if (fit_cmd->parsed()) return run_fit(cfg);
        if (forecast_cmd->parsed()) return run_forecast(cfg);
        if (evaluate_cmd->parsed()) return run_evaluate(cfg);
        if (report_cmd->parsed()) return run_report(cfg, reports_path);
        throw lf::Error(lf::ErrorKind::usage, "no subcommand given");
    } catch (const lf::Error& e) {
        std::cerr << "error: [" << lf::to_string(e.kind()) << "] " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: [internal] " << e.what() << "\n";
        return 1;
    }
}
