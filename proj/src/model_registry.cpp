#include "lf/model_registry.hpp"

#include <utility>

#include "lf/errors.hpp"
#include "lf/gam.hpp"
#include "lf/holt_winters.hpp"
#include "lf/neural.hpp"
#include "lf/persistence.hpp"
#include "lf/regression.hpp"
#include "lf/sarima.hpp"

namespace lf {

namespace {

using nlohmann::json;

[[noreturn]] void bad_param(const std::string& id, const std::string& key,
                            const std::string& what) {
    throw Error(ErrorKind::validation, "model '" + id + "': parameter '" + key + "' " + what);
}

void reject_unknown(const json& params, const std::string& id,
                    std::initializer_list<const char*> allowed) {
    if (!params.is_object())
        throw Error(ErrorKind::validation, "model '" + id + "': parameters must be a JSON object");
    for (auto it = params.begin(); it != params.end(); ++it) {
        bool known = false;
        for (const char* k : allowed) known = known || it.key() == k;
        if (!known)
            throw Error(ErrorKind::validation,
                        "model '" + id + "' does not take parameter '" + it.key() + "'");
    }
}

int get_int(const json& params, const std::string& id, const char* key, int def, int min_value) {
    if (!params.contains(key)) return def;
    const json& v = params.at(key);
    if (!v.is_number_integer()) bad_param(id, key, "must be an integer");
    const int n = v.get<int>();
    if (n < min_value) bad_param(id, key, "must be at least " + std::to_string(min_value));
    return n;
}

double get_real(const json& params, const std::string& id, const char* key, double def,
                double min_value) {
    if (!params.contains(key)) return def;
    const json& v = params.at(key);
    if (!v.is_number()) bad_param(id, key, "must be a number");
    const double x = v.get<double>();
    if (!(x >= min_value)) bad_param(id, key, "must be at least " + std::to_string(min_value));
    return x;
}

bool get_bool(const json& params, const std::string& id, const char* key, bool def) {
    if (!params.contains(key)) return def;
    const json& v = params.at(key);
    if (!v.is_boolean()) bad_param(id, key, "must be a boolean");
    return v.get<bool>();
}

std::string get_string(const json& params, const std::string& id, const char* key,
                       const std::string& def) {
    if (!params.contains(key)) return def;
    const json& v = params.at(key);
    if (!v.is_string()) bad_param(id, key, "must be a string");
    return v.get<std::string>();
}

std::vector<int> get_int_array(const json& params, const std::string& id, const char* key,
                               std::vector<int> def) {
    if (!params.contains(key)) return def;
    const json& v = params.at(key);
    if (!v.is_array()) bad_param(id, key, "must be an array of integers");
    std::vector<int> out;
    for (const json& e : v) {
        if (!e.is_number_integer()) bad_param(id, key, "must be an array of integers");
        const int n = e.get<int>();
        if (n < 1) bad_param(id, key, "entries must be positive");
        out.push_back(n);
    }
    return out;
}

// Common scaffolding: the effective-config echo and the fitted flag.
class AdapterBase : public ForecastModel {
public:
    explicit AdapterBase(json effective) : effective_(std::move(effective)) {}

    std::string config_summary() const override { return effective_.dump(); }

protected:
    void require_fitted(const char* id) const {
        if (!fitted_)
            throw Error(ErrorKind::validation, std::string(id) + " model has not been fitted");
    }

    json effective_;
    bool fitted_ = false;
};

class PersistenceAdapter final : public AdapterBase {
public:
    PersistenceAdapter(std::string id, PersistenceConfig config, json effective)
        : AdapterBase(std::move(effective)), id_(std::move(id)), config_(config) {}

    std::string id() const override { return id_; }
    bool needs_fit() const override { return false; }
    void fit(const LoadSeries&, const WeatherSeries*) override {}

    DayForecast forecast(const LoadSeries& window, const WeatherSeries*) override {
        return forecast_persistence(window, config_, window.num_days());
    }

private:
    std::string id_;
    PersistenceConfig config_;
};

class HwAdapter final : public AdapterBase {
public:
    HwAdapter(int period, json effective) : AdapterBase(std::move(effective)), period_(period) {}

    std::string id() const override { return "hw"; }

    std::string fitted_summary() const override {
        if (!fitted_) return "{}";
        return json{{"alpha", params_.alpha},
                    {"beta", params_.beta},
                    {"gamma", params_.gamma},
                    {"period", params_.period}}
            .dump();
    }

    void fit(const LoadSeries& window, const WeatherSeries*) override {
        params_ = hw_fit(window, period_);
        fitted_ = true;
    }

    DayForecast forecast(const LoadSeries& window, const WeatherSeries*) override {
        require_fitted("hw");
        HwState state = hw_init(window, params_);
        for (double y : window.values) state = hw_step(state, params_, y);
        return hw_forecast(state, params_, kSamplesPerDay);
    }

private:
    int period_;
    HwParams params_;
};

class SarimaAdapter final : public AdapterBase {
public:
    SarimaAdapter(SarimaOrder order, SarimaFitConfig fit_config, json effective)
        : AdapterBase(std::move(effective)), order_(order), fit_config_(fit_config) {}

    std::string id() const override { return "sarima"; }

    std::string fitted_summary() const override {
        if (!fitted_) return "{}";
        return json{{"ar", params_.ar},       {"ma", params_.ma},
                    {"sar", params_.sar},     {"sma", params_.sma},
                    {"intercept", params_.intercept}, {"sigma2", params_.sigma2},
                    {"converged", params_.converged}, {"warnings", params_.warnings}}
            .dump();
    }

    void fit(const LoadSeries& window, const WeatherSeries*) override {
        params_ = fit_sarima(window, order_, fit_config_);
        fitted_ = true;
    }

    DayForecast forecast(const LoadSeries& window, const WeatherSeries*) override {
        require_fitted("sarima");
        return forecast_sarima(params_, window, kSamplesPerDay);
    }

private:
    SarimaOrder order_;
    SarimaFitConfig fit_config_;
    SarimaParams params_;
};

class ParAdapter final : public AdapterBase {
public:
    ParAdapter(std::string id, ParConfig config, bool with_weather, json effective)
        : AdapterBase(std::move(effective)),
          id_(std::move(id)),
          config_(config),
          with_weather_(with_weather) {}

    std::string id() const override { return id_; }

    std::string fitted_summary() const override {
        if (!fitted_) return "{}";
        json j{{"ar", weights_.ar}, {"persistence", weights_.persistence}};
        if (weights_.solar.has_value()) j["solar"] = *weights_.solar;
        if (weights_.temperature.has_value()) j["temperature"] = *weights_.temperature;
        return j.dump();
    }

    void fit(const LoadSeries& window, const WeatherSeries* weather) override {
        if (with_weather_) {
            if (weather == nullptr)
                throw Error(ErrorKind::input, "par_w needs a weather series to fit");
            weights_ = fit_par_w(window, *weather, config_);
        } else {
            weights_ = fit_par(window, config_);
        }
        fitted_ = true;
    }

    DayForecast forecast(const LoadSeries& window, const WeatherSeries* weather) override {
        require_fitted(id_.c_str());
        if (with_weather_) {
            if (weather == nullptr)
                throw Error(ErrorKind::input, "par_w needs a day-ahead weather forecast");
            return forecast_par_w(weights_, window, *weather, window.num_days());
        }
        return forecast_par(weights_, window, window.num_days());
    }

private:
    std::string id_;
    ParConfig config_;
    bool with_weather_;
    ParWeights weights_;
};

class SprAdapter final : public AdapterBase {
public:
    SprAdapter(SprConfig config, json effective)
        : AdapterBase(std::move(effective)), config_(config) {}

    std::string id() const override { return "spr"; }

    std::string fitted_summary() const override {
        if (!fitted_) return "{}";
        return json{{"a", std::vector<double>(weights_.a.begin(), weights_.a.end())}}.dump();
    }

    void fit(const LoadSeries& window, const WeatherSeries*) override {
        weights_ = fit_spr(window, window.calendar(), config_);
        fitted_ = true;
    }

    DayForecast forecast(const LoadSeries& window, const WeatherSeries*) override {
        require_fitted("spr");
        return forecast_spr(weights_, window, window.calendar(), window.num_days(),
                            config_.windows);
    }

private:
    SprConfig config_;
    SprWeights weights_;
};

// The neural twin of spr: the same 15 features per slot, regressed by a
// small MLP instead of a linear layer.
class SpnnAdapter final : public AdapterBase {
public:
    SpnnAdapter(MlpTrainConfig config, json effective)
        : AdapterBase(std::move(effective)), config_(config) {}

    std::string id() const override { return "spnn"; }

    std::optional<Checkpoint> checkpoint() const override {
        if (!fitted_) return std::nullopt;
        return to_checkpoint(params_);
    }

    void fit(const LoadSeries& window, const WeatherSeries*) override {
        const int days = window.num_days();
        if (days < 9)
            throw Error(ErrorKind::history, "spnn needs at least 9 training days, got " +
                                                std::to_string(days));
        const Calendar calendar = window.calendar();
        std::vector<std::vector<double>> rows;
        std::vector<double> targets;
        rows.reserve(static_cast<std::size_t>(days - 8) * kSamplesPerDay);
        for (int d = 8; d < days; ++d)
            for (int t = 0; t < kSamplesPerDay; ++t) {
                const auto f = build_spr_features(window, calendar, d, t, windows_);
                rows.emplace_back(f.begin(), f.end());
                targets.push_back(window.values[d * kSamplesPerDay + t]);
            }
        params_ = mlp_train(rows, targets, config_);
        fitted_ = true;
    }

    DayForecast forecast(const LoadSeries& window, const WeatherSeries*) override {
        require_fitted("spnn");
        const int d = window.num_days();
        const Calendar calendar = window.calendar();
        DayForecast out;
        out.model_id = "spnn";
        out.origin_day = d - 1;
        out.target_day = d;
        out.values.reserve(kSamplesPerDay);
        for (int t = 0; t < kSamplesPerDay; ++t) {
            const auto f = build_spr_features(window, calendar, d, t, windows_);
            out.values.push_back(mlp_forward(params_, std::span<const double>(f)));
        }
        return out;
    }

private:
    MlpTrainConfig config_;
    SprWindowConfig windows_;
    MlpParams params_;
};

class LstmAdapter final : public AdapterBase {
public:
    LstmAdapter(LstmConfig config, json effective)
        : AdapterBase(std::move(effective)), config_(config) {}

    std::string id() const override { return "lstm"; }

    std::optional<Checkpoint> checkpoint() const override {
        if (!fitted_) return std::nullopt;
        return to_checkpoint(params_);
    }

    void fit(const LoadSeries& window, const WeatherSeries*) override {
        params_ = lstm_train(window, config_);
        fitted_ = true;
    }

    DayForecast forecast(const LoadSeries& window, const WeatherSeries*) override {
        require_fitted("lstm");
        return lstm_forecast(params_, window, window.num_days());
    }

private:
    LstmConfig config_;
    LstmParams params_;
};

class GamAdapter final : public AdapterBase {
public:
    GamAdapter(GamConfig config, json effective)
        : AdapterBase(std::move(effective)), config_(std::move(config)) {}

    std::string id() const override { return "gam_fourier"; }

    std::string fitted_summary() const override {
        if (!fitted_) return "{}";
        json fourier = json::array();
        for (const auto& season : params_.fourier_coeffs) {
            json coeffs = json::array();
            for (const auto& [a, b] : season) coeffs.push_back(json::array({a, b}));
            fourier.push_back(std::move(coeffs));
        }
        return json{{"intercept", params_.intercept},
                    {"slope", params_.slope},
                    {"fourier", std::move(fourier)},
                    {"noise_sd", params_.noise_sd}}
            .dump();
    }

    void fit(const LoadSeries& window, const WeatherSeries*) override {
        params_ = fit_gam(window, config_);
        fit_start_day_ = window.start_epoch_s / 86400;
        fitted_ = true;
    }

    DayForecast forecast(const LoadSeries& window, const WeatherSeries*) override {
        require_fitted("gam_fourier");
        // The fitted trend and phases live on the fit window's clock; map the
        // sliding window's target back into that frame.
        const std::int64_t delta_days = window.start_epoch_s / 86400 - fit_start_day_;
        return forecast_gam(params_, config_,
                            window.num_days() + static_cast<int>(delta_days));
    }

private:
    GamConfig config_;
    GamParams params_;
    std::int64_t fit_start_day_ = 0;
};

std::unique_ptr<ForecastModel> make_persistence(const std::string& id, const json& params,
                                                PersistenceVariant variant, int default_n) {
    reject_unknown(params, id, {"n"});
    PersistenceConfig config;
    config.variant = variant;
    config.n = get_int(params, id, "n", default_n, 1);
    json eff{{"n", config.n}};
    return std::make_unique<PersistenceAdapter>(id, config, std::move(eff));
}

std::unique_ptr<ForecastModel> make_hw(const json& params) {
    reject_unknown(params, "hw", {"period"});
    const int period = get_int(params, "hw", "period", kSamplesPerDay, 2);
    json eff{{"period", period}};
    return std::make_unique<HwAdapter>(period, std::move(eff));
}

std::unique_ptr<ForecastModel> make_sarima(const json& params) {
    reject_unknown(params, "sarima", {"p", "d", "q", "P", "D", "Q", "S", "window_cap_days"});
    SarimaOrder order;
    order.p = get_int(params, "sarima", "p", 1, 0);
    order.d = get_int(params, "sarima", "d", 0, 0);
    order.q = get_int(params, "sarima", "q", 0, 0);
    order.P = get_int(params, "sarima", "P", 0, 0);
    order.D = get_int(params, "sarima", "D", 1, 0);
    order.Q = get_int(params, "sarima", "Q", 0, 0);
    order.S = get_int(params, "sarima", "S", kSamplesPerDay, 1);
    SarimaFitConfig fit_config;
    fit_config.s96_window_cap_days =
        get_int(params, "sarima", "window_cap_days", fit_config.s96_window_cap_days, 1);
    json eff{{"p", order.p}, {"d", order.d}, {"q", order.q},
             {"P", order.P}, {"D", order.D}, {"Q", order.Q},
             {"S", order.S}, {"window_cap_days", fit_config.s96_window_cap_days}};
    return std::make_unique<SarimaAdapter>(order, fit_config, std::move(eff));
}

PersistenceVariant parse_variant(const std::string& id, const std::string& text) {
    if (text == "consecutive") return PersistenceVariant::consecutive_days;
    if (text == "same_days") return PersistenceVariant::same_days;
    bad_param(id, "pm_variant", "must be \"consecutive\" or \"same_days\"");
}

std::unique_ptr<ForecastModel> make_par(const std::string& id, const json& params,
                                        bool with_weather) {
    if (with_weather)
        reject_unknown(params, id,
                       {"n_lags", "pm_n", "pm_variant", "ridge", "use_temperature"});
    else
        reject_unknown(params, id, {"n_lags", "pm_n", "pm_variant", "ridge"});
    ParConfig config;
    config.n_lags = get_int(params, id, "n_lags", config.n_lags, 1);
    const std::string variant = get_string(params, id, "pm_variant", "consecutive");
    config.pm.variant = parse_variant(id, variant);
    config.pm.n = get_int(params, id, "pm_n", config.pm.n, 1);
    config.ridge = get_real(params, id, "ridge", config.ridge, 0.0);
    if (with_weather) config.use_temperature = get_bool(params, id, "use_temperature", false);
    json eff{{"n_lags", config.n_lags},
             {"pm_n", config.pm.n},
             {"pm_variant", variant},
             {"ridge", config.ridge}};
    if (with_weather) eff["use_temperature"] = config.use_temperature;
    return std::make_unique<ParAdapter>(id, config, with_weather, std::move(eff));
}

std::unique_ptr<ForecastModel> make_spr(const json& params) {
    reject_unknown(params, "spr", {"ridge"});
    SprConfig config;
    config.ridge = get_real(params, "spr", "ridge", config.ridge, 0.0);
    json eff{{"ridge", config.ridge}};
    return std::make_unique<SprAdapter>(config, std::move(eff));
}

Activation parse_activation(const std::string& id, const std::string& text) {
    if (text == "tanh") return Activation::tanh;
    if (text == "relu") return Activation::relu;
    bad_param(id, "activation", "must be \"tanh\" or \"relu\"");
}

std::unique_ptr<ForecastModel> make_spnn(const json& params) {
    reject_unknown(params, "spnn", {"hidden", "epochs", "learning_rate", "seed", "activation"});
    MlpTrainConfig config;
    config.hidden_sizes = get_int_array(params, "spnn", "hidden", config.hidden_sizes);
    config.epochs = get_int(params, "spnn", "epochs", config.epochs, 1);
    config.learning_rate = get_real(params, "spnn", "learning_rate", config.learning_rate, 0.0);
    config.seed = static_cast<std::uint64_t>(get_int(params, "spnn", "seed", 1, 0));
    const std::string activation = get_string(params, "spnn", "activation", "tanh");
    config.activation = parse_activation("spnn", activation);
    json eff{{"hidden", config.hidden_sizes},
             {"epochs", config.epochs},
             {"learning_rate", config.learning_rate},
             {"seed", params.contains("seed") ? params.at("seed").get<int>() : 1},
             {"activation", activation}};
    return std::make_unique<SpnnAdapter>(config, std::move(eff));
}

std::unique_ptr<ForecastModel> make_lstm(const json& params) {
    reject_unknown(params, "lstm",
                   {"hidden", "input_days", "epochs", "batch_size", "learning_rate", "seed"});
    LstmConfig config;
    config.hidden_sizes = get_int_array(params, "lstm", "hidden", config.hidden_sizes);
    config.input_days = get_int(params, "lstm", "input_days", config.input_days, 1);
    config.epochs = get_int(params, "lstm", "epochs", config.epochs, 1);
    config.batch_size = get_int(params, "lstm", "batch_size", config.batch_size, 1);
    config.learning_rate = get_real(params, "lstm", "learning_rate", config.learning_rate, 0.0);
    config.seed = static_cast<std::uint64_t>(get_int(params, "lstm", "seed", 1, 0));
    json eff{{"hidden", config.hidden_sizes},
             {"input_days", config.input_days},
             {"epochs", config.epochs},
             {"batch_size", config.batch_size},
             {"learning_rate", config.learning_rate},
             {"seed", params.contains("seed") ? params.at("seed").get<int>() : 1}};
    return std::make_unique<LstmAdapter>(config, std::move(eff));
}

std::unique_ptr<ForecastModel> make_gam(const json& params) {
    reject_unknown(params, "gam_fourier", {"daily_order", "weekly_order", "ridge"});
    const int daily = get_int(params, "gam_fourier", "daily_order", 10, 0);
    const int weekly = get_int(params, "gam_fourier", "weekly_order", 3, 0);
    GamConfig config;
    config.fourier_orders.clear();
    if (daily > 0) config.fourier_orders.emplace_back(kSamplesPerDay, daily);
    if (weekly > 0) config.fourier_orders.emplace_back(7 * kSamplesPerDay, weekly);
    config.ridge = get_real(params, "gam_fourier", "ridge", 0.0, 0.0);
    json eff{{"daily_order", daily}, {"weekly_order", weekly}, {"ridge", config.ridge}};
    return std::make_unique<GamAdapter>(std::move(config), std::move(eff));
}

}  // namespace

const std::vector<std::string>& known_model_ids() {
    static const std::vector<std::string> ids = {"n_same_days", "n_days", "hw",   "sarima",
                                                 "par",         "par_w",  "spr",  "spnn",
                                                 "lstm",        "gam_fourier"};
    return ids;
}

std::unique_ptr<ForecastModel> make_model(const std::string& id, const nlohmann::json& params) {
    if (id == "n_same_days")
        return make_persistence(id, params, PersistenceVariant::same_days, 4);
    if (id == "n_days") return make_persistence(id, params, PersistenceVariant::consecutive_days, 3);
    if (id == "hw") return make_hw(params);
    if (id == "sarima") return make_sarima(params);
    if (id == "par") return make_par(id, params, false);
    if (id == "par_w") return make_par(id, params, true);
    if (id == "spr") return make_spr(params);
    if (id == "spnn") return make_spnn(params);
    if (id == "lstm") return make_lstm(params);
    if (id == "gam_fourier") return make_gam(params);

    std::string valid;
    for (const std::string& known : known_model_ids()) {
        if (!valid.empty()) valid += ", ";
        valid += known;
    }
    throw Error(ErrorKind::usage, "unknown model id '" + id + "'; valid ids: " + valid);
}

}  // namespace lf
