#pragma once

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "lf/evaluation.hpp"

namespace lf {

// Model ids the factory understands, in the catalogue's presentation order.
const std::vector<std::string>& known_model_ids();

// Builds a harness-ready model from its id and a JSON parameter object.
// Parameters not listed for the id are rejected, as are wrong types; every
// omitted parameter takes the documented default. The accepted keys are:
//
//   n_same_days  n (int, weeks averaged, default 4)
//   n_days       n (int, days averaged, default 3)
//   hw           period (int samples, default 96)
//   sarima       p,d,q,P,D,Q (ints, default order (1,0,0)(0,1,0)),
//                S (int samples, default 96), window_cap_days (int, default 14)
//   par          n_lags (int, default 4), pm_n (int, default 3),
//                pm_variant ("consecutive"|"same_days"), ridge (real)
//   par_w        as par, plus use_temperature (bool, default false)
//   spr          ridge (real, default 1e-8)
//   spnn         hidden (int array, default [32]), epochs (int, default 500),
//                learning_rate (real, default 1e-3), seed (int, default 1),
//                activation ("tanh"|"relu")
//   lstm         hidden (int array, default [480,288]), input_days (int,
//                default 10), epochs (int, default 40), batch_size (int,
//                default 16), learning_rate (real, default 1e-3), seed (int)
//   gam_fourier  daily_order (int, default 10), weekly_order (int, default 3),
//                ridge (real, default 0)
std::unique_ptr<ForecastModel> make_model(const std::string& id,
                                          const nlohmann::json& params = nlohmann::json::object());

}  // namespace lf
