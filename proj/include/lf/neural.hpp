#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lf/forecast.hpp"
#include "lf/linalg.hpp"
#include "lf/timeseries.hpp"

namespace lf {

// From-scratch neural models: a small feed-forward regressor over engineered
// feature rows (model id `spnn`) and a stacked LSTM sequence model over raw
// day vectors (model id `lstm`). Training is single-threaded and fully
// deterministic for a fixed seed: weights initialize from one SplitMix64
// stream (uniform in +-1/sqrt(fan_in), biases zero) and mini-batch order
// comes from a seeded permutation, so two runs with the same data and seed
// produce bit-identical parameters.

enum class Activation { tanh, relu };

// ---------------------------------------------------------------------------
// Feed-forward regressor

// Fully-connected layers with a shared hidden activation and an identity
// output. layer_sizes runs input..output, e.g. {15, 32, 1}; weights[l] has
// shape layer_sizes[l+1] x layer_sizes[l].
struct MlpParams {
    std::vector<int> layer_sizes;
    std::vector<Matrix> weights;
    std::vector<std::vector<double>> biases;
    Activation activation = Activation::tanh;
    std::vector<double> epoch_losses;  // training-curve record, one MSE per epoch
};

struct MlpTrainConfig {
    std::vector<int> hidden_sizes{32};
    Activation activation = Activation::tanh;
    int epochs = 500;
    double learning_rate = 1e-3;
    std::uint64_t seed = 1;
};

// Seeded parameters for the given topology; throws a shape error unless the
// list has at least two entries, all positive.
MlpParams mlp_init(const std::vector<int>& layer_sizes, Activation activation,
                   std::uint64_t seed);

// Single scalar prediction. Throws a shape error if x does not match the
// input layer width.
double mlp_forward(const MlpParams& params, std::span<const double> x);

// Mean squared error of the network over a row set.
double mlp_loss(const MlpParams& params, const std::vector<std::vector<double>>& rows,
                const std::vector<double>& targets);

// Full-batch Adam on mean squared error with fixed row order. Throws an
// input error for empty or ragged rows and a numeric error (with a
// learning-rate hint) if the loss turns non-finite mid-run.
MlpParams mlp_train(const std::vector<std::vector<double>>& rows,
                    const std::vector<double>& targets, const MlpTrainConfig& config = {});

// Compares the analytic gradient of the row-set MSE with central finite
// differences (step 1e-5) over a random subsample of at most n_probes
// parameters and returns the worst relative disagreement. Entries where both
// gradients sit below 1e-6 in magnitude count as agreeing: at that scale the
// difference quotient is dominated by cancellation noise.
double mlp_grad_check(const MlpParams& params, const std::vector<std::vector<double>>& rows,
                      const std::vector<double>& targets, int n_probes = 100,
                      std::uint64_t seed = 1);

// ---------------------------------------------------------------------------
// Adam optimizer

// Moment accumulators over one flat parameter vector.
struct AdamState {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    long step = 0;
    std::vector<double> m;
    std::vector<double> v;
};

AdamState make_adam(std::size_t n_params, double learning_rate = 1e-3, double beta1 = 0.9,
                    double beta2 = 0.999, double epsilon = 1e-8);

// One optimizer step over the whole vector (bias-corrected). Throws a shape
// error if the spans disagree with the accumulators.
void adam_update(AdamState& state, std::span<double> params, std::span<const double> grads);

// ---------------------------------------------------------------------------
// LSTM

// One recurrent layer: four gate blocks acting on the concatenation
// [h_prev, x_t], each of shape hidden_size x (hidden_size + input_size).
struct LstmCell {
    int input_size = 0;
    int hidden_size = 0;
    Matrix w_f, w_i, w_c, w_o;
    std::vector<double> b_f, b_i, b_c, b_o;
};

// Zero-filled cell of the given shape.
LstmCell make_lstm_cell(int input_size, int hidden_size);

struct LstmStepState {
    std::vector<double> h;
    std::vector<double> c;
};

LstmStepState lstm_zero_state(int hidden_size);

// f = sigmoid(W_f [h,x] + b_f), i likewise, candidate = tanh(W_c [h,x] + b_c),
// c_t = f*c_prev + i*candidate, o = sigmoid(W_o [h,x] + b_o),
// h_t = o * tanh(c_t). Throws a shape error on any width mismatch.
LstmStepState lstm_cell_step(const LstmCell& cell, const LstmStepState& prev,
                             std::span<const double> x);

struct LstmConfig {
    std::vector<int> hidden_sizes{5 * kSamplesPerDay, 3 * kSamplesPerDay};
    int input_days = 10;   // sequence length, one 96-sample day vector per step
    int epochs = 40;
    int batch_size = 16;
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::uint64_t seed = 1;
};

// Stacked recurrent layers over the day-vector sequence; the final hidden
// state feeds a dense head that emits one 96-sample day. Inputs and targets
// are min-max normalized to [-1, 1] with statistics frozen from the training
// window, so a zero network decodes to the midpoint of the training range.
struct LstmParams {
    LstmConfig config;
    std::vector<LstmCell> layers;
    Matrix dense_w;              // kSamplesPerDay x hidden_sizes.back()
    std::vector<double> dense_b;
    double norm_min = 0.0;
    double norm_max = 1.0;
    std::vector<double> epoch_losses;  // normalized-space MSE per epoch
};

// Seeded (untrained) parameters for the configured topology. Normalization
// statistics stay at their defaults until training sets them.
LstmParams lstm_init(const LstmConfig& config = {});

// Sliding-window training: every run of input_days days predicts the next
// day, mini-batches in seeded-permutation order, Adam on normalized MSE.
// Throws a history error with fewer than input_days + 1 days, an input error
// on missing samples, and a numeric error (with a learning-rate hint) if the
// loss turns non-finite.
LstmParams lstm_train(const LoadSeries& data, const LstmConfig& config = {});

// Mean normalized-space MSE of the network over all sliding windows in
// `data`; the quantity lstm_train minimizes.
double lstm_loss(const LstmParams& params, const LoadSeries& data);

// Day-ahead forecast for day d from the previous input_days days. Requires
// input_days <= d <= history.num_days().
DayForecast lstm_forecast(const LstmParams& params, const LoadSeries& history, int d);

// Finite-difference check of backpropagation through time on the first
// sliding window of `data`; same sampling and relative-error convention as
// mlp_grad_check.
double lstm_grad_check(const LstmParams& params, const LoadSeries& data, int n_probes = 100,
                       std::uint64_t seed = 1);

// Same check for a single cell unrolled over the given input sequence from a
// zero initial state, with loss sum((h_T - target)^2).
double lstm_cell_grad_check(const LstmCell& cell, const std::vector<std::vector<double>>& xs,
                            const std::vector<double>& target, int n_probes = 100,
                            std::uint64_t seed = 1);

}  // namespace lf
