#include "lf/neural.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>

#include "lf/errors.hpp"
#include "lf/rng.hpp"

namespace lf {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double activate(Activation a, double z) {
    return a == Activation::relu ? std::max(0.0, z) : std::tanh(z);
}

// Derivative expressed through the post-activation value, which both
// supported activations admit (tanh' = 1 - a^2, relu' = [a > 0]).
double activate_grad(Activation a, double out) {
    return a == Activation::relu ? (out > 0.0 ? 1.0 : 0.0) : 1.0 - out * out;
}

void check_finite_rows(const std::vector<std::vector<double>>& rows,
                       const std::vector<double>& targets) {
    if (rows.empty())
        throw Error(ErrorKind::input, "training set is empty");
    if (targets.size() != rows.size())
        throw Error(ErrorKind::input, "row count " + std::to_string(rows.size()) +
                                          " does not match target count " +
                                          std::to_string(targets.size()));
    const std::size_t width = rows.front().size();
    if (width == 0)
        throw Error(ErrorKind::input, "feature rows are empty");
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != width)
            throw Error(ErrorKind::input, "row " + std::to_string(r) + " has width " +
                                              std::to_string(rows[r].size()) + ", expected " +
                                              std::to_string(width));
        for (double v : rows[r])
            if (!std::isfinite(v))
                throw Error(ErrorKind::input,
                            "non-finite feature in row " + std::to_string(r));
        if (!std::isfinite(targets[r]))
            throw Error(ErrorKind::input, "non-finite target in row " + std::to_string(r));
    }
}

// Parameter blocks in a fixed traversal order, shared by the optimizer, the
// flatteners, and the checkpoint writer so all agree on the layout.
std::vector<std::vector<double>*> blocks_of(MlpParams& p) {
    std::vector<std::vector<double>*> b;
    for (std::size_t l = 0; l < p.weights.size(); ++l) {
        b.push_back(&p.weights[l].data);
        b.push_back(&p.biases[l]);
    }
    return b;
}

std::vector<std::vector<double>*> blocks_of(LstmCell& c) {
    return {&c.w_f.data, &c.w_i.data, &c.w_c.data, &c.w_o.data,
            &c.b_f,      &c.b_i,      &c.b_c,      &c.b_o};
}

std::vector<std::vector<double>*> blocks_of(LstmParams& p) {
    std::vector<std::vector<double>*> b;
    for (auto& cell : p.layers)
        for (auto* v : blocks_of(cell)) b.push_back(v);
    b.push_back(&p.dense_w.data);
    b.push_back(&p.dense_b);
    return b;
}

std::size_t total_size(const std::vector<std::vector<double>*>& blocks) {
    std::size_t n = 0;
    for (const auto* b : blocks) n += b->size();
    return n;
}

void zero_blocks(const std::vector<std::vector<double>*>& blocks) {
    for (auto* b : blocks) std::fill(b->begin(), b->end(), 0.0);
}

void scale_blocks(const std::vector<std::vector<double>*>& blocks, double s) {
    for (auto* b : blocks)
        for (double& v : *b) v *= s;
}

// Addresses one scalar parameter across the block list by flat index.
double& flat_at(const std::vector<std::vector<double>*>& blocks, std::size_t k) {
    for (auto* b : blocks) {
        if (k < b->size()) return (*b)[k];
        k -= b->size();
    }
    throw Error(ErrorKind::shape, "flat parameter index out of range");
}

// Shared Adam step across a block list; one step-counter increment covers
// all blocks so bias correction stays consistent.
void adam_step_blocks(AdamState& s, const std::vector<std::vector<double>*>& params,
                      const std::vector<std::vector<double>*>& grads) {
    ++s.step;
    const double bc1 = 1.0 - std::pow(s.beta1, static_cast<double>(s.step));
    const double bc2 = 1.0 - std::pow(s.beta2, static_cast<double>(s.step));
    std::size_t off = 0;
    for (std::size_t b = 0; b < params.size(); ++b) {
        auto& w = *params[b];
        const auto& g = *grads[b];
        for (std::size_t k = 0; k < w.size(); ++k, ++off) {
            s.m[off] = s.beta1 * s.m[off] + (1.0 - s.beta1) * g[k];
            s.v[off] = s.beta2 * s.v[off] + (1.0 - s.beta2) * g[k] * g[k];
            w[k] -= s.learning_rate * (s.m[off] / bc1) / (std::sqrt(s.v[off] / bc2) + s.epsilon);
        }
    }
}

// Distinct flat indices for gradient probing: everything when the parameter
// count is small, otherwise a partial Fisher-Yates draw.
std::vector<std::size_t> probe_indices(std::size_t total, int n_probes, std::uint64_t seed) {
    std::vector<std::size_t> idx(total);
    for (std::size_t i = 0; i < total; ++i) idx[i] = i;
    if (total <= static_cast<std::size_t>(n_probes)) return idx;
    SplitMix64 rng(seed);
    for (int i = 0; i < n_probes; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.next_u64() % (total - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(static_cast<std::size_t>(n_probes));
    return idx;
}

// Worst relative disagreement, ignoring entries where both gradients are
// below 1e-6: there the central difference is cancellation noise.
double grad_rel_error(double analytic, double numeric) {
    const double mag = std::max(std::abs(analytic), std::abs(numeric));
    if (mag < 1e-6) return 0.0;
    return std::abs(analytic - numeric) / mag;
}

constexpr double kFdStep = 1e-5;

// ---------------------------------------------------------------------------
// MLP internals

void check_mlp_shapes(const MlpParams& p, std::size_t x_width) {
    if (p.layer_sizes.size() < 2 || p.weights.size() + 1 != p.layer_sizes.size() ||
        p.biases.size() != p.weights.size())
        throw Error(ErrorKind::shape, "network topology is inconsistent");
    if (x_width != static_cast<std::size_t>(p.layer_sizes.front()))
        throw Error(ErrorKind::shape, "input width " + std::to_string(x_width) +
                                          " does not match network input layer " +
                                          std::to_string(p.layer_sizes.front()));
}

// Forward pass recording every post-activation vector: a[0] is the input,
// a[l+1] the output of layer l (identity on the last layer).
double mlp_forward_trace(const MlpParams& p, std::span<const double> x,
                         std::vector<std::vector<double>>* acts) {
    std::vector<double> cur(x.begin(), x.end());
    if (acts) {
        acts->clear();
        acts->push_back(cur);
    }
    const std::size_t n_layers = p.weights.size();
    for (std::size_t l = 0; l < n_layers; ++l) {
        const Matrix& w = p.weights[l];
        std::vector<double> next(static_cast<std::size_t>(w.rows));
        for (int r = 0; r < w.rows; ++r) {
            const double* row = &w.data[static_cast<std::size_t>(r) * w.cols];
            double acc = p.biases[l][static_cast<std::size_t>(r)];
            for (int j = 0; j < w.cols; ++j) acc += row[j] * cur[static_cast<std::size_t>(j)];
            next[static_cast<std::size_t>(r)] =
                l + 1 == n_layers ? acc : activate(p.activation, acc);
        }
        cur = std::move(next);
        if (acts) acts->push_back(cur);
    }
    return cur.front();
}

// Full-batch MSE gradient; returns the loss. `g` must share p's topology.
double mlp_gradient(const MlpParams& p, const std::vector<std::vector<double>>& rows,
                    const std::vector<double>& targets, MlpParams& g) {
    auto gb = blocks_of(g);
    zero_blocks(gb);
    const double n = static_cast<double>(rows.size());
    double loss = 0.0;
    std::vector<std::vector<double>> acts;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const double pred = mlp_forward_trace(p, rows[r], &acts);
        const double err = pred - targets[r];
        loss += err * err / n;
        std::vector<double> dz{2.0 * err / n};
        for (int l = static_cast<int>(p.weights.size()) - 1; l >= 0; --l) {
            const Matrix& w = p.weights[static_cast<std::size_t>(l)];
            Matrix& gw = g.weights[static_cast<std::size_t>(l)];
            const auto& a_in = acts[static_cast<std::size_t>(l)];
            for (int i = 0; i < w.rows; ++i) {
                const double d = dz[static_cast<std::size_t>(i)];
                double* grow = &gw.data[static_cast<std::size_t>(i) * w.cols];
                for (int j = 0; j < w.cols; ++j) grow[j] += d * a_in[static_cast<std::size_t>(j)];
                g.biases[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)] += d;
            }
            if (l == 0) break;
            std::vector<double> dprev(static_cast<std::size_t>(w.cols), 0.0);
            for (int i = 0; i < w.rows; ++i) {
                const double d = dz[static_cast<std::size_t>(i)];
                const double* row = &w.data[static_cast<std::size_t>(i) * w.cols];
                for (int j = 0; j < w.cols; ++j) dprev[static_cast<std::size_t>(j)] += row[j] * d;
            }
            for (int j = 0; j < w.cols; ++j)
                dprev[static_cast<std::size_t>(j)] *=
                    activate_grad(p.activation, a_in[static_cast<std::size_t>(j)]);
            dz = std::move(dprev);
        }
    }
    return loss;
}

// ---------------------------------------------------------------------------
// LSTM internals

void check_cell_shapes(const LstmCell& c) {
    const int rows = c.hidden_size;
    const int cols = c.hidden_size + c.input_size;
    for (const Matrix* w : {&c.w_f, &c.w_i, &c.w_c, &c.w_o})
        if (w->rows != rows || w->cols != cols)
            throw Error(ErrorKind::shape, "gate matrix shape does not match cell widths");
    for (const std::vector<double>* b : {&c.b_f, &c.b_i, &c.b_c, &c.b_o})
        if (b->size() != static_cast<std::size_t>(rows))
            throw Error(ErrorKind::shape, "gate bias length does not match hidden width");
}

void gate_preactivation(const Matrix& w, const std::vector<double>& b,
                        const std::vector<double>& h_prev, std::span<const double> x,
                        std::vector<double>& out) {
    const int hid = static_cast<int>(h_prev.size());
    const int in = static_cast<int>(x.size());
    out.resize(static_cast<std::size_t>(w.rows));
    for (int r = 0; r < w.rows; ++r) {
        const double* row = &w.data[static_cast<std::size_t>(r) * w.cols];
        double acc = b[static_cast<std::size_t>(r)];
        for (int j = 0; j < hid; ++j) acc += row[j] * h_prev[static_cast<std::size_t>(j)];
        for (int j = 0; j < in; ++j) acc += row[hid + j] * x[static_cast<std::size_t>(j)];
        out[static_cast<std::size_t>(r)] = acc;
    }
}

// Saved per-step quantities needed by backpropagation through time.
struct LayerTrace {
    std::vector<std::vector<double>> f, i, cand, o, c, h, tanh_c;

    void reset(int steps) {
        for (auto* v : {&f, &i, &cand, &o, &c, &h, &tanh_c}) {
            v->clear();
            v->reserve(static_cast<std::size_t>(steps));
        }
    }
};

void forward_layer(const LstmCell& cell, std::span<const std::vector<double>> xs,
                   LayerTrace& tr) {
    const std::size_t hid = static_cast<std::size_t>(cell.hidden_size);
    tr.reset(static_cast<int>(xs.size()));
    std::vector<double> h_prev(hid, 0.0), c_prev(hid, 0.0);
    std::vector<double> zf, zi, zc, zo;
    for (const auto& x : xs) {
        gate_preactivation(cell.w_f, cell.b_f, h_prev, x, zf);
        gate_preactivation(cell.w_i, cell.b_i, h_prev, x, zi);
        gate_preactivation(cell.w_c, cell.b_c, h_prev, x, zc);
        gate_preactivation(cell.w_o, cell.b_o, h_prev, x, zo);
        std::vector<double> f(hid), i(hid), cand(hid), o(hid), c(hid), h(hid), tc(hid);
        for (std::size_t j = 0; j < hid; ++j) {
            f[j] = sigmoid(zf[j]);
            i[j] = sigmoid(zi[j]);
            cand[j] = std::tanh(zc[j]);
            o[j] = sigmoid(zo[j]);
            c[j] = f[j] * c_prev[j] + i[j] * cand[j];
            tc[j] = std::tanh(c[j]);
            h[j] = o[j] * tc[j];
        }
        h_prev = h;
        c_prev = c;
        tr.f.push_back(std::move(f));
        tr.i.push_back(std::move(i));
        tr.cand.push_back(std::move(cand));
        tr.o.push_back(std::move(o));
        tr.c.push_back(std::move(c));
        tr.h.push_back(std::move(h));
        tr.tanh_c.push_back(std::move(tc));
    }
}

// Standard LSTM backward pass. `dh_ext[t]` is the loss gradient arriving at
// h_t from outside the layer; gradients accumulate into `g`; when `dx` is
// non-null it receives the gradients with respect to each input vector.
void backward_layer(const LstmCell& cell, std::span<const std::vector<double>> xs,
                    const LayerTrace& tr, const std::vector<std::vector<double>>& dh_ext,
                    LstmCell& g, std::vector<std::vector<double>>* dx) {
    const std::size_t hid = static_cast<std::size_t>(cell.hidden_size);
    const std::size_t in = static_cast<std::size_t>(cell.input_size);
    const int steps = static_cast<int>(xs.size());
    const std::vector<double> zeros(hid, 0.0);
    std::vector<double> dh(hid), dc(hid, 0.0), dc_prev(hid);
    std::vector<double> dzf(hid), dzi(hid), dzc(hid), dzo(hid), dh_rec(hid, 0.0);
    if (dx) dx->assign(static_cast<std::size_t>(steps), std::vector<double>(in, 0.0));
    for (int t = steps - 1; t >= 0; --t) {
        const std::size_t ut = static_cast<std::size_t>(t);
        const auto& c_prev = t > 0 ? tr.c[ut - 1] : zeros;
        const auto& h_prev = t > 0 ? tr.h[ut - 1] : zeros;
        for (std::size_t j = 0; j < hid; ++j) {
            dh[j] = dh_ext[ut][j] + dh_rec[j];
            const double f = tr.f[ut][j], i = tr.i[ut][j], cand = tr.cand[ut][j],
                         o = tr.o[ut][j], tc = tr.tanh_c[ut][j];
            const double do_ = dh[j] * tc;
            const double dct = dc[j] + dh[j] * o * (1.0 - tc * tc);
            dzf[j] = dct * c_prev[j] * f * (1.0 - f);
            dzi[j] = dct * cand * i * (1.0 - i);
            dzc[j] = dct * i * (1.0 - cand * cand);
            dzo[j] = do_ * o * (1.0 - o);
            dc_prev[j] = dct * f;
        }
        dc = dc_prev;
        const auto& x = xs[ut];
        for (std::size_t r = 0; r < hid; ++r) {
            const std::size_t row_off = r * static_cast<std::size_t>(cell.w_f.cols);
            double* gf = &g.w_f.data[row_off];
            double* gi = &g.w_i.data[row_off];
            double* gc = &g.w_c.data[row_off];
            double* go = &g.w_o.data[row_off];
            for (std::size_t j = 0; j < hid; ++j) {
                gf[j] += dzf[r] * h_prev[j];
                gi[j] += dzi[r] * h_prev[j];
                gc[j] += dzc[r] * h_prev[j];
                go[j] += dzo[r] * h_prev[j];
            }
            for (std::size_t j = 0; j < in; ++j) {
                gf[hid + j] += dzf[r] * x[j];
                gi[hid + j] += dzi[r] * x[j];
                gc[hid + j] += dzc[r] * x[j];
                go[hid + j] += dzo[r] * x[j];
            }
            g.b_f[r] += dzf[r];
            g.b_i[r] += dzi[r];
            g.b_c[r] += dzc[r];
            g.b_o[r] += dzo[r];
        }
        std::fill(dh_rec.begin(), dh_rec.end(), 0.0);
        for (std::size_t r = 0; r < hid; ++r) {
            const std::size_t row_off = r * static_cast<std::size_t>(cell.w_f.cols);
            const double* wf = &cell.w_f.data[row_off];
            const double* wi = &cell.w_i.data[row_off];
            const double* wc = &cell.w_c.data[row_off];
            const double* wo = &cell.w_o.data[row_off];
            for (std::size_t j = 0; j < hid; ++j)
                dh_rec[j] += wf[j] * dzf[r] + wi[j] * dzi[r] + wc[j] * dzc[r] + wo[j] * dzo[r];
            if (dx) {
                auto& dxt = (*dx)[ut];
                for (std::size_t j = 0; j < in; ++j)
                    dxt[j] += wf[hid + j] * dzf[r] + wi[hid + j] * dzi[r] +
                              wc[hid + j] * dzc[r] + wo[hid + j] * dzo[r];
            }
        }
    }
}

struct ModelTrace {
    std::vector<LayerTrace> layers;
    std::vector<double> out;
};

void check_lstm_shapes(const LstmParams& p) {
    if (p.layers.empty())
        throw Error(ErrorKind::shape, "network has no recurrent layers");
    int in = kSamplesPerDay;
    for (const auto& cell : p.layers) {
        if (cell.input_size != in)
            throw Error(ErrorKind::shape, "layer input width does not chain");
        check_cell_shapes(cell);
        in = cell.hidden_size;
    }
    if (p.dense_w.rows != kSamplesPerDay || p.dense_w.cols != in ||
        p.dense_b.size() != static_cast<std::size_t>(kSamplesPerDay))
        throw Error(ErrorKind::shape, "dense head shape does not match final hidden width");
}

void forward_model(const LstmParams& p, std::span<const std::vector<double>> xs,
                   ModelTrace& tr) {
    tr.layers.resize(p.layers.size());
    forward_layer(p.layers.front(), xs, tr.layers.front());
    for (std::size_t l = 1; l < p.layers.size(); ++l)
        forward_layer(p.layers[l], tr.layers[l - 1].h, tr.layers[l]);
    const auto& h_last = tr.layers.back().h.back();
    tr.out.resize(static_cast<std::size_t>(kSamplesPerDay));
    for (int k = 0; k < kSamplesPerDay; ++k) {
        const double* row = &p.dense_w.data[static_cast<std::size_t>(k) * p.dense_w.cols];
        double acc = p.dense_b[static_cast<std::size_t>(k)];
        for (int j = 0; j < p.dense_w.cols; ++j) acc += row[j] * h_last[static_cast<std::size_t>(j)];
        tr.out[static_cast<std::size_t>(k)] = acc;
    }
}

// Accumulates one example's gradient into `g` given d(loss)/d(out).
void backward_model(const LstmParams& p, std::span<const std::vector<double>> xs,
                    const ModelTrace& tr, const std::vector<double>& dout, LstmParams& g) {
    const auto& h_last = tr.layers.back().h.back();
    const std::size_t top_hid = h_last.size();
    std::vector<double> dh_last(top_hid, 0.0);
    for (int k = 0; k < kSamplesPerDay; ++k) {
        const std::size_t uk = static_cast<std::size_t>(k);
        const double d = dout[uk];
        double* grow = &g.dense_w.data[uk * static_cast<std::size_t>(g.dense_w.cols)];
        const double* row = &p.dense_w.data[uk * static_cast<std::size_t>(p.dense_w.cols)];
        for (std::size_t j = 0; j < top_hid; ++j) {
            grow[j] += d * h_last[j];
            dh_last[j] += row[j] * d;
        }
        g.dense_b[uk] += d;
    }
    const int steps = static_cast<int>(xs.size());
    std::vector<std::vector<double>> dh_ext(
        static_cast<std::size_t>(steps), std::vector<double>(top_hid, 0.0));
    dh_ext.back() = dh_last;
    std::vector<std::vector<double>> dx;
    for (int l = static_cast<int>(p.layers.size()) - 1; l >= 0; --l) {
        const std::size_t ul = static_cast<std::size_t>(l);
        std::span<const std::vector<double>> layer_in =
            l == 0 ? xs : std::span<const std::vector<double>>(tr.layers[ul - 1].h);
        backward_layer(p.layers[ul], layer_in, tr.layers[ul], dh_ext, g.layers[ul],
                       l == 0 ? nullptr : &dx);
        if (l > 0) dh_ext = std::move(dx);
    }
}

void check_lstm_config(const LstmConfig& c) {
    if (c.hidden_sizes.empty())
        throw Error(ErrorKind::validation, "hidden_sizes must not be empty");
    for (int h : c.hidden_sizes)
        if (h < 1) throw Error(ErrorKind::validation, "hidden widths must be positive");
    if (c.input_days < 1) throw Error(ErrorKind::validation, "input_days must be positive");
    if (c.epochs < 1) throw Error(ErrorKind::validation, "epochs must be positive");
    if (c.batch_size < 1) throw Error(ErrorKind::validation, "batch_size must be positive");
    if (!(c.learning_rate > 0.0))
        throw Error(ErrorKind::validation, "learning_rate must be positive");
}

double normalize_value(const LstmParams& p, double v) {
    return 2.0 * (v - p.norm_min) / (p.norm_max - p.norm_min) - 1.0;
}

double denormalize_value(const LstmParams& p, double v) {
    return (v + 1.0) / 2.0 * (p.norm_max - p.norm_min) + p.norm_min;
}

// Per-day normalized vectors for the first `days` days of the series.
std::vector<std::vector<double>> normalized_days(const LstmParams& p, const LoadSeries& s,
                                                 int days) {
    std::vector<std::vector<double>> out(static_cast<std::size_t>(days));
    for (int d = 0; d < days; ++d) {
        auto& day = out[static_cast<std::size_t>(d)];
        day.resize(static_cast<std::size_t>(kSamplesPerDay));
        for (int t = 0; t < kSamplesPerDay; ++t)
            day[static_cast<std::size_t>(t)] = normalize_value(
                p, s.values[static_cast<std::size_t>(d) * kSamplesPerDay + t]);
    }
    return out;
}

void check_finite_series(const LoadSeries& s) {
    for (double v : s.values)
        if (!std::isfinite(v))
            throw Error(ErrorKind::input,
                        "series contains missing or non-finite samples; fill gaps first");
}

}  // namespace

// ---------------------------------------------------------------------------
// MLP

MlpParams mlp_init(const std::vector<int>& layer_sizes, Activation activation,
                   std::uint64_t seed) {
    if (layer_sizes.size() < 2)
        throw Error(ErrorKind::shape, "need at least an input and an output layer");
    for (int s : layer_sizes)
        if (s < 1) throw Error(ErrorKind::shape, "layer sizes must be positive");
    MlpParams p;
    p.layer_sizes = layer_sizes;
    p.activation = activation;
    SplitMix64 rng(seed);
    for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
        const int rows = layer_sizes[l + 1];
        const int cols = layer_sizes[l];
        Matrix w(rows, cols);
        const double bound = 1.0 / std::sqrt(static_cast<double>(cols));
        for (double& v : w.data) v = (2.0 * rng.next_uniform() - 1.0) * bound;
        p.weights.push_back(std::move(w));
        p.biases.emplace_back(static_cast<std::size_t>(rows), 0.0);
    }
    return p;
}

double mlp_forward(const MlpParams& params, std::span<const double> x) {
    check_mlp_shapes(params, x.size());
    return mlp_forward_trace(params, x, nullptr);
}

double mlp_loss(const MlpParams& params, const std::vector<std::vector<double>>& rows,
                const std::vector<double>& targets) {
    check_finite_rows(rows, targets);
    check_mlp_shapes(params, rows.front().size());
    double loss = 0.0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const double err = mlp_forward_trace(params, rows[r], nullptr) - targets[r];
        loss += err * err;
    }
    return loss / static_cast<double>(rows.size());
}

MlpParams mlp_train(const std::vector<std::vector<double>>& rows,
                    const std::vector<double>& targets, const MlpTrainConfig& config) {
    check_finite_rows(rows, targets);
    if (config.epochs < 1) throw Error(ErrorKind::validation, "epochs must be positive");
    if (!(config.learning_rate > 0.0))
        throw Error(ErrorKind::validation, "learning_rate must be positive");
    std::vector<int> sizes{static_cast<int>(rows.front().size())};
    for (int h : config.hidden_sizes) sizes.push_back(h);
    sizes.push_back(1);
    MlpParams p = mlp_init(sizes, config.activation, config.seed);
    MlpParams g = p;
    auto pb = blocks_of(p);
    auto gb = blocks_of(g);
    AdamState adam = make_adam(total_size(pb), config.learning_rate);
    p.epoch_losses.reserve(static_cast<std::size_t>(config.epochs));
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        const double loss = mlp_gradient(p, rows, targets, g);
        if (!std::isfinite(loss))
            throw Error(ErrorKind::numeric,
                        "training loss became non-finite at epoch " + std::to_string(epoch) +
                            "; try a smaller learning rate");
        p.epoch_losses.push_back(loss);
        adam_step_blocks(adam, pb, gb);
    }
    return p;
}

double mlp_grad_check(const MlpParams& params, const std::vector<std::vector<double>>& rows,
                      const std::vector<double>& targets, int n_probes, std::uint64_t seed) {
    check_finite_rows(rows, targets);
    check_mlp_shapes(params, rows.front().size());
    MlpParams work = params;
    MlpParams g = params;
    const double base_loss = mlp_gradient(work, rows, targets, g);
    (void)base_loss;
    auto wb = blocks_of(work);
    auto gb = blocks_of(g);
    double worst = 0.0;
    for (std::size_t k : probe_indices(total_size(wb), n_probes, seed)) {
        double& w = flat_at(wb, k);
        const double saved = w;
        w = saved + kFdStep;
        const double up = mlp_loss(work, rows, targets);
        w = saved - kFdStep;
        const double down = mlp_loss(work, rows, targets);
        w = saved;
        const double numeric = (up - down) / (2.0 * kFdStep);
        worst = std::max(worst, grad_rel_error(flat_at(gb, k), numeric));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Adam

AdamState make_adam(std::size_t n_params, double learning_rate, double beta1, double beta2,
                    double epsilon) {
    AdamState s;
    s.learning_rate = learning_rate;
    s.beta1 = beta1;
    s.beta2 = beta2;
    s.epsilon = epsilon;
    s.m.assign(n_params, 0.0);
    s.v.assign(n_params, 0.0);
    return s;
}

void adam_update(AdamState& state, std::span<double> params, std::span<const double> grads) {
    if (params.size() != grads.size() || params.size() != state.m.size())
        throw Error(ErrorKind::shape, "parameter, gradient, and accumulator sizes differ");
    ++state.step;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
    for (std::size_t k = 0; k < params.size(); ++k) {
        state.m[k] = state.beta1 * state.m[k] + (1.0 - state.beta1) * grads[k];
        state.v[k] = state.beta2 * state.v[k] + (1.0 - state.beta2) * grads[k] * grads[k];
        params[k] -= state.learning_rate * (state.m[k] / bc1) /
                     (std::sqrt(state.v[k] / bc2) + state.epsilon);
    }
}

// ---------------------------------------------------------------------------
// LSTM

LstmCell make_lstm_cell(int input_size, int hidden_size) {
    if (input_size < 1 || hidden_size < 1)
        throw Error(ErrorKind::shape, "cell widths must be positive");
    LstmCell c;
    c.input_size = input_size;
    c.hidden_size = hidden_size;
    const int cols = hidden_size + input_size;
    const auto make = [&] { return Matrix(hidden_size, cols); };
    c.w_f = make();
    c.w_i = make();
    c.w_c = make();
    c.w_o = make();
    c.b_f.assign(static_cast<std::size_t>(hidden_size), 0.0);
    c.b_i = c.b_f;
    c.b_c = c.b_f;
    c.b_o = c.b_f;
    return c;
}

LstmStepState lstm_zero_state(int hidden_size) {
    if (hidden_size < 1) throw Error(ErrorKind::shape, "hidden width must be positive");
    return LstmStepState{std::vector<double>(static_cast<std::size_t>(hidden_size), 0.0),
                         std::vector<double>(static_cast<std::size_t>(hidden_size), 0.0)};
}

LstmStepState lstm_cell_step(const LstmCell& cell, const LstmStepState& prev,
                             std::span<const double> x) {
    check_cell_shapes(cell);
    if (static_cast<int>(x.size()) != cell.input_size)
        throw Error(ErrorKind::shape, "input width does not match cell");
    if (prev.h.size() != static_cast<std::size_t>(cell.hidden_size) ||
        prev.c.size() != static_cast<std::size_t>(cell.hidden_size))
        throw Error(ErrorKind::shape, "state width does not match cell");
    std::vector<double> zf, zi, zc, zo;
    gate_preactivation(cell.w_f, cell.b_f, prev.h, x, zf);
    gate_preactivation(cell.w_i, cell.b_i, prev.h, x, zi);
    gate_preactivation(cell.w_c, cell.b_c, prev.h, x, zc);
    gate_preactivation(cell.w_o, cell.b_o, prev.h, x, zo);
    LstmStepState next = lstm_zero_state(cell.hidden_size);
    for (std::size_t j = 0; j < next.h.size(); ++j) {
        const double f = sigmoid(zf[j]);
        const double i = sigmoid(zi[j]);
        const double cand = std::tanh(zc[j]);
        const double o = sigmoid(zo[j]);
        next.c[j] = f * prev.c[j] + i * cand;
        next.h[j] = o * std::tanh(next.c[j]);
    }
    return next;
}

LstmParams lstm_init(const LstmConfig& config) {
    check_lstm_config(config);
    LstmParams p;
    p.config = config;
    SplitMix64 rng(config.seed);
    int in = kSamplesPerDay;
    for (int hid : config.hidden_sizes) {
        LstmCell cell = make_lstm_cell(in, hid);
        const double bound = 1.0 / std::sqrt(static_cast<double>(hid + in));
        for (Matrix* w : {&cell.w_f, &cell.w_i, &cell.w_c, &cell.w_o})
            for (double& v : w->data) v = (2.0 * rng.next_uniform() - 1.0) * bound;
        p.layers.push_back(std::move(cell));
        in = hid;
    }
    p.dense_w = Matrix(kSamplesPerDay, in);
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    for (double& v : p.dense_w.data) v = (2.0 * rng.next_uniform() - 1.0) * bound;
    p.dense_b.assign(static_cast<std::size_t>(kSamplesPerDay), 0.0);
    return p;
}

LstmParams lstm_train(const LoadSeries& data, const LstmConfig& config) {
    check_lstm_config(config);
    check_finite_series(data);
    const int days = data.num_days();
    if (days < config.input_days + 1)
        throw Error(ErrorKind::history,
                    "need at least " + std::to_string(config.input_days + 1) +
                        " full days of training data, have " + std::to_string(days));

    LstmParams p = lstm_init(config);
    const auto [lo_it, hi_it] = std::minmax_element(
        data.values.begin(), data.values.begin() + static_cast<std::size_t>(days) * kSamplesPerDay);
    if (*hi_it - *lo_it > 0.0) {
        p.norm_min = *lo_it;
        p.norm_max = *hi_it;
    } else {
        // Constant data: center the unit span on the value so it normalizes
        // to the midpoint.
        p.norm_min = *lo_it - 0.5;
        p.norm_max = *lo_it + 0.5;
    }

    const auto day_vecs = normalized_days(p, data, days);
    std::vector<int> target_days;
    for (int d = config.input_days; d < days; ++d) target_days.push_back(d);
    const std::size_t n_examples = target_days.size();

    LstmParams g = p;
    auto pb = blocks_of(p);
    auto gb = blocks_of(g);
    AdamState adam =
        make_adam(total_size(pb), config.learning_rate, config.beta1, config.beta2, config.epsilon);
    SplitMix64 shuffle_rng = SplitMix64::substream(config.seed, 1);

    std::vector<std::size_t> order(n_examples);
    for (std::size_t i = 0; i < n_examples; ++i) order[i] = i;
    ModelTrace tr;
    std::vector<double> dout(static_cast<std::size_t>(kSamplesPerDay));
    p.epoch_losses.reserve(static_cast<std::size_t>(config.epochs));

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        for (std::size_t i = 0; i + 1 < n_examples; ++i) {
            const std::size_t j = i + shuffle_rng.next_u64() % (n_examples - i);
            std::swap(order[i], order[j]);
        }
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < n_examples;
             start += static_cast<std::size_t>(config.batch_size)) {
            const std::size_t stop =
                std::min(n_examples, start + static_cast<std::size_t>(config.batch_size));
            zero_blocks(gb);
            double batch_loss = 0.0;
            for (std::size_t e = start; e < stop; ++e) {
                const int d = target_days[order[e]];
                const std::span<const std::vector<double>> xs(
                    &day_vecs[static_cast<std::size_t>(d - config.input_days)],
                    static_cast<std::size_t>(config.input_days));
                forward_model(p, xs, tr);
                const auto& target = day_vecs[static_cast<std::size_t>(d)];
                double mse = 0.0;
                for (int k = 0; k < kSamplesPerDay; ++k) {
                    const std::size_t uk = static_cast<std::size_t>(k);
                    const double err = tr.out[uk] - target[uk];
                    mse += err * err;
                    dout[uk] = 2.0 * err / kSamplesPerDay;
                }
                batch_loss += mse / kSamplesPerDay;
                backward_model(p, xs, tr, dout, g);
            }
            if (!std::isfinite(batch_loss))
                throw Error(ErrorKind::numeric,
                            "training loss became non-finite at epoch " + std::to_string(epoch) +
                                "; try a smaller learning rate");
            epoch_loss += batch_loss;
            scale_blocks(gb, 1.0 / static_cast<double>(stop - start));
            adam_step_blocks(adam, pb, gb);
        }
        p.epoch_losses.push_back(epoch_loss / static_cast<double>(n_examples));
    }
    return p;
}

double lstm_loss(const LstmParams& params, const LoadSeries& data) {
    check_lstm_shapes(params);
    check_finite_series(data);
    const int days = data.num_days();
    const int t_in = params.config.input_days;
    if (days < t_in + 1)
        throw Error(ErrorKind::history, "need at least " + std::to_string(t_in + 1) +
                                            " full days, have " + std::to_string(days));
    const auto day_vecs = normalized_days(params, data, days);
    ModelTrace tr;
    double total = 0.0;
    int count = 0;
    for (int d = t_in; d < days; ++d, ++count) {
        const std::span<const std::vector<double>> xs(
            &day_vecs[static_cast<std::size_t>(d - t_in)], static_cast<std::size_t>(t_in));
        forward_model(params, xs, tr);
        const auto& target = day_vecs[static_cast<std::size_t>(d)];
        double mse = 0.0;
        for (int k = 0; k < kSamplesPerDay; ++k) {
            const double err = tr.out[static_cast<std::size_t>(k)] -
                               target[static_cast<std::size_t>(k)];
            mse += err * err;
        }
        total += mse / kSamplesPerDay;
    }
    return total / count;
}

DayForecast lstm_forecast(const LstmParams& params, const LoadSeries& history, int d) {
    check_lstm_shapes(params);
    const int t_in = params.config.input_days;
    if (d < t_in || d > history.num_days())
        throw Error(ErrorKind::history,
                    "day " + std::to_string(d) + " needs " + std::to_string(t_in) +
                        " preceding days inside the " + std::to_string(history.num_days()) +
                        "-day history");
    std::vector<std::vector<double>> xs(static_cast<std::size_t>(t_in));
    for (int s = 0; s < t_in; ++s) {
        auto& day = xs[static_cast<std::size_t>(s)];
        day.resize(static_cast<std::size_t>(kSamplesPerDay));
        const std::size_t base =
            (static_cast<std::size_t>(d - t_in) + static_cast<std::size_t>(s)) * kSamplesPerDay;
        for (int t = 0; t < kSamplesPerDay; ++t) {
            const double v = history.values[base + static_cast<std::size_t>(t)];
            if (!std::isfinite(v))
                throw Error(ErrorKind::input, "input window contains missing samples");
            day[static_cast<std::size_t>(t)] = normalize_value(params, v);
        }
    }
    ModelTrace tr;
    forward_model(params, xs, tr);
    DayForecast f;
    f.model_id = "lstm";
    f.origin_day = d - 1;
    f.target_day = d;
    f.values.resize(static_cast<std::size_t>(kSamplesPerDay));
    for (int k = 0; k < kSamplesPerDay; ++k)
        f.values[static_cast<std::size_t>(k)] =
            denormalize_value(params, tr.out[static_cast<std::size_t>(k)]);
    return f;
}

double lstm_grad_check(const LstmParams& params, const LoadSeries& data, int n_probes,
                       std::uint64_t seed) {
    check_lstm_shapes(params);
    check_finite_series(data);
    const int t_in = params.config.input_days;
    if (data.num_days() < t_in + 1)
        throw Error(ErrorKind::history, "need at least " + std::to_string(t_in + 1) +
                                            " full days for a gradient probe");
    LstmParams work = params;
    const auto day_vecs = normalized_days(work, data, t_in + 1);
    const std::span<const std::vector<double>> xs(&day_vecs[0],
                                                  static_cast<std::size_t>(t_in));
    const auto& target = day_vecs[static_cast<std::size_t>(t_in)];

    const auto example_loss = [&](const LstmParams& m) {
        ModelTrace tr;
        forward_model(m, xs, tr);
        double mse = 0.0;
        for (int k = 0; k < kSamplesPerDay; ++k) {
            const double err =
                tr.out[static_cast<std::size_t>(k)] - target[static_cast<std::size_t>(k)];
            mse += err * err;
        }
        return mse / kSamplesPerDay;
    };

    LstmParams g = work;
    auto gb = blocks_of(g);
    zero_blocks(gb);
    ModelTrace tr;
    forward_model(work, xs, tr);
    std::vector<double> dout(static_cast<std::size_t>(kSamplesPerDay));
    for (int k = 0; k < kSamplesPerDay; ++k) {
        const std::size_t uk = static_cast<std::size_t>(k);
        dout[uk] = 2.0 * (tr.out[uk] - target[uk]) / kSamplesPerDay;
    }
    backward_model(work, xs, tr, dout, g);

    auto wb = blocks_of(work);
    double worst = 0.0;
    for (std::size_t k : probe_indices(total_size(wb), n_probes, seed)) {
        double& w = flat_at(wb, k);
        const double saved = w;
        w = saved + kFdStep;
        const double up = example_loss(work);
        w = saved - kFdStep;
        const double down = example_loss(work);
        w = saved;
        worst = std::max(worst, grad_rel_error(flat_at(gb, k), (up - down) / (2.0 * kFdStep)));
    }
    return worst;
}

double lstm_cell_grad_check(const LstmCell& cell, const std::vector<std::vector<double>>& xs,
                            const std::vector<double>& target, int n_probes,
                            std::uint64_t seed) {
    check_cell_shapes(cell);
    if (xs.empty()) throw Error(ErrorKind::input, "need at least one input step");
    for (const auto& x : xs)
        if (static_cast<int>(x.size()) != cell.input_size)
            throw Error(ErrorKind::shape, "input width does not match cell");
    if (target.size() != static_cast<std::size_t>(cell.hidden_size))
        throw Error(ErrorKind::shape, "target width does not match hidden width");

    const auto unroll_loss = [&](const LstmCell& c) {
        LstmStepState st = lstm_zero_state(c.hidden_size);
        for (const auto& x : xs) st = lstm_cell_step(c, st, x);
        double loss = 0.0;
        for (std::size_t j = 0; j < target.size(); ++j) {
            const double err = st.h[j] - target[j];
            loss += err * err;
        }
        return loss;
    };

    LstmCell work = cell;
    LstmCell g = make_lstm_cell(cell.input_size, cell.hidden_size);
    LayerTrace tr;
    forward_layer(work, xs, tr);
    std::vector<std::vector<double>> dh_ext(
        xs.size(), std::vector<double>(static_cast<std::size_t>(cell.hidden_size), 0.0));
    for (std::size_t j = 0; j < target.size(); ++j)
        dh_ext.back()[j] = 2.0 * (tr.h.back()[j] - target[j]);
    backward_layer(work, xs, tr, dh_ext, g, nullptr);

    auto wb = blocks_of(work);
    auto gb = blocks_of(g);
    double worst = 0.0;
    for (std::size_t k : probe_indices(total_size(wb), n_probes, seed)) {
        double& w = flat_at(wb, k);
        const double saved = w;
        w = saved + kFdStep;
        const double up = unroll_loss(work);
        w = saved - kFdStep;
        const double down = unroll_loss(work);
        w = saved;
        worst = std::max(worst, grad_rel_error(flat_at(gb, k), (up - down) / (2.0 * kFdStep)));
    }
    return worst;
}

}  // namespace lf
