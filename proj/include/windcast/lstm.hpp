#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "windcast/common.hpp"
#include "windcast/linalg.hpp"
#include "windcast/rng.hpp"

namespace windcast {

/// Single-layer LSTM with a linear scalar head. Gate matrices act on the
/// concatenation [h_{t-1}, x_t].
struct LstmWeights {
    std::size_t input_size = 0;
    std::size_t hidden_size = 0;
    Matrix w_f, w_i, w_c, w_o;            // hidden x (hidden + input)
    std::vector<double> b_f, b_i, b_c, b_o;
    std::vector<double> head_w;           // hidden -> scalar
    double head_b = 0.0;

    static LstmWeights zeros(std::size_t input, std::size_t hidden) {
        LstmWeights w;
        w.input_size = input;
        w.hidden_size = hidden;
        const std::size_t cols = hidden + input;
        w.w_f = w.w_i = w.w_c = w.w_o = Matrix(hidden, cols, 0.0);
        w.b_f = w.b_i = w.b_c = w.b_o = std::vector<double>(hidden, 0.0);
        w.head_w.assign(hidden, 0.0);
        return w;
    }

    /// Seeded uniform init in [-1/sqrt(hidden), 1/sqrt(hidden)].
    static LstmWeights init(std::size_t input, std::size_t hidden, std::uint64_t seed) {
        LstmWeights w = zeros(input, hidden);
        Rng rng(seed);
        const double bound = 1.0 / std::sqrt(static_cast<double>(hidden));
        auto fill = [&](std::vector<double>& v) {
            for (double& x : v) x = rng.uniform(-bound, bound);
        };
        fill(w.w_f.data);
        fill(w.w_i.data);
        fill(w.w_c.data);
        fill(w.w_o.data);
        fill(w.b_f);
        fill(w.b_i);
        fill(w.b_c);
        fill(w.b_o);
        fill(w.head_w);
        w.head_b = rng.uniform(-bound, bound);
        return w;
    }
};

struct LstmConfig {
    std::size_t input_size = 1;
    std::size_t hidden_size = 200;
    std::size_t window = 5;
    double learning_rate = 1e-5;
    std::size_t epochs = 500;
    std::uint64_t seed = 1;

    void validate() const {
        if (input_size == 0 || hidden_size == 0 || window == 0 || epochs == 0)
            throw InvalidInput("lstm: sizes and epochs must be positive");
        if (!(learning_rate > 0.0)) throw InvalidInput("lstm: learning rate must be positive");
    }
};

struct CellState {
    std::vector<double> h;
    std::vector<double> c;

    static CellState zeros(std::size_t hidden) {
        return CellState{std::vector<double>(hidden, 0.0), std::vector<double>(hidden, 0.0)};
    }
};

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

namespace detail {

struct GateActivations {
    std::vector<double> f, i, g, o;  // g is the candidate (tanh) gate
};

inline std::vector<double> gate_affine(const Matrix& w, const std::vector<double>& bias,
                                       const std::vector<double>& h_prev,
                                       const std::vector<double>& x) {
    const std::size_t hidden = w.rows;
    std::vector<double> out(hidden);
    for (std::size_t r = 0; r < hidden; ++r) {
        const double* row = w.row(r);
        double s = bias[r];
        for (std::size_t k = 0; k < h_prev.size(); ++k) s += row[k] * h_prev[k];
        for (std::size_t k = 0; k < x.size(); ++k) s += row[h_prev.size() + k] * x[k];
        out[r] = s;
    }
    return out;
}

inline CellState cell_forward_full(const std::vector<double>& x_t, const CellState& prev,
                                   const LstmWeights& w, GateActivations* gates) {
    if (x_t.size() != w.input_size) throw InvalidInput("lstm: input width mismatch");
    if (prev.h.size() != w.hidden_size || prev.c.size() != w.hidden_size)
        throw InvalidInput("lstm: state width mismatch");

    std::vector<double> zf = gate_affine(w.w_f, w.b_f, prev.h, x_t);
    std::vector<double> zi = gate_affine(w.w_i, w.b_i, prev.h, x_t);
    std::vector<double> zg = gate_affine(w.w_c, w.b_c, prev.h, x_t);
    std::vector<double> zo = gate_affine(w.w_o, w.b_o, prev.h, x_t);

    CellState next = CellState::zeros(w.hidden_size);
    GateActivations act;
    act.f.resize(w.hidden_size);
    act.i.resize(w.hidden_size);
    act.g.resize(w.hidden_size);
    act.o.resize(w.hidden_size);
    for (std::size_t r = 0; r < w.hidden_size; ++r) {
        double f = sigmoid(zf[r]);
        double i = sigmoid(zi[r]);
        double g = std::tanh(zg[r]);
        double o = sigmoid(zo[r]);
        next.c[r] = f * prev.c[r] + i * g;
        next.h[r] = o * std::tanh(next.c[r]);
        act.f[r] = f;
        act.i[r] = i;
        act.g[r] = g;
        act.o[r] = o;
    }
    if (gates) *gates = std::move(act);
    return next;
}

} // namespace detail

/// One LSTM step: f,i,o sigmoid gates, tanh candidate, c = f.c + i.g,
/// h = o.tanh(c).
inline CellState cell_forward(const std::vector<double>& x_t, const CellState& prev,
                              const LstmWeights& w) {
    return detail::cell_forward_full(x_t, prev, w, nullptr);
}

/// Unrolls from a zero state over a scalar window; returns head_w.h_T + head_b.
inline double sequence_forward(const std::vector<double>& window_values, const LstmWeights& w) {
    if (window_values.empty()) throw InvalidInput("lstm: empty window");
    CellState state = CellState::zeros(w.hidden_size);
    for (double x : window_values) state = cell_forward({x}, state, w);
    return dot(w.head_w.data(), state.h.data(), w.hidden_size) + w.head_b;
}

struct LstmSample {
    std::vector<double> window;
    double target = 0.0;
};

/// Exact batch-MSE gradient of every weight via backpropagation through time.
/// Loss = mean over the batch of (prediction - target)^2; written to
/// `batch_mse` when given.
inline LstmWeights gradients(const std::vector<LstmSample>& batch, const LstmWeights& w,
                             double* batch_mse = nullptr) {
    if (batch.empty()) throw InvalidInput("lstm gradients: empty batch");
    if (w.input_size != 1) throw InvalidInput("lstm gradients: scalar windows require input_size 1");
    const std::size_t hidden = w.hidden_size;
    double mse = 0.0;
    LstmWeights grad = LstmWeights::zeros(w.input_size, hidden);

    for (const LstmSample& sample : batch) {
        const std::size_t steps = sample.window.size();
        std::vector<CellState> states(steps + 1, CellState::zeros(hidden));
        std::vector<detail::GateActivations> gates(steps);
        for (std::size_t t = 0; t < steps; ++t)
            states[t + 1] =
                detail::cell_forward_full({sample.window[t]}, states[t], w, &gates[t]);

        double pred = dot(w.head_w.data(), states[steps].h.data(), hidden) + w.head_b;
        mse += (pred - sample.target) * (pred - sample.target) / static_cast<double>(batch.size());
        double dpred = 2.0 * (pred - sample.target) / static_cast<double>(batch.size());

        grad.head_b += dpred;
        std::vector<double> dh(hidden), dc(hidden, 0.0);
        for (std::size_t r = 0; r < hidden; ++r) {
            grad.head_w[r] += dpred * states[steps].h[r];
            dh[r] = dpred * w.head_w[r];
        }

        for (std::size_t t = steps; t-- > 0;) {
            const detail::GateActivations& a = gates[t];
            const CellState& prev = states[t];
            const CellState& cur = states[t + 1];
            std::vector<double> dzf(hidden), dzi(hidden), dzg(hidden), dzo(hidden);
            for (std::size_t r = 0; r < hidden; ++r) {
                double tc = std::tanh(cur.c[r]);
                double do_ = dh[r] * tc;
                double dcr = dc[r] + dh[r] * a.o[r] * (1.0 - tc * tc);
                double df = dcr * prev.c[r];
                double di = dcr * a.g[r];
                double dg = dcr * a.i[r];
                dc[r] = dcr * a.f[r];  // flows to t-1
                dzf[r] = df * a.f[r] * (1.0 - a.f[r]);
                dzi[r] = di * a.i[r] * (1.0 - a.i[r]);
                dzg[r] = dg * (1.0 - a.g[r] * a.g[r]);
                dzo[r] = do_ * a.o[r] * (1.0 - a.o[r]);
            }
            const double x_t = sample.window[t];
            std::vector<double> dh_prev(hidden, 0.0);
            auto accumulate = [&](Matrix& gw, std::vector<double>& gb, const Matrix& ww,
                                  const std::vector<double>& dz) {
                for (std::size_t r = 0; r < hidden; ++r) {
                    double d = dz[r];
                    if (d == 0.0) continue;
                    double* grow = gw.row(r);
                    const double* wrow = ww.row(r);
                    for (std::size_t k = 0; k < hidden; ++k) {
                        grow[k] += d * prev.h[k];
                        dh_prev[k] += d * wrow[k];
                    }
                    grow[hidden] += d * x_t;
                    gb[r] += d;
                }
            };
            accumulate(grad.w_f, grad.b_f, w.w_f, dzf);
            accumulate(grad.w_i, grad.b_i, w.w_i, dzi);
            accumulate(grad.w_c, grad.b_c, w.w_c, dzg);
            accumulate(grad.w_o, grad.b_o, w.w_o, dzo);
            dh = std::move(dh_prev);
        }
    }
    if (batch_mse) *batch_mse = mse;
    return grad;
}

struct TrainedLstm {
    LstmWeights weights;
    std::vector<double> loss_history;  // batch MSE per epoch, before each step
};

namespace detail {

struct Adam {
    double lr, beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    std::size_t step = 0;
    std::vector<double> m, v;

    explicit Adam(std::size_t n, double learning_rate) : lr(learning_rate), m(n, 0.0), v(n, 0.0) {}
};

/// Flat views over every parameter/gradient tensor, in one fixed order.
inline std::vector<std::pair<double*, std::size_t>> parameter_views(LstmWeights& w) {
    return {
        {w.w_f.data.data(), w.w_f.data.size()}, {w.w_i.data.data(), w.w_i.data.size()},
        {w.w_c.data.data(), w.w_c.data.size()}, {w.w_o.data.data(), w.w_o.data.size()},
        {w.b_f.data(), w.b_f.size()},           {w.b_i.data(), w.b_i.size()},
        {w.b_c.data(), w.b_c.size()},           {w.b_o.data(), w.b_o.size()},
        {w.head_w.data(), w.head_w.size()},     {&w.head_b, 1},
    };
}

} // namespace detail

/// Windows the series with stride 1 and runs full-batch Adam for
/// config.epochs steps.
inline TrainedLstm train_lstm(const std::vector<double>& series, const LstmConfig& config) {
    config.validate();
    if (series.size() <= config.window + 1)
        throw InvalidInput("lstm train: series shorter than window + 2");

    std::vector<LstmSample> batch;
    for (std::size_t k = 0; k + config.window < series.size(); ++k) {
        LstmSample s;
        s.window.assign(series.begin() + k, series.begin() + k + config.window);
        s.target = series[k + config.window];
        batch.push_back(std::move(s));
    }

    TrainedLstm out;
    out.weights = LstmWeights::init(config.input_size, config.hidden_size, config.seed);

    std::size_t total = 0;
    for (auto& [ptr, n] : detail::parameter_views(out.weights)) total += n;
    detail::Adam adam(total, config.learning_rate);

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        double loss = 0.0;
        LstmWeights g = gradients(batch, out.weights, &loss);
        out.loss_history.push_back(loss);
        auto pv = detail::parameter_views(out.weights);
        auto gv = detail::parameter_views(g);
        ++adam.step;
        const double c1 = 1.0 - std::pow(adam.beta1, static_cast<double>(adam.step));
        const double c2 = 1.0 - std::pow(adam.beta2, static_cast<double>(adam.step));
        std::size_t offset = 0;
        for (std::size_t view = 0; view < pv.size(); ++view) {
            double* p = pv[view].first;
            const double* dg = gv[view].first;
            for (std::size_t k = 0; k < pv[view].second; ++k, ++offset) {
                adam.m[offset] = adam.beta1 * adam.m[offset] + (1.0 - adam.beta1) * dg[k];
                adam.v[offset] = adam.beta2 * adam.v[offset] + (1.0 - adam.beta2) * dg[k] * dg[k];
                p[k] -= adam.lr * (adam.m[offset] / c1) / (std::sqrt(adam.v[offset] / c2) + adam.eps);
            }
        }
    }
    return out;
}

/// One-step-ahead predictions over a series segment: one prediction per
/// window position, stride 1.
inline std::vector<double> predict_lstm(const std::vector<double>& segment, std::size_t window,
                                        const LstmWeights& w) {
    if (segment.size() <= window) throw InvalidInput("lstm predict: segment shorter than window");
    std::vector<double> out;
    out.reserve(segment.size() - window);
    std::vector<double> buf(window);
    for (std::size_t k = 0; k + window < segment.size(); ++k) {
        buf.assign(segment.begin() + k, segment.begin() + k + window);
        out.push_back(sequence_forward(buf, w));
    }
    return out;
}

} // namespace windcast
