#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "windcast/common.hpp"
#include "windcast/linalg.hpp"

namespace windcast {

/// Gaussian RBF kernel exp(-|x-x2|^2 / (2 sigma2)).
inline double rbf_kernel(const std::vector<double>& x, const std::vector<double>& x2,
                         double sigma2) {
    if (x.size() != x2.size()) throw InvalidInput("rbf_kernel: dimension mismatch");
    if (!(sigma2 > 0.0)) throw InvalidInput("rbf_kernel: sigma2 must be positive");
    return std::exp(-squared_distance(x.data(), x2.data(), x.size()) / (2.0 * sigma2));
}

struct LssvmHyper {
    double gamma = 1.0;   // error penalty
    double sigma2 = 1.0;  // squared kernel width

    void validate() const {
        if (!(gamma > 0.0)) throw InvalidInput("lssvm: gamma must be positive");
        if (!(sigma2 > 0.0)) throw InvalidInput("lssvm: sigma2 must be positive");
    }
};

struct TrainingSet {
    Matrix inputs;                // N x m lagged-window features
    std::vector<double> targets;  // length N

    void validate() const {
        if (inputs.rows == 0 || inputs.cols == 0)
            throw InvalidInput("lssvm: empty training set");
        if (inputs.rows != targets.size())
            throw InvalidInput("lssvm: inputs/targets row mismatch");
        for (double v : inputs.data)
            if (!std::isfinite(v)) throw InvalidInput("lssvm: non-finite feature");
        for (double v : targets)
            if (!std::isfinite(v)) throw InvalidInput("lssvm: non-finite target");
    }
};

struct LssvmModel {
    Matrix support_inputs;
    std::vector<double> duals;  // a
    double bias = 0.0;          // b
    LssvmHyper hyper;
    double kkt_residual = 0.0;  // relative residual of the stored solution

    std::size_t dimension() const { return support_inputs.cols; }
};

namespace detail {

inline Matrix kernel_matrix(const Matrix& x, double sigma2) {
    const std::size_t n = x.rows;
    Matrix k(n, n);
    const double inv = -1.0 / (2.0 * sigma2);
    for (std::size_t i = 0; i < n; ++i) {
        k(i, i) = 1.0;
        for (std::size_t j = 0; j < i; ++j) {
            double v = std::exp(inv * squared_distance(x.row(i), x.row(j), x.cols));
            k(i, j) = v;
            k(j, i) = v;
        }
    }
    return k;
}

} // namespace detail

/// Trains by solving the bordered KKT system
///   [0   1^T ] [b]   [0]
///   [1  K+I/g] [a] = [y]
/// via Cholesky of the SPD block and a Schur complement for the bias.
/// Throws ConditioningError when the condition estimate exceeds 1e12 or the
/// factorization collapses.
inline LssvmModel train(const TrainingSet& data, const LssvmHyper& hyper,
                        double condition_limit = 1e12) {
    data.validate();
    hyper.validate();
    const std::size_t n = data.inputs.rows;

    const Matrix omega = detail::kernel_matrix(data.inputs, hyper.sigma2);
    Matrix k = omega;
    const double ridge = 1.0 / hyper.gamma;
    double max_row_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double s = ridge;
        for (std::size_t j = 0; j < n; ++j) s += std::fabs(k(i, j));
        max_row_sum = std::max(max_row_sum, s);
        k(i, i) += ridge;
    }
    // Gershgorin bound over the ridge floor; eigenvalues of K+I/g sit in
    // [1/g, max_row_sum] because K is positive semidefinite
    const double cond_estimate = max_row_sum * hyper.gamma;
    if (cond_estimate > condition_limit)
        throw ConditioningError("lssvm: system condition estimate too large", cond_estimate);

    std::vector<double> eta, nu;
    try {
        cholesky(k);
        eta = cholesky_solve(k, data.targets);
        nu = cholesky_solve(k, std::vector<double>(n, 1.0));
    } catch (const ConditioningError&) {
        throw ConditioningError("lssvm: kernel system not positive definite", cond_estimate);
    }

    double s_eta = 0.0, s_nu = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        s_eta += eta[i];
        s_nu += nu[i];
    }
    if (s_nu == 0.0 || !std::isfinite(s_nu))
        throw ConditioningError("lssvm: degenerate Schur complement", cond_estimate);

    LssvmModel model;
    model.bias = s_eta / s_nu;
    model.duals.resize(n);
    for (std::size_t i = 0; i < n; ++i) model.duals[i] = eta[i] - model.bias * nu[i];
    model.support_inputs = data.inputs;
    model.hyper = hyper;

    // relative residual of the full bordered system against [0; y]
    double r2sum = 0.0, ynorm = 0.0;
    double top = 0.0;
    for (std::size_t i = 0; i < n; ++i) top += model.duals[i];
    r2sum += top * top;
    for (std::size_t i = 0; i < n; ++i) {
        double row = model.bias + ridge * model.duals[i];
        for (std::size_t j = 0; j < n; ++j) row += omega(i, j) * model.duals[j];
        double r = row - data.targets[i];
        r2sum += r * r;
        ynorm += data.targets[i] * data.targets[i];
    }
    model.kkt_residual = std::sqrt(r2sum) / std::max(std::sqrt(ynorm), 1e-300);
    return model;
}

/// Kernel expansion sum_i a_i k(x, x_i) + b.
inline double predict(const LssvmModel& model, const std::vector<double>& x) {
    if (x.size() != model.dimension()) throw InvalidInput("predict: dimension mismatch");
    const double inv = -1.0 / (2.0 * model.hyper.sigma2);
    double s = model.bias;
    for (std::size_t i = 0; i < model.support_inputs.rows; ++i)
        s += model.duals[i] *
             std::exp(inv * squared_distance(model.support_inputs.row(i), x.data(), x.size()));
    return s;
}

inline std::vector<double> predict_rows(const LssvmModel& model, const Matrix& xs) {
    std::vector<double> out(xs.rows);
    std::vector<double> row(xs.cols);
    for (std::size_t i = 0; i < xs.rows; ++i) {
        row.assign(xs.row(i), xs.row(i) + xs.cols);
        out[i] = predict(model, row);
    }
    return out;
}

} // namespace windcast
