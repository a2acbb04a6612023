#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "windcast/common.hpp"

namespace windcast {

/// Dense row-major matrix of doubles.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    explicit Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    double* row(std::size_t i) { return data.data() + i * cols; }
    const double* row(std::size_t i) const { return data.data() + i * cols; }
};

inline double dot(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += a[k] * b[k];
    return s;
}

inline double squared_distance(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double d = a[k] - b[k];
        s += d * d;
    }
    return s;
}

/// In-place Cholesky A = L·Lᵀ of a symmetric positive definite matrix.
/// Returns the lower triangle in `a` (upper left untouched garbage).
/// Throws ConditioningError when a pivot collapses.
inline void cholesky(Matrix& a) {
    const std::size_t n = a.rows;
    for (std::size_t i = 0; i < n; ++i) {
        double* li = a.row(i);
        for (std::size_t j = 0; j <= i; ++j) {
            const double* lj = a.row(j);
            double s = li[j] - dot(li, lj, j);
            if (i == j) {
                if (!(s > 0.0) || !std::isfinite(s)) {
                    throw ConditioningError(
                        "cholesky: non-positive pivot at row " + std::to_string(i),
                        std::numeric_limits<double>::infinity());
                }
                li[j] = std::sqrt(s);
            } else {
                li[j] = s / lj[j];
            }
        }
    }
}

/// Solves L·Lᵀ·x = b given the Cholesky factor (lower triangle of `l`).
inline std::vector<double> cholesky_solve(const Matrix& l, std::vector<double> b) {
    const std::size_t n = l.rows;
    for (std::size_t i = 0; i < n; ++i) {
        const double* li = l.row(i);
        b[i] = (b[i] - dot(li, b.data(), i)) / li[i];
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= l(k, i) * b[k];
        b[i] = s / l(i, i);
    }
    return b;
}

/// Gaussian elimination with partial pivoting; solves A·x = b for dense A.
/// Used where symmetry cannot be assumed.
inline std::vector<double> solve_dense(Matrix a, std::vector<double> b) {
    const std::size_t n = a.rows;
    if (a.cols != n || b.size() != n) throw InvalidInput("solve_dense: shape mismatch");
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        double best = std::fabs(a(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            double v = std::fabs(a(r, col));
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best == 0.0 || !std::isfinite(best)) {
            throw ConditioningError("solve_dense: singular matrix",
                                    std::numeric_limits<double>::infinity());
        }
        if (piv != col) {
            for (std::size_t c = col; c < n; ++c) std::swap(a(piv, c), a(col, c));
            std::swap(b[piv], b[col]);
        }
        const double d = a(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            double f = a(r, col) / d;
            if (f == 0.0) continue;
            for (std::size_t c = col + 1; c < n; ++c) a(r, c) -= f * a(col, c);
            b[r] -= f * b[col];
            a(r, col) = 0.0;
        }
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= a(i, k) * b[k];
        b[i] = s / a(i, i);
    }
    return b;
}

inline double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

/// Pearson correlation. Returns false (and leaves `out` at 0) when either
/// sequence has zero variance.
inline bool pearson(const std::vector<double>& x, const std::vector<double>& y, double& out) {
    const std::size_t n = x.size();
    double mx = mean(x), my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    out = 0.0;
    if (sxx <= 0.0 || syy <= 0.0) return false;
    out = sxy / std::sqrt(sxx * syy);
    return true;
}

} // namespace windcast
