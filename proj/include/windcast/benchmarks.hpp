#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "windcast/common.hpp"
#include "windcast/ebqpso.hpp"

namespace windcast {

inline double sphere(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

inline double ackley(const std::vector<double>& x) {
    const double d = static_cast<double>(x.size());
    double sq = 0.0, cs = 0.0;
    for (double v : x) {
        sq += v * v;
        cs += std::cos(2.0 * M_PI * v);
    }
    return -20.0 * std::exp(-0.2 * std::sqrt(sq / d)) - std::exp(cs / d) + 20.0 + std::exp(1.0);
}

inline double griewank(const std::vector<double>& x) {
    double s = 0.0, p = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        s += x[i] * x[i] / 4000.0;
        p *= std::cos(x[i] / std::sqrt(static_cast<double>(i + 1)));
    }
    return s - p + 1.0;
}

inline double mccormick(const std::vector<double>& x) {
    if (x.size() != 2) throw InvalidInput("mccormick: requires dimension 2");
    return std::sin(x[0] + x[1]) + (x[0] - x[1]) * (x[0] - x[1]) - 1.5 * x[0] + 2.5 * x[1] + 1.0;
}

/// Evaluates a named benchmark function.
inline double benchmark(const std::string& name, const std::vector<double>& x) {
    if (x.empty()) throw InvalidInput("benchmark: empty point");
    if (name == "sphere") return sphere(x);
    if (name == "ackley") return ackley(x);
    if (name == "griewank") return griewank(x);
    if (name == "mccormick") return mccormick(x);
    throw InvalidInput("benchmark: unknown function '" + name + "'");
}

/// Conventional search box for a named benchmark function.
inline SearchSpace benchmark_space(const std::string& name, std::size_t dim) {
    if (name == "mccormick") {
        if (dim != 2) throw InvalidInput("mccormick: requires dimension 2");
        return SearchSpace::box({-1.5, -3.0}, {4.0, 4.0});
    }
    if (dim == 0) throw InvalidInput("benchmark_space: dimension must be positive");
    double half = 0.0;
    if (name == "sphere")
        half = 100.0;
    else if (name == "ackley")
        half = 32.768;
    else if (name == "griewank")
        half = 600.0;
    else
        throw InvalidInput("benchmark_space: unknown function '" + name + "'");
    return SearchSpace::box(std::vector<double>(dim, -half), std::vector<double>(dim, half));
}

/// Known global minimum value (for reporting alongside benchmark runs).
inline double benchmark_minimum(const std::string& name) {
    if (name == "mccormick") return -1.9133;
    if (name == "sphere" || name == "ackley" || name == "griewank") return 0.0;
    throw InvalidInput("benchmark_minimum: unknown function '" + name + "'");
}

} // namespace windcast
