#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "windcast/common.hpp"
#include "windcast/linalg.hpp"

namespace windcast {

/// Aligned actual/predicted sequences for evaluation.
struct EvalPair {
    std::vector<double> actual;
    std::vector<double> predicted;

    void validate() const {
        if (actual.empty() || actual.size() != predicted.size())
            throw InvalidInput("metrics: sequences must be non-empty and equal length");
        for (std::size_t i = 0; i < actual.size(); ++i)
            if (!std::isfinite(actual[i]) || !std::isfinite(predicted[i]))
                throw InvalidInput("metrics: non-finite value at index " + std::to_string(i));
    }
    std::size_t size() const { return actual.size(); }
};

inline double mae(const EvalPair& p) {
    p.validate();
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::fabs(p.actual[i] - p.predicted[i]);
    return s / static_cast<double>(p.size());
}

inline double rmse(const EvalPair& p) {
    p.validate();
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        double e = p.actual[i] - p.predicted[i];
        s += e * e;
    }
    return std::sqrt(s / static_cast<double>(p.size()));
}

/// Mean absolute percentage error, in percent. Zero actual values make the
/// metric undefined; the error message lists the offending indices.
inline double mape(const EvalPair& p) {
    p.validate();
    std::string bad;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p.actual[i] == 0.0) bad += (bad.empty() ? "" : ",") + std::to_string(i);
    if (!bad.empty()) throw DegenerateInput("mape: zero actual at indices " + bad);
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        s += std::fabs((p.actual[i] - p.predicted[i]) / p.actual[i]);
    return 100.0 * s / static_cast<double>(p.size());
}

inline double r2(const EvalPair& p) {
    p.validate();
    double m = mean(p.actual);
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        double e = p.actual[i] - p.predicted[i];
        double d = p.actual[i] - m;
        ss_res += e * e;
        ss_tot += d * d;
    }
    if (ss_tot <= 0.0) throw DegenerateInput("r2: actual sequence has zero variance");
    return 1.0 - ss_res / ss_tot;
}

/// Pearson correlation coefficient between actual and predicted.
inline double cc(const EvalPair& p) {
    p.validate();
    double rho = 0.0;
    if (!pearson(p.actual, p.predicted, rho))
        throw DegenerateInput("cc: zero-variance sequence");
    return rho;
}

struct MetricSet {
    double rmse = 0.0;
    double mae = 0.0;
    double mape_pct = 0.0;
    double r2 = 0.0;
    double cc = 0.0;
};

inline MetricSet evaluate_all(const EvalPair& p) {
    return MetricSet{rmse(p), mae(p), mape(p), r2(p), cc(p)};
}

} // namespace windcast
