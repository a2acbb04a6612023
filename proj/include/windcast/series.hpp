#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "windcast/common.hpp"

namespace windcast {

/// Uniformly sampled real-valued sequence. The sample interval is carried
/// for reporting only; all frequencies are expressed in rad/sample.
struct Series {
    std::vector<double> values;
    double sample_interval = 1.0;

    std::size_t size() const { return values.size(); }

    void validate() const {
        if (values.empty()) throw InvalidInput("series: empty");
        if (!(sample_interval > 0.0)) throw InvalidInput("series: non-positive sample interval");
        for (double v : values)
            if (!std::isfinite(v)) throw InvalidInput("series: non-finite value");
    }
};

inline double energy(const std::vector<double>& v) {
    double e = 0.0;
    for (double x : v) e += x * x;
    return e;
}

} // namespace windcast
