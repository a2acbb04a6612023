#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "windcast/common.hpp"
#include "windcast/fft.hpp"
#include "windcast/linalg.hpp"
#include "windcast/series.hpp"

namespace windcast {

/// One narrow-band component extracted from a series.
struct Mode {
    std::vector<double> values;     // time domain, same length as the source
    double center_frequency = 0.0;  // rad/sample in [0, pi]
    bool converged = true;          // ADMM hit its tolerance within the budget
};

struct SvmdConfig {
    double alpha = 5000.0;              // spectral compactness balance
    double tau = 0.0;                   // Lagrangian ascent step; 0 = no dual ascent
    double inner_tol = 1e-7;            // relative-change stop for the ADMM loop
    std::size_t max_inner_iters = 500;
    std::size_t max_modes = 10;
    double residual_energy_ratio = 1e-3; // outer stop: residual energy / input energy

    void validate() const {
        if (!(alpha > 0.0)) throw InvalidInput("svmd: alpha must be positive");
        if (tau < 0.0) throw InvalidInput("svmd: tau must be non-negative");
        if (!(inner_tol > 0.0)) throw InvalidInput("svmd: inner_tol must be positive");
        if (max_inner_iters == 0) throw InvalidInput("svmd: max_inner_iters must be positive");
        if (max_modes == 0) throw InvalidInput("svmd: max_modes must be positive");
        if (!(residual_energy_ratio > 0.0) || !(residual_energy_ratio < 1.0))
            throw InvalidInput("svmd: residual_energy_ratio must lie in (0,1)");
    }
};

struct SvmdResult {
    std::vector<Mode> modes;
    std::vector<double> residual;  // input minus the sum of modes, element-wise
    std::size_t source_length = 0;

    /// Final residual energy over input energy (1.0 for an all-zero input).
    double residual_ratio = 1.0;
};

/// One-sided spectrum of a series (alias kept close to the decomposition API).
inline Spectrum spectrum(const Series& series) {
    series.validate();
    return analyze(series.values);
}

struct ExtractedMode {
    Mode mode;
    std::vector<cd> lambda;  // final multiplier spectrum on the one-sided grid
};

/// Extracts one compact-spectrum mode from a working residual spectrum by
/// ADMM. `prior_center_freqs` are the centers of already-accepted modes;
/// the update suppresses the new mode around them. `omega_init` seeds the
/// center-frequency iteration.
inline ExtractedMode extract_mode(const Spectrum& residual_spectrum,
                                  const std::vector<double>& prior_center_freqs,
                                  const SvmdConfig& config, double omega_init) {
    config.validate();
    if (!(omega_init >= 0.0) || !(omega_init <= M_PI))
        throw InvalidInput("extract_mode: omega_init outside [0, pi]");
    for (double w : prior_center_freqs)
        if (w == omega_init)
            throw InvalidInput("extract_mode: omega_init coincides with a prior center");

    const std::size_t half = residual_spectrum.num_bins();
    const double a2 = config.alpha * config.alpha;

    std::vector<cd> u(half, cd(0, 0));       // current mode spectrum
    std::vector<cd> lambda(half, cd(0, 0));  // multiplier spectrum
    double omega = omega_init;
    bool converged = false;

    std::vector<double> omega_k(half), prior_pen(half, 0.0);
    for (std::size_t k = 0; k < half; ++k) omega_k[k] = residual_spectrum.omega(k);
    for (double wi : prior_center_freqs) {
        for (std::size_t k = 0; k < half; ++k) {
            double d = omega_k[k] - wi;
            double d4 = d * d * d * d;
            prior_pen[k] += 1.0 / (a2 * d4);  // +inf exactly on a prior center: bin zeroed
        }
    }

    std::vector<cd> u_next(half);
    for (std::size_t iter = 0; iter < config.max_inner_iters; ++iter) {
        // mode update
        double u_old_energy = 0.0, delta_energy = 0.0;
        for (std::size_t k = 0; k < half; ++k) {
            double d = omega_k[k] - omega;
            double d2 = d * d;
            double quart = a2 * d2 * d2;
            cd num = residual_spectrum.bins[k] + quart * u[k] + 0.5 * lambda[k];
            double den = (1.0 + quart) * (1.0 + 2.0 * config.alpha * d2 + prior_pen[k]);
            cd next = std::isinf(den) ? cd(0, 0) : num / den;
            u_old_energy += std::norm(u[k]);
            delta_energy += std::norm(next - u[k]);
            u_next[k] = next;
        }
        u.swap(u_next);

        // center frequency update: spectral centroid of the new mode,
        // holding the previous value when the mode carries no energy
        double num_w = 0.0, den_w = 0.0;
        for (std::size_t k = 0; k < half; ++k) {
            double p = std::norm(u[k]);
            num_w += omega_k[k] * p;
            den_w += p;
        }
        if (den_w >= 1e-30) omega = num_w / den_w;

        // multiplier ascent on the reconstruction constraint, with the
        // unprocessed-part estimate folded in
        if (config.tau != 0.0) {
            for (std::size_t k = 0; k < half; ++k) {
                double d = omega_k[k] - omega;
                double d2 = d * d;
                double quart = a2 * d2 * d2;
                lambda[k] += config.tau * (residual_spectrum.bins[k] - u[k]) / (1.0 + quart);
            }
        }

        if (delta_energy <= config.inner_tol * std::max(u_old_energy, 1e-300)) {
            converged = true;
            break;
        }
    }

    ExtractedMode out;
    Spectrum mode_spec;
    mode_spec.length = residual_spectrum.length;
    mode_spec.bins = u;
    out.mode.values = synthesize(mode_spec);
    out.mode.center_frequency = omega;
    out.mode.converged = converged;
    out.lambda = std::move(lambda);
    return out;
}

namespace detail {

inline std::size_t dominant_bin(const Spectrum& s) {
    std::size_t best = 0;
    double best_mag = -1.0;
    for (std::size_t k = 0; k < s.num_bins(); ++k) {
        double m = std::norm(s.bins[k]);
        if (m > best_mag) {
            best_mag = m;
            best = k;
        }
    }
    return best;
}

} // namespace detail

/// Successive decomposition: extracts modes one at a time, seeding each at
/// the dominant bin of the working residual, until the residual energy
/// ratio or the mode budget is hit. The residual is formed in the time
/// domain so input == sum(modes) + residual holds by construction.
inline SvmdResult decompose(const Series& series, const SvmdConfig& config) {
    config.validate();
    series.validate();
    if (series.size() < 8) throw InvalidInput("decompose: series shorter than 8 samples");

    SvmdResult result;
    result.source_length = series.size();
    result.residual = series.values;

    const double input_energy = energy(series.values);
    if (input_energy <= 0.0) {
        result.residual_ratio = 0.0;
        return result;  // silent input: nothing to extract
    }

    std::vector<double> priors;
    while (result.modes.size() < config.max_modes) {
        double ratio = energy(result.residual) / input_energy;
        result.residual_ratio = ratio;
        if (ratio < config.residual_energy_ratio) break;

        Spectrum rs = analyze(result.residual);
        double omega0 = rs.omega(detail::dominant_bin(rs));
        // nudge off an exact prior center; the penalty already forbids it
        const double away = omega0 < M_PI / 2.0 ? M_PI : 0.0;
        while (std::find(priors.begin(), priors.end(), omega0) != priors.end())
            omega0 = std::nextafter(omega0, away);

        ExtractedMode em = extract_mode(rs, priors, config, omega0);
        priors.push_back(em.mode.center_frequency);
        for (std::size_t t = 0; t < result.residual.size(); ++t)
            result.residual[t] -= em.mode.values[t];
        result.modes.push_back(std::move(em.mode));
    }
    result.residual_ratio = energy(result.residual) / input_energy;
    return result;
}

struct ModeCorrelation {
    Matrix matrix;                 // Pearson correlations, diagonal fixed at 1
    std::vector<bool> degenerate;  // true for zero-variance modes
};

/// Pairwise Pearson correlations between modes. A zero-variance mode gets
/// zero off-diagonal entries and its degenerate flag set.
inline ModeCorrelation mode_correlation_matrix(const SvmdResult& result) {
    const std::size_t n = result.modes.size();
    if (n == 0) throw InvalidInput("mode_correlation_matrix: no modes");
    ModeCorrelation out;
    out.matrix = Matrix(n, n, 0.0);
    out.degenerate.assign(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        out.matrix(i, i) = 1.0;
        const std::vector<double>& v = result.modes[i].values;
        double m = mean(v), var = 0.0;
        for (double x : v) var += (x - m) * (x - m);
        out.degenerate[i] = (var <= 0.0);
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double rho = 0.0;
            if (!out.degenerate[i] && !out.degenerate[j])
                pearson(result.modes[i].values, result.modes[j].values, rho);
            out.matrix(i, j) = out.matrix(j, i) = rho;
        }
    }
    return out;
}

} // namespace windcast
