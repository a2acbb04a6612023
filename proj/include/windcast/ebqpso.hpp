#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "windcast/common.hpp"
#include "windcast/rng.hpp"

namespace windcast {

/// Bounded search box. Dimensions flagged log_scale are searched in log10
/// coordinates; integer dimensions round on decode.
struct SearchSpace {
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<bool> log_scale;
    std::vector<bool> integer_dims;

    std::size_t dimension() const { return lower.size(); }

    void validate() const {
        const std::size_t d = lower.size();
        if (d == 0) throw InvalidInput("search space: empty");
        if (upper.size() != d || log_scale.size() != d || integer_dims.size() != d)
            throw InvalidInput("search space: field length mismatch");
        for (std::size_t j = 0; j < d; ++j) {
            if (!(lower[j] < upper[j]))
                throw InvalidInput("search space: lower must be < upper");
            if (log_scale[j] && !(lower[j] > 0.0))
                throw InvalidInput("search space: log-scale dimension needs positive lower bound");
        }
    }

    static SearchSpace box(std::vector<double> lo, std::vector<double> hi) {
        SearchSpace s;
        s.lower = std::move(lo);
        s.upper = std::move(hi);
        s.log_scale.assign(s.lower.size(), false);
        s.integer_dims.assign(s.lower.size(), false);
        return s;
    }
};

/// Min-max normalization of a position into [0,1]^d (log10 coordinates for
/// log-scale dimensions). Out-of-bounds inputs clamp and set `clamped`.
inline std::vector<double> normalize(const std::vector<double>& position, const SearchSpace& space,
                                     bool* clamped = nullptr) {
    space.validate();
    if (position.size() != space.dimension())
        throw InvalidInput("normalize: dimension mismatch");
    std::vector<double> out(position.size());
    bool hit = false;
    for (std::size_t j = 0; j < position.size(); ++j) {
        double lo = space.lower[j], hi = space.upper[j], x = position[j];
        if (space.log_scale[j]) {
            lo = std::log10(lo);
            hi = std::log10(hi);
            x = std::log10(x);
        }
        double t = (x - lo) / (hi - lo);
        if (t < 0.0 || t > 1.0) hit = true;
        out[j] = std::clamp(t, 0.0, 1.0);
    }
    if (clamped) *clamped = hit;
    return out;
}

/// Inverse of normalize. Integer dimensions round to the nearest integer and
/// clamp back into the box.
inline std::vector<double> denormalize(const std::vector<double>& unit, const SearchSpace& space) {
    space.validate();
    if (unit.size() != space.dimension()) throw InvalidInput("denormalize: dimension mismatch");
    std::vector<double> out(unit.size());
    for (std::size_t j = 0; j < unit.size(); ++j) {
        double lo = space.lower[j], hi = space.upper[j];
        double x;
        if (space.log_scale[j]) {
            double llo = std::log10(lo), lhi = std::log10(hi);
            x = std::pow(10.0, llo + unit[j] * (lhi - llo));
        } else {
            x = lo + unit[j] * (hi - lo);
        }
        if (space.integer_dims[j]) x = std::round(x);
        out[j] = std::clamp(x, lo, hi);
    }
    return out;
}

struct Particle {
    std::vector<double> position;        // normalized [0,1]^d
    std::vector<double> pbest_position;  // normalized
    double pbest_fitness = std::numeric_limits<double>::infinity();
};

struct Swarm {
    std::vector<Particle> particles;
    std::size_t size() const { return particles.size(); }
};

enum class CeMode { fixed, linear_decay };

struct EbqpsoConfig {
    std::size_t population = 25;   // M
    std::size_t generations = 100; // T
    std::size_t dimension = 3;     // d
    double jumping_rate = 0.3;
    std::size_t transposon_count = 1;
    std::size_t transposon_size = 1;
    std::size_t lambda = 5;        // breed every lambda generations
    CeMode ce_mode = CeMode::fixed;
    double ce_alpha = 0.5;         // used when ce_mode == fixed
    std::uint64_t seed = 1;

    void validate() const {
        if (population == 0 || generations == 0 || dimension == 0)
            throw InvalidInput("ebqpso: population, generations, dimension must be positive");
        if (jumping_rate < 0.0 || jumping_rate > 1.0)
            throw InvalidInput("ebqpso: jumping_rate must lie in [0,1]");
        if (lambda == 0 || lambda > generations)
            throw InvalidInput("ebqpso: lambda must lie in [1, generations]");
        if (transposon_count == 0) throw InvalidInput("ebqpso: transposon_count must be positive");
        if (transposon_size == 0 || transposon_size > dimension)
            throw InvalidInput("ebqpso: transposon_size must lie in [1, dimension]");
    }
};

struct OptimizationTrace {
    std::vector<double> best_position;    // decoded search-space coordinates
    double best_fitness = std::numeric_limits<double>::infinity();
    std::vector<double> fitness_history;  // best-ever per generation
    std::size_t evaluation_count = 0;
};

/// Per-dimension arithmetic mean of the personal best positions.
inline std::vector<double> mean_best(const std::vector<std::vector<double>>& pbest_positions) {
    if (pbest_positions.empty()) throw InvalidInput("mean_best: empty swarm");
    const std::size_t d = pbest_positions.front().size();
    std::vector<double> m(d, 0.0);
    for (const auto& p : pbest_positions) {
        if (p.size() != d) throw InvalidInput("mean_best: dimension mismatch");
        for (std::size_t j = 0; j < d; ++j) m[j] += p[j];
    }
    for (double& v : m) v /= static_cast<double>(pbest_positions.size());
    return m;
}

/// Contraction-expansion coefficient for generation t of T.
inline double contraction_expansion(std::size_t t, std::size_t total, CeMode mode,
                                    double fixed_value = 0.5) {
    if (mode == CeMode::fixed) return fixed_value;
    return 0.5 + 0.5 * static_cast<double>(total - t) / static_cast<double>(total);
}

/// One QPSO position update over the whole swarm, in normalized coordinates.
/// Draw order per particle, per dimension: phi, u, sign.
inline void qpso_step(Swarm& swarm, const std::vector<double>& gbest,
                      const std::vector<double>& mbest, double alpha, Rng& rng) {
    for (Particle& p : swarm.particles) {
        for (std::size_t j = 0; j < p.position.size(); ++j) {
            double phi = rng.uniform();
            double u = rng.uniform_open();
            bool plus = rng.uniform() < 0.5;
            double attractor = phi * p.pbest_position[j] + (1.0 - phi) * gbest[j];
            double spread = alpha * std::fabs(mbest[j] - p.position[j]) * std::log(1.0 / u);
            double x = plus ? attractor + spread : attractor - spread;
            p.position[j] = std::clamp(x, 0.0, 1.0);
        }
    }
}

namespace detail {

/// Cut-and-paste inside one chromosome: remove the block at src, reinsert at dst.
inline void cut_paste_within(std::vector<double>& c, std::size_t src, std::size_t dst,
                             std::size_t len) {
    std::vector<double> block(c.begin() + src, c.begin() + src + len);
    c.erase(c.begin() + src, c.begin() + src + len);
    c.insert(c.begin() + dst, block.begin(), block.end());
}

} // namespace detail

/// Transposon breeding over the elitist pool (M personal bests + the global
/// best), all in normalized coordinates. For each chromosome, with
/// probability jumping_rate a partner is drawn; cut-and-paste relocates a
/// gene block (swapping blocks when the partner differs, so chromosome
/// lengths are preserved), copy-and-paste overwrites the target block.
inline std::vector<std::vector<double>> transposon_operator(
    std::vector<std::vector<double>> epool, double jumping_rate, std::size_t transposon_count,
    std::size_t transposon_size, Rng& rng) {
    const std::size_t pool = epool.size();
    if (pool == 0) throw InvalidInput("transposon_operator: empty pool");
    const std::size_t d = epool.front().size();
    if (transposon_size > d) throw InvalidInput("transposon_operator: block longer than chromosome");
    const std::size_t loci = d - transposon_size + 1;

    for (std::size_t i = 0; i < pool; ++i) {
        if (rng.uniform() >= jumping_rate) continue;
        // C2 = ceil(rand * pool), clamped away from the zero corner case
        std::size_t c2 =
            static_cast<std::size_t>(std::max<double>(1.0, std::ceil(rng.uniform() * pool))) - 1;
        bool cut = rng.uniform() > 0.5;
        for (std::size_t rep = 0; rep < transposon_count; ++rep) {
            std::size_t src = rng.index(loci);
            std::size_t dst = rng.index(loci);
            if (i == c2) {
                if (cut) {
                    detail::cut_paste_within(epool[i], src, dst, transposon_size);
                } else {
                    std::vector<double> block(epool[i].begin() + src,
                                              epool[i].begin() + src + transposon_size);
                    std::copy(block.begin(), block.end(), epool[i].begin() + dst);
                }
            } else {
                if (cut) {
                    for (std::size_t k = 0; k < transposon_size; ++k)
                        std::swap(epool[i][src + k], epool[c2][dst + k]);
                } else {
                    for (std::size_t k = 0; k < transposon_size; ++k)
                        epool[c2][dst + k] = epool[i][src + k];
                }
            }
        }
    }
    return epool;
}

using FitnessFn = std::function<double(const std::vector<double>&)>;

namespace detail {

struct EvalCounter {
    const FitnessFn& fn;
    const SearchSpace& space;
    std::size_t count = 0;

    double operator()(const std::vector<double>& unit) {
        ++count;
        double v = fn(denormalize(unit, space));
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    }
};

} // namespace detail

/// Runs the elitist-breeding QPSO (or plain QPSO when breeding is disabled)
/// minimizing `fitness` over the box. Non-finite fitness values are treated
/// as worst. The single RNG stream is consumed in a fixed order: init, then
/// per generation [breeding draws when due, then per particle phi/u/sign per
/// dimension].
inline OptimizationTrace run_ebqpso(const FitnessFn& fitness, const SearchSpace& space,
                                    const EbqpsoConfig& config, bool breeding_enabled = true) {
    config.validate();
    space.validate();
    if (space.dimension() != config.dimension)
        throw InvalidInput("ebqpso: space/config dimension mismatch");

    Rng rng(config.seed);
    detail::EvalCounter eval{fitness, space};

    Swarm swarm;
    swarm.particles.resize(config.population);
    for (Particle& p : swarm.particles) {
        p.position.resize(config.dimension);
        for (double& x : p.position) x = rng.uniform();
        p.pbest_position = p.position;
    }
    for (Particle& p : swarm.particles) p.pbest_fitness = eval(p.position);

    auto best_index = [&swarm]() {
        std::size_t best = 0;
        for (std::size_t i = 1; i < swarm.size(); ++i)
            if (swarm.particles[i].pbest_fitness < swarm.particles[best].pbest_fitness) best = i;
        return best;
    };

    std::vector<double> gbest = swarm.particles[best_index()].pbest_position;
    double gbest_fitness = swarm.particles[best_index()].pbest_fitness;

    OptimizationTrace trace;
    trace.fitness_history.reserve(config.generations);

    for (std::size_t t = 1; t <= config.generations; ++t) {
        std::vector<std::vector<double>> pbests(swarm.size());
        for (std::size_t i = 0; i < swarm.size(); ++i)
            pbests[i] = swarm.particles[i].pbest_position;
        std::vector<double> mbest = mean_best(pbests);

        if (breeding_enabled && t % config.lambda == 0) {
            std::vector<std::vector<double>> epool = pbests;
            epool.push_back(gbest);
            std::vector<std::vector<double>> bred =
                transposon_operator(std::move(epool), config.jumping_rate,
                                    config.transposon_count, config.transposon_size, rng);
            for (std::size_t i = 0; i < swarm.size(); ++i) {
                double f = eval(bred[i]);
                if (f < swarm.particles[i].pbest_fitness) {
                    swarm.particles[i].pbest_fitness = f;
                    swarm.particles[i].pbest_position = bred[i];
                }
            }
            double f_elite = eval(bred.back());
            if (f_elite < gbest_fitness) {
                gbest_fitness = f_elite;
                gbest = bred.back();
            }
            std::size_t bi = best_index();
            if (swarm.particles[bi].pbest_fitness < gbest_fitness) {
                gbest_fitness = swarm.particles[bi].pbest_fitness;
                gbest = swarm.particles[bi].pbest_position;
            }
        }

        double alpha = contraction_expansion(t, config.generations, config.ce_mode, config.ce_alpha);
        qpso_step(swarm, gbest, mbest, alpha, rng);

        for (Particle& p : swarm.particles) {
            double f = eval(p.position);
            if (f < p.pbest_fitness) {
                p.pbest_fitness = f;
                p.pbest_position = p.position;
            }
        }
        std::size_t bi = best_index();
        if (swarm.particles[bi].pbest_fitness < gbest_fitness) {
            gbest_fitness = swarm.particles[bi].pbest_fitness;
            gbest = swarm.particles[bi].pbest_position;
        }
        trace.fitness_history.push_back(gbest_fitness);
    }

    trace.best_position = denormalize(gbest, space);
    trace.best_fitness = gbest_fitness;
    trace.evaluation_count = eval.count;
    return trace;
}

inline OptimizationTrace run_qpso(const FitnessFn& fitness, const SearchSpace& space,
                                  const EbqpsoConfig& config) {
    return run_ebqpso(fitness, space, config, /*breeding_enabled=*/false);
}

/// Textbook velocity PSO baseline for the benchmark harness
/// (omega 0.729, c1 = c2 = 1.494, positions clamped to the box).
inline OptimizationTrace run_pso(const FitnessFn& fitness, const SearchSpace& space,
                                 const EbqpsoConfig& config) {
    config.validate();
    space.validate();
    if (space.dimension() != config.dimension)
        throw InvalidInput("pso: space/config dimension mismatch");
    const double w = 0.729, c1 = 1.494, c2 = 1.494;

    Rng rng(config.seed);
    detail::EvalCounter eval{fitness, space};

    const std::size_t m = config.population, d = config.dimension;
    std::vector<std::vector<double>> x(m, std::vector<double>(d));
    std::vector<std::vector<double>> v(m, std::vector<double>(d, 0.0));
    for (auto& xi : x)
        for (double& c : xi) c = rng.uniform();
    std::vector<std::vector<double>> pbest = x;
    std::vector<double> pfit(m);
    for (std::size_t i = 0; i < m; ++i) pfit[i] = eval(x[i]);

    std::size_t gi = 0;
    for (std::size_t i = 1; i < m; ++i)
        if (pfit[i] < pfit[gi]) gi = i;
    std::vector<double> gbest = pbest[gi];
    double gfit = pfit[gi];

    OptimizationTrace trace;
    for (std::size_t t = 1; t <= config.generations; ++t) {
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                double r1 = rng.uniform(), r2 = rng.uniform();
                v[i][j] = w * v[i][j] + c1 * r1 * (pbest[i][j] - x[i][j]) +
                          c2 * r2 * (gbest[j] - x[i][j]);
                x[i][j] = std::clamp(x[i][j] + v[i][j], 0.0, 1.0);
            }
            double f = eval(x[i]);
            if (f < pfit[i]) {
                pfit[i] = f;
                pbest[i] = x[i];
            }
            if (f < gfit) {
                gfit = f;
                gbest = x[i];
            }
        }
        trace.fitness_history.push_back(gfit);
    }
    trace.best_position = denormalize(gbest, space);
    trace.best_fitness = gfit;
    trace.evaluation_count = eval.count;
    return trace;
}

} // namespace windcast
