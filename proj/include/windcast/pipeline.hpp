#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "windcast/common.hpp"
#include "windcast/csv.hpp"
#include "windcast/ebqpso.hpp"
#include "windcast/lssvm.hpp"
#include "windcast/lstm.hpp"
#include "windcast/metrics.hpp"
#include "windcast/rng.hpp"
#include "windcast/series.hpp"
#include "windcast/svmd.hpp"

namespace windcast {

/// Chronological train/validation/test fractions.
struct SplitSpec {
    double train_frac = 0.70;
    double val_frac = 0.15;
    double test_frac = 0.15;

    void validate() const {
        if (std::fabs(train_frac + val_frac + test_frac - 1.0) > 1e-9)
            throw InvalidInput("split: fractions must sum to 1");
        if (!(train_frac > 0.0) || !(val_frac > 0.0) || !(test_frac > 0.0))
            throw InvalidInput("split: all fractions must be positive");
    }
};

struct SplitIndices {
    std::size_t train_end = 0;  // train = [0, train_end)
    std::size_t val_end = 0;    // validation = [train_end, val_end), test = [val_end, n)
    std::size_t n = 0;
};

inline SplitIndices split_indices(std::size_t n, const SplitSpec& spec) {
    spec.validate();
    SplitIndices s;
    s.n = n;
    s.train_end = static_cast<std::size_t>(std::floor(spec.train_frac * static_cast<double>(n)));
    s.val_end = static_cast<std::size_t>(
        std::floor((spec.train_frac + spec.val_frac) * static_cast<double>(n)));
    if (s.train_end == 0 || s.val_end <= s.train_end || s.val_end >= n)
        throw InvalidInput("split: a segment is empty at this series length");
    return s;
}

/// Raw load result: parsed values with a missing-entry mask. Imputation is
/// deferred until the split is known.
struct LoadedSeries {
    std::vector<double> values;  // missing entries hold 0 and are flagged
    std::vector<bool> missing;
};

inline LoadedSeries load_series(const std::string& path, const std::string& column) {
    CsvTable table = read_csv(path);
    std::size_t col = table.column_index(column);
    if (table.rows.empty()) throw InvalidInput("load_series: no data rows in '" + path + "'");
    LoadedSeries out;
    out.values.reserve(table.rows.size());
    out.missing.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        if (col >= row.size()) throw InvalidInput("load_series: short row in '" + path + "'");
        double v = 0.0;
        bool present = parse_cell(row[col], v);
        out.values.push_back(present ? v : 0.0);
        out.missing.push_back(!present);
    }
    return out;
}

/// Imputes missing entries (and outliers beyond mean +- 5 std of the train
/// segment) with the train-segment mean. Returns the imputed series and the
/// mean actually used.
inline std::pair<std::vector<double>, double> impute_with_train_stats(const LoadedSeries& loaded,
                                                                      const SplitIndices& split) {
    if (loaded.values.size() != split.n) throw InvalidInput("impute: split/series length mismatch");
    std::vector<bool> missing = loaded.missing;

    auto train_mean_std = [&](double& mu, double& sd) {
        double s = 0.0, s2 = 0.0;
        std::size_t count = 0;
        for (std::size_t i = 0; i < split.train_end; ++i) {
            if (missing[i]) continue;
            s += loaded.values[i];
            ++count;
        }
        if (count == 0) throw InvalidInput("impute: training segment entirely missing");
        mu = s / static_cast<double>(count);
        for (std::size_t i = 0; i < split.train_end; ++i) {
            if (missing[i]) continue;
            s2 += (loaded.values[i] - mu) * (loaded.values[i] - mu);
        }
        sd = std::sqrt(s2 / static_cast<double>(count));
    };

    double mu = 0.0, sd = 0.0;
    train_mean_std(mu, sd);
    if (sd > 0.0) {
        for (std::size_t i = 0; i < split.n; ++i)
            if (!missing[i] && std::fabs(loaded.values[i] - mu) > 5.0 * sd) missing[i] = true;
        train_mean_std(mu, sd);  // mean over surviving train entries only
    }

    std::vector<double> values = loaded.values;
    for (std::size_t i = 0; i < split.n; ++i)
        if (missing[i]) values[i] = mu;
    return {std::move(values), mu};
}

/// Lagged-window design matrix: row k = series[k .. k+m-1], target k = series[k+m].
struct WindowedSet {
    std::size_t window = 0;
    Matrix inputs;
    std::vector<double> targets;
};

inline WindowedSet make_windows(const std::vector<double>& series, std::size_t m) {
    if (m == 0) throw InvalidInput("make_windows: window must be positive");
    if (series.size() <= m) throw InvalidInput("make_windows: window not smaller than series");
    const std::size_t rows = series.size() - m;
    WindowedSet out;
    out.window = m;
    out.inputs = Matrix(rows, m);
    out.targets.resize(rows);
    for (std::size_t k = 0; k < rows; ++k) {
        for (std::size_t j = 0; j < m; ++j) out.inputs(k, j) = series[k + j];
        out.targets[k] = series[k + m];
    }
    return out;
}

/// Train-statistics z-score map.
struct Standardizer {
    double mu = 0.0;
    double sigma = 1.0;

    static Standardizer fit(const std::vector<double>& v, std::size_t end) {
        if (end == 0 || end > v.size()) throw InvalidInput("standardizer: bad segment");
        double s = 0.0;
        for (std::size_t i = 0; i < end; ++i) s += v[i];
        Standardizer z;
        z.mu = s / static_cast<double>(end);
        double s2 = 0.0;
        for (std::size_t i = 0; i < end; ++i) s2 += (v[i] - z.mu) * (v[i] - z.mu);
        z.sigma = std::sqrt(s2 / static_cast<double>(end));
        if (!(z.sigma > 1e-12)) z.sigma = 1.0;  // constant segment: shift only
        return z;
    }
    std::vector<double> apply(const std::vector<double>& v) const {
        std::vector<double> out(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - mu) / sigma;
        return out;
    }
    double invert(double z) const { return z * sigma + mu; }
};

/// Winning hyperparameter triple for one mode.
struct ModePlan {
    std::size_t mode_index = 0;
    double gamma_opt = 1.0;
    double sigma2_opt = 1.0;
    std::size_t window_opt = 1;
    double validation_mse = 0.0;  // raw scale
};

/// Search box for (gamma, sigma2, window).
struct HyperBox {
    double gamma_min = 1e-4, gamma_max = 1e4;
    double sigma2_min = 1e-4, sigma2_max = 1e4;
    std::size_t window_min = 1, window_max = 25;

    SearchSpace to_space() const {
        SearchSpace s;
        s.lower = {gamma_min, sigma2_min, static_cast<double>(window_min)};
        s.upper = {gamma_max, sigma2_max, static_cast<double>(window_max)};
        s.log_scale = {true, true, false};
        s.integer_dims = {false, false, true};
        s.validate();
        return s;
    }
};

namespace detail {

/// Validation MSE (raw scale) of an LSSVM trained on the train segment with
/// the candidate triple; +inf on conditioning failure.
inline double candidate_validation_mse(const std::vector<double>& std_values,
                                       const Standardizer& z, const std::vector<double>& raw,
                                       const SplitIndices& split, double gamma, double sigma2,
                                       std::size_t m) {
    const std::size_t train_len = split.train_end;
    const std::size_t val_len = split.val_end - split.train_end;
    if (m + 1 > train_len || m + 1 > val_len)
        return std::numeric_limits<double>::infinity();

    std::vector<double> train_seg(std_values.begin(), std_values.begin() + train_len);
    WindowedSet train_set = make_windows(train_seg, m);

    LssvmModel model;
    try {
        model = train(TrainingSet{train_set.inputs, train_set.targets}, LssvmHyper{gamma, sigma2});
    } catch (const ConditioningError&) {
        return std::numeric_limits<double>::infinity();
    }

    std::vector<double> val_seg(std_values.begin() + train_len, std_values.begin() + split.val_end);
    WindowedSet val_set = make_windows(val_seg, m);
    std::vector<double> preds = predict_rows(model, val_set.inputs);

    double mse = 0.0;
    for (std::size_t k = 0; k < preds.size(); ++k) {
        double actual = raw[train_len + m + k];
        double e = z.invert(preds[k]) - actual;
        mse += e * e;
    }
    return mse / static_cast<double>(preds.size());
}

} // namespace detail

/// Searches the (gamma, sigma2, window) box with EBQPSO, minimizing the
/// validation MSE of an LSSVM trained on the train segment.
inline ModePlan optimize_mode(const std::vector<double>& mode_values, const SplitSpec& spec,
                              const EbqpsoConfig& opt_config, const HyperBox& box = {}) {
    SplitIndices split = split_indices(mode_values.size(), spec);
    const std::size_t train_len = split.train_end;
    const std::size_t val_len = split.val_end - split.train_end;
    if (box.window_max + 1 > train_len || box.window_max + 1 > val_len)
        throw InvalidInput("optimize_mode: segments too short for the window search range");

    Standardizer z = Standardizer::fit(mode_values, split.train_end);
    std::vector<double> std_values = z.apply(mode_values);

    EbqpsoConfig config = opt_config;
    config.dimension = 3;
    SearchSpace space = box.to_space();

    FitnessFn fitness = [&](const std::vector<double>& x) {
        return detail::candidate_validation_mse(std_values, z, mode_values, split, x[0], x[1],
                                                static_cast<std::size_t>(x[2]));
    };
    OptimizationTrace trace = run_ebqpso(fitness, space, config);

    ModePlan plan;
    plan.gamma_opt = trace.best_position[0];
    plan.sigma2_opt = trace.best_position[1];
    plan.window_opt = static_cast<std::size_t>(trace.best_position[2]);
    plan.validation_mse = trace.best_fitness;
    return plan;
}

/// Final per-mode model: retrained on train+validation with the winning
/// triple (train-only standardization statistics), then scored over the
/// test segment. One prediction per test window.
struct ModeForecast {
    ModePlan plan;
    Standardizer standardizer;
    LssvmModel model;
    std::vector<double> test_predictions;  // length: test_len - window_opt
};

inline ModeForecast forecast_mode(const std::vector<double>& mode_values, const SplitSpec& spec,
                                  const ModePlan& plan) {
    SplitIndices split = split_indices(mode_values.size(), spec);
    Standardizer z = Standardizer::fit(mode_values, split.train_end);
    std::vector<double> std_values = z.apply(mode_values);
    const std::size_t m = plan.window_opt;

    std::vector<double> fit_seg(std_values.begin(), std_values.begin() + split.val_end);
    WindowedSet fit_set = make_windows(fit_seg, m);
    LssvmModel model = train(TrainingSet{fit_set.inputs, fit_set.targets},
                             LssvmHyper{plan.gamma_opt, plan.sigma2_opt});

    std::vector<double> test_seg(std_values.begin() + split.val_end, std_values.end());
    if (test_seg.size() <= m) throw InvalidInput("forecast_mode: test segment shorter than window");
    WindowedSet test_set = make_windows(test_seg, m);
    std::vector<double> preds = predict_rows(model, test_set.inputs);
    for (double& p : preds) p = z.invert(p);

    ModeForecast out;
    out.plan = plan;
    out.standardizer = z;
    out.model = std::move(model);
    out.test_predictions = std::move(preds);
    return out;
}

/// E = X - sum of modes; equals the decomposition residual by construction.
inline Series error_sequence(const Series& original, const SvmdResult& result) {
    if (original.size() != result.source_length)
        throw InvalidInput("error_sequence: length mismatch");
    Series e;
    e.sample_interval = original.sample_interval;
    e.values = original.values;
    for (const Mode& mode : result.modes)
        for (std::size_t t = 0; t < e.values.size(); ++t) e.values[t] -= mode.values[t];
    return e;
}

/// Trims the first (m_max - m_i) entries of every component prediction so
/// all sequences end-align, then sums element-wise.
inline std::vector<double> align_and_aggregate(
    const std::vector<std::pair<std::size_t, std::vector<double>>>& component_predictions,
    std::size_t m_max) {
    if (component_predictions.empty()) throw InvalidInput("align: no components");
    std::vector<double> sum;
    bool first = true;
    for (const auto& [m, preds] : component_predictions) {
        if (m > m_max) throw InvalidInput("align: component window exceeds m_max");
        std::size_t trim = m_max - m;
        if (preds.size() < trim + 1) throw InvalidInput("align: component shorter than its trim");
        std::size_t len = preds.size() - trim;
        if (first) {
            sum.assign(preds.begin() + static_cast<std::ptrdiff_t>(trim), preds.end());
            first = false;
        } else {
            if (sum.size() != len) throw InvalidInput("align: component lengths disagree");
            for (std::size_t k = 0; k < len; ++k) sum[k] += preds[trim + k];
        }
    }
    return sum;
}

enum class PipelineVariant { full, lssvm_ebqpso, svmd_lssvm };

inline const char* variant_name(PipelineVariant v) {
    switch (v) {
        case PipelineVariant::full: return "svmd_lssvm_lstm";
        case PipelineVariant::lssvm_ebqpso: return "lssvm_ebqpso";
        case PipelineVariant::svmd_lssvm: return "svmd_lssvm";
    }
    return "?";
}

inline PipelineVariant variant_from_name(const std::string& name) {
    if (name == "svmd_lssvm_lstm" || name == "full") return PipelineVariant::full;
    if (name == "lssvm_ebqpso") return PipelineVariant::lssvm_ebqpso;
    if (name == "svmd_lssvm") return PipelineVariant::svmd_lssvm;
    throw InvalidInput("unknown pipeline variant '" + name + "'");
}

/// Everything the forecast run produces, plus the data needed to reproduce it.
struct ForecastReport {
    PipelineVariant variant = PipelineVariant::full;
    std::uint64_t seed = 0;
    std::string config_digest;
    double imputation_mean = 0.0;

    SvmdResult decomposition;              // empty for the no-SVMD ablation
    std::vector<ModeForecast> mode_forecasts;
    std::vector<double> error_prediction;  // empty unless variant == full
    std::size_t error_window = 0;
    LstmWeights lstm_weights;
    std::vector<double> lstm_loss_history;

    std::size_t m_max = 0;
    std::size_t test_start = 0;            // index of the first test sample
    std::vector<double> aggregated;        // length: test_len - m_max
    std::vector<double> actual_aligned;
    MetricSet metrics;
};

/// Parsed run configuration; field defaults are the documented run settings.
struct PipelineOptions {
    std::string input_path;
    std::string column = "wind_speed";
    std::uint64_t seed = 42;
    SplitSpec split;
    SvmdConfig svmd;
    EbqpsoConfig opt;
    HyperBox box;
    LstmConfig lstm;
    std::string config_digest;
};

inline PipelineOptions parse_pipeline_options(const ConfigFile& cfg) {
    PipelineOptions o;
    o.input_path = cfg.get_string("io.input", "");
    o.column = cfg.get_string("io.column", "wind_speed");
    o.seed = cfg.get_u64("pipeline.seed", 42);
    o.split.train_frac = cfg.get_double("pipeline.train_frac", 0.70);
    o.split.val_frac = cfg.get_double("pipeline.val_frac", 0.15);
    o.split.test_frac = cfg.get_double("pipeline.test_frac", 0.15);

    o.svmd.alpha = cfg.get_double("svmd.alpha", 5000.0);
    o.svmd.tau = cfg.get_double("svmd.tau", 0.0);
    o.svmd.inner_tol = cfg.get_double("svmd.inner_tol", 1e-7);
    o.svmd.max_inner_iters = cfg.get_size("svmd.max_inner_iters", 500);
    o.svmd.max_modes = cfg.get_size("svmd.max_modes", 10);
    o.svmd.residual_energy_ratio = cfg.get_double("svmd.residual_energy_ratio", 1e-3);

    o.opt.population = cfg.get_size("ebqpso.population", 25);
    o.opt.generations = cfg.get_size("ebqpso.generations", 100);
    o.opt.dimension = 3;
    o.opt.jumping_rate = cfg.get_double("ebqpso.jumping_rate", 0.3);
    o.opt.transposon_count = cfg.get_size("ebqpso.transposon_count", 1);
    o.opt.transposon_size = cfg.get_size("ebqpso.transposon_size", 1);
    o.opt.lambda = cfg.get_size("ebqpso.lambda", 5);
    std::string ce = cfg.get_string("ebqpso.ce_mode", "fixed");
    if (ce == "fixed")
        o.opt.ce_mode = CeMode::fixed;
    else if (ce == "linear_decay")
        o.opt.ce_mode = CeMode::linear_decay;
    else
        throw InvalidInput("config: ebqpso.ce_mode must be fixed or linear_decay");
    o.opt.ce_alpha = cfg.get_double("ebqpso.ce_alpha", 0.5);

    o.box.gamma_min = cfg.get_double("ebqpso.gamma_min", 1e-4);
    o.box.gamma_max = cfg.get_double("ebqpso.gamma_max", 1e4);
    o.box.sigma2_min = cfg.get_double("ebqpso.sigma2_min", 1e-4);
    o.box.sigma2_max = cfg.get_double("ebqpso.sigma2_max", 1e4);
    o.box.window_min = cfg.get_size("ebqpso.window_min", 1);
    o.box.window_max = cfg.get_size("ebqpso.window_max", 25);

    o.lstm.hidden_size = cfg.get_size("lstm.hidden", 200);
    o.lstm.window = cfg.get_size("lstm.window", 5);
    o.lstm.learning_rate = cfg.get_double("lstm.learning_rate", 1e-5);
    o.lstm.epochs = cfg.get_size("lstm.epochs", 500);
    o.lstm.seed = cfg.get_u64("lstm.seed", o.seed + 0x4C53544Dull);

    o.config_digest = fnv1a_hex(cfg.raw_text);
    return o;
}

namespace detail {

template <typename F>
auto stage(const char* name, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ConditioningError& e) {
        throw ConditioningError(std::string(name) + ": " + e.what(), e.condition_estimate);
    } catch (const DegenerateInput& e) {
        throw DegenerateInput(std::string(name) + ": " + e.what());
    } catch (const NumericalError& e) {
        throw NumericalError(std::string(name) + ": " + e.what());
    } catch (const InvalidInput& e) {
        throw InvalidInput(std::string(name) + ": " + e.what());
    }
}

} // namespace detail

/// Runs the configured variant end to end on an already-loaded series.
inline ForecastReport run_forecast(const LoadedSeries& loaded, const PipelineOptions& options,
                                   PipelineVariant variant) {
    ForecastReport report;
    report.variant = variant;
    report.seed = options.seed;
    report.config_digest = options.config_digest;

    SplitIndices split = split_indices(loaded.values.size(), options.split);
    auto [values, imputation_mean] = detail::stage("impute", [&] {
        return impute_with_train_stats(loaded, split);
    });
    report.imputation_mean = imputation_mean;
    report.test_start = split.val_end;

    Series series;
    series.values = values;

    std::vector<std::pair<std::size_t, std::vector<double>>> components;

    if (variant == PipelineVariant::lssvm_ebqpso) {
        EbqpsoConfig opt = options.opt;
        opt.seed = options.seed;  // single pseudo-mode stream
        ModePlan plan = detail::stage("optimize", [&] {
            return optimize_mode(series.values, options.split, opt, options.box);
        });
        ModeForecast mf = detail::stage("forecast", [&] {
            return forecast_mode(series.values, options.split, plan);
        });
        components.emplace_back(mf.plan.window_opt, mf.test_predictions);
        report.mode_forecasts.push_back(std::move(mf));
    } else {
        report.decomposition = detail::stage("decompose", [&] {
            return decompose(series, options.svmd);
        });
        for (std::size_t k = 0; k < report.decomposition.modes.size(); ++k) {
            EbqpsoConfig opt = options.opt;
            opt.seed = options.seed ^ static_cast<std::uint64_t>(k);
            ModePlan plan = detail::stage("optimize", [&] {
                return optimize_mode(report.decomposition.modes[k].values, options.split, opt,
                                     options.box);
            });
            plan.mode_index = k;
            ModeForecast mf = detail::stage("forecast", [&] {
                return forecast_mode(report.decomposition.modes[k].values, options.split, plan);
            });
            components.emplace_back(mf.plan.window_opt, mf.test_predictions);
            report.mode_forecasts.push_back(std::move(mf));
        }

        if (variant == PipelineVariant::full) {
            Series err = detail::stage("error-sequence", [&] {
                return error_sequence(series, report.decomposition);
            });
            detail::stage("lstm", [&]() -> int {
                Standardizer z = Standardizer::fit(err.values, split.train_end);
                std::vector<double> std_err = z.apply(err.values);
                std::vector<double> train_seg(std_err.begin(),
                                              std_err.begin() + split.train_end);
                TrainedLstm trained = train_lstm(train_seg, options.lstm);
                std::vector<double> test_seg(std_err.begin() + split.val_end, std_err.end());
                std::vector<double> preds =
                    predict_lstm(test_seg, options.lstm.window, trained.weights);
                for (double& p : preds) p = z.invert(p);
                report.error_prediction = std::move(preds);
                report.error_window = options.lstm.window;
                report.lstm_weights = std::move(trained.weights);
                report.lstm_loss_history = std::move(trained.loss_history);
                return 0;
            });
            components.emplace_back(report.error_window, report.error_prediction);
        }
    }

    std::size_t m_max = 0;
    for (const auto& [m, _] : components) m_max = std::max(m_max, m);
    report.m_max = m_max;

    report.aggregated = detail::stage("aggregate", [&] {
        return align_and_aggregate(components, m_max);
    });
    report.actual_aligned.assign(series.values.begin() +
                                     static_cast<std::ptrdiff_t>(split.val_end + m_max),
                                 series.values.end());
    if (report.actual_aligned.size() != report.aggregated.size())
        throw NumericalError("pipeline: aligned lengths disagree");

    report.metrics = detail::stage("metrics", [&] {
        return evaluate_all(EvalPair{report.actual_aligned, report.aggregated});
    });
    return report;
}

/// Full hybrid pipeline from a config file.
inline ForecastReport run_pipeline(const std::string& config_path) {
    ConfigFile cfg = load_config(config_path);
    PipelineOptions options = parse_pipeline_options(cfg);
    if (options.input_path.empty()) throw InvalidInput("config: io.input is required");
    LoadedSeries loaded = load_series(options.input_path, options.column);
    return run_forecast(loaded, options, PipelineVariant::full);
}

inline ForecastReport run_ablation(const std::string& config_path, PipelineVariant variant) {
    ConfigFile cfg = load_config(config_path);
    PipelineOptions options = parse_pipeline_options(cfg);
    if (options.input_path.empty()) throw InvalidInput("config: io.input is required");
    LoadedSeries loaded = load_series(options.input_path, options.column);
    return run_forecast(loaded, options, variant);
}

/// Documented synthetic series: two sinusoids over a slow trend with
/// Gaussian noise, scaled like the April statistics (mean ~9, std ~1.8).
inline Series generate_synthetic(std::size_t length = 1440, std::uint64_t seed = 42) {
    if (length == 0) throw InvalidInput("synth: length must be positive");
    Rng rng(seed);
    Series s;
    s.values.resize(length);
    for (std::size_t t = 0; t < length; ++t) {
        double x = static_cast<double>(t);
        s.values[t] = 9.0 + 1.8 * std::sin(2.0 * M_PI * x / 72.0) +
                      0.9 * std::sin(2.0 * M_PI * x / 18.0 + 1.0) + 0.0003 * x +
                      0.35 * rng.normal();
    }
    return s;
}

} // namespace windcast
