// windcast: hybrid short-term series forecasting CLI
// (decomposition, swarm-tuned kernel regression, residual LSTM, metrics).

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "windcast/benchmarks.hpp"
#include "windcast/common.hpp"
#include "windcast/csv.hpp"
#include "windcast/ebqpso.hpp"
#include "windcast/metrics.hpp"
#include "windcast/pipeline.hpp"
#include "windcast/report_io.hpp"
#include "windcast/svmd.hpp"

namespace {

using windcast::ordered_json;

std::vector<double> read_value_column(const std::string& path, const std::string& column) {
    windcast::CsvTable table = windcast::read_csv(path);
    std::size_t col = 0;
    if (!column.empty())
        col = table.column_index(column);
    else if (table.header.size() != 1)
        throw windcast::InvalidInput("'" + path + "' has several columns; pass --column");
    std::vector<double> out;
    for (const auto& row : table.rows) {
        double v = 0.0;
        if (col >= row.size() || !windcast::parse_cell(row[col], v))
            throw windcast::InvalidInput("'" + path + "' contains a missing value");
        out.push_back(v);
    }
    if (out.empty()) throw windcast::InvalidInput("'" + path + "' has no data rows");
    return out;
}

int cmd_decompose(const std::string& input, const std::string& column, const std::string& out_dir,
                  const windcast::SvmdConfig& config) {
    windcast::LoadedSeries loaded = windcast::load_series(input, column);
    for (bool m : loaded.missing)
        if (m) throw windcast::InvalidInput("decompose: input contains missing values; "
                                            "impute first (forecast does this automatically)");
    windcast::Series series;
    series.values = loaded.values;
    windcast::SvmdResult result = windcast::decompose(series, config);
    windcast::write_decompose_outputs(out_dir, result);
    std::cout << "decomposed " << series.size() << " samples into " << result.modes.size()
              << " modes (residual energy ratio " << windcast::format_double(result.residual_ratio, 6)
              << ") -> " << out_dir << "\n";
    return 0;
}

int cmd_bench_opt(const std::string& function, std::size_t dim, std::size_t pop, std::size_t gens,
                  std::size_t trials, const std::string& algo, std::uint64_t seed,
                  const windcast::EbqpsoConfig& swarm) {
    windcast::SearchSpace space = windcast::benchmark_space(function, dim);
    windcast::EbqpsoConfig config = swarm;
    config.population = pop;
    config.generations = gens;
    config.dimension = dim;

    std::vector<double> best;
    std::size_t evaluations = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        config.seed = seed + t;
        windcast::FitnessFn fn = [&](const std::vector<double>& x) {
            return windcast::benchmark(function, x);
        };
        windcast::OptimizationTrace trace;
        if (algo == "pso")
            trace = windcast::run_pso(fn, space, config);
        else if (algo == "qpso")
            trace = windcast::run_qpso(fn, space, config);
        else if (algo == "ebqpso")
            trace = windcast::run_ebqpso(fn, space, config);
        else
            throw windcast::InvalidInput("bench-opt: unknown algo '" + algo + "'");
        best.push_back(trace.best_fitness);
        evaluations += trace.evaluation_count;
    }

    double mean = 0.0;
    for (double b : best) mean += b;
    mean /= static_cast<double>(best.size());
    double var = 0.0;
    for (double b : best) var += (b - mean) * (b - mean);
    double std_dev = best.size() > 1 ? std::sqrt(var / static_cast<double>(best.size() - 1)) : 0.0;

    ordered_json report;
    report["function"] = function;
    report["dim"] = dim;
    report["algo"] = algo;
    report["global_minimum"] = windcast::benchmark_minimum(function);
    report["trials"] = trials;
    report["seed"] = seed;
    report["mean"] = mean;
    report["std"] = std_dev;
    report["per_trial_best"] = best;
    report["evaluations"] = evaluations;
    std::cout << report.dump(2) << "\n";
    return 0;
}

int cmd_metrics(const std::string& actual_path, const std::string& predicted_path,
                const std::string& column) {
    windcast::EvalPair pair;
    pair.actual = read_value_column(actual_path, column);
    pair.predicted = read_value_column(predicted_path, column);
    std::cout << windcast::metrics_json_text(windcast::evaluate_all(pair)) << "\n";
    return 0;
}

int cmd_synth(const std::string& out, std::size_t length, std::uint64_t seed,
              const std::string& column) {
    windcast::Series s = windcast::generate_synthetic(length, seed);
    windcast::write_series_csv(out, s, column);
    std::cout << "wrote " << length << " samples to " << out << "\n";
    return 0;
}

int cmd_forecast(const std::string& config_path, const std::string& variant,
                 const std::string& out_dir, bool trace, bool dump_models) {
    windcast::ForecastReport report =
        windcast::run_ablation(config_path, windcast::variant_from_name(variant));
    windcast::write_forecast_outputs(out_dir, report, trace, dump_models);
    std::cout << "variant " << windcast::variant_name(report.variant) << ": "
              << windcast::metrics_json_text(report.metrics) << "\n"
              << "artifacts -> " << out_dir << "\n";
    return 0;
}

int cmd_optimize(const std::string& config_path, const std::string& out_path) {
    windcast::ConfigFile cfg = windcast::load_config(config_path);
    windcast::PipelineOptions options = windcast::parse_pipeline_options(cfg);
    if (options.input_path.empty()) throw windcast::InvalidInput("config: io.input is required");
    windcast::LoadedSeries loaded = windcast::load_series(options.input_path, options.column);
    windcast::SplitIndices split = windcast::split_indices(loaded.values.size(), options.split);
    auto [values, mean] = windcast::impute_with_train_stats(loaded, split);
    windcast::Series series;
    series.values = values;
    windcast::SvmdResult result = windcast::decompose(series, options.svmd);

    ordered_json plans = ordered_json::array();
    for (std::size_t k = 0; k < result.modes.size(); ++k) {
        windcast::EbqpsoConfig opt = options.opt;
        opt.seed = options.seed ^ static_cast<std::uint64_t>(k);
        windcast::ModePlan plan =
            windcast::optimize_mode(result.modes[k].values, options.split, opt, options.box);
        plan.mode_index = k;
        ordered_json p;
        p["mode_index"] = plan.mode_index;
        p["gamma_opt"] = plan.gamma_opt;
        p["sigma2_opt"] = plan.sigma2_opt;
        p["window_opt"] = plan.window_opt;
        p["validation_mse"] = plan.validation_mse;
        plans.push_back(p);
        std::cout << "mode " << k << ": gamma " << windcast::format_double(plan.gamma_opt, 6)
                  << ", sigma2 " << windcast::format_double(plan.sigma2_opt, 6) << ", window "
                  << plan.window_opt << ", validation mse "
                  << windcast::format_double(plan.validation_mse, 6) << "\n";
    }
    ordered_json doc;
    doc["seed"] = options.seed;
    doc["config_digest"] = options.config_digest;
    doc["imputation_mean"] = mean;
    doc["mode_plans"] = plans;
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw windcast::InvalidInput("cannot write '" + out_path + "'");
        out << doc.dump(2) << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"windcast: decomposition + swarm-tuned kernel regression forecaster"};
    app.require_subcommand(1);

    // decompose
    auto* dec = app.add_subcommand("decompose", "Split a series into narrow-band modes");
    std::string dec_input, dec_column = "wind_speed", dec_out = "decompose_out";
    windcast::SvmdConfig dec_cfg;
    dec->add_option("--input", dec_input, "input CSV")->required();
    dec->add_option("--column", dec_column, "value column name");
    dec->add_option("--out-dir", dec_out, "output directory")->required();
    dec->add_option("--alpha", dec_cfg.alpha, "compactness balance");
    dec->add_option("--tau", dec_cfg.tau, "dual ascent step");
    dec->add_option("--inner-tol", dec_cfg.inner_tol, "ADMM relative-change stop");
    dec->add_option("--max-inner-iters", dec_cfg.max_inner_iters, "ADMM iteration cap");
    dec->add_option("--max-modes", dec_cfg.max_modes, "mode budget");
    dec->add_option("--energy-ratio", dec_cfg.residual_energy_ratio, "outer stop ratio");

    // optimize
    auto* opt = app.add_subcommand("optimize", "Decompose and search per-mode hyperparameters");
    std::string opt_config, opt_out;
    opt->add_option("--config", opt_config, "pipeline config file")->required();
    opt->add_option("--out", opt_out, "write mode_plans JSON here");

    // forecast
    auto* fc = app.add_subcommand("forecast", "Run the full pipeline or an ablation");
    std::string fc_config, fc_variant = "svmd_lssvm_lstm", fc_out = "forecast_out";
    bool fc_trace = false, fc_dump = false;
    fc->add_option("--config", fc_config, "pipeline config file")->required();
    fc->add_option("--variant", fc_variant, "svmd_lssvm_lstm | svmd_lssvm | lssvm_ebqpso");
    fc->add_option("--out-dir", fc_out, "output directory")->required();
    fc->add_flag("--trace", fc_trace, "also write loss_trace.csv");
    fc->add_flag("--dump-models", fc_dump, "also write per-mode and residual model JSON dumps");

    // bench-opt
    auto* bench = app.add_subcommand("bench-opt", "Benchmark-function optimizer comparison");
    std::string bench_fn = "sphere", bench_algo = "ebqpso";
    std::size_t bench_dim = 20, bench_pop = 25, bench_gens = 100, bench_trials = 5;
    std::uint64_t bench_seed = 1;
    bench->add_option("--function", bench_fn, "sphere | ackley | griewank | mccormick");
    bench->add_option("--dim", bench_dim, "problem dimension");
    bench->add_option("--pop", bench_pop, "population size");
    bench->add_option("--gens", bench_gens, "generations");
    bench->add_option("--trials", bench_trials, "independent trials");
    bench->add_option("--algo", bench_algo, "pso | qpso | ebqpso");
    bench->add_option("--seed", bench_seed, "base seed (trial t uses seed + t)");
    // breeding-heavy defaults suit the benchmark suite; the forecast pipeline
    // keeps its own configured values
    windcast::EbqpsoConfig bench_swarm;
    bench_swarm.jumping_rate = 1.0;
    bench_swarm.transposon_count = 8;
    bench_swarm.lambda = 1;
    bench_swarm.ce_mode = windcast::CeMode::fixed;
    bench_swarm.ce_alpha = 0.5;
    bench->add_option("--lambda", bench_swarm.lambda, "breeding period in generations");
    bench->add_option("--jumping-rate", bench_swarm.jumping_rate, "transposon firing probability");
    bench->add_option("--transposons", bench_swarm.transposon_count, "transposons per firing");
    bench->add_option("--ce", bench_swarm.ce_alpha, "fixed contraction-expansion coefficient");

    // metrics
    auto* met = app.add_subcommand("metrics", "Evaluate forecast metrics from two CSVs");
    std::string met_actual, met_predicted, met_column;
    met->add_option("--actual", met_actual, "actual-values CSV")->required();
    met->add_option("--predicted", met_predicted, "predicted-values CSV")->required();
    met->add_option("--column", met_column, "column name for multi-column files");

    // synth
    auto* syn = app.add_subcommand("synth", "Emit the documented synthetic dataset");
    std::string syn_out = "synthetic.csv", syn_column = "wind_speed";
    std::size_t syn_len = 1440;
    std::uint64_t syn_seed = 42;
    syn->add_option("--out", syn_out, "output CSV path");
    syn->add_option("--length", syn_len, "number of samples");
    syn->add_option("--seed", syn_seed, "noise seed");
    syn->add_option("--column", syn_column, "value column name");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*dec) return cmd_decompose(dec_input, dec_column, dec_out, dec_cfg);
        if (*opt) return cmd_optimize(opt_config, opt_out);
        if (*fc) return cmd_forecast(fc_config, fc_variant, fc_out, fc_trace, fc_dump);
        if (*bench)
            return cmd_bench_opt(bench_fn, bench_dim, bench_pop, bench_gens, bench_trials,
                                 bench_algo, bench_seed, bench_swarm);
        if (*met) return cmd_metrics(met_actual, met_predicted, met_column);
        if (*syn) return cmd_synth(syn_out, syn_len, syn_seed, syn_column);
    } catch (const windcast::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const windcast::InvalidInput& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
