#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "windcast/common.hpp"
#include "windcast/csv.hpp"
#include "windcast/lssvm.hpp"
#include "windcast/lstm.hpp"
#include "windcast/pipeline.hpp"
#include "windcast/svmd.hpp"

namespace windcast {

using ordered_json = nlohmann::ordered_json;

namespace detail {

inline std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot write '" + path.string() + "'");
    return out;
}

inline void write_index_value_csv(const std::filesystem::path& path,
                                  const std::vector<double>& values) {
    std::ofstream out = open_out(path);
    out << "index,value\n";
    for (std::size_t i = 0; i < values.size(); ++i)
        out << i << "," << format_double(values[i]) << "\n";
}

} // namespace detail

/// Artifacts of the `decompose` subcommand: one CSV per mode, the residual,
/// and a summary with center frequencies and the mode correlation matrix.
inline void write_decompose_outputs(const std::string& dir, const SvmdResult& result) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    for (std::size_t k = 0; k < result.modes.size(); ++k)
        detail::write_index_value_csv(fs::path(dir) / ("mode_" + std::to_string(k) + ".csv"),
                                      result.modes[k].values);
    detail::write_index_value_csv(fs::path(dir) / "residual.csv", result.residual);

    ordered_json summary;
    summary["num_modes"] = result.modes.size();
    std::vector<double> freqs;
    for (const Mode& m : result.modes) freqs.push_back(m.center_frequency);
    summary["center_frequencies"] = freqs;
    summary["residual_energy_ratio"] = result.residual_ratio;
    std::vector<double> corr;
    if (!result.modes.empty()) {
        ModeCorrelation mc = mode_correlation_matrix(result);
        corr = mc.matrix.data;  // row-major
    }
    summary["correlation_matrix"] = corr;

    std::ofstream out = detail::open_out(fs::path(dir) / "summary.json");
    out << summary.dump(2) << "\n";
}

/// metrics.json body: fixed key order, six significant digits.
inline std::string metrics_json_text(const MetricSet& m) {
    std::string s = "{";
    s += "\"rmse\":" + format_double(m.rmse, 6) + ",";
    s += "\"mae\":" + format_double(m.mae, 6) + ",";
    s += "\"mape_pct\":" + format_double(m.mape_pct, 6) + ",";
    s += "\"r2\":" + format_double(m.r2, 6) + ",";
    s += "\"cc\":" + format_double(m.cc, 6) + "}";
    return s;
}

inline ordered_json lssvm_to_json(const LssvmModel& model) {
    ordered_json j;
    j["gamma"] = model.hyper.gamma;
    j["sigma2"] = model.hyper.sigma2;
    j["bias"] = model.bias;
    j["duals"] = model.duals;
    std::vector<std::vector<double>> rows(model.support_inputs.rows);
    for (std::size_t i = 0; i < model.support_inputs.rows; ++i)
        rows[i].assign(model.support_inputs.row(i),
                       model.support_inputs.row(i) + model.support_inputs.cols);
    j["support_inputs"] = rows;
    return j;
}

inline ordered_json lstm_to_json(const LstmWeights& w) {
    ordered_json j;
    j["input_size"] = w.input_size;
    j["hidden_size"] = w.hidden_size;
    auto mat = [](const Matrix& m) {
        std::vector<std::vector<double>> rows(m.rows);
        for (std::size_t i = 0; i < m.rows; ++i) rows[i].assign(m.row(i), m.row(i) + m.cols);
        return rows;
    };
    j["w_f"] = mat(w.w_f);
    j["w_i"] = mat(w.w_i);
    j["w_c"] = mat(w.w_c);
    j["w_o"] = mat(w.w_o);
    j["b_f"] = w.b_f;
    j["b_i"] = w.b_i;
    j["b_c"] = w.b_c;
    j["b_o"] = w.b_o;
    j["head_w"] = w.head_w;
    j["head_b"] = w.head_b;
    return j;
}

/// Forecast run artifacts: predictions.csv, per-mode CSVs, metrics.json,
/// manifest.json, and (when tracing) the LSTM loss history.
inline void write_forecast_outputs(const std::string& dir, const ForecastReport& report,
                                   bool trace = false, bool dump_models = false) {
    namespace fs = std::filesystem;
    fs::create_directories(fs::path(dir) / "modes");

    {
        std::ofstream out = detail::open_out(fs::path(dir) / "predictions.csv");
        out << "index,actual,predicted,abs_error\n";
        for (std::size_t k = 0; k < report.aggregated.size(); ++k) {
            double actual = report.actual_aligned[k];
            double pred = report.aggregated[k];
            out << (report.test_start + report.m_max + k) << "," << format_double(actual) << ","
                << format_double(pred) << "," << format_double(std::fabs(actual - pred)) << "\n";
        }
    }

    for (std::size_t k = 0; k < report.decomposition.modes.size(); ++k)
        detail::write_index_value_csv(
            fs::path(dir) / "modes" / ("mode_" + std::to_string(k) + ".csv"),
            report.decomposition.modes[k].values);

    {
        std::ofstream out = detail::open_out(fs::path(dir) / "metrics.json");
        out << metrics_json_text(report.metrics) << "\n";
    }

    ordered_json manifest;
    manifest["seed"] = report.seed;
    manifest["config_digest"] = report.config_digest;
    manifest["versions"] = {{"windcast", kVersion}, {"report_format", 1}};
    manifest["variant"] = variant_name(report.variant);
    manifest["svmd_full_series_lookahead"] = (report.variant != PipelineVariant::lssvm_ebqpso);
    manifest["final_retrain"] = "train+validation";
    manifest["imputation_mean"] = report.imputation_mean;
    manifest["num_modes"] = report.decomposition.modes.size();
    manifest["m_max"] = report.m_max;
    {
        ordered_json plans = ordered_json::array();
        for (const ModeForecast& mf : report.mode_forecasts) {
            ordered_json p;
            p["mode_index"] = mf.plan.mode_index;
            p["gamma_opt"] = mf.plan.gamma_opt;
            p["sigma2_opt"] = mf.plan.sigma2_opt;
            p["window_opt"] = mf.plan.window_opt;
            p["validation_mse"] = mf.plan.validation_mse;
            p["standardizer_mu"] = mf.standardizer.mu;
            p["standardizer_sigma"] = mf.standardizer.sigma;
            plans.push_back(p);
        }
        manifest["mode_plans"] = plans;
    }
    {
        std::ofstream out = detail::open_out(fs::path(dir) / "manifest.json");
        out << manifest.dump(2) << "\n";
    }

    if (trace && !report.lstm_loss_history.empty()) {
        std::ofstream out = detail::open_out(fs::path(dir) / "loss_trace.csv");
        out << "epoch,loss\n";
        for (std::size_t e = 0; e < report.lstm_loss_history.size(); ++e)
            out << e << "," << format_double(report.lstm_loss_history[e]) << "\n";
    }

    if (dump_models) {
        fs::create_directories(fs::path(dir) / "models");
        for (const ModeForecast& mf : report.mode_forecasts) {
            std::ofstream out = detail::open_out(
                fs::path(dir) / "models" /
                ("mode_" + std::to_string(mf.plan.mode_index) + "_model.json"));
            out << lssvm_to_json(mf.model).dump(2) << "\n";
        }
        if (!report.error_prediction.empty()) {
            std::ofstream out = detail::open_out(fs::path(dir) / "models" / "error_model.json");
            out << lstm_to_json(report.lstm_weights).dump(2) << "\n";
        }
    }
}

inline void write_series_csv(const std::string& path, const Series& series,
                             const std::string& column = "wind_speed") {
    std::ofstream out = detail::open_out(path);
    out << "index," << column << "\n";
    for (std::size_t i = 0; i < series.size(); ++i)
        out << i << "," << format_double(series.values[i]) << "\n";
}

} // namespace windcast
