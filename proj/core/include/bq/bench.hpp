#pragma once

#include "bq/acquisition.hpp"
#include "bq/design.hpp"
#include "bq/gp.hpp"
#include "bq/hyper.hpp"
#include "bq/testbed.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace bq {

struct FilterResult {
    std::vector<double> retained;
    int dropped = 0;
};

// Drops values outside [Q1 − 1.5·IQR, Q3 + 1.5·IQR]. Quartiles use linear
// interpolation between order statistics at position p·(n−1). Fewer than
// four values are returned unfiltered.
[[nodiscard]] FilterResult filter_outliers(const std::vector<double>& scores);
[[nodiscard]] double quantile_linear(std::vector<double> values, double p);

struct Score {
    double value = 0.0;
    int retained = 0;
    int dropped = 0;
    int excluded = 0;
};

// Mean relative error after outlier filtering; zero truths are excluded.
[[nodiscard]] Score error_score(const std::vector<double>& mu, const std::vector<double>& truth);
// Mean |I − μ|/√Σ after filtering; Σ = 0 with μ ≠ I is excluded and counted.
[[nodiscard]] Score calibration_score(const std::vector<double>& mu,
                                      const std::vector<double>& sigma2,
                                      const std::vector<double>& truth);

// Either a fixed design strategy or an acquisition-driven sequential sampler.
using Sampler = std::variant<DesignStrategy, AcquisitionKind>;
[[nodiscard]] Sampler parse_sampler(std::string_view name, AcquisitionKind active_default);
[[nodiscard]] std::string sampler_name(const Sampler& s);

struct ExperimentConfig {
    std::vector<std::string> kernels{"se", "matern12", "matern32", "matern52", "brownian"};
    std::vector<std::string> samplers{"random", "lhs", "sobol", "legendre", "ivr"};
    TestFamily family = TestFamily::FourierSeries;
    CoefficientScale coeff_scale = CoefficientScale::Variance;
    int T = 10;
    int n_min = 1;
    int n_max = 30;
    int n_cap = 1000;
    std::uint64_t seed = 0;
    NuggetPolicy nugget;
    FitOptions ml;
    double lengthscale_init = 0.2;
    AcquisitionKind acq_kind = AcquisitionKind::IVR;
    SearchConfig search;
    std::optional<double> variance_tol;
    bool include_endpoint = false;
    int threads = 0;  // 0: hardware concurrency
    double max_failure_fraction = 0.1;
    std::string output_path;
    std::string coefficients_path;

    void validate() const;
};

// Flat `key = value` lines; '#' starts a comment; lists are comma separated
// (optionally wrapped in brackets); strings may be quoted.
[[nodiscard]] ExperimentConfig parse_config(const std::string& text);
[[nodiscard]] ExperimentConfig load_config(const std::string& path);

struct ScoreRow {
    std::string kernel;
    std::string sampler;
    int n = 0;
    double error_score = 0.0;
    double calibration_score = 0.0;
    int n_outliers_dropped = 0;
    int n_retained = 0;
    int n_failures = 0;
    int n_excluded = 0;
    int cal_outliers_dropped = 0;
    int cal_excluded = 0;
};

struct ScoreTable {
    std::vector<ScoreRow> rows;
    int total_runs = 0;
    int total_failures = 0;
    std::vector<std::string> failure_messages;  // first few, for diagnostics

    [[nodiscard]] const ScoreRow* find(const std::string& kernel, const std::string& sampler,
                                       int n) const;
};

[[nodiscard]] ScoreTable run_benchmark(const ExperimentConfig& cfg);
void write_scores_csv(std::ostream& os, const ScoreTable& table);

struct ConvergencePoint {
    int n = 0;
    double error = 0.0;      // mean |I − μ| over replicates
    double rel_error = 0.0;  // mean |I − μ|/|I|
    double sigma2 = 0.0;     // mean Σ
    double h = 0.0, q = 0.0, rho = 0.0;
    double lambda_used = 0.0;
    int failures = 0;
};

struct ConvergenceReport {
    std::vector<ConvergencePoint> points;
    double slope = 0.0;      // least squares of log error on log N
    int fitted_points = 0;   // after censoring errors below 1e-14
    std::optional<int> floor_n;
    std::optional<std::size_t> floor_index;
};

struct ConvergenceOptions {
    NuggetPolicy policy;
    bool refit = false;
    FitOptions fit;
    SearchConfig search;
    std::vector<std::uint64_t> seeds{0};
    bool relative = false;  // fit the slope on relative instead of absolute errors
};

// lambda_mode: "default", "zero" (plain Cholesky, ladder only as fallback),
// or a number used as a fixed nugget.
[[nodiscard]] NuggetPolicy parse_lambda_mode(std::string_view mode);

inline constexpr double kCensorBelow = 1e-14;

[[nodiscard]] ConvergenceReport convergence_study(const KernelSpec& kernel, const Sampler& sampler,
                                                  const std::vector<TestFunction>& fns,
                                                  const std::vector<int>& n_list,
                                                  const ConvergenceOptions& opts);
// Slope and floor over an (n, error) series; exposed for reuse and tests.
void fit_convergence(ConvergenceReport& report, bool relative);

void write_convergence_csv(std::ostream& os, const ConvergenceReport& report);

}  // namespace bq
