#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include "json.hpp"

#include "mccvc/data.hpp"
#include "mccvc/kernel.hpp"
#include "mccvc/lip_models.hpp"
#include "mccvc/solvers.hpp"

namespace mccvc {

using Json = nlohmann::ordered_json;

/// Runs fn(0) .. fn(n-1) on a pool of worker threads. Each index is handled
/// exactly once; callers write results into per-index slots so the outcome
/// does not depend on scheduling. The first exception is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

struct SampleStats {
    double mean = 0.0;
    double stddev = 0.0;  // divisor n - 1; 0 when n < 2
    std::size_t count = 0;
};

/// Accumulates in index order so results are reproducible.
SampleStats summarize(const std::vector<double>& values);

// ---------------------------------------------------------------------------
// Linear-system benchmark with contaminated noise.

struct SynthBenchConfig {
    std::uint64_t seed = 42;
    int runs = 100;
    std::size_t samples = 400;
    Eigen::VectorXd w_star = (Eigen::VectorXd(2) << 1.0, 2.0).finished();
    std::vector<std::string> methods{"mmse", "mcc", "mcc-vc"};
    /// 1-based indices into inner_noise_presets().
    std::vector<int> cases{1, 2, 3, 4};
    double lambda_prime = 1e-4;
    ParamGrid grid = ParamGrid::synthetic_default();
    /// Fixed widths tried for the classical MCC baseline; the one with the
    /// lowest mean RMSE per case is reported.
    std::vector<double> mcc_sigmas{0.5, 1.0, 2.0, 5.0};
    int max_iterations = 100;
    double tolerance = 1e-10;

    void validate() const;
    Json to_json() const;
    static SynthBenchConfig from_json(const Json& j);
};

struct RunRecord {
    std::uint64_t seed = 0;
    bool failed = false;
    std::string failure;
    double rmse = 0.0;
    double seconds = 0.0;
    int iterations = 0;
    bool converged = false;
    double sigma = 0.0;
    double center = 0.0;
    Eigen::VectorXd beta;
};

struct MethodSummary {
    std::string method;
    /// Width used by the classical MCC baseline; unset for other methods.
    std::optional<double> sigma;
    SampleStats rmse;
    SampleStats seconds;
    std::size_t failures = 0;
    std::vector<RunRecord> runs;
};

struct SweepEntry {
    double sigma;
    SampleStats rmse;
    std::size_t failures;
};

struct CaseReport {
    int case_index = 0;
    NoiseModel noise;
    std::vector<MethodSummary> methods;
    std::vector<SweepEntry> mcc_sweep;

    const MethodSummary& method(const std::string& name) const;
};

struct SynthBenchReport {
    SynthBenchConfig config;
    std::vector<CaseReport> cases;

    const CaseReport& at_case(int case_index) const;
    Json to_json(bool include_timing = true) const;
    std::string to_table() const;
};

SynthBenchReport run_synth_bench(const SynthBenchConfig& config);

// ---------------------------------------------------------------------------
// Dataset benchmark: hyperparameters by k-fold cross-validation on the
// training split, then training and testing RMSE of the refitted model.

enum class Normalization { None, FullDataset, TrainOnly };

Normalization parse_normalization(std::string_view name);
std::string_view to_string(Normalization n);

struct DataBenchConfig {
    std::uint64_t seed = 42;
    int runs = 100;
    std::vector<std::string> methods{"relm", "elm-mcc", "elm-mcc-vc"};
    std::string model = "elm";
    int hidden = 100;
    bool bias_column = false;
    double train_fraction = 0.5;
    int folds = 5;
    Normalization normalization = Normalization::FullDataset;
    std::vector<double> lambda_grid{0.0, 1e-6, 1e-4, 1e-2, 1.0};
    std::vector<double> baseline_sigmas{0.5, 1.0, 2.0, 5.0};
    /// Kernel search used inside every correntropy-with-variable-center fit.
    ParamGrid vc_grid{make_range(0.1, 0.1, 2.0), {}, CenterRule::MedianOfErrors};
    int max_iterations = 100;
    double tolerance = 1e-10;

    void validate() const;
    Json to_json() const;
    static DataBenchConfig from_json(const Json& j);
};

struct DataMethodSummary {
    std::string method;
    SampleStats train_rmse;
    SampleStats test_rmse;
    SampleStats seconds;
    std::size_t failures = 0;
    std::vector<double> chosen_lambda;
    std::vector<double> chosen_sigma;
    std::vector<double> train_values;
    std::vector<double> test_values;
};

struct DataBenchReport {
    DataBenchConfig config;
    std::string dataset;
    std::size_t rows = 0;
    std::size_t train_rows = 0;
    std::size_t test_rows = 0;
    std::vector<DataMethodSummary> methods;

    const DataMethodSummary& method(const std::string& name) const;
    Json to_json(bool include_timing = true) const;
    std::string to_table() const;
};

/// Train/test pair for one repetition.
struct SplitPair {
    TabularDataset train;
    TabularDataset test;
};

/// Full dataset pipeline: normalize, split per repetition, cross-validate,
/// refit, score.
DataBenchReport run_data_bench(const TabularDataset& data, const std::string& name,
                               const DataBenchConfig& config);

/// Same protocol on caller-provided splits, one per repetition (no
/// normalization applied).
DataBenchReport run_data_bench_on_splits(const std::vector<SplitPair>& splits,
                                         const std::string& name, const DataBenchConfig& config);

/// Two-dimensional sinc regression task: x uniform on [-5, 5]^2, clean
/// target sin(r)/r with r = ||x||. Training targets carry `noise`; testing
/// targets carry only its inner (outlier-free) component.
SplitPair make_sinc_task(std::size_t n_train, std::size_t n_test, const NoiseModel& noise,
                         std::uint64_t seed);

// ---------------------------------------------------------------------------
// Fitted models.

struct FittedModel {
    std::string method;
    FeatureMap features;
    Eigen::VectorXd beta;
    /// Added to h(x) beta when predicting; the final kernel center for
    /// variable-center fits, 0 otherwise.
    double offset = 0.0;
    std::optional<KernelParams> kernel{};
    double lambda_prime = 0.0;
    std::optional<MinMaxRecord> normalization{};
    int iterations = 0;
    bool converged = true;

    /// Predictions in the units of the raw inputs/targets.
    Eigen::VectorXd predict(const Eigen::MatrixXd& raw_inputs) const;

    Json to_json() const;
    static FittedModel from_json(const Json& j);
};

struct FitOptions {
    std::string method = "mcc-vc";  // mmse | mcc | mcc-vc
    std::string model = "linear";   // linear | elm
    int hidden = 100;
    bool bias_column = false;
    bool normalize = false;
    std::uint64_t seed = 42;
    double lambda_prime = 1e-4;
    double mcc_sigma = 1.0;
    FitConfig fit;
};

/// Fits one model on a whole dataset.
FittedModel fit_dataset(const TabularDataset& data, const FitOptions& options);

/// Mean, median, standard deviation, extremes and RMSE of a residual vector.
Json residual_summary(const Eigen::VectorXd& residuals);

// ---------------------------------------------------------------------------
// Residual histogram against the fitted kernel at chosen iterations.

struct KernelTrace {
    int iteration = 0;
    double sigma = 0.0;
    double center = 0.0;
    double residual_median = 0.0;
    /// Share of residuals inside the histogram support.
    double support_fraction = 0.0;
    std::vector<double> bin_edges;
    std::vector<double> density;
    std::vector<double> curve_x;
    std::vector<double> curve_y;

    double max_density() const;
    double kernel_peak() const;
    Json to_json() const;
    std::string to_csv() const;
};

struct TraceOptions {
    std::vector<int> iterations{1, 2};
    int bins = 50;
    int curve_points = 400;
    /// Half-width of the histogram support in kernel widths around c*.
    double support_widths = 5.0;
};

/// Runs fit_mcc_vc and reports, for each requested iteration k, the
/// residuals that iteration k fitted its kernel to (those of beta_{k-1}).
std::vector<KernelTrace> kernel_trace(const DesignMatrix& design, const FitConfig& config,
                                      const TraceOptions& options);

}  // namespace mccvc
