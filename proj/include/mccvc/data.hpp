#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace mccvc {

struct GaussianNoise {
    double mean = 0.0;
    double variance = 1.0;
};

struct LaplaceNoise {
    double mean = 0.0;
    double variance = 1.0;
};

struct ChiSquareNoise {
    int dof = 1;
};

using InnerNoise = std::variant<GaussianNoise, LaplaceNoise, ChiSquareNoise>;

/// Contaminated noise rho = (1 - g) B + g O with g ~ Bernoulli(p), inner
/// noise B and outlier noise O drawn independently.
struct NoiseModel {
    double outlier_rate = 0.0;
    InnerNoise inner = GaussianNoise{};
    GaussianNoise outlier{0.0, 1e4};

    void validate() const;
    std::string describe() const;
};

double inner_mean(const InnerNoise& inner);
double inner_variance(const InnerNoise& inner);

/// The four contamination cases of the linear benchmark, in order:
/// N(0,2), N(3,1), Laplace(0, var 1), chi-square(3); each with 10% outliers
/// from N(0, 10000).
std::vector<NoiseModel> inner_noise_presets();

/// Mixes a seed with a stream index (splitmix64) so that related draws use
/// unrelated generator states.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

std::vector<double> sample_noise(const NoiseModel& model, std::size_t n, std::uint64_t seed);

/// Same draws as sample_noise, also reporting which samples were outliers.
std::vector<double> sample_noise(const NoiseModel& model, std::size_t n, std::uint64_t seed,
                                 std::vector<bool>* outlier_mask);

struct LinearData {
    Eigen::MatrixXd inputs;
    Eigen::VectorXd targets;
};

/// Inputs uniform on [-2, 2]^d, targets X w* + rho.
LinearData generate_linear_data(const Eigen::VectorXd& w_star, std::size_t n,
                                const NoiseModel& noise, std::uint64_t seed);

struct TabularDataset {
    Eigen::MatrixXd features;
    Eigen::VectorXd targets;
    std::vector<std::string> feature_names;
    std::string target_name;

    Eigen::Index rows() const { return features.rows(); }
    void validate() const;
    TabularDataset subset(const std::vector<std::size_t>& rows) const;
};

/// Reads a comma-separated numeric table. `target` is a header name or a
/// column index (negative counts from the end, -1 is the last column).
TabularDataset load_csv(const std::filesystem::path& path, bool has_header,
                        const std::string& target);

struct ColumnRange {
    double min = 0.0;
    double max = 1.0;

    double apply(double v) const { return max > min ? (v - min) / (max - min) : 0.5; }
    double invert(double v) const { return max > min ? min + v * (max - min) : min; }
};

/// Per-column affine maps onto [0, 1]; constant columns map to 0.5.
struct MinMaxRecord {
    std::vector<ColumnRange> features;
    ColumnRange target;

    static MinMaxRecord fit(const TabularDataset& data);
    TabularDataset apply(const TabularDataset& data) const;
    TabularDataset invert(const TabularDataset& data) const;
    Eigen::VectorXd invert_targets(const Eigen::VectorXd& targets) const;
};

std::pair<TabularDataset, MinMaxRecord> normalize_minmax(const TabularDataset& data);

struct SplitSpec {
    double train_fraction = 0.5;
    /// Overrides train_fraction when set.
    std::optional<std::size_t> train_count;
    std::uint64_t seed = 42;
    int folds = 5;

    std::size_t train_size(std::size_t n) const;
};

/// Seeded random partition into disjoint train and test sets.
std::pair<TabularDataset, TabularDataset> split(const TabularDataset& data, const SplitSpec& spec);

/// Row indices of a seeded random train/test partition of n rows.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(std::size_t n,
                                                                            const SplitSpec& spec);

struct Fold {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
};

/// Shuffled k-fold partition of 0..n-1; fold sizes differ by at most one.
std::vector<Fold> kfold_indices(std::size_t n, int folds, std::uint64_t seed);

/// sqrt(||estimated - true_w||^2 / d).
double rmse_weights(const Eigen::VectorXd& estimated, const Eigen::VectorXd& true_w);

/// sqrt(mean((predicted - targets)^2)).
double rmse_predictions(const Eigen::VectorXd& predicted, const Eigen::VectorXd& targets);

}  // namespace mccvc
