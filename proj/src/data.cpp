#include "mccvc/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "mccvc/error.hpp"
#include "mccvc/random.hpp"

namespace mccvc {

namespace {

double draw_inner(const InnerNoise& inner, Rng& rng) {
    return std::visit(
        [&rng](const auto& n) -> double {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, GaussianNoise>) {
                return n.mean + std::sqrt(n.variance) * rng.normal();
            } else if constexpr (std::is_same_v<T, LaplaceNoise>) {
                // Inverse CDF; variance 2 b^2.
                const double b = std::sqrt(n.variance / 2.0);
                double u;
                do {
                    u = rng.uniform01();
                } while (u == 0.0);
                const double d = u - 0.5;
                return n.mean - b * std::copysign(1.0, d) * std::log(1.0 - 2.0 * std::abs(d));
            } else {
                double sum = 0.0;
                for (int k = 0; k < n.dof; ++k) {
                    const double z = rng.normal();
                    sum += z * z;
                }
                return sum;
            }
        },
        inner);
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t pos = 0;
    while (true) {
        const auto comma = line.find(',', pos);
        cells.push_back(trim(line.substr(pos, comma == std::string_view::npos ? line.npos : comma - pos)));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return cells;
}

std::optional<long> parse_index(const std::string& s) {
    long value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return value;
}

std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    Rng rng(seed);
    for (std::size_t i = n; i > 1; --i) {
        std::swap(idx[i - 1], idx[rng.below(i)]);
    }
    return idx;
}

}  // namespace

void NoiseModel::validate() const {
    if (!(outlier_rate >= 0.0 && outlier_rate <= 1.0)) {
        throw InvalidArgument("outlier rate must lie in [0, 1]");
    }
    if (!(outlier.variance > 0.0) || !std::isfinite(outlier.mean)) {
        throw InvalidArgument("outlier noise needs a finite mean and positive variance");
    }
    std::visit(
        [](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, ChiSquareNoise>) {
                if (n.dof < 1) throw InvalidArgument("chi-square needs at least one degree of freedom");
            } else {
                if (!(n.variance > 0.0) || !std::isfinite(n.mean)) {
                    throw InvalidArgument("inner noise needs a finite mean and positive variance");
                }
            }
        },
        inner);
}

std::string NoiseModel::describe() const {
    std::ostringstream out;
    std::visit(
        [&out](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, GaussianNoise>) {
                out << "gaussian(mean=" << n.mean << ",var=" << n.variance << ")";
            } else if constexpr (std::is_same_v<T, LaplaceNoise>) {
                out << "laplace(mean=" << n.mean << ",var=" << n.variance << ")";
            } else {
                out << "chi-square(dof=" << n.dof << ")";
            }
        },
        inner);
    out << " + " << outlier_rate << " x gaussian(mean=" << outlier.mean
        << ",var=" << outlier.variance << ")";
    return out.str();
}

double inner_mean(const InnerNoise& inner) {
    return std::visit(
        [](const auto& n) -> double {
            if constexpr (std::is_same_v<std::decay_t<decltype(n)>, ChiSquareNoise>) {
                return n.dof;
            } else {
                return n.mean;
            }
        },
        inner);
}

double inner_variance(const InnerNoise& inner) {
    return std::visit(
        [](const auto& n) -> double {
            if constexpr (std::is_same_v<std::decay_t<decltype(n)>, ChiSquareNoise>) {
                return 2.0 * n.dof;
            } else {
                return n.variance;
            }
        },
        inner);
}

std::vector<NoiseModel> inner_noise_presets() {
    const GaussianNoise outlier{0.0, 1e4};
    return {
        NoiseModel{0.1, GaussianNoise{0.0, 2.0}, outlier},
        NoiseModel{0.1, GaussianNoise{3.0, 1.0}, outlier},
        NoiseModel{0.1, LaplaceNoise{0.0, 1.0}, outlier},
        NoiseModel{0.1, ChiSquareNoise{3}, outlier},
    };
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::vector<double> sample_noise(const NoiseModel& model, std::size_t n, std::uint64_t seed) {
    return sample_noise(model, n, seed, nullptr);
}

std::vector<double> sample_noise(const NoiseModel& model, std::size_t n, std::uint64_t seed,
                                 std::vector<bool>* outlier_mask) {
    model.validate();
    if (n < 1) {
        throw InvalidArgument("noise sample size must be at least 1");
    }
    Rng rng(seed);
    const double outlier_sd = std::sqrt(model.outlier.variance);
    std::vector<double> out(n);
    if (outlier_mask) outlier_mask->assign(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        // All three variates are drawn every time so the stream layout does
        // not depend on the switch outcome.
        const bool g = rng.bernoulli(model.outlier_rate);
        const double b = draw_inner(model.inner, rng);
        const double o = model.outlier.mean + outlier_sd * rng.normal();
        out[i] = g ? o : b;
        if (outlier_mask) (*outlier_mask)[i] = g;
    }
    return out;
}

LinearData generate_linear_data(const Eigen::VectorXd& w_star, std::size_t n,
                                const NoiseModel& noise, std::uint64_t seed) {
    if (n < 1 || w_star.size() < 1) {
        throw InvalidArgument("need at least one sample and one weight");
    }
    Rng rng(derive_seed(seed, 0));
    LinearData data;
    data.inputs.resize(static_cast<Eigen::Index>(n), w_star.size());
    for (Eigen::Index i = 0; i < data.inputs.rows(); ++i) {
        for (Eigen::Index j = 0; j < data.inputs.cols(); ++j) {
            data.inputs(i, j) = rng.uniform(-2.0, 2.0);
        }
    }
    const std::vector<double> rho = sample_noise(noise, n, derive_seed(seed, 1));
    data.targets = data.inputs * w_star + Eigen::Map<const Eigen::VectorXd>(rho.data(), rho.size());
    return data;
}

void TabularDataset::validate() const {
    if (features.rows() < 2) {
        throw DataError("dataset needs at least two rows");
    }
    if (features.rows() != targets.size()) {
        throw DataError("feature and target row counts differ");
    }
    if (!features.allFinite() || !targets.allFinite()) {
        throw DataError("dataset contains non-finite values");
    }
}

TabularDataset TabularDataset::subset(const std::vector<std::size_t>& rows) const {
    TabularDataset out;
    out.features.resize(static_cast<Eigen::Index>(rows.size()), features.cols());
    out.targets.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto r = static_cast<Eigen::Index>(rows[i]);
        const auto row = static_cast<Eigen::Index>(i);
        out.features.row(row) = features.row(r);
        out.targets(row) = targets(r);
    }
    out.feature_names = feature_names;
    out.target_name = target_name;
    return out;
}

TabularDataset load_csv(const std::filesystem::path& path, bool has_header,
                        const std::string& target) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    std::size_t columns = 0;
    std::string line;
    std::size_t line_no = 0;
    bool header_pending = has_header;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split_commas(line);
        if (columns == 0) {
            columns = cells.size();
        } else if (cells.size() != columns) {
            throw DataError(path.string() + ": row " + std::to_string(line_no) + " has " +
                            std::to_string(cells.size()) + " columns, expected " +
                            std::to_string(columns));
        }
        if (header_pending) {
            header.assign(cells.begin(), cells.end());
            header_pending = false;
            continue;
        }
        std::vector<double> values(columns);
        for (std::size_t c = 0; c < columns; ++c) {
            const auto cell = cells[c];
            const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), values[c]);
            if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() ||
                !std::isfinite(values[c])) {
                throw DataError(path.string() + ": row " + std::to_string(line_no) + ", column " +
                                std::to_string(c + 1) + ": '" + std::string(cell) +
                                "' is not a finite number");
            }
        }
        rows.push_back(std::move(values));
    }
    if (rows.empty()) {
        throw DataError(path.string() + ": no data rows");
    }
    if (columns < 2) {
        throw DataError(path.string() + ": need at least one feature column and a target column");
    }

    std::optional<std::size_t> target_col;
    if (has_header) {
        if (const auto it = std::find(header.begin(), header.end(), target); it != header.end()) {
            target_col = static_cast<std::size_t>(it - header.begin());
        }
    }
    if (!target_col) {
        const auto index = parse_index(target);
        const long n = static_cast<long>(columns);
        if (!index || *index >= n || *index < -n) {
            throw DataError(path.string() + ": target column '" + target + "' not found");
        }
        target_col = static_cast<std::size_t>(*index < 0 ? *index + n : *index);
    }

    TabularDataset data;
    const auto n_rows = static_cast<Eigen::Index>(rows.size());
    data.features.resize(n_rows, static_cast<Eigen::Index>(columns - 1));
    data.targets.resize(n_rows);
    for (Eigen::Index r = 0; r < n_rows; ++r) {
        Eigen::Index f = 0;
        for (std::size_t c = 0; c < columns; ++c) {
            const double v = rows[static_cast<std::size_t>(r)][c];
            if (c == *target_col) {
                data.targets(r) = v;
            } else {
                data.features(r, f++) = v;
            }
        }
    }
    for (std::size_t c = 0; c < columns; ++c) {
        const std::string name = has_header ? header[c] : "col" + std::to_string(c);
        if (c == *target_col) {
            data.target_name = name;
        } else {
            data.feature_names.push_back(name);
        }
    }
    data.validate();
    return data;
}

MinMaxRecord MinMaxRecord::fit(const TabularDataset& data) {
    MinMaxRecord record;
    for (Eigen::Index c = 0; c < data.features.cols(); ++c) {
        record.features.push_back({data.features.col(c).minCoeff(), data.features.col(c).maxCoeff()});
    }
    record.target = {data.targets.minCoeff(), data.targets.maxCoeff()};
    return record;
}

TabularDataset MinMaxRecord::apply(const TabularDataset& data) const {
    if (static_cast<std::size_t>(data.features.cols()) != features.size()) {
        throw InvalidArgument("normalization record does not match the dataset's columns");
    }
    TabularDataset out = data;
    for (Eigen::Index c = 0; c < out.features.cols(); ++c) {
        const ColumnRange& range = features[static_cast<std::size_t>(c)];
        out.features.col(c) = out.features.col(c).unaryExpr([&](double v) { return range.apply(v); });
    }
    out.targets = out.targets.unaryExpr([this](double v) { return target.apply(v); });
    return out;
}

TabularDataset MinMaxRecord::invert(const TabularDataset& data) const {
    if (static_cast<std::size_t>(data.features.cols()) != features.size()) {
        throw InvalidArgument("normalization record does not match the dataset's columns");
    }
    TabularDataset out = data;
    for (Eigen::Index c = 0; c < out.features.cols(); ++c) {
        const ColumnRange& range = features[static_cast<std::size_t>(c)];
        out.features.col(c) = out.features.col(c).unaryExpr([&](double v) { return range.invert(v); });
    }
    out.targets = invert_targets(out.targets);
    return out;
}

Eigen::VectorXd MinMaxRecord::invert_targets(const Eigen::VectorXd& targets) const {
    return targets.unaryExpr([this](double v) { return target.invert(v); });
}

std::pair<TabularDataset, MinMaxRecord> normalize_minmax(const TabularDataset& data) {
    data.validate();
    MinMaxRecord record = MinMaxRecord::fit(data);
    return {record.apply(data), std::move(record)};
}

std::size_t SplitSpec::train_size(std::size_t n) const {
    if (train_count) return *train_count;
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw InvalidArgument("train fraction must lie strictly between 0 and 1");
    }
    return static_cast<std::size_t>(std::lround(train_fraction * static_cast<double>(n)));
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(std::size_t n,
                                                                            const SplitSpec& spec) {
    const std::size_t n_train = spec.train_size(n);
    if (n_train == 0 || n_train >= n) {
        throw DataError("split leaves the training or test set empty (" + std::to_string(n_train) +
                        " of " + std::to_string(n) + " rows for training)");
    }
    auto idx = shuffled_indices(n, spec.seed);
    std::vector<std::size_t> train(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
    std::vector<std::size_t> test(idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
    return {std::move(train), std::move(test)};
}

std::pair<TabularDataset, TabularDataset> split(const TabularDataset& data, const SplitSpec& spec) {
    data.validate();
    const auto [train, test] = split_indices(static_cast<std::size_t>(data.rows()), spec);
    return {data.subset(train), data.subset(test)};
}

std::vector<Fold> kfold_indices(std::size_t n, int folds, std::uint64_t seed) {
    if (folds < 2) {
        throw InvalidArgument("cross-validation needs at least two folds");
    }
    const auto k = static_cast<std::size_t>(folds);
    if (n < k) {
        throw DataError("cannot make " + std::to_string(k) + " folds from " + std::to_string(n) +
                        " rows");
    }
    const auto idx = shuffled_indices(n, seed);
    std::vector<Fold> out(k);
    std::size_t pos = 0;
    for (std::size_t f = 0; f < k; ++f) {
        const std::size_t size = n / k + (f < n % k ? 1 : 0);
        out[f].validation.assign(idx.begin() + static_cast<std::ptrdiff_t>(pos),
                                 idx.begin() + static_cast<std::ptrdiff_t>(pos + size));
        pos += size;
    }
    for (std::size_t f = 0; f < k; ++f) {
        for (std::size_t g = 0; g < k; ++g) {
            if (g != f) {
                out[f].train.insert(out[f].train.end(), out[g].validation.begin(),
                                    out[g].validation.end());
            }
        }
    }
    return out;
}

double rmse_weights(const Eigen::VectorXd& estimated, const Eigen::VectorXd& true_w) {
    if (estimated.size() != true_w.size() || estimated.size() == 0) {
        throw InvalidArgument("weight vectors must be non-empty and of equal length");
    }
    return std::sqrt((estimated - true_w).squaredNorm() / static_cast<double>(true_w.size()));
}

double rmse_predictions(const Eigen::VectorXd& predicted, const Eigen::VectorXd& targets) {
    if (predicted.size() != targets.size() || predicted.size() == 0) {
        throw InvalidArgument("prediction and target vectors must be non-empty and of equal length");
    }
    return std::sqrt((predicted - targets).squaredNorm() / static_cast<double>(targets.size()));
}

}  // namespace mccvc
