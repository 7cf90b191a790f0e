#include "mccvc/lip_models.hpp"

#include <cmath>
#include <string>

#include "mccvc/error.hpp"
#include "mccvc/random.hpp"

namespace mccvc {

namespace {

void check_finite(const Eigen::MatrixXd& m, const char* what) {
    if (!m.allFinite()) {
        throw InvalidArgument(std::string(what) + " contains non-finite entries");
    }
}

// Written so that neither branch evaluates exp of a large positive number.
inline double sigmoid(double z) {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double ez = std::exp(z);
    return ez / (1.0 + ez);
}

}  // namespace

std::string_view to_string(Activation activation) {
    switch (activation) {
        case Activation::Sigmoid: return "sigmoid";
    }
    return "unknown";
}

void HiddenLayerSpec::validate() const {
    if (input_weights.rows() < 1 || input_weights.cols() < 1) {
        throw InvalidArgument("hidden layer needs at least one node and one input");
    }
    if (biases.size() != input_weights.rows()) {
        throw InvalidArgument("hidden layer bias count does not match node count");
    }
    check_finite(input_weights, "hidden layer weights");
    check_finite(biases, "hidden layer biases");
}

void DesignMatrix::validate() const {
    if (features.rows() < 1 || features.cols() < 1) {
        throw InvalidArgument("design matrix must have at least one row and column");
    }
    if (features.rows() != targets.size()) {
        throw InvalidArgument("design matrix has " + std::to_string(features.rows()) +
                              " rows but " + std::to_string(targets.size()) + " targets");
    }
    check_finite(features, "design matrix");
    check_finite(targets, "target vector");
}

Eigen::MatrixXd build_linear_features(const Eigen::MatrixXd& inputs, bool bias_column) {
    if (inputs.rows() < 1 || inputs.cols() < 1) {
        throw InvalidArgument("input matrix must be non-empty");
    }
    check_finite(inputs, "input matrix");
    if (!bias_column) {
        return inputs;
    }
    Eigen::MatrixXd h(inputs.rows(), inputs.cols() + 1);
    h.leftCols(inputs.cols()) = inputs;
    h.col(inputs.cols()).setOnes();
    return h;
}

HiddenLayerSpec init_elm(Eigen::Index input_dim, Eigen::Index hidden_count, std::uint64_t seed) {
    if (input_dim < 1 || hidden_count < 1) {
        throw InvalidArgument("ELM dimensions must be positive");
    }
    Rng rng(seed);
    HiddenLayerSpec spec;
    spec.input_weights.resize(hidden_count, input_dim);
    spec.biases.resize(hidden_count);
    for (Eigen::Index j = 0; j < hidden_count; ++j) {
        for (Eigen::Index k = 0; k < input_dim; ++k) {
            spec.input_weights(j, k) = rng.uniform(-1.0, 1.0);
        }
    }
    for (Eigen::Index j = 0; j < hidden_count; ++j) {
        spec.biases(j) = rng.uniform01();
    }
    return spec;
}

Eigen::MatrixXd elm_features(const HiddenLayerSpec& spec, const Eigen::MatrixXd& inputs) {
    spec.validate();
    if (inputs.cols() != spec.input_dim()) {
        throw InvalidArgument("ELM expects " + std::to_string(spec.input_dim()) +
                              " input columns, got " + std::to_string(inputs.cols()));
    }
    check_finite(inputs, "input matrix");
    Eigen::MatrixXd z = inputs * spec.input_weights.transpose();
    z.rowwise() += spec.biases.transpose();
    return z.unaryExpr([](double v) { return sigmoid(v); });
}

Eigen::VectorXd predict(const Eigen::MatrixXd& features, const Eigen::VectorXd& beta) {
    if (features.cols() != beta.size()) {
        throw InvalidArgument("weight vector has " + std::to_string(beta.size()) +
                              " entries but the design matrix has " +
                              std::to_string(features.cols()) + " columns");
    }
    return features * beta;
}

FeatureMap FeatureMap::linear(Eigen::Index input_dim, bool bias_column) {
    if (input_dim < 1) {
        throw InvalidArgument("input dimension must be positive");
    }
    return FeatureMap(LinearMap{input_dim, bias_column});
}

FeatureMap FeatureMap::elm(Eigen::Index input_dim, Eigen::Index hidden_count, std::uint64_t seed) {
    return FeatureMap(ElmMap{init_elm(input_dim, hidden_count, seed), seed});
}

FeatureMap FeatureMap::elm(HiddenLayerSpec hidden, std::uint64_t seed) {
    hidden.validate();
    return FeatureMap(ElmMap{std::move(hidden), seed});
}

Eigen::Index FeatureMap::input_dim() const {
    return std::visit(
        [](const auto& m) -> Eigen::Index {
            if constexpr (std::is_same_v<std::decay_t<decltype(m)>, LinearMap>) {
                return m.input_dim;
            } else {
                return m.hidden.input_dim();
            }
        },
        variant_);
}

Eigen::Index FeatureMap::output_dim() const {
    return std::visit(
        [](const auto& m) -> Eigen::Index {
            if constexpr (std::is_same_v<std::decay_t<decltype(m)>, LinearMap>) {
                return m.input_dim + (m.bias_column ? 1 : 0);
            } else {
                return m.hidden.hidden_count();
            }
        },
        variant_);
}

Eigen::MatrixXd FeatureMap::transform(const Eigen::MatrixXd& inputs) const {
    if (inputs.cols() != input_dim()) {
        throw InvalidArgument("feature map expects " + std::to_string(input_dim()) +
                              " input columns, got " + std::to_string(inputs.cols()));
    }
    if (const auto* lin = std::get_if<LinearMap>(&variant_)) {
        return build_linear_features(inputs, lin->bias_column);
    }
    return elm_features(std::get<ElmMap>(variant_).hidden, inputs);
}

}  // namespace mccvc
