#pragma once

#include <cstdint>
#include <string_view>
#include <variant>

#include <Eigen/Dense>

namespace mccvc {

enum class Activation { Sigmoid };

std::string_view to_string(Activation activation);

/// Random hidden layer of an extreme learning machine. Row j of
/// `input_weights` and entry j of `biases` define hidden node j.
struct HiddenLayerSpec {
    Eigen::MatrixXd input_weights;  // hidden_count x input_dim
    Eigen::VectorXd biases;         // hidden_count
    Activation activation = Activation::Sigmoid;

    Eigen::Index input_dim() const { return input_weights.cols(); }
    Eigen::Index hidden_count() const { return input_weights.rows(); }
    void validate() const;
};

/// Mapped inputs H (one row per sample) paired with the targets T.
struct DesignMatrix {
    Eigen::MatrixXd features;
    Eigen::VectorXd targets;

    Eigen::Index samples() const { return features.rows(); }
    Eigen::Index dim() const { return features.cols(); }
    void validate() const;
};

/// Identity features, optionally followed by a constant column of ones.
Eigen::MatrixXd build_linear_features(const Eigen::MatrixXd& inputs, bool bias_column = false);

/// Weights i.i.d. uniform on [-1, 1], biases i.i.d. uniform on [0, 1].
HiddenLayerSpec init_elm(Eigen::Index input_dim, Eigen::Index hidden_count, std::uint64_t seed);

/// Hidden-node outputs sigmoid(w_j . x_i + b_j), all strictly inside (0, 1)
/// for moderate pre-activations and saturating to 1 for large ones.
Eigen::MatrixXd elm_features(const HiddenLayerSpec& spec, const Eigen::MatrixXd& inputs);

/// y = H beta.
Eigen::VectorXd predict(const Eigen::MatrixXd& features, const Eigen::VectorXd& beta);

struct LinearMap {
    Eigen::Index input_dim;
    bool bias_column = false;
};

struct ElmMap {
    HiddenLayerSpec hidden;
    std::uint64_t seed = 0;
};

/// A linear-in-parameters feature mapping x -> h(x).
class FeatureMap {
public:
    static FeatureMap linear(Eigen::Index input_dim, bool bias_column = false);
    static FeatureMap elm(Eigen::Index input_dim, Eigen::Index hidden_count, std::uint64_t seed);
    static FeatureMap elm(HiddenLayerSpec hidden, std::uint64_t seed);

    Eigen::Index input_dim() const;
    Eigen::Index output_dim() const;
    bool is_elm() const { return std::holds_alternative<ElmMap>(variant_); }
    const std::variant<LinearMap, ElmMap>& variant() const { return variant_; }

    Eigen::MatrixXd transform(const Eigen::MatrixXd& inputs) const;

private:
    explicit FeatureMap(std::variant<LinearMap, ElmMap> v) : variant_(std::move(v)) {}
    std::variant<LinearMap, ElmMap> variant_;
};

}  // namespace mccvc
