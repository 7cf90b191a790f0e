#include "json_io.hpp"
#include "mccvc/bench.hpp"
#include "mccvc/error.hpp"
#include "method.hpp"

namespace mccvc {

namespace {

Json feature_map_to_json(const FeatureMap& map) {
    Json j;
    if (const auto* lin = std::get_if<LinearMap>(&map.variant())) {
        j["type"] = "linear";
        j["input_dim"] = lin->input_dim;
        j["bias_column"] = lin->bias_column;
        return j;
    }
    const ElmMap& elm = std::get<ElmMap>(map.variant());
    j["type"] = "elm";
    j["input_dim"] = elm.hidden.input_dim();
    j["hidden"] = elm.hidden.hidden_count();
    j["seed"] = elm.seed;
    j["activation"] = std::string(to_string(elm.hidden.activation));
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < elm.hidden.input_weights.rows(); ++r) {
        rows.push_back(detail::vector_to_json(elm.hidden.input_weights.row(r).transpose()));
    }
    j["input_weights"] = std::move(rows);
    j["biases"] = detail::vector_to_json(elm.hidden.biases);
    return j;
}

FeatureMap feature_map_from_json(const Json& j) {
    const auto type = j.at("type").get<std::string>();
    if (type == "linear") {
        return FeatureMap::linear(j.at("input_dim").get<Eigen::Index>(), j.at("bias_column").get<bool>());
    }
    if (type != "elm") throw DataError("unknown feature map type '" + type + "'");
    if (j.at("activation").get<std::string>() != "sigmoid") {
        throw DataError("unsupported activation in model file");
    }
    HiddenLayerSpec spec;
    const auto& rows = j.at("input_weights");
    const auto hidden = static_cast<Eigen::Index>(rows.size());
    const auto dim = j.at("input_dim").get<Eigen::Index>();
    spec.input_weights.resize(hidden, dim);
    for (Eigen::Index r = 0; r < hidden; ++r) {
        const Eigen::VectorXd row = detail::vector_from_json(rows.at(static_cast<std::size_t>(r)));
        if (row.size() != dim) throw DataError("ELM weight row has the wrong length");
        spec.input_weights.row(r) = row.transpose();
    }
    spec.biases = detail::vector_from_json(j.at("biases"));
    return FeatureMap::elm(std::move(spec), j.at("seed").get<std::uint64_t>());
}

Json range_to_json(const ColumnRange& r) { return Json::array({r.min, r.max}); }

ColumnRange range_from_json(const Json& j) {
    return {j.at(0).get<double>(), j.at(1).get<double>()};
}

}  // namespace

Eigen::VectorXd FittedModel::predict(const Eigen::MatrixXd& raw_inputs) const {
    Eigen::MatrixXd inputs = raw_inputs;
    if (normalization) {
        if (static_cast<std::size_t>(inputs.cols()) != normalization->features.size()) {
            throw InvalidArgument("input column count does not match the model");
        }
        for (Eigen::Index c = 0; c < inputs.cols(); ++c) {
            const ColumnRange& range = normalization->features[static_cast<std::size_t>(c)];
            inputs.col(c) = inputs.col(c).unaryExpr([&](double v) { return range.apply(v); });
        }
    }
    Eigen::VectorXd y = mccvc::predict(features.transform(inputs), beta).array() + offset;
    if (normalization) y = normalization->invert_targets(y);
    return y;
}

Json FittedModel::to_json() const {
    Json j;
    j["format"] = "mccvc-model";
    j["version"] = 1;
    j["method"] = method;
    j["feature_map"] = feature_map_to_json(features);
    j["beta"] = detail::vector_to_json(beta);
    j["offset"] = offset;
    if (kernel) {
        j["kernel"] = {{"sigma", kernel->sigma()}, {"center", kernel->center()}};
    } else {
        j["kernel"] = nullptr;
    }
    j["lambda_prime"] = lambda_prime;
    if (normalization) {
        Json cols = Json::array();
        for (const auto& r : normalization->features) cols.push_back(range_to_json(r));
        j["normalization"] = {{"features", cols}, {"target", range_to_json(normalization->target)}};
    } else {
        j["normalization"] = nullptr;
    }
    j["iterations"] = iterations;
    j["converged"] = converged;
    return j;
}

FittedModel FittedModel::from_json(const Json& j) {
    try {
        if (j.at("format").get<std::string>() != "mccvc-model") {
            throw DataError("not an mccvc model file");
        }
        FittedModel m{.method = j.at("method").get<std::string>(),
                      .features = feature_map_from_json(j.at("feature_map")),
                      .beta = detail::vector_from_json(j.at("beta"))};
        m.offset = j.at("offset").get<double>();
        if (!j.at("kernel").is_null()) {
            m.kernel = KernelParams(j["kernel"].at("sigma").get<double>(),
                                    j["kernel"].at("center").get<double>());
        }
        m.lambda_prime = j.at("lambda_prime").get<double>();
        if (!j.at("normalization").is_null()) {
            MinMaxRecord rec;
            for (const auto& r : j["normalization"].at("features")) rec.features.push_back(range_from_json(r));
            rec.target = range_from_json(j["normalization"].at("target"));
            m.normalization = std::move(rec);
        }
        m.iterations = j.at("iterations").get<int>();
        m.converged = j.at("converged").get<bool>();
        if (m.beta.size() != m.features.output_dim()) {
            throw DataError("model weights do not match the feature map");
        }
        return m;
    } catch (const Json::exception& e) {
        throw DataError(std::string("malformed model file: ") + e.what());
    }
}

FittedModel fit_dataset(const TabularDataset& data, const FitOptions& options) {
    data.validate();
    const auto kind = detail::parse_method(options.method);
    if (options.model != "linear" && options.model != "elm") {
        throw InvalidArgument("--model must be linear or elm");
    }
    std::optional<MinMaxRecord> record;
    TabularDataset working = data;
    if (options.normalize) {
        auto [normalized, rec] = normalize_minmax(data);
        working = std::move(normalized);
        record = std::move(rec);
    }
    const Eigen::Index d = working.features.cols();
    FeatureMap map = options.model == "elm"
                         ? FeatureMap::elm(d, options.hidden, options.seed)
                         : FeatureMap::linear(d, options.bias_column);
    const DesignMatrix design{map.transform(working.features), working.targets};

    detail::MethodSettings settings;
    settings.lambda_prime = options.lambda_prime;
    settings.sigma = options.mcc_sigma;
    settings.grid = &options.fit.grid;
    settings.max_iterations = options.fit.max_iterations;
    settings.tolerance = options.fit.tolerance;
    detail::MethodFit fit = detail::fit_method(kind, design, settings);

    FittedModel model{.method = options.method, .features = std::move(map), .beta = std::move(fit.beta)};
    model.offset = fit.offset;
    model.kernel = fit.kernel;
    model.lambda_prime = options.lambda_prime;
    model.normalization = std::move(record);
    model.iterations = fit.iterations;
    model.converged = fit.converged;
    return model;
}

}  // namespace mccvc
