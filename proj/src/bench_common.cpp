#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "json_io.hpp"
#include "mccvc/bench.hpp"

namespace mccvc {

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers =
        std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        std::lock_guard lock(error_mutex);
                        if (!first_error) first_error = std::current_exception();
                    }
                }
            });
        }
    }
    if (first_error) std::rethrow_exception(first_error);
}

SampleStats summarize(const std::vector<double>& values) {
    SampleStats stats;
    stats.count = values.size();
    if (values.empty()) return stats;
    double sum = 0.0;
    for (const double v : values) sum += v;
    stats.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (const double v : values) ss += (v - stats.mean) * (v - stats.mean);
        stats.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return stats;
}

Json residual_summary(const Eigen::VectorXd& residuals) {
    const std::span<const double> view(residuals.data(), static_cast<std::size_t>(residuals.size()));
    const std::vector<double> values(view.begin(), view.end());
    const SampleStats stats = summarize(values);
    Json j;
    j["count"] = stats.count;
    j["mean"] = stats.mean;
    j["median"] = median_of(view);
    j["stddev"] = stats.stddev;
    j["min"] = residuals.minCoeff();
    j["max"] = residuals.maxCoeff();
    j["rmse"] = std::sqrt(residuals.squaredNorm() / static_cast<double>(residuals.size()));
    return j;
}

}  // namespace mccvc

namespace mccvc::detail {

Json grid_to_json(const ParamGrid& grid) {
    Json j;
    j["sigma_set"] = grid.sigma_set;
    j["center_rule"] = std::string(to_string(grid.center_rule));
    j["center_set"] = grid.center_set;
    return j;
}

ParamGrid grid_from_json(const Json& j) {
    ParamGrid grid;
    grid.sigma_set = j.at("sigma_set").get<std::vector<double>>();
    grid.center_rule = parse_center_rule(j.at("center_rule").get<std::string>());
    grid.center_set = j.at("center_set").get<std::vector<double>>();
    return grid;
}

Json stats_to_json(const SampleStats& stats, const char* prefix, Json& into) {
    const std::string p(prefix);
    into[p + "_mean"] = stats.mean;
    into[p + "_std"] = stats.stddev;
    return into;
}

Json vector_to_json(const Eigen::VectorXd& v) {
    return Json(std::vector<double>(v.data(), v.data() + v.size()));
}

Eigen::VectorXd vector_from_json(const Json& j) {
    const auto values = j.get<std::vector<double>>();
    return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

}  // namespace mccvc::detail
