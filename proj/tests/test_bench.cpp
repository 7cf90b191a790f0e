#include <atomic>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "mccvc/bench.hpp"
#include "mccvc/error.hpp"

using namespace mccvc;
using doctest::Approx;

namespace {

SynthBenchConfig small_synth() {
    SynthBenchConfig cfg;
    cfg.runs = 3;
    cfg.samples = 200;
    cfg.seed = 7;
    cfg.cases = {2};
    cfg.mcc_sigmas = {1.0, 2.0};
    return cfg;
}

DataBenchConfig small_data() {
    DataBenchConfig cfg;
    cfg.runs = 2;
    cfg.hidden = 10;
    cfg.folds = 3;
    cfg.lambda_grid = {1e-4, 1e-2};
    cfg.baseline_sigmas = {0.5, 1.0};
    return cfg;
}

TabularDataset sinc_table(std::uint64_t seed) {
    const auto pair = make_sinc_task(60, 60, inner_noise_presets()[1], seed);
    return pair.train;
}

}  // namespace

TEST_CASE("parallel_for visits every index once") {
    std::vector<std::atomic<int>> hits(257);
    parallel_for(hits.size(), [&](std::size_t i) { ++hits[i]; });
    for (const auto& h : hits) CHECK(h.load() == 1);
    CHECK_THROWS(parallel_for(4, [](std::size_t i) {
        if (i == 2) throw NumericalError("boom");
    }));
}

TEST_CASE("summary statistics use the sample deviation") {
    const auto s = summarize({1.0, 2.0, 3.0, 4.0});
    CHECK(s.mean == 2.5);
    CHECK(s.stddev == Approx(1.2909944487358056));
    CHECK(s.count == 4);
    CHECK(summarize({5.0}).stddev == 0.0);
}

TEST_CASE("synthetic benchmark reports") {
    const auto cfg = small_synth();
    const auto a = run_synth_bench(cfg);
    const auto b = run_synth_bench(cfg);
    CHECK(a.to_json(false).dump() == b.to_json(false).dump());

    REQUIRE(a.cases.size() == 1);
    const auto& c = a.at_case(2);
    REQUIRE(c.methods.size() == 3);
    CHECK(c.methods[0].method == "mmse");
    CHECK(c.methods[1].method == "mcc");
    CHECK(c.methods[2].method == "mcc-vc");
    for (const auto& m : c.methods) {
        CHECK(m.runs.size() == 3);
        CHECK(m.rmse.stddev >= 0.0);
    }
    CHECK(c.mcc_sweep.size() == 2);
    CHECK(c.method("mcc").sigma.has_value());

    const auto j = a.to_json();
    CHECK(j["seeds"] == Json::array({7, 8, 9}));
    CHECK(j["config"]["runs"] == 3);
    CHECK(j["cases"][0]["methods"][2].contains("seconds_mean"));
    CHECK_FALSE(a.to_json(false)["cases"][0]["methods"][2].contains("seconds_mean"));
    CHECK_FALSE(a.to_table().empty());

    // Re-running from the embedded configuration reproduces the report.
    const auto replay = run_synth_bench(SynthBenchConfig::from_json(j["config"]));
    CHECK(replay.to_json(false).dump() == a.to_json(false).dump());
}

TEST_CASE("synthetic benchmark method selection and validation") {
    auto cfg = small_synth();
    cfg.methods = {"mmse"};
    const auto r = run_synth_bench(cfg);
    CHECK(r.at_case(2).methods.size() == 1);
    CHECK(r.at_case(2).mcc_sweep.empty());
    cfg.methods = {"mcc-vc", "mmse"};
    const auto order = run_synth_bench(cfg);
    CHECK(order.at_case(2).methods[0].method == "mcc-vc");

    cfg.methods = {"lasso"};
    CHECK_THROWS_AS(run_synth_bench(cfg), InvalidArgument);
    cfg = small_synth();
    cfg.runs = 0;
    CHECK_THROWS_AS(run_synth_bench(cfg), InvalidArgument);
    cfg = small_synth();
    cfg.cases = {5};
    CHECK_THROWS_AS(run_synth_bench(cfg), InvalidArgument);
}

TEST_CASE("synthetic benchmark records failures without aborting") {
    auto cfg = small_synth();
    cfg.methods = {"mcc"};
    cfg.lambda_prime = 0.0;
    cfg.mcc_sigmas = {1e-3};
    const auto r = run_synth_bench(cfg);
    const auto& m = r.at_case(2).method("mcc");
    REQUIRE(m.failures >= 1);
    const auto j = r.to_json()["cases"][0]["methods"][0];
    CHECK(j["failure_messages"].size() == m.failures);
    std::size_t nan_runs = 0;
    for (const auto& v : j["rmse_per_run"]) nan_runs += (v.is_null() || std::isnan(v.get<double>())) ? 1 : 0;
    CHECK(nan_runs == m.failures);
}

TEST_CASE("dataset benchmark") {
    const auto data = sinc_table(3);
    const auto cfg = small_data();
    const auto a = run_data_bench(data, "sinc", cfg);
    const auto b = run_data_bench(data, "sinc", cfg);
    CHECK(a.to_json(false).dump() == b.to_json(false).dump());
    REQUIRE(a.methods.size() == 3);
    CHECK(a.methods[0].method == "relm");
    CHECK(a.methods[2].method == "elm-mcc-vc");
    CHECK(a.train_rows == 30);
    CHECK(a.test_rows == 30);
    for (const auto& m : a.methods) {
        CHECK(m.test_values.size() == 2);
        CHECK(std::isfinite(m.test_rmse.mean));
    }
    const auto replay = run_data_bench(data, "sinc", DataBenchConfig::from_json(a.to_json()["config"]));
    CHECK(replay.to_json(false).dump() == a.to_json(false).dump());

    auto bad = cfg;
    bad.folds = 40;
    CHECK_THROWS_AS(run_data_bench(data, "sinc", bad), DataError);
}

TEST_CASE("dataset benchmark on 166 rows splits 83/83") {
    TabularDataset t;
    t.features = Eigen::MatrixXd::Random(166, 2);
    t.targets = t.features.rowwise().sum();
    auto cfg = small_data();
    cfg.runs = 1;
    cfg.methods = {"relm"};
    cfg.model = "linear";
    const auto r = run_data_bench(t, "t", cfg);
    CHECK(r.train_rows == 83);
    CHECK(r.test_rows == 83);
}

TEST_CASE("fitted models round trip") {
    SUBCASE("noise-free linear data") {
        TabularDataset t;
        t.features = Eigen::MatrixXd::Random(50, 2);
        t.targets = t.features * Eigen::Vector2d(1.5, -0.5);
        FitOptions opt;
        opt.lambda_prime = 0.0;
        const auto m = fit_dataset(t, opt);
        CHECK((m.beta - Eigen::Vector2d(1.5, -0.5)).lpNorm<Eigen::Infinity>() <= 1e-6);
        REQUIRE(m.kernel.has_value());
    }
    SUBCASE("ELM with normalization") {
        const auto t = sinc_table(5);
        FitOptions opt;
        opt.model = "elm";
        opt.hidden = 15;
        opt.normalize = true;
        const auto m = fit_dataset(t, opt);
        const Eigen::VectorXd pred = m.predict(t.features);
        const auto back = FittedModel::from_json(Json::parse(m.to_json().dump()));
        CHECK(back.predict(t.features) == pred);
        CHECK(back.beta == m.beta);
        CHECK(back.offset == m.offset);
        CHECK(back.normalization.has_value());
    }
    SUBCASE("every method") {
        const auto t = sinc_table(6);
        for (const char* method : {"mmse", "mcc", "mcc-vc"}) {
            FitOptions opt;
            opt.method = method;
            opt.bias_column = true;
            const auto m = fit_dataset(t, opt);
            const auto back = FittedModel::from_json(m.to_json());
            CHECK(back.predict(t.features) == m.predict(t.features));
        }
    }
    SUBCASE("bad inputs") {
        CHECK_THROWS_AS(FittedModel::from_json(Json{{"format", "other"}}), DataError);
        FitOptions opt;
        opt.method = "svm";
        CHECK_THROWS_AS(fit_dataset(sinc_table(1), opt), InvalidArgument);
    }
}

TEST_CASE("kernel traces") {
    const auto data = generate_linear_data(Eigen::Vector2d(1, 2), 400, inner_noise_presets()[1], 42);
    DesignMatrix dm{build_linear_features(data.inputs), data.targets};
    FitConfig cfg;
    const auto traces = kernel_trace(dm, cfg, TraceOptions{});
    REQUIRE(traces.size() == 2);
    for (const auto& t : traces) {
        double area = 0.0;
        for (std::size_t b = 0; b < t.density.size(); ++b) {
            area += t.density[b] * (t.bin_edges[b + 1] - t.bin_edges[b]);
        }
        CHECK(area == Approx(1.0).epsilon(1e-6));
        CHECK(t.curve_x.size() >= 200);
        CHECK(t.curve_y.size() == t.curve_x.size());
        CHECK(t.support_fraction > 0.0);
        CHECK(t.support_fraction <= 1.0);
    }
    CHECK(std::abs(traces[0].center - traces[0].residual_median) <= 0.5);
    CHECK(std::abs(traces[0].center - 3.0) <= 1.0);
    CHECK(traces[0].to_json()["histogram"]["density"].size() == 50);
    CHECK(traces[0].to_csv().rfind("kind,iteration", 0) == 0);

    TraceOptions zero;
    zero.iterations = {0};
    CHECK_THROWS_AS(kernel_trace(dm, cfg, zero), InvalidArgument);
    TraceOptions beyond;
    beyond.iterations = {1000};
    CHECK_THROWS_AS(kernel_trace(dm, cfg, beyond), InvalidArgument);
}
