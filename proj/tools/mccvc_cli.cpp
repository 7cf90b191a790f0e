// Command-line front end: benchmarks, fitting, prediction and kernel traces.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mccvc/bench.hpp"
#include "mccvc/error.hpp"

using namespace mccvc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

// Flags shared by the fitting subcommands.
struct SolverFlags {
    std::optional<double> lambda_prime;
    std::string sigma_grid;
    std::string center_grid;
    std::string center_rule;
    int max_iter = 100;
    double tol = 1e-10;

    void add_to(CLI::App& app) {
        app.add_option("--lambda-prime", lambda_prime, "Ridge regularizer added to the diagonal");
        app.add_option("--sigma-grid", sigma_grid, "Kernel width grid as start:step:end");
        app.add_option("--center-grid", center_grid, "Kernel center grid as start:step:end");
        app.add_option("--center-rule", center_rule, "Center choice: grid, mean or median");
        app.add_option("--max-iter", max_iter, "Maximum fixed-point iterations")->capture_default_str();
        app.add_option("--tol", tol, "Stopping tolerance on the cost change")->capture_default_str();
    }

    ParamGrid grid(ParamGrid base) const {
        if (!sigma_grid.empty()) base.sigma_set = parse_range(sigma_grid);
        if (!center_grid.empty()) {
            base.center_set = parse_range(center_grid);
            base.center_rule = CenterRule::ExplicitGrid;
        }
        if (!center_rule.empty()) base.center_rule = parse_center_rule(center_rule);
        base.validate();
        return base;
    }
};

struct CsvFlags {
    std::string path;
    std::string target = "-1";
    bool header = true;

    void add_to(CLI::App& app, bool required) {
        auto* opt = app.add_option("--csv", path, "Numeric CSV file");
        if (required) opt->required();
        app.add_option("--target", target, "Target column name or index (negative counts from the end)")
            ->capture_default_str();
        app.add_option("--header", header, "Whether the first CSV row is a header")->capture_default_str();
    }

    TabularDataset load() const { return load_csv(path, header, target); }
};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    if (out.empty()) throw InvalidArgument("empty list '" + s + "'");
    return out;
}

std::vector<double> parse_doubles(const std::string& s) {
    std::vector<double> out;
    for (const auto& item : split_list(s)) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::logic_error&) {
            throw InvalidArgument("not a number: '" + item + "'");
        }
    }
    return out;
}

Json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw DataError(path + ": " + e.what());
    }
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out << text;
    if (!out) throw DataError("failed writing " + path);
}

void write_json(const std::string& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

// ---------------------------------------------------------------- synth-bench

struct SynthArgs {
    std::uint64_t seed = 42;
    int runs = 100;
    std::string out;
    std::string methods;
    std::string cases;
    std::string mcc_sigmas;
    std::size_t samples = 400;
    std::string from_report;
    bool no_timing = false;
    SolverFlags solver;
};

int run_synth(const SynthArgs& a) {
    SynthBenchConfig cfg;
    if (!a.from_report.empty()) {
        const Json j = read_json(a.from_report);
        if (!j.contains("config")) throw DataError(a.from_report + " has no embedded config");
        cfg = SynthBenchConfig::from_json(j["config"]);
    } else {
        cfg.seed = a.seed;
        cfg.runs = a.runs;
        cfg.samples = a.samples;
        if (!a.methods.empty()) cfg.methods = split_list(a.methods);
        if (!a.cases.empty()) {
            cfg.cases.clear();
            for (const double c : parse_doubles(a.cases)) cfg.cases.push_back(static_cast<int>(c));
        }
        if (!a.mcc_sigmas.empty()) cfg.mcc_sigmas = parse_doubles(a.mcc_sigmas);
        if (a.solver.lambda_prime) cfg.lambda_prime = *a.solver.lambda_prime;
        cfg.grid = a.solver.grid(cfg.grid);
        cfg.max_iterations = a.solver.max_iter;
        cfg.tolerance = a.solver.tol;
    }
    const SynthBenchReport report = run_synth_bench(cfg);
    std::cout << report.to_table();
    if (!a.out.empty()) write_json(a.out, report.to_json(!a.no_timing));
    return kExitOk;
}

// ----------------------------------------------------------------- data-bench

struct DataArgs {
    std::uint64_t seed = 42;
    int runs = 100;
    std::string out;
    std::string methods;
    std::vector<std::string> csv;
    std::string target = "-1";
    bool header = true;
    double train_frac = 0.5;
    int folds = 5;
    std::string model = "elm";
    int hidden = 100;
    bool bias_column = false;
    std::string normalize = "full";
    std::string lambda_grid;
    std::string sigmas;
    bool sinc = false;
    std::size_t sinc_train = 500;
    std::size_t sinc_test = 500;
    std::string from_report;
    bool no_timing = false;
    SolverFlags solver;
};

struct DataSource {
    std::string csv{};
    std::string target{};
    bool header = true;
    std::size_t sinc_train = 0;
    std::size_t sinc_test = 0;

    bool is_sinc() const { return csv.empty(); }

    Json to_json() const {
        if (is_sinc()) return {{"sinc", {{"train", sinc_train}, {"test", sinc_test}}}};
        return {{"csv", csv}, {"target", target}, {"header", header}};
    }

    static DataSource from_json(const Json& j) {
        DataSource s;
        if (j.contains("sinc")) {
            s.sinc_train = j["sinc"].at("train").get<std::size_t>();
            s.sinc_test = j["sinc"].at("test").get<std::size_t>();
        } else {
            s.csv = j.at("csv").get<std::string>();
            s.target = j.at("target").get<std::string>();
            s.header = j.at("header").get<bool>();
        }
        return s;
    }
};

DataBenchReport bench_source(const DataSource& src, const DataBenchConfig& cfg) {
    if (!src.is_sinc()) {
        const TabularDataset data = load_csv(src.csv, src.header, src.target);
        return run_data_bench(data, std::filesystem::path(src.csv).filename().string(), cfg);
    }
    // Synthetic sinc regression with the case-2 mixture on the training targets.
    const NoiseModel noise = inner_noise_presets()[1];
    std::vector<SplitPair> splits;
    for (int r = 0; r < cfg.runs; ++r) {
        splits.push_back(make_sinc_task(src.sinc_train, src.sinc_test, noise,
                                        derive_seed(cfg.seed + static_cast<std::uint64_t>(r), 7)));
    }
    return run_data_bench_on_splits(splits, "sinc", cfg);
}

int run_data(const DataArgs& a) {
    DataBenchConfig cfg;
    std::vector<DataSource> sources;
    if (!a.from_report.empty()) {
        const Json j = read_json(a.from_report);
        try {
            const Json& entries = j.at("datasets");
            if (entries.empty()) throw DataError(a.from_report + " lists no datasets");
            cfg = DataBenchConfig::from_json(entries.at(0).at("config"));
            for (const auto& e : entries) sources.push_back(DataSource::from_json(e.at("source")));
        } catch (const Json::exception& e) {
            throw DataError(a.from_report + ": " + e.what());
        }
    } else {
        cfg.seed = a.seed;
        cfg.runs = a.runs;
        if (!a.methods.empty()) cfg.methods = split_list(a.methods);
        cfg.model = a.model;
        cfg.hidden = a.hidden;
        cfg.bias_column = a.bias_column;
        cfg.train_fraction = a.train_frac;
        cfg.folds = a.folds;
        cfg.normalization = parse_normalization(a.normalize);
        if (!a.lambda_grid.empty()) cfg.lambda_grid = parse_doubles(a.lambda_grid);
        if (a.solver.lambda_prime) cfg.lambda_grid = {*a.solver.lambda_prime};
        if (!a.sigmas.empty()) cfg.baseline_sigmas = parse_doubles(a.sigmas);
        cfg.vc_grid = a.solver.grid(cfg.vc_grid);
        cfg.max_iterations = a.solver.max_iter;
        cfg.tolerance = a.solver.tol;
        if (a.sinc) {
            if (!a.csv.empty()) throw InvalidArgument("--sinc and --csv are exclusive");
            if (a.normalize == "full") cfg.normalization = Normalization::None;
            sources.push_back(DataSource{.sinc_train = a.sinc_train, .sinc_test = a.sinc_test});
        }
        for (const auto& path : a.csv) sources.push_back(DataSource{.csv = path, .target = a.target, .header = a.header});
        if (sources.empty()) throw InvalidArgument("data-bench needs --csv or --sinc");
    }
    cfg.validate();

    Json out;
    out["report"] = "data-bench";
    Json datasets = Json::array();
    for (const DataSource& src : sources) {
        const DataBenchReport report = bench_source(src, cfg);
        std::cout << report.to_table();
        Json j = report.to_json(!a.no_timing);
        j["source"] = src.to_json();
        datasets.push_back(std::move(j));
    }
    out["datasets"] = std::move(datasets);
    if (!a.out.empty()) write_json(a.out, out);
    return kExitOk;
}

// ------------------------------------------------------------------------ fit

struct FitArgs {
    CsvFlags csv;
    std::string out;
    std::string method = "mcc-vc";
    std::string model = "linear";
    int hidden = 100;
    bool bias_column = false;
    bool normalize = false;
    std::uint64_t seed = 42;
    double mcc_sigma = 1.0;
    SolverFlags solver;
};

int run_fit(const FitArgs& a) {
    const TabularDataset data = a.csv.load();
    FitOptions opt;
    opt.method = a.method;
    opt.model = a.model;
    opt.hidden = a.hidden;
    opt.bias_column = a.bias_column;
    opt.normalize = a.normalize;
    opt.seed = a.seed;
    if (a.solver.lambda_prime) opt.lambda_prime = *a.solver.lambda_prime;
    opt.mcc_sigma = a.mcc_sigma;
    opt.fit.grid = a.solver.grid(opt.fit.grid);
    opt.fit.max_iterations = a.solver.max_iter;
    opt.fit.tolerance = a.solver.tol;
    opt.fit.lambda_prime = opt.lambda_prime;
    opt.fit.validate();

    const FittedModel model = fit_dataset(data, opt);
    const Eigen::VectorXd residuals = data.targets - model.predict(data.features);
    const Json summary = residual_summary(residuals);

    std::cout << "method " << model.method << ", " << model.iterations << " iterations"
              << (model.converged ? "" : " (not converged)") << '\n';
    if (model.kernel) {
        std::cout.precision(6);
        std::cout << "sigma* " << model.kernel->sigma() << ", c* " << model.kernel->center() << '\n';
    }
    std::cout << "training residuals: " << summary.dump() << '\n';

    Json j = model.to_json();
    j["training_residuals"] = summary;
    if (!a.out.empty()) write_json(a.out, j);
    return kExitOk;
}

// -------------------------------------------------------------------- predict

struct PredictArgs {
    std::string model;
    CsvFlags csv;
    bool has_target = false;
    std::string out;
};

int run_predict(const PredictArgs& a) {
    const FittedModel model = FittedModel::from_json(read_json(a.model));
    Eigen::MatrixXd inputs;
    std::optional<Eigen::VectorXd> targets;
    if (a.has_target) {
        const TabularDataset data = a.csv.load();
        inputs = data.features;
        targets = data.targets;
    } else {
        // Every column is an input; load with a throwaway target and put it back.
        const TabularDataset data = load_csv(a.csv.path, a.csv.header, "-1");
        inputs.resize(data.features.rows(), data.features.cols() + 1);
        inputs << data.features, data.targets;
    }
    const Eigen::VectorXd y = model.predict(inputs);
    std::ostringstream text;
    text.precision(17);
    text << "prediction\n";
    for (Eigen::Index i = 0; i < y.size(); ++i) text << y(i) << '\n';
    write_text(a.out, text.str());
    if (targets) {
        std::cerr << "rmse " << rmse_predictions(y, *targets) << '\n';
    }
    return kExitOk;
}

// --------------------------------------------------------------- kernel-trace

struct TraceArgs {
    int case_index = 2;
    std::uint64_t seed = 42;
    std::size_t samples = 400;
    CsvFlags csv;
    bool bias_column = false;
    std::string iterations = "1,2";
    int bins = 50;
    int curve_points = 400;
    std::string format = "json";
    std::string out;
    SolverFlags solver;
};

int run_trace(const TraceArgs& a) {
    DesignMatrix design;
    if (!a.csv.path.empty()) {
        const TabularDataset data = a.csv.load();
        design = DesignMatrix{build_linear_features(data.features, a.bias_column), data.targets};
    } else {
        const auto presets = inner_noise_presets();
        if (a.case_index < 1 || a.case_index > static_cast<int>(presets.size())) {
            throw InvalidArgument("--case must be between 1 and 4");
        }
        const auto d = generate_linear_data(Eigen::Vector2d(1.0, 2.0), a.samples,
                                            presets[static_cast<std::size_t>(a.case_index - 1)], a.seed);
        design = DesignMatrix{build_linear_features(d.inputs), d.targets};
    }
    FitConfig cfg;
    if (a.solver.lambda_prime) cfg.lambda_prime = *a.solver.lambda_prime;
    cfg.grid = a.solver.grid(cfg.grid);
    cfg.max_iterations = a.solver.max_iter;
    cfg.tolerance = a.solver.tol;

    TraceOptions opt;
    opt.iterations.clear();
    for (const double k : parse_doubles(a.iterations)) opt.iterations.push_back(static_cast<int>(k));
    opt.bins = a.bins;
    opt.curve_points = a.curve_points;
    const auto traces = kernel_trace(design, cfg, opt);

    if (a.format == "csv") {
        std::string text;
        for (std::size_t i = 0; i < traces.size(); ++i) {
            std::string part = traces[i].to_csv();
            if (i > 0) part = part.substr(part.find('\n') + 1);
            text += part;
        }
        write_text(a.out.empty() ? "-" : a.out, text);
    } else {
        Json j;
        j["report"] = "kernel-trace";
        j["source"] = a.csv.path.empty() ? Json{{"case", a.case_index}, {"seed", a.seed}, {"samples", a.samples}}
                                         : Json{{"csv", a.csv.path}, {"target", a.csv.target}};
        j["traces"] = Json::array();
        for (const auto& t : traces) j["traces"].push_back(t.to_json());
        write_json(a.out.empty() ? "-" : a.out, j);
    }
    for (const auto& t : traces) {
        std::cerr << "iteration " << t.iteration << ": sigma* " << t.sigma << ", c* " << t.center
                  << ", residual median " << t.residual_median << '\n';
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Robust linear-in-parameters regression with a variable-center correntropy kernel"};
    app.require_subcommand(1);

    SynthArgs synth;
    auto* s = app.add_subcommand("synth-bench", "Monte Carlo benchmark on the four synthetic noise cases");
    s->add_option("--seed", synth.seed, "Base seed; run r uses seed + r")->capture_default_str();
    s->add_option("--runs", synth.runs, "Replications per case")->capture_default_str();
    s->add_option("--out", synth.out, "JSON report path");
    s->add_option("--methods", synth.methods, "Comma list of mmse, mcc, mcc-vc");
    s->add_option("--cases", synth.cases, "Comma list of noise cases 1-4");
    s->add_option("--samples", synth.samples, "Samples per replication")->capture_default_str();
    s->add_option("--mcc-sigmas", synth.mcc_sigmas, "Comma list of widths swept for mcc");
    s->add_option("--from-report", synth.from_report, "Re-run the config embedded in a report");
    s->add_flag("--no-timing", synth.no_timing, "Omit timing fields from the JSON report");
    synth.solver.add_to(*s);

    DataArgs data;
    auto* d = app.add_subcommand("data-bench", "Cross-validated benchmark on CSV datasets");
    d->add_option("--seed", data.seed, "Base seed; repetition r uses seed + r")->capture_default_str();
    d->add_option("--runs", data.runs, "Random splits per dataset")->capture_default_str();
    d->add_option("--out", data.out, "JSON report path");
    d->add_option("--methods", data.methods, "Comma list of relm, elm-mcc, elm-mcc-vc");
    d->add_option("--csv", data.csv, "CSV file (repeatable)");
    d->add_option("--target", data.target, "Target column name or index")->capture_default_str();
    d->add_option("--header", data.header, "Whether the first CSV row is a header")->capture_default_str();
    d->add_option("--train-frac", data.train_frac, "Training fraction")->capture_default_str();
    d->add_option("--folds", data.folds, "Cross-validation folds")->capture_default_str();
    d->add_option("--model", data.model, "Feature map: linear or elm")->capture_default_str();
    d->add_option("--hidden", data.hidden, "ELM hidden nodes")->capture_default_str();
    d->add_option("--bias-column", data.bias_column, "Append a constant column to linear features")
        ->capture_default_str();
    d->add_option("--normalize", data.normalize, "Min-max scope: none, full or train")->capture_default_str();
    d->add_option("--lambda-grid", data.lambda_grid, "Comma list of lambda' values to cross-validate");
    d->add_option("--sigmas", data.sigmas, "Comma list of widths cross-validated for elm-mcc");
    d->add_flag("--sinc", data.sinc, "Use the synthetic sinc task instead of a CSV");
    d->add_option("--sinc-train", data.sinc_train, "Sinc training rows")->capture_default_str();
    d->add_option("--sinc-test", data.sinc_test, "Sinc testing rows")->capture_default_str();
    d->add_option("--from-report", data.from_report, "Re-run the config embedded in a report");
    d->add_flag("--no-timing", data.no_timing, "Omit timing fields from the JSON report");
    data.solver.add_to(*d);

    FitArgs fit;
    auto* f = app.add_subcommand("fit", "Fit one model on a CSV and write it as JSON");
    fit.csv.add_to(*f, true);
    f->add_option("--out", fit.out, "Model JSON path");
    f->add_option("--method,--methods", fit.method, "mmse, mcc or mcc-vc")->capture_default_str();
    f->add_option("--model", fit.model, "Feature map: linear or elm")->capture_default_str();
    f->add_option("--hidden", fit.hidden, "ELM hidden nodes")->capture_default_str();
    f->add_option("--bias-column", fit.bias_column, "Append a constant column to linear features")
        ->capture_default_str();
    f->add_option("--normalize", fit.normalize, "Min-max normalize features and target")->capture_default_str();
    f->add_option("--seed", fit.seed, "ELM initialization seed")->capture_default_str();
    f->add_option("--mcc-sigma", fit.mcc_sigma, "Kernel width for mcc")->capture_default_str();
    fit.solver.add_to(*f);

    PredictArgs pred;
    auto* p = app.add_subcommand("predict", "Apply a model JSON to a CSV");
    p->add_option("--model", pred.model, "Model JSON from fit")->required();
    pred.csv.add_to(*p, true);
    p->add_flag("--has-target", pred.has_target, "CSV contains the target column; report rmse");
    p->add_option("--out", pred.out, "Prediction CSV path (stdout if omitted)");

    TraceArgs trace;
    auto* t = app.add_subcommand("kernel-trace", "Residual histograms and the fitted kernel per iteration");
    t->add_option("--case", trace.case_index, "Synthetic noise case 1-4")->capture_default_str();
    t->add_option("--seed", trace.seed, "Data seed")->capture_default_str();
    t->add_option("--samples", trace.samples, "Synthetic samples")->capture_default_str();
    trace.csv.add_to(*t, false);
    t->add_option("--bias-column", trace.bias_column, "Append a constant column for CSV input")
        ->capture_default_str();
    t->add_option("--iterations", trace.iterations, "Comma list of iterations, from 1")->capture_default_str();
    t->add_option("--bins", trace.bins, "Histogram bins")->capture_default_str();
    t->add_option("--curve-points", trace.curve_points, "Kernel curve samples")->capture_default_str();
    t->add_option("--format", trace.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    t->add_option("--out", trace.out, "Output path (stdout if omitted)");
    trace.solver.add_to(*t);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*s) return run_synth(synth);
        if (*d) return run_data(data);
        if (*f) return run_fit(fit);
        if (*p) return run_predict(pred);
        if (*t) return run_trace(trace);
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitUsage;
}
