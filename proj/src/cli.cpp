#include "swarm_lssvm/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "swarm_lssvm/dataset.hpp"
#include "swarm_lssvm/error.hpp"
#include "swarm_lssvm/format.hpp"
#include "swarm_lssvm/report.hpp"
#include "swarm_lssvm/tuner.hpp"

namespace swarm_lssvm {

namespace {

namespace fs = std::filesystem;

constexpr const char* kDataDirEnv = "SWARM_LSSVM_DATA_DIR";

fs::path resolve_input(const std::string& path) {
    if (fs::exists(path)) {
        return path;
    }
    if (const char* dir = std::getenv(kDataDirEnv); dir != nullptr && *dir != '\0') {
        const fs::path candidate = fs::path(dir) / path;
        if (fs::exists(candidate)) {
            return candidate;
        }
    }
    throw InputError("input file '" + path + "' not found");
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot read '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << text)) {
        throw InputError("cannot write '" + path.string() + "'");
    }
}

OhlcvSeries load_series(const std::string& input) {
    const auto path = resolve_input(input);
    return parse_ohlcv_csv(read_file(path), path.stem().string());
}

/// Writes to --out when given, stdout otherwise.
void emit(const std::string& out_path, const std::string& text, std::ostream& out) {
    if (out_path.empty()) {
        out << text;
    } else {
        write_file(out_path, text);
    }
}

std::string cell(const IndicatorSeries& s, std::size_t i) {
    return s.values[i] ? format_double(*s.values[i]) : std::string();
}

struct CommonOptions {
    std::string input;
    std::string out;
    std::uint64_t seed = 42;
    double train_ratio = 0.7;
    bool no_scale = false;
    bool use_adj_close = false;
    bool json = false;
    bool paper_compat = false;
    int bees = 20;
    int particles = 20;
    int cycles = 50;
    int limit = 0;
    int threads = 1;
    std::string kernel = "rbf";
    std::string optimizer = "abc";

    PipelineConfig pipeline() const {
        PipelineConfig p;
        p.train_ratio = train_ratio;
        p.scale = !no_scale;
        p.price_source = use_adj_close ? PriceSource::AdjClose : PriceSource::Close;
        return p;
    }
    AbcConfig abc() const {
        AbcConfig c;
        c.colony_sn = bees;
        c.max_cycles = cycles;
        c.limit = limit;
        c.seed = seed;
        c.threads = threads;
        if (paper_compat) {
            c.paper_compat();
        }
        return c;
    }
    PsoConfig pso() const {
        PsoConfig c;
        c.particles = particles;
        c.max_iters = cycles;
        c.seed = seed;
        c.threads = threads;
        return c;
    }
    SearchSpace space() const {
        SearchSpace s;
        s.family = parse_kernel_family(kernel);
        return s;
    }
};

void add_input(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--input", o.input, "OHLCV CSV file (relative paths also searched in $SWARM_LSSVM_DATA_DIR)")
        ->required();
}

void add_pipeline(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--train-ratio", o.train_ratio, "Chronological train fraction")->capture_default_str();
    cmd->add_flag("--no-scale", o.no_scale, "Disable feature standardization");
    cmd->add_flag("--use-adj-close", o.use_adj_close, "Use adjusted close as the price source");
}

void add_swarm(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--seed", o.seed, "Random seed")->capture_default_str();
    cmd->add_option("--bees", o.bees, "ABC colony size (food sources)")->capture_default_str();
    cmd->add_option("--particles", o.particles, "PSO swarm size")->capture_default_str();
    cmd->add_option("--cycles", o.cycles, "Optimizer cycles / iterations")->capture_default_str();
    cmd->add_option("--limit", o.limit, "ABC abandonment limit (0 = bees x dimensions)")->capture_default_str();
    cmd->add_option("--threads", o.threads, "Objective evaluation threads")->capture_default_str();
    cmd->add_flag("--paper-compat", o.paper_compat, "Draw the ABC neighbour coefficient from [0, 1]");
    cmd->add_option("--kernel", o.kernel, "Kernel searched: rbf|linear|poly|mlp")
        ->check(CLI::IsMember({"rbf", "linear", "poly", "mlp"}))
        ->capture_default_str();
}

int cmd_indicators(const CommonOptions& o, std::ostream& out) {
    auto series = with_price_source(load_series(o.input),
                                    o.use_adj_close ? PriceSource::AdjClose : PriceSource::Close);
    const IndicatorConfig config;
    std::vector<double> high, low, close, volume;
    for (const auto& b : series.bars) {
        high.push_back(b.high);
        low.push_back(b.low);
        close.push_back(b.close);
        volume.push_back(b.volume);
    }
    const auto r = rsi(close, config.rsi_window);
    const auto m = mfi(high, low, close, volume, config.mfi_window);
    const auto e = ema(close, config.ema_alpha());
    const auto k = stochastic_k(close, high, low, config.stoch_window);
    const auto md = macd(close, config);

    std::string text = "date,close,rsi,mfi,ema,stoch_k,macd,macd_signal\n";
    for (std::size_t i = 0; i < close.size(); ++i) {
        text += format_date(series.bars[i].date) + ',' + format_double(close[i]) + ',' + cell(r, i) + ',' + cell(m, i) +
                ',' + cell(e, i) + ',' + cell(k, i) + ',' + cell(md.macd, i) + ',' + cell(md.signal, i) + '\n';
    }
    emit(o.out, text, out);
    return kExitOk;
}

int cmd_dataset(const CommonOptions& o, std::ostream& out) {
    const auto series = with_price_source(load_series(o.input),
                                          o.use_adj_close ? PriceSource::AdjClose : PriceSource::Close);
    emit(o.out, render_dataset_csv(build_supervised(series, IndicatorConfig{})), out);
    return kExitOk;
}

struct KernelOptions {
    double c = 1.0;
    double sigma2 = 1.0;
    int degree = 2;
    double poly_scale = 1.0;
    double slope = 1.0;
    double offset = 0.0;

    KernelSpec spec(const std::string& family) const {
        switch (parse_kernel_family(family)) {
        case KernelFamily::Rbf: return RbfKernel{sigma2};
        case KernelFamily::Linear: return LinearKernel{};
        case KernelFamily::Polynomial: return PolynomialKernel{degree, poly_scale};
        case KernelFamily::Mlp: return MlpKernel{slope, offset};
        }
        return RbfKernel{sigma2};
    }
};

int cmd_train(const CommonOptions& o, const KernelOptions& k, std::ostream& out) {
    const auto data = prepare(load_series(o.input), o.pipeline());
    const auto& train_part = data.split.train;
    const auto& test_part = data.split.test;
    const auto model = train(train_part.training_set(), k.spec(o.kernel), k.c)
                           .with_metadata(train_part.feature_names, data.scaler);
    const auto train_mse = mse(train_part.targets, predict(model, train_part.features));
    const auto test_mse = mse(test_part.targets, predict(model, test_part.features));
    if (!o.out.empty()) {
        write_file(o.out, serialize_model(model));
    }
    if (o.json) {
        const nlohmann::json j = {{"kernel", kernel_to_json(model.kernel())},
                                  {"reg_c", model.reg_c()},
                                  {"train_mse", train_mse.mse},
                                  {"test_mse", test_mse.mse},
                                  {"n_train", train_mse.n},
                                  {"n_test", test_mse.n}};
        out << j.dump(2) << '\n';
    } else {
        out << "train MSE " << format_double(train_mse.mse) << " (" << train_mse.n << " rows)\n"
            << "test MSE  " << format_double(test_mse.mse) << " (" << test_mse.n << " rows)\n";
    }
    return kExitOk;
}

int cmd_predict(const std::string& model_path, const CommonOptions& o, std::ostream& out) {
    const auto model = parse_model(read_file(resolve_input(model_path)));
    const auto series = with_price_source(load_series(o.input),
                                          o.use_adj_close ? PriceSource::AdjClose : PriceSource::Close);
    const auto ds = build_supervised(series, IndicatorConfig{});
    if (model.dims() != ds.features.cols()) {
        throw InputError("model expects " + std::to_string(model.dims()) + " features but the input provides " +
                         std::to_string(ds.features.cols()));
    }
    if (!model.feature_names().empty() && model.feature_names() != ds.feature_names) {
        throw InputError("model feature names do not match the input features");
    }
    const auto scale = [&](std::span<const double> row) {
        return model.scaler() ? apply_scaler(*model.scaler(), row) : std::vector<double>(row.begin(), row.end());
    };

    std::string text = "date,prediction,target\n";
    for (Eigen::Index i = 0; i < ds.rows(); ++i) {
        const auto row = scale(std::span<const double>(ds.features.row(i).data(), static_cast<std::size_t>(ds.features.cols())));
        text += format_date(ds.dates[static_cast<std::size_t>(i)]) + ',' + format_double(predict(model, row)) + ',' +
                format_double(ds.targets(i)) + '\n';
    }
    const auto latest = latest_features(series, IndicatorConfig{});
    text += format_date(latest.date) + ',' + format_double(predict(model, scale(latest.features))) + ",\n";
    emit(o.out, text, out);
    return kExitOk;
}

int cmd_tune(const CommonOptions& o, const std::string& history_path, std::ostream& out) {
    if (o.optimizer != "abc" && o.optimizer != "pso") {
        throw InputError("--optimizer must be abc or pso");
    }
    const auto data = prepare(load_series(o.input), o.pipeline());
    const auto& train_part = data.split.train;
    const auto& test_part = data.split.test;
    const auto space = o.space();
    const auto result = o.optimizer == "abc" ? tune_lssvm_abc(train_part.training_set(), space, o.abc())
                                             : tune_lssvm_pso(train_part.training_set(), space, o.pso());
    const auto model = result.final_model.with_metadata(train_part.feature_names, data.scaler);
    const auto test_mse = mse(test_part.targets, predict(model, test_part.features));

    if (!o.out.empty()) {
        write_file(o.out, serialize_model(model));
    }
    if (!history_path.empty()) {
        emit_convergence(result, history_path);
    }
    if (o.json) {
        auto j = tune_result_to_json(result);
        j["test_mse"] = test_mse.mse;
        out << j.dump(2) << '\n';
    } else {
        out << "optimizer        " << result.optimizer << "\n"
            << "kernel           " << kernel_to_json(result.best_kernel).dump() << "\n"
            << "best C           " << format_double(result.best_c) << "\n"
            << "validation MSE   " << format_double(result.best_validation_mse) << "\n"
            << "test MSE         " << format_double(test_mse.mse) << "\n"
            << "evaluations      " << result.evaluations << "\n";
    }
    return kExitOk;
}

int cmd_compare(const CommonOptions& o, bool timing, std::ostream& out) {
    CompareConfig config;
    config.pipeline = o.pipeline();
    config.space = o.space();
    config.abc = o.abc();
    config.pso = o.pso();
    if (config.space.family != KernelFamily::Rbf) {
        KernelOptions defaults;
        config.default_kernel = defaults.spec(o.kernel);
    }
    const auto report = run_compare(load_series(o.input), config);
    const auto json_text = compare_to_json(report, timing).dump(2) + '\n';
    if (!o.out.empty()) {
        write_file(o.out, json_text);
    }
    out << (o.json ? json_text : render_compare_table(report));
    return kExitOk;
}

int cmd_benchmark(const CommonOptions& o, int runs, int dims, std::ostream& out) {
    if (runs < 1 || dims < 1) {
        throw InputError("--runs and --dims must be positive");
    }
    nlohmann::json results = nlohmann::json::array();
    std::ostringstream table;
    char line[256];
    std::snprintf(line, sizeof line, "%-11s %-4s %14s %14s %14s %14s\n", "function", "opt", "median", "mean", "best",
                  "worst");
    table << line;
    for (const auto& fn : benchmark_objectives()) {
        const Bounds bounds{std::vector<double>(static_cast<std::size_t>(dims), -fn.half_width),
                            std::vector<double>(static_cast<std::size_t>(dims), fn.half_width)};
        for (const std::string opt : {"abc", "pso"}) {
            std::vector<double> best;
            for (int r = 0; r < runs; ++r) {
                CommonOptions seeded = o;
                seeded.seed = o.seed + static_cast<std::uint64_t>(r);
                const auto res = opt == "abc" ? abc_minimize(fn.fn, bounds, seeded.abc())
                                              : pso_minimize(fn.fn, bounds, seeded.pso());
                best.push_back(res.best_objective);
            }
            std::sort(best.begin(), best.end());
            const std::size_t n = best.size();
            const double median = n % 2 ? best[n / 2] : 0.5 * (best[n / 2 - 1] + best[n / 2]);
            double mean = 0.0;
            for (double v : best) {
                mean += v / static_cast<double>(n);
            }
            results.push_back({{"function", fn.name},
                               {"optimizer", opt},
                               {"dims", dims},
                               {"runs", runs},
                               {"median", median},
                               {"mean", mean},
                               {"best", best.front()},
                               {"worst", best.back()}});
            std::snprintf(line, sizeof line, "%-11s %-4s %14.6g %14.6g %14.6g %14.6g\n", fn.name.c_str(), opt.c_str(),
                          median, mean, best.front(), best.back());
            table << line;
        }
    }
    emit(o.out, o.json ? results.dump(2) + '\n' : table.str(), out);
    return kExitOk;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"LSSVM regression with swarm-tuned hyperparameters for daily price series", "swarm_lssvm"};
    app.require_subcommand(1);

    CommonOptions o;
    KernelOptions k;
    std::string model_path;
    std::string history_path;
    bool timing = false;
    int runs = 30;
    int dims = 2;

    auto* indicators = app.add_subcommand("indicators", "Write technical indicators as CSV");
    add_input(indicators, o);
    indicators->add_option("--out", o.out, "Output path (default stdout)");
    indicators->add_flag("--use-adj-close", o.use_adj_close, "Use adjusted close as the price source");

    auto* dataset = app.add_subcommand("dataset", "Write the supervised feature/target table as CSV");
    add_input(dataset, o);
    dataset->add_option("--out", o.out, "Output path (default stdout)");
    dataset->add_flag("--use-adj-close", o.use_adj_close, "Use adjusted close as the price source");

    auto* train_cmd = app.add_subcommand("train", "Train one LSSVM with fixed parameters");
    add_input(train_cmd, o);
    add_pipeline(train_cmd, o);
    train_cmd->add_option("--kernel", o.kernel, "rbf|linear|poly|mlp")
        ->check(CLI::IsMember({"rbf", "linear", "poly", "mlp"}))
        ->capture_default_str();
    train_cmd->add_option("--c", k.c, "Regularization C")->capture_default_str();
    train_cmd->add_option("--sigma2", k.sigma2, "RBF width")->capture_default_str();
    train_cmd->add_option("--degree", k.degree, "Polynomial degree")->capture_default_str();
    train_cmd->add_option("--poly-scale", k.poly_scale, "Polynomial scale")->capture_default_str();
    train_cmd->add_option("--slope", k.slope, "MLP kernel slope")->capture_default_str();
    train_cmd->add_option("--offset", k.offset, "MLP kernel offset")->capture_default_str();
    train_cmd->add_option("--out", o.out, "Write the model file here");
    train_cmd->add_flag("--json", o.json, "Machine-readable output");

    auto* predict_cmd = app.add_subcommand("predict", "Predict next closes with a saved model");
    predict_cmd->add_option("--model", model_path, "Model file")->required();
    add_input(predict_cmd, o);
    predict_cmd->add_flag("--use-adj-close", o.use_adj_close, "Use adjusted close as the price source");
    predict_cmd->add_option("--out", o.out, "Output path (default stdout)");

    auto* tune = app.add_subcommand("tune", "Tune C and kernel parameters with ABC or PSO");
    add_input(tune, o);
    add_pipeline(tune, o);
    add_swarm(tune, o);
    tune->add_option("--optimizer", o.optimizer, "abc|pso")
        ->check(CLI::IsMember({"abc", "pso"}))
        ->capture_default_str();
    tune->add_option("--out", o.out, "Write the tuned model file here");
    tune->add_option("--history", history_path, "Write the convergence curve (cycle,best_objective) here");
    tune->add_flag("--json", o.json, "Machine-readable output");

    auto* compare = app.add_subcommand("compare", "LSSVM-ABC vs LSSVM-PSO vs default LSSVM on one series");
    add_input(compare, o);
    add_pipeline(compare, o);
    add_swarm(compare, o);
    compare->add_option("--out", o.out, "Also write the JSON report here");
    compare->add_flag("--json", o.json, "Print the JSON report instead of the table");
    compare->add_flag("--timing", timing, "Include wall times in the JSON report");

    auto* benchmark = app.add_subcommand("benchmark", "Run ABC and PSO on sphere, rosenbrock and rastrigin");
    add_swarm(benchmark, o);
    benchmark->add_option("--runs", runs, "Seeds per optimizer and function")->capture_default_str();
    benchmark->add_option("--dims", dims, "Problem dimension")->capture_default_str();
    benchmark->add_option("--out", o.out, "Output path (default stdout)");
    benchmark->add_flag("--json", o.json, "Machine-readable output");

    std::vector<std::string> argv_store{"swarm_lssvm"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store) {
        argv.push_back(a.data());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitInputError;
    }

    try {
        if (indicators->parsed()) return cmd_indicators(o, out);
        if (dataset->parsed()) return cmd_dataset(o, out);
        if (train_cmd->parsed()) return cmd_train(o, k, out);
        if (predict_cmd->parsed()) return cmd_predict(model_path, o, out);
        if (tune->parsed()) return cmd_tune(o, history_path, out);
        if (compare->parsed()) return cmd_compare(o, timing, out);
        if (benchmark->parsed()) {
            CommonOptions bench = o;
            if (benchmark->count("--cycles") == 0) {
                bench.cycles = 200;
            }
            return cmd_benchmark(bench, runs, dims, out);
        }
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return kExitNumericalError;
    } catch (const InputError& e) {
        err << "input error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    }
    err << app.help();
    return kExitInputError;
}

int cli_main(int argc, char** argv) {
    return run_cli(std::vector<std::string>(argv + std::min(argc, 1), argv + argc), std::cout, std::cerr);
}

} // namespace swarm_lssvm
