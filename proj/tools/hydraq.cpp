// Copyright 2026 The hydraq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// hydraq command-line front end: synth, train, eval, bench, gradcheck.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "hydraq/bench.hpp"
#include "hydraq/datasets.hpp"
#include "hydraq/errors.hpp"
#include "hydraq/kvconfig.hpp"
#include "hydraq/models.hpp"

namespace {

using namespace hydraq;

constexpr int kExitUsage = 2;
constexpr int kExitConfig = 3;
constexpr int kExitData = 4;
constexpr int kExitDivergence = 5;

int exit_code(ErrorClass cls) {
    switch (cls) {
    case ErrorClass::Capacity:
    case ErrorClass::Configuration:
        return kExitConfig;
    case ErrorClass::Divergence:
        return kExitDivergence;
    default:
        return kExitData;
    }
}

void report_error(std::string_view cls, const std::string &message) {
    std::cerr << "hydraq: error[" << cls << "]: " << message << '\n';
}

void write_text(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError(path + ": cannot open for writing");
    }
    out << text;
}

struct SynthArgs {
    std::optional<std::string> config;
    std::optional<std::size_t> n;
    std::optional<std::uint64_t> seed;
    std::optional<double> noise;
    std::string out = "data.csv";
};

struct TrainArgs {
    std::optional<std::string> config;
    std::optional<std::string> data;
    std::string task;
    std::string model = "qsm";
    std::optional<std::uint64_t> seed;
    std::string out = "bundle.json";
};

struct EvalArgs {
    std::string bundle;
    std::string data;
    std::string task;
    bool holdout = false;
    std::optional<std::string> out;
};

struct BenchArgs {
    std::optional<std::string> config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
};

struct GradcheckArgs {
    std::size_t circuits = 50;
    std::size_t draws = 5;
    std::uint64_t seed = 1;
    std::optional<std::string> out;
};

BenchConfig config_or_default(const std::optional<std::string> &path) {
    return path ? load_bench_config(*path) : BenchConfig{};
}

int run_synth(const SynthArgs &a) {
    auto source = config_or_default(a.config).data;
    source.kind = DataSource::Kind::Synthetic;
    if (a.n) {
        source.n = *a.n;
    }
    if (a.seed) {
        source.seed = *a.seed;
    }
    if (a.noise) {
        source.noise = *a.noise;
    }
    const auto data = load_data(source);
    save_csv(a.out, data);
    std::cout << "wrote " << data.size() << " rows to " << a.out << '\n';
    return 0;
}

int run_train(const TrainArgs &a) {
    const auto cfg = config_or_default(a.config);
    auto model = cfg.model;
    if (a.seed) {
        model.train.seed = *a.seed;
        model.search.seed = *a.seed;
    }
    const auto kind = parse_model_kind(a.model);
    const auto task = parse_task(a.task);
    const auto data = a.data ? load_csv(*a.data) : load_data(cfg.data);
    const auto bundle = build_and_train(kind, data, task, model);
    save_bundle(a.out, bundle);

    const auto s = bundle_split(bundle, data.size());
    const auto test = data.subset(s.test);
    const auto yhat = predict(bundle, test.features());
    const auto row = score(task, kind, test.target(task), yhat);
    std::cout << to_string(kind) << " on " << to_string(task) << ": test R2 "
              << format_double(row.r2) << ", MAE " << format_double(row.mae)
              << " (" << row.n_test << " rows); bundle " << a.out << '\n';
    return 0;
}

int run_eval(const EvalArgs &a) {
    const auto bundle = load_bundle(a.bundle);
    const auto task = parse_task(a.task);
    if (task != bundle.task) {
        throw IntegrityError(a.bundle + ": bundle predicts '" +
                             std::string(target_column(bundle.task)) +
                             "', not '" + std::string(target_column(task)) + "'");
    }
    auto data = load_csv(a.data);
    if (a.holdout) {
        if (data.size() != bundle.metadata.num_rows) {
            throw IntegrityError(a.data + ": holdout needs the " +
                                 std::to_string(bundle.metadata.num_rows) +
                                 " rows the bundle was split from, got " +
                                 std::to_string(data.size()));
        }
        data = data.subset(bundle_split(bundle, data.size()).test);
    }
    const auto yhat = predict(bundle, data.features());
    const std::vector<MetricRow> rows{
        score(task, bundle.kind, data.target(task), yhat)};
    const auto csv = metrics_csv(rows);
    std::cout << csv;
    if (a.out) {
        write_text(*a.out, csv);
    }
    return 0;
}

int run_bench(const BenchArgs &a) {
    auto cfg = config_or_default(a.config);
    if (a.seed) {
        cfg.data.seed = *a.seed;
    }
    if (a.out) {
        cfg.out = *a.out;
    }
    const auto report = run_benchmark(cfg, load_data(cfg.data));
    std::cout << metrics_text(report);
    std::cout << "report written to " << cfg.out << '\n';
    if (report.ordering_failed()) {
        std::cerr << "hydraq: warning: model ordering inverted by more than "
                  << format_double(kOrderingTolerance) << " R2\n";
    }
    return 0;
}

int run_gradcheck(const GradcheckArgs &a) {
    const auto s = gradient_check(a.circuits, a.draws, a.seed);
    char line[160];
    std::snprintf(line, sizeof line,
                  "circuits %zu draws %zu gradients %zu max_abs_deviation %.3e\n",
                  s.circuits, s.draws, s.gradients, s.max_deviation);
    std::cout << line;
    if (a.out) {
        write_text(*a.out, line);
    }
    if (!(s.max_deviation < 1e-6)) {
        report_error("gradcheck", "deviation exceeds 1e-6");
        return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"hydraq: hydration regression with simulated quantum models"};
    app.require_subcommand(1);

    SynthArgs synth;
    auto *s = app.add_subcommand("synth", "generate a synthetic dataset CSV");
    s->add_option("--config", synth.config, "config file ([data] section)");
    s->add_option("--n", synth.n, "rows");
    s->add_option("--seed", synth.seed, "generator seed");
    s->add_option("--noise", synth.noise, "noise level");
    s->add_option("--out", synth.out, "output CSV")->capture_default_str();

    TrainArgs train;
    auto *t = app.add_subcommand("train", "train one model on one task");
    t->add_option("--config", train.config, "model config");
    t->add_option("--data", train.data, "dataset CSV (default: config [data])");
    t->add_option("--task", train.task, "usg | conductivity | volume")->required();
    t->add_option("--model", train.model, "boosted | qsm | su_symmetric")
        ->capture_default_str();
    t->add_option("--seed", train.seed, "training seed");
    t->add_option("--out", train.out, "bundle path")->capture_default_str();

    EvalArgs eval;
    auto *e = app.add_subcommand("eval", "score a bundle on a dataset");
    e->add_option("--bundle", eval.bundle, "bundle path")->required();
    e->add_option("--data", eval.data, "dataset CSV")->required();
    e->add_option("--task", eval.task, "target the bundle must predict")
        ->required();
    e->add_flag("--holdout", eval.holdout, "score only the bundle's test split");
    e->add_option("--out", eval.out, "also write the metrics CSV here");

    BenchArgs bench;
    auto *b = app.add_subcommand("bench", "run the full model comparison");
    b->add_option("--config", bench.config, "bench config");
    b->add_option("--seed", bench.seed, "data seed");
    b->add_option("--out", bench.out, "report directory");

    GradcheckArgs grad;
    auto *g = app.add_subcommand("gradcheck",
                                 "parameter-shift vs finite differences");
    g->add_option("--circuits", grad.circuits, "random circuits")
        ->capture_default_str();
    g->add_option("--draws", grad.draws, "parameter draws per circuit")
        ->capture_default_str();
    g->add_option("--seed", grad.seed, "seed")->capture_default_str();
    g->add_option("--out", grad.out, "also write the summary here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &err) {
        return app.exit(err);
    } catch (const CLI::CallForAllHelp &err) {
        return app.exit(err);
    } catch (const CLI::ParseError &err) {
        report_error("usage", err.what());
        return kExitUsage;
    }

    try {
        if (s->parsed()) {
            return run_synth(synth);
        }
        if (t->parsed()) {
            return run_train(train);
        }
        if (e->parsed()) {
            return run_eval(eval);
        }
        if (b->parsed()) {
            return run_bench(bench);
        }
        return run_gradcheck(grad);
    } catch (const Error &err) {
        report_error(error_class_name(err.error_class()), err.what());
        return exit_code(err.error_class());
    } catch (const std::exception &err) {
        report_error("internal", err.what());
        return 1;
    }
}
