// Copyright 2026 The qiprune Authors
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

// qiprune command-line tool.
//
// Exit codes: 0 ok, 1 check failure, 2 usage or config error.

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qiprune/qiprune.hpp"

namespace fs = std::filesystem;
using namespace qiprune;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Flags shared by prune and sweep. Config-file values sit under explicitly passed flags.
struct ConfigFlags {
    std::string config_path;
    std::string task = "bas";
    RunConfig flags;
    std::string epsilon_rule = "half_delta";
    std::string mode = "pairwise_medoid";
    std::size_t max_replace = 0;
    std::vector<std::pair<CLI::Option *, std::function<void(RunConfig &)>>> bound;

    template <class T> CLI::Option *add(CLI::App &app, const std::string &name, T &dst, T RunConfig::*field,
                                        const std::string &help) {
        auto *opt = app.add_option(name, dst, help);
        bound.emplace_back(opt, [&dst, field](RunConfig &c) { c.*field = dst; });
        return opt;
    }

    void attach(CLI::App &app, bool grid_point) {
        app.add_option("--config", config_path, "JSON file with RunConfig fields")->check(CLI::ExistingFile);
        bound.emplace_back(app.add_option("--task", task, "mnist49 | fashion_sb | bas | tfim"),
                           [this](RunConfig &c) { c.task = task_from_string(task); });
        if (grid_point) {
            add(app, "--delta", flags.delta, &RunConfig::delta, "tolerance delta");
            add(app, "--sigma", flags.sigma, &RunConfig::sigma, "pool spread sigma");
        }
        add(app, "--seed", flags.seed, &RunConfig::seed, "run seed");
        bound.emplace_back(app.add_option("--mode", mode, "pairwise_medoid | reference_only"),
                           [this](RunConfig &c) { c.mode = prune_mode_from_string(mode); });
        bound.emplace_back(app.add_option("--epsilon-rule", epsilon_rule, "half_delta | arcsin"),
                           [this](RunConfig &c) { c.epsilon_rule = epsilon_rule_from_string(epsilon_rule); });
        bound.emplace_back(app.add_option("--max-replace-per-group", max_replace, "cap on replacements per group"),
                           [this](RunConfig &c) { c.max_replace_per_group = max_replace; });
        add(app, "--data-dir", flags.data_dir, &RunConfig::data_dir, "directory holding mnist/ and fashion/");
        add(app, "--images", flags.images_path, &RunConfig::images_path, "IDX image file");
        add(app, "--labels", flags.labels_path, &RunConfig::labels_path, "IDX label file");
        add(app, "--out", flags.output_dir, &RunConfig::output_dir, "output directory");
        add(app, "--qubits", flags.n_qubits, &RunConfig::n_qubits, "number of qubits (0: task default)");
        add(app, "--depth", flags.depth, &RunConfig::depth, "ansatz layers");
        add(app, "--gamma", flags.gamma, &RunConfig::gamma, "noise rate gamma");
        add(app, "--alpha", flags.alpha, &RunConfig::alpha, "noise coupling alpha");
        add(app, "--beta", flags.beta, &RunConfig::beta, "deformation scale beta");
        add(app, "--ensemble-size", flags.M, &RunConfig::M, "task ensemble size M");
        add(app, "--epochs", flags.epochs, &RunConfig::epochs, "training epochs");
        add(app, "--lr", flags.lr, &RunConfig::lr, "training learning rate");
        add(app, "--train-samples", flags.train_samples, &RunConfig::train_samples, "IDX samples to load (0: all)");
        add(app, "--vqe-iters", flags.vqe_iters, &RunConfig::vqe_iters, "VQE iterations");
        add(app, "--vqe-lr", flags.vqe_lr, &RunConfig::vqe_lr, "VQE step size");
    }

    [[nodiscard]] RunConfig resolve() const {
        RunConfig cfg;
        if (!config_path.empty()) {
            cfg = config_from_json(read_json_file(config_path));
        }
        for (const auto &[opt, apply] : bound) {
            if (opt->count() > 0) {
                apply(cfg);
            }
        }
        cfg.validate();
        return cfg;
    }
};

std::string point_stem(const RunConfig &cfg) {
    return std::string(to_string(cfg.task)) + "_d" + format_double(cfg.delta) + "_s" + format_double(cfg.sigma) +
           "_seed" + std::to_string(cfg.seed);
}

void print_outcome(const RunConfig &cfg, const RunOutcome &o) {
    std::cout << to_string(cfg.task) << " delta=" << format_double(cfg.delta) << " sigma=" << format_double(cfg.sigma)
              << " replace=" << format_double(o.report.replace_pct) << "% L=" << o.report.L
              << " rhs_raw=" << format_double(o.report.rhs_raw) << " dq_max=" << format_double(o.report.dq_max_replaced)
              << " violations=" << o.report.violations << " certificate=" << (o.certificate.passed ? "ok" : "FAILED")
              << "\n";
}

int cmd_prune(const ConfigFlags &f) {
    const RunConfig cfg = f.resolve();
    const Baseline base = prepare_baseline(cfg);
    const RunOutcome o = run_point(cfg, base);
    fs::create_directories(cfg.output_dir);
    const std::string stem = (fs::path(cfg.output_dir) / point_stem(cfg)).string();
    write_json_file(stem + ".json", run_to_json(cfg, o));
    write_text_file(stem + ".csv", csv_header() + csv_row(cfg, o));
    print_outcome(cfg, o);
    return (o.report.violations == 0 && o.certificate.passed) ? kExitOk : kExitCheckFailed;
}

int cmd_sweep(const ConfigFlags &f, const std::vector<double> &deltas, const std::vector<double> &sigmas) {
    RunConfig cfg = f.resolve();
    const Baseline base = prepare_baseline(cfg);
    fs::create_directories(cfg.output_dir);
    std::string csv = csv_header();
    bool ok = true;
    for (double d : deltas) {
        for (double s : sigmas) {
            cfg.delta = d;
            cfg.sigma = s;
            const RunOutcome o = run_point(cfg, base);
            write_json_file((fs::path(cfg.output_dir) / (point_stem(cfg) + ".json")).string(), run_to_json(cfg, o));
            csv += csv_row(cfg, o);
            print_outcome(cfg, o);
            ok = ok && o.report.violations == 0 && o.certificate.passed;
        }
    }
    const std::string name = "sweep_" + std::string(to_string(cfg.task)) + "_seed" + std::to_string(cfg.seed) + ".csv";
    write_text_file((fs::path(cfg.output_dir) / name).string(), csv);
    return ok ? kExitOk : kExitCheckFailed;
}

int cmd_verify(std::uint64_t seed, const std::string &table_path, const std::string &out_dir) {
    std::vector<TableRow> rows = published_table_rows();
    if (!table_path.empty()) {
        rows = table_rows_from_json(read_json_file(table_path));
    }
    auto results = check_all(seed);
    const auto table = regress_tables(rows);
    results.insert(results.end(), table.begin(), table.end());

    std::size_t failed = 0;
    for (const auto &r : results) {
        if (!r.passed) {
            ++failed;
            std::cout << "FAIL " << r.name << " measured=" << format_double(r.measured)
                      << " bound=" << format_double(r.bound) << "\n";
        }
    }
    fs::create_directories(out_dir);
    json doc{{"seed", seed}, {"passed", failed == 0}, {"failed", failed}, {"checks", checks_to_json(results)}};
    write_json_file((fs::path(out_dir) / "verify.json").string(), doc);
    std::cout << results.size() - failed << "/" << results.size() << " checks passed\n";
    return failed == 0 ? kExitOk : kExitCheckFailed;
}

int cmd_report(const std::vector<std::string> &inputs, const std::string &out_dir) {
    std::vector<CsvTable> tables;
    for (const auto &path : inputs) {
        std::ifstream in(path);
        if (!in) {
            throw std::runtime_error("cannot open '" + path + "'");
        }
        tables.push_back(parse_csv(in, path));
    }
    fs::create_directories(out_dir);
    for (const auto &p : make_panels(tables)) {
        const auto path = (fs::path(out_dir) / ("panel_" + p.metric + ".csv")).string();
        write_text_file(path, p.csv);
        std::cout << path << "\n";
    }
    return kExitOk;
}

int cmd_dataset_generate(const ConfigFlags &f, const std::string &path) {
    RunConfig cfg = f.resolve();
    EncodedDataset d;
    if (cfg.task == Task::tfim) {
        throw UsageError("dataset: tfim has no dataset");
    }
    if (cfg.task == Task::bas) {
        d = generate_bas(4);
    } else {
        const auto paths = resolve_idx_paths(cfg);
        d = load_idx(paths.images, paths.labels, idx_classes(cfg.task), cfg.qubits(), cfg.train_samples,
                     std::string(to_string(cfg.task)));
        split_dataset(d, cfg.validation_fraction, derive_seed(cfg.seed, seed_stream::split));
    }
    write_json_file(path, dataset_to_json(d));
    std::cout << path << ": " << d.samples.size() << " samples\n";
    return kExitOk;
}

int cmd_dataset_inspect(const std::string &path) {
    const EncodedDataset d = dataset_from_json(read_json_file(path));
    std::size_t pos = 0;
    for (const auto &s : d.samples) {
        pos += s.label == 1 ? 1 : 0;
    }
    std::cout << "name=" << d.name << " n_qubits=" << d.n_qubits << " samples=" << d.samples.size()
              << " positive=" << pos << " negative=" << d.samples.size() - pos << " train=" << d.train.size()
              << " validation=" << d.validation.size() << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"qiprune: task-conditioned structured pruning of parameterized quantum circuits"};
    app.require_subcommand(1);

    ConfigFlags prune_flags, sweep_flags, gen_flags;
    auto *prune_cmd = app.add_subcommand("prune", "prune one (delta, sigma) grid point");
    prune_flags.attach(*prune_cmd, true);

    std::vector<double> deltas{0.01, 0.02}, sigmas{0.001, 0.003, 0.006, 0.01};
    auto *sweep_cmd = app.add_subcommand("sweep", "prune every point of a delta x sigma grid");
    sweep_flags.attach(*sweep_cmd, false);
    sweep_cmd->add_option("--deltas", deltas, "delta grid")->delimiter(',');
    sweep_cmd->add_option("--sigmas", sigmas, "sigma grid")->delimiter(',');

    std::uint64_t verify_seed = 0;
    std::string table_path, verify_out = "out";
    auto *verify_cmd = app.add_subcommand("verify", "run the check suite and the table regression");
    verify_cmd->add_option("--seed", verify_seed, "check seed");
    verify_cmd->add_option("--table", table_path, "table fixture JSON (default: built-in)")->check(CLI::ExistingFile);
    verify_cmd->add_option("--out", verify_out, "output directory");

    std::vector<std::string> report_inputs;
    std::string report_out = "out";
    auto *report_cmd = app.add_subcommand("report", "turn sweep CSVs into per-panel plot data");
    report_cmd->add_option("csv", report_inputs, "sweep CSV files")->required()->check(CLI::ExistingFile);
    report_cmd->add_option("--out", report_out, "output directory");

    auto *dataset_cmd = app.add_subcommand("dataset", "encoded dataset cache");
    dataset_cmd->require_subcommand(1);
    std::string gen_path, inspect_path;
    auto *gen_cmd = dataset_cmd->add_subcommand("generate", "encode a dataset to JSON");
    gen_flags.attach(*gen_cmd, false);
    gen_cmd->add_option("file", gen_path, "output JSON")->required();
    auto *inspect_cmd = dataset_cmd->add_subcommand("inspect", "summarise a dataset JSON");
    inspect_cmd->add_option("file", inspect_path, "dataset JSON")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*prune_cmd) {
            return cmd_prune(prune_flags);
        }
        if (*sweep_cmd) {
            return cmd_sweep(sweep_flags, deltas, sigmas);
        }
        if (*verify_cmd) {
            return cmd_verify(verify_seed, table_path, verify_out);
        }
        if (*report_cmd) {
            return cmd_report(report_inputs, report_out);
        }
        if (*gen_cmd) {
            return cmd_dataset_generate(gen_flags, gen_path);
        }
        return cmd_dataset_inspect(inspect_path);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
