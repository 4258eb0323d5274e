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

/**
 * @file experiment.hpp
 * End-to-end benchmark pipeline: baseline training (once per task and seed),
 * then for each (δ, σ) grid point pool sampling, pruning, certification and
 * task metrics.
 */

#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qiprune/circuit.hpp"
#include "qiprune/pruner.hpp"
#include "qiprune/qalgebra.hpp"
#include "qiprune/qmetric.hpp"
#include "qiprune/tasks.hpp"

namespace qiprune {

enum class Task { mnist49, fashion_sb, bas, tfim };

inline std::string_view to_string(Task t) {
    switch (t) {
    case Task::mnist49:
        return "mnist49";
    case Task::fashion_sb:
        return "fashion_sb";
    case Task::bas:
        return "bas";
    case Task::tfim:
        return "tfim";
    }
    return "?";
}

inline Task task_from_string(std::string_view s) {
    for (Task t : {Task::mnist49, Task::fashion_sb, Task::bas, Task::tfim}) {
        if (s == to_string(t)) {
            return t;
        }
    }
    throw std::invalid_argument("unknown task '" + std::string(s) + "'");
}

inline std::size_t default_qubits(Task t) { return (t == Task::mnist49 || t == Task::fashion_sb) ? 8 : 4; }

inline bool is_classification(Task t) { return t != Task::tfim; }

struct RunConfig {
    Task task = Task::bas;
    /// 0 selects the task default (8 for IDX tasks, 4 otherwise).
    std::size_t n_qubits = 0;
    std::size_t depth = 12;
    double delta = 0.01;
    double sigma = 0.001;
    double gamma = 0.05;
    double alpha = 0.6;
    double beta = 1.0;
    std::size_t M = kDefaultEnsembleSize;
    std::uint64_t seed = 0;
    EpsilonRule epsilon_rule = EpsilonRule::half_delta_rule;
    PruneMode mode = PruneMode::pairwise_medoid;
    std::optional<std::size_t> max_replace_per_group;
    std::string data_dir;
    std::string output_dir = "out";
    /// Explicit IDX paths; override the data_dir layout when set.
    std::string images_path;
    std::string labels_path;
    std::size_t epochs = 10;
    double lr = 0.05;
    std::size_t train_samples = 600;
    double validation_fraction = 0.2;
    std::size_t vqe_iters = 200;
    double vqe_lr = 0.01;
    double tfim_J = 1.0;
    double tfim_g = 1.0;

    [[nodiscard]] std::size_t qubits() const { return n_qubits == 0 ? default_qubits(task) : n_qubits; }
    [[nodiscard]] double lambda() const { return 1.0 - gamma * alpha; }
    [[nodiscard]] DeformationParams deformation() const { return DeformationParams::from_noise(gamma, alpha, beta); }

    void validate() const {
        if (!(delta > 0.0 && delta < 1.0)) {
            throw std::invalid_argument("config: delta must lie in (0, 1)");
        }
        if (!(sigma >= 0.0)) {
            throw std::invalid_argument("config: sigma must be >= 0");
        }
        if (depth == 0 || M == 0) {
            throw std::invalid_argument("config: depth and M must be >= 1");
        }
        if (!(lambda() >= 0.0 && lambda() <= 1.0)) {
            throw std::invalid_argument("config: gamma * alpha must lie in [0, 1]");
        }
        if (!(beta > 0.0)) {
            throw std::invalid_argument("config: beta must be positive");
        }
        if (task == Task::tfim && qubits() < 2) {
            throw std::invalid_argument("config: tfim needs at least 2 qubits");
        }
    }
};

/// splitmix64 step; derives independent seed streams from one run seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace seed_stream {
inline constexpr std::uint64_t split = 1, centers = 2, training = 3, ensemble = 4, pool = 5;
}

/// Everything that does not depend on (δ, σ): data, trained centers, ensemble, observable.
struct Baseline {
    Task task = Task::bas;
    std::size_t n_qubits = 0;
    std::size_t depth = 0;
    Centers centers;
    EncodedDataset data;
    std::optional<TfimSpec> tfim;
    std::vector<double> training_curve;
    TaskEnsemble ensemble;
    ComplexMatrix observable;
    /// Normaliser of the reported metric: ‖H‖_op for tfim, 1 otherwise.
    double metric_scale = 1.0;
};

struct IdxPaths {
    std::string images;
    std::string labels;
};

/// `<dir>/mnist/…` or `<dir>/fashion/…` with the standard training-set file names.
inline IdxPaths resolve_idx_paths(const RunConfig &cfg) {
    if (!cfg.images_path.empty() || !cfg.labels_path.empty()) {
        return {cfg.images_path, cfg.labels_path};
    }
    std::string dir = cfg.data_dir;
    if (dir.empty()) {
        if (const char *env = std::getenv("QIPRUNE_DATA_DIR")) {
            dir = env;
        }
    }
    if (dir.empty()) {
        throw std::runtime_error("no data directory: pass --data-dir or set QIPRUNE_DATA_DIR");
    }
    const std::filesystem::path base = std::filesystem::path(dir) / (cfg.task == Task::mnist49 ? "mnist" : "fashion");
    return {(base / "train-images-idx3-ubyte").string(), (base / "train-labels-idx1-ubyte").string()};
}

/// MNIST 4 vs 9; Fashion-MNIST sandal (5) vs ankle boot (9).
inline std::pair<int, int> idx_classes(Task t) { return t == Task::mnist49 ? std::pair{4, 9} : std::pair{5, 9}; }

inline Baseline prepare_baseline(const RunConfig &cfg) {
    cfg.validate();
    Baseline b;
    b.task = cfg.task;
    b.n_qubits = cfg.qubits();
    b.depth = cfg.depth;
    const auto init = random_centers(b.n_qubits, b.depth, derive_seed(cfg.seed, seed_stream::centers));

    if (cfg.task == Task::tfim) {
        b.tfim = build_tfim(b.n_qubits, cfg.tfim_J, cfg.tfim_g);
        VqeConfig vc;
        vc.iters = cfg.vqe_iters;
        vc.lr = cfg.vqe_lr;
        vc.snapshots = cfg.M;
        auto vqe = run_vqe(*b.tfim, init, b.depth, vc);
        b.centers = std::move(vqe.centers);
        b.training_curve = std::move(vqe.energies);
        b.ensemble = build_ensemble(vqe.trajectory, EnsembleSource::vqe_trajectory, cfg.M,
                                    derive_seed(cfg.seed, seed_stream::ensemble));
        b.metric_scale = operator_norm(b.tfim->hamiltonian);
        b.observable = b.tfim->hamiltonian * (1.0 / b.metric_scale);
        return b;
    }

    if (cfg.task == Task::bas) {
        if (b.n_qubits != 4) {
            throw std::invalid_argument("config: bas is defined on 4 qubits (4x4 grid)");
        }
        b.data = generate_bas(4);
    } else {
        const auto paths = resolve_idx_paths(cfg);
        b.data = load_idx(paths.images, paths.labels, idx_classes(cfg.task), b.n_qubits, cfg.train_samples,
                          std::string(to_string(cfg.task)));
        split_dataset(b.data, cfg.validation_fraction, derive_seed(cfg.seed, seed_stream::split));
    }
    TrainConfig tc;
    tc.epochs = cfg.epochs;
    tc.lr = cfg.lr;
    tc.seed = derive_seed(cfg.seed, seed_stream::training);
    auto trained = train_classifier(init, b.depth, b.data, tc);
    b.centers = std::move(trained.centers);
    b.training_curve = std::move(trained.loss_history);

    std::vector<StateVector> pool;
    for (auto i : b.data.validation) {
        pool.push_back(b.data.samples[i].state);
    }
    b.ensemble = build_ensemble(pool, EnsembleSource::validation_sample, cfg.M,
                                derive_seed(cfg.seed, seed_stream::ensemble));
    b.observable = gates::embed(gates::Z(), 0, b.n_qubits);
    return b;
}

struct RunOutcome {
    PruneReport report;
    CertificateRecord certificate;
    /// Accuracy in percent for classification, ⟨H⟩/‖H‖_op for tfim.
    double metric_base = 0.0;
    double metric_pruned = 0.0;
    double metric_drop = 0.0;
    double q = 1.0;
    double lambda = 1.0;
    Circuit circuit;
    Circuit pruned;
};

inline double task_metric(const Baseline &b, const Circuit &c) {
    if (b.tfim) {
        return expectation(run(c, StateVector::basis(b.n_qubits, 0)), b.observable);
    }
    return 100.0 * evaluate_classifier(c, b.data, b.data.validation);
}

/// One grid point. `cfg` must describe the same task/seed/shape as `b`.
inline RunOutcome run_point(const RunConfig &cfg, const Baseline &b) {
    cfg.validate();
    if (cfg.task != b.task || cfg.qubits() != b.n_qubits || cfg.depth != b.depth) {
        throw std::invalid_argument("run_point: config does not match the prepared baseline");
    }
    RunOutcome out;
    const auto params = cfg.deformation();
    out.q = params.q;
    out.lambda = params.lambda;
    out.circuit = build_ansatz(b.n_qubits, b.depth, b.centers, cfg.sigma, derive_seed(cfg.seed, seed_stream::pool));
    const QGeometry geo = build_geometry(b.n_qubits, params.q);
    const Tolerance tol = calibrate_epsilon(cfg.delta, geo, cfg.epsilon_rule);
    const auto part = partition(out.circuit);
    PruneOptions opts;
    opts.mode = cfg.mode;
    opts.max_replace_per_group = cfg.max_replace_per_group;
    opts.observable_norm = 1.0;
    auto res = prune(out.circuit, part, b.ensemble.states, geo, tol, opts);
    out.pruned = std::move(res.pruned);
    out.report = std::move(res.report);
    out.certificate = certify(out.report, out.circuit, out.pruned, b.ensemble.states, b.observable);
    out.metric_base = task_metric(b, out.circuit);
    out.metric_pruned = task_metric(b, out.pruned);
    out.metric_drop = out.metric_base - out.metric_pruned;
    return out;
}

} // namespace qiprune
