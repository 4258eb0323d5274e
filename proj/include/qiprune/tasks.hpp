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
 * @file tasks.hpp
 * Benchmark tasks: amplitude-encoded binary classification (IDX images and
 * Bars & Stripes), the transverse-field Ising VQE, and task-ensemble sampling.
 *
 * Classifier readout is ⟨Z⟩ on qubit 0; a sample is predicted +1 when the
 * expectation is ≥ 0.
 */

#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qiprune/circuit.hpp"
#include "qiprune/gradients.hpp"
#include "qiprune/linalg.hpp"

namespace qiprune {

struct Sample {
    StateVector state;
    int label = 1;
};

struct EncodedDataset {
    std::string name;
    std::size_t n_qubits = 0;
    std::vector<Sample> samples;
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
};

/// Pads with zeros or truncates to 2^n entries, then normalises to unit ℓ₂ norm.
inline StateVector encode_amplitude(std::span<const double> raw, std::size_t n_qubits) {
    if (n_qubits == 0 || n_qubits > 20) {
        throw std::invalid_argument("encode_amplitude: qubit count must be in [1, 20]");
    }
    const std::size_t dim = std::size_t{1} << n_qubits;
    std::vector<cplx> amps(dim);
    double norm2 = 0.0;
    for (std::size_t i = 0; i < std::min(dim, raw.size()); ++i) {
        if (!std::isfinite(raw[i])) {
            throw std::invalid_argument("encode_amplitude: non-finite input");
        }
        amps[i] = raw[i];
        norm2 += raw[i] * raw[i];
    }
    if (norm2 == 0.0) {
        throw std::invalid_argument("encode_amplitude: all-zero input cannot be normalised");
    }
    return StateVector::normalized(n_qubits, std::move(amps));
}

/**
 * 28×28 → 16×16: edge-replicate pad to 32×32 (2 px per side), then average
 * each 2×2 block.
 */
inline std::vector<double> downsample_28_to_16(std::span<const double> img) {
    constexpr std::size_t in = 28, padded = 32, out = 16, pad = 2;
    if (img.size() != in * in) {
        throw std::invalid_argument("downsample_28_to_16: expected 784 pixels");
    }
    auto at = [&](std::size_t r, std::size_t c) {
        const auto clampi = [](std::ptrdiff_t v) { return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(v, 0, in - 1)); };
        return img[clampi(static_cast<std::ptrdiff_t>(r) - static_cast<std::ptrdiff_t>(pad)) * in +
                   clampi(static_cast<std::ptrdiff_t>(c) - static_cast<std::ptrdiff_t>(pad))];
    };
    static_assert(padded == 2 * out);
    std::vector<double> res(out * out);
    for (std::size_t r = 0; r < out; ++r) {
        for (std::size_t c = 0; c < out; ++c) {
            res[r * out + c] = 0.25 * (at(2 * r, 2 * c) + at(2 * r, 2 * c + 1) + at(2 * r + 1, 2 * c) +
                                       at(2 * r + 1, 2 * c + 1));
        }
    }
    return res;
}

/// Image → state: 28×28 inputs on 8 qubits are downsampled, anything else is flattened.
inline StateVector encode_image(std::span<const double> pixels, std::size_t rows, std::size_t cols,
                                std::size_t n_qubits) {
    if (pixels.size() != rows * cols) {
        throw std::invalid_argument("encode_image: pixel count does not match rows*cols");
    }
    if (rows == 28 && cols == 28 && n_qubits == 8) {
        const auto small = downsample_28_to_16(pixels);
        return encode_amplitude(small, n_qubits);
    }
    return encode_amplitude(pixels, n_qubits);
}

/// Deterministic seeded train/validation split; validation gets round(fraction·N), at least 1.
inline void split_dataset(EncodedDataset &data, double validation_fraction, std::uint64_t seed) {
    if (data.samples.empty()) {
        throw std::invalid_argument("split_dataset: empty dataset");
    }
    std::vector<std::size_t> idx(data.samples.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(idx.begin(), idx.end(), rng);
    const auto n_val = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::llround(validation_fraction * static_cast<double>(idx.size()))), 1, idx.size());
    data.validation.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_val));
    data.train.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_val), idx.end());
    std::sort(data.validation.begin(), data.validation.end());
    std::sort(data.train.begin(), data.train.end());
    if (data.train.empty()) {
        data.train = data.validation;
    }
}

/// Pixel (r, c) of a bars pattern is on iff column c is selected; stripes select rows.
inline std::vector<double> bas_pattern(std::size_t side, std::uint32_t mask, bool bars) {
    std::vector<double> img(side * side, 0.0);
    for (std::size_t r = 0; r < side; ++r) {
        for (std::size_t c = 0; c < side; ++c) {
            const std::size_t sel = bars ? c : r;
            img[r * side + c] = ((mask >> sel) & 1U) ? 1.0 : 0.0;
        }
    }
    return img;
}

/**
 * All bars (+1) and stripes (−1) on a side×side grid, without the two
 * constant images. Training and validation both index the full set.
 */
inline EncodedDataset generate_bas(std::size_t side) {
    const std::size_t pixels = side * side;
    if (side < 2 || side > 5 || (pixels & (pixels - 1)) != 0) {
        throw std::invalid_argument("generate_bas: side*side must be a power of two (side in {2, 4})");
    }
    const auto n_qubits = static_cast<std::size_t>(std::countr_zero(pixels));
    EncodedDataset d;
    d.name = "bas";
    d.n_qubits = n_qubits;
    const std::uint32_t full = (1U << side) - 1;
    for (int bars = 1; bars >= 0; --bars) {
        for (std::uint32_t mask = 1; mask < full; ++mask) {
            d.samples.push_back({encode_amplitude(bas_pattern(side, mask, bars != 0), n_qubits), bars ? 1 : -1});
        }
    }
    d.train.resize(d.samples.size());
    std::iota(d.train.begin(), d.train.end(), 0);
    d.validation = d.train;
    return d;
}

// IDX files -----------------------------------------------------------------

struct IdxImages {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::vector<std::uint8_t>> images;
};

namespace detail {

inline std::uint32_t read_be32(std::istream &in, const std::string &path) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char *>(b), 4)) {
        throw std::runtime_error("IDX: truncated header in " + path);
    }
    return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) | std::uint32_t{b[3]};
}

inline std::ifstream open_binary(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("IDX: cannot open " + path);
    }
    return in;
}

} // namespace detail

inline constexpr std::uint32_t kIdxImageMagic = 2051;
inline constexpr std::uint32_t kIdxLabelMagic = 2049;

inline IdxImages read_idx_images(const std::string &path) {
    auto in = detail::open_binary(path);
    if (detail::read_be32(in, path) != kIdxImageMagic) {
        throw std::runtime_error("IDX: bad magic in image file " + path);
    }
    const std::uint32_t count = detail::read_be32(in, path);
    IdxImages out;
    out.rows = detail::read_be32(in, path);
    out.cols = detail::read_be32(in, path);
    const std::size_t px = out.rows * out.cols;
    out.images.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        std::vector<std::uint8_t> img(px);
        if (!in.read(reinterpret_cast<char *>(img.data()), static_cast<std::streamsize>(px))) {
            throw std::runtime_error("IDX: truncated image data in " + path);
        }
        out.images.push_back(std::move(img));
    }
    return out;
}

inline std::vector<std::uint8_t> read_idx_labels(const std::string &path) {
    auto in = detail::open_binary(path);
    if (detail::read_be32(in, path) != kIdxLabelMagic) {
        throw std::runtime_error("IDX: bad magic in label file " + path);
    }
    const std::uint32_t count = detail::read_be32(in, path);
    std::vector<std::uint8_t> labels(count);
    if (!in.read(reinterpret_cast<char *>(labels.data()), static_cast<std::streamsize>(count))) {
        throw std::runtime_error("IDX: truncated label data in " + path);
    }
    return labels;
}

/**
 * Keeps the two classes in `keep` (first → +1, second → −1), in file order,
 * stopping after `max_samples` matches when nonzero.
 */
inline EncodedDataset load_idx(const std::string &images_path, const std::string &labels_path,
                               std::pair<int, int> keep, std::size_t n_qubits, std::size_t max_samples = 0,
                               std::string name = "idx") {
    const auto imgs = read_idx_images(images_path);
    const auto labels = read_idx_labels(labels_path);
    if (labels.size() != imgs.images.size()) {
        throw std::runtime_error("IDX: image and label counts differ");
    }
    EncodedDataset d;
    d.name = std::move(name);
    d.n_qubits = n_qubits;
    bool seen_first = false, seen_second = false;
    std::vector<double> px(imgs.rows * imgs.cols);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const int lab = labels[i];
        if (lab != keep.first && lab != keep.second) {
            continue;
        }
        if (max_samples != 0 && d.samples.size() >= max_samples) {
            break;
        }
        for (std::size_t k = 0; k < px.size(); ++k) {
            px[k] = static_cast<double>(imgs.images[i][k]) / 255.0;
        }
        d.samples.push_back({encode_image(px, imgs.rows, imgs.cols, n_qubits), lab == keep.first ? 1 : -1});
        seen_first = seen_first || lab == keep.first;
        seen_second = seen_second || lab == keep.second;
    }
    if (!seen_first || !seen_second) {
        throw std::runtime_error("IDX: class absent (" + std::to_string(keep.first) + " or " +
                                 std::to_string(keep.second) + " not found)");
    }
    d.train.resize(d.samples.size());
    std::iota(d.train.begin(), d.train.end(), 0);
    d.validation = d.train;
    return d;
}

// Classification -------------------------------------------------------------

/// ⟨Z_qubit⟩ from amplitudes directly.
inline double z_expectation(const StateVector &s, std::size_t qubit) {
    const std::size_t mask = std::size_t{1} << (s.n_qubits() - 1 - qubit);
    double e = 0.0;
    for (std::size_t i = 0; i < s.dim(); ++i) {
        e += ((i & mask) ? -1.0 : 1.0) * std::norm(s[i]);
    }
    return e;
}

inline int predict_label(double z0) { return z0 >= 0.0 ? 1 : -1; }

/// Fraction of `indices` (all samples when empty) classified correctly.
inline double evaluate_classifier(const Circuit &c, const EncodedDataset &data, std::span<const std::size_t> indices = {}) {
    std::vector<std::size_t> all;
    if (indices.empty()) {
        all.resize(data.samples.size());
        std::iota(all.begin(), all.end(), 0);
        indices = all;
    }
    if (indices.empty()) {
        throw std::invalid_argument("evaluate_classifier: empty data");
    }
    const auto ops = compile(c);
    std::size_t correct = 0;
    for (auto i : indices) {
        const auto &s = data.samples.at(i);
        require_dims(c, s.state);
        if (predict_label(z_expectation(run_ops(ops, s.state), 0)) == s.label) {
            ++correct;
        }
    }
    return static_cast<double>(correct) / static_cast<double>(indices.size());
}

struct TrainConfig {
    std::size_t epochs = 10;
    double lr = 0.05;
    std::uint64_t seed = 0;
    std::size_t batch_size = 32;
    GradientMethod method = GradientMethod::adjoint;
};

struct TrainResult {
    Centers centers;
    std::vector<double> loss_history;
};

namespace detail {

/// Adam state over a flat parameter vector.
struct Adam {
    double lr;
    double b1 = 0.9, b2 = 0.999, eps = 1e-8;
    std::vector<double> m, v;
    std::size_t t = 0;

    Adam(double lr_, std::size_t n) : lr(lr_), m(n, 0.0), v(n, 0.0) {}

    void step(std::span<double> params, std::span<const double> grad) {
        ++t;
        const double c1 = 1.0 - std::pow(b1, static_cast<double>(t));
        const double c2 = 1.0 - std::pow(b2, static_cast<double>(t));
        for (std::size_t i = 0; i < params.size(); ++i) {
            m[i] = b1 * m[i] + (1 - b1) * grad[i];
            v[i] = b2 * v[i] + (1 - b2) * grad[i] * grad[i];
            params[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + eps);
        }
    }
};

inline std::span<double> flat(Centers &c) { return {c.front().data(), c.size() * 3}; }

} // namespace detail

/**
 * Minimises the mean hinge loss max(0, 1 − y⟨Z₀⟩) over the training split with
 * Adam on the block centers. The circuit during training is the σ = 0 ansatz;
 * candidate pools are sampled around the returned centers afterwards.
 */
inline TrainResult train_classifier(const Centers &init, std::size_t depth, const EncodedDataset &data,
                                    const TrainConfig &cfg) {
    if (data.samples.empty() || data.train.empty()) {
        throw std::invalid_argument("train_classifier: empty training data");
    }
    const std::size_t n = data.n_qubits;
    TrainResult res{init, {}};
    if (cfg.epochs == 0) {
        return res;
    }
    const ComplexMatrix z0 = gates::embed(gates::Z(), 0, n);
    detail::Adam opt(cfg.lr, res.centers.size() * 3);
    std::mt19937_64 rng(cfg.seed);
    std::vector<std::size_t> order = data.train;
    const std::size_t batch = std::max<std::size_t>(1, cfg.batch_size);
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size(); start += batch) {
            const std::size_t stop = std::min(order.size(), start + batch);
            const Circuit c = build_ansatz(n, depth, res.centers, 0.0, 0);
            std::vector<Angles> grad(res.centers.size(), Angles{});
            for (std::size_t k = start; k < stop; ++k) {
                const Sample &s = data.samples[order[k]];
                const auto g = expectation_gradient(c, s.state, z0, cfg.method);
                const double margin = s.label * g.value;
                if (1.0 - margin > 0.0) {
                    epoch_loss += 1.0 - margin;
                    const auto bg = block_gradients(c, g.per_gate);
                    for (std::size_t b = 0; b < bg.size(); ++b) {
                        for (std::size_t j = 0; j < 3; ++j) {
                            grad[b][j] -= s.label * bg[b][j] / static_cast<double>(stop - start);
                        }
                    }
                }
            }
            opt.step(detail::flat(res.centers), detail::flat(grad));
        }
        const double loss = epoch_loss / static_cast<double>(order.size());
        if (!std::isfinite(loss)) {
            throw std::runtime_error("train_classifier: loss diverged (NaN)");
        }
        res.loss_history.push_back(loss);
    }
    return res;
}

// TFIM VQE --------------------------------------------------------------------

struct TfimSpec {
    std::size_t n_qubits = 0;
    double J = 1.0;
    double g = 1.0;
    ComplexMatrix hamiltonian;
};

/// H = −J Σ Z_i Z_{i+1} (open chain) − g Σ X_i.
inline TfimSpec build_tfim(std::size_t n, double J, double g) {
    if (n < 2 || n > 12) {
        throw std::invalid_argument("build_tfim: n must be in [2, 12]");
    }
    TfimSpec spec{n, J, g, ComplexMatrix(std::size_t{1} << n)};
    for (std::size_t i = 0; i + 1 < n; ++i) {
        spec.hamiltonian -= (gates::embed(gates::Z(), i, n) * gates::embed(gates::Z(), i + 1, n)) * J;
    }
    for (std::size_t i = 0; i < n; ++i) {
        spec.hamiltonian -= gates::embed(gates::X(), i, n) * g;
    }
    return spec;
}

struct VqeConfig {
    std::size_t iters = 200;
    double lr = 0.01;
    std::size_t snapshots = 50;
    GradientMethod method = GradientMethod::adjoint;
};

struct VqeResult {
    Centers centers;
    /// ⟨H⟩ before each update, followed by the final value.
    std::vector<double> energies;
    std::vector<StateVector> trajectory;
    std::vector<std::size_t> snapshot_iters;
};

/// Evenly spaced picks from [0, last], `count` of them (duplicates when last + 1 < count).
inline std::vector<std::size_t> evenly_spaced(std::size_t last, std::size_t count) {
    std::vector<std::size_t> out;
    if (count == 0) {
        return out;
    }
    if (count == 1) {
        return {last};
    }
    for (std::size_t k = 0; k < count; ++k) {
        out.push_back(static_cast<std::size_t>(
            std::llround(static_cast<double>(k) * static_cast<double>(last) / static_cast<double>(count - 1))));
    }
    return out;
}

/// Plain gradient descent on ⟨0…0|C† H C|0…0⟩ over block centers.
inline VqeResult run_vqe(const TfimSpec &spec, const Centers &init, std::size_t depth, const VqeConfig &cfg) {
    const std::size_t n = spec.n_qubits;
    if (init.size() != n * depth) {
        throw std::invalid_argument("run_vqe: centers do not match circuit shape");
    }
    const StateVector zero = StateVector::basis(n, 0);
    VqeResult res{init, {}, {}, {}};
    const auto picks = evenly_spaced(cfg.iters, cfg.snapshots);
    std::size_t next_pick = 0;
    for (std::size_t it = 0;; ++it) {
        const Circuit c = build_ansatz(n, depth, res.centers, 0.0, 0);
        const auto g = expectation_gradient(c, zero, spec.hamiltonian, cfg.method);
        if (!std::isfinite(g.value)) {
            throw std::runtime_error("run_vqe: energy diverged (NaN)");
        }
        res.energies.push_back(g.value);
        if (next_pick < picks.size() && picks[next_pick] == it) {
            const StateVector out = run(c, zero);
            while (next_pick < picks.size() && picks[next_pick] == it) {
                res.trajectory.push_back(out);
                res.snapshot_iters.push_back(it);
                ++next_pick;
            }
        }
        if (it == cfg.iters) {
            break;
        }
        const auto bg = block_gradients(c, g.per_gate);
        for (std::size_t b = 0; b < bg.size(); ++b) {
            for (std::size_t j = 0; j < 3; ++j) {
                res.centers[b][j] -= cfg.lr * bg[b][j];
            }
        }
    }
    return res;
}

// Task ensembles ---------------------------------------------------------------

enum class EnsembleSource { validation_sample, vqe_trajectory };

inline std::string_view to_string(EnsembleSource s) {
    return s == EnsembleSource::validation_sample ? "validation_sample" : "vqe_trajectory";
}

inline constexpr std::size_t kDefaultEnsembleSize = 50;

struct TaskEnsemble {
    std::vector<StateVector> states;
    std::size_t M = 0;
    EnsembleSource source = EnsembleSource::validation_sample;
    bool with_replacement = false;
};

/**
 * validation_sample: M distinct states drawn uniformly. vqe_trajectory: M
 * evenly spaced snapshots in trajectory order. A source smaller than M is
 * sampled with replacement and flagged.
 */
inline TaskEnsemble build_ensemble(std::span<const StateVector> pool, EnsembleSource source, std::size_t M,
                                   std::uint64_t seed) {
    if (pool.empty()) {
        throw std::invalid_argument("build_ensemble: empty source");
    }
    if (M == 0) {
        throw std::invalid_argument("build_ensemble: M must be >= 1");
    }
    TaskEnsemble e;
    e.M = M;
    e.source = source;
    std::mt19937_64 rng(seed);
    if (pool.size() < M) {
        e.with_replacement = true;
        std::uniform_int_distribution<std::size_t> ud(0, pool.size() - 1);
        for (std::size_t k = 0; k < M; ++k) {
            e.states.push_back(pool[ud(rng)]);
        }
        return e;
    }
    if (source == EnsembleSource::vqe_trajectory) {
        for (auto i : evenly_spaced(pool.size() - 1, M)) {
            e.states.push_back(pool[i]);
        }
        return e;
    }
    std::vector<std::size_t> idx(pool.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    for (std::size_t k = 0; k < M; ++k) {
        e.states.push_back(pool[idx[k]]);
    }
    return e;
}

} // namespace qiprune
