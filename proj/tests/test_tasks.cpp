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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <set>
#include <span>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "qiprune/experiment.hpp"
#include "support/idx_fixture.hpp"
#include "support/oracles.hpp"

namespace qiprune {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string &name) {
    const fs::path p = fs::path(::testing::TempDir()) / ("qiprune_tasks_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

TEST(Encoding, PadsAndNormalises) {
    const std::vector<double> raw{3.0, 4.0};
    const auto s = encode_amplitude(raw, 2);
    EXPECT_NEAR(s[0].real(), 0.6, 1e-15);
    EXPECT_NEAR(s[1].real(), 0.8, 1e-15);
    EXPECT_EQ(s[2], cplx(0.0));
    EXPECT_EQ(s[3], cplx(0.0));
    const std::vector<double> zeros(4, 0.0);
    EXPECT_THROW(encode_amplitude(zeros, 2), std::invalid_argument);
    const std::vector<double> bad{1.0, std::nan("")};
    EXPECT_THROW(encode_amplitude(bad, 1), std::invalid_argument);
}

TEST(Encoding, TruncatesLongInput) {
    const std::vector<double> raw{1.0, 0.0, 5.0};
    const auto s = encode_amplitude(raw, 1);
    EXPECT_EQ(s[0], cplx(1.0));
    EXPECT_EQ(s[1], cplx(0.0));
}

TEST(Encoding, DownsampledImageHasUnitNorm) {
    std::vector<double> img(784);
    for (std::size_t i = 0; i < img.size(); ++i) {
        img[i] = static_cast<double>((i * 37) % 255) / 255.0;
    }
    const auto small = downsample_28_to_16(img);
    EXPECT_EQ(small.size(), 256u);
    const auto s = encode_image(img, 28, 28, 8);
    EXPECT_NEAR(s.norm(), 1.0, 1e-14);
    EXPECT_THROW(downsample_28_to_16(std::vector<double>(100)), std::invalid_argument);
}

TEST(Encoding, ConstantImageStaysConstant) {
    const std::vector<double> img(784, 0.5);
    for (double v : downsample_28_to_16(img)) {
        EXPECT_EQ(v, 0.5);
    }
}

TEST(Bas, TwentyEightPatternsWithLabelRule) {
    const auto d = generate_bas(4);
    EXPECT_EQ(d.n_qubits, 4u);
    ASSERT_EQ(d.samples.size(), 28u);
    EXPECT_EQ(d.train, d.validation);
    std::size_t bars = 0;
    for (std::size_t i = 0; i < d.samples.size(); ++i) {
        const auto &s = d.samples[i];
        EXPECT_NEAR(s.state.norm(), 1.0, 1e-14);
        // a bar image has identical rows, a stripe image identical columns
        bool rows_equal = true;
        for (std::size_t r = 1; r < 4; ++r) {
            for (std::size_t c = 0; c < 4; ++c) {
                rows_equal = rows_equal && s.state[r * 4 + c] == s.state[c];
            }
        }
        EXPECT_EQ(s.label, rows_equal ? 1 : -1) << "sample " << i;
        bars += s.label == 1;
    }
    EXPECT_EQ(bars, 14u);
    EXPECT_THROW(generate_bas(3), std::invalid_argument);
}

TEST(Split, DeterministicAndDisjoint) {
    auto d = generate_bas(4);
    split_dataset(d, 0.25, 7);
    EXPECT_EQ(d.validation.size(), 7u);
    EXPECT_EQ(d.train.size(), 21u);
    auto e = generate_bas(4);
    split_dataset(e, 0.25, 7);
    EXPECT_EQ(d.validation, e.validation);
    std::vector<std::size_t> both;
    std::set_intersection(d.train.begin(), d.train.end(), d.validation.begin(), d.validation.end(),
                          std::back_inserter(both));
    EXPECT_TRUE(both.empty());
}

TEST(Idx, LoadsFixtureAndFiltersClasses) {
    const auto dir = scratch("load");
    const auto f = testing::write_idx_fixture(dir, {4, 7, 9}, 6, 3);
    const auto d = load_idx(f.images, f.labels, {4, 9}, 8);
    EXPECT_EQ(d.samples.size(), 12u);
    EXPECT_EQ(std::count_if(d.samples.begin(), d.samples.end(), [](const Sample &s) { return s.label == 1; }), 6);
    for (const auto &s : d.samples) {
        EXPECT_EQ(s.state.n_qubits(), 8u);
        EXPECT_NEAR(s.state.norm(), 1.0, 1e-12);
    }
    EXPECT_EQ(load_idx(f.images, f.labels, {4, 9}, 8, 5).samples.size(), 5u);
}

TEST(Idx, ReportsMissingClassAndBadFiles) {
    const auto dir = scratch("missing");
    const auto f = testing::write_idx_fixture(dir, {1, 4}, 3, 3);
    try {
        load_idx(f.images, f.labels, {4, 9}, 8);
        FAIL() << "expected an error";
    } catch (const std::runtime_error &e) {
        EXPECT_NE(std::string(e.what()).find("class absent"), std::string::npos);
    }
    EXPECT_THROW(load_idx((dir / "nope").string(), f.labels, {1, 4}, 8), std::runtime_error);
    // labels file passed as images: wrong magic
    EXPECT_THROW(load_idx(f.labels, f.labels, {1, 4}, 8), std::runtime_error);
}

TEST(Classifier, ZExpectationAndPrediction) {
    EXPECT_EQ(z_expectation(StateVector::basis(2, 0b00), 0), 1.0);
    EXPECT_EQ(z_expectation(StateVector::basis(2, 0b10), 0), -1.0);
    EXPECT_EQ(z_expectation(StateVector::basis(2, 0b10), 1), 1.0);
    EXPECT_EQ(predict_label(0.0), 1);
    EXPECT_EQ(predict_label(-1e-12), -1);
}

TEST(Classifier, FlippedLabelsComplementAccuracy) {
    auto d = generate_bas(4);
    const auto c = build_ansatz(4, 2, random_centers(4, 2, 3), 0.0, 0);
    const double acc = evaluate_classifier(c, d);
    for (auto &s : d.samples) {
        s.label = -s.label;
    }
    EXPECT_NEAR(evaluate_classifier(c, d), 1.0 - acc, 1e-15);
}

TEST(Training, ZeroEpochsLeavesCenters) {
    const auto d = generate_bas(4);
    const auto init = random_centers(4, 2, 3);
    TrainConfig cfg;
    cfg.epochs = 0;
    const auto r = train_classifier(init, 2, d, cfg);
    EXPECT_EQ(r.centers, init);
    EXPECT_TRUE(r.loss_history.empty());
}

TEST(Training, SeparatesToySet) {
    EncodedDataset d;
    d.n_qubits = 1;
    d.samples = {{StateVector::basis(1, 0), -1}, {StateVector::basis(1, 1), 1}};
    d.train = {0, 1};
    d.validation = {0, 1};
    const auto init = random_centers(1, 1, 4);
    EXPECT_LT(evaluate_classifier(build_ansatz(1, 1, init, 0.0, 0), d), 1.0);
    TrainConfig cfg;
    cfg.epochs = 200;
    cfg.lr = 0.05;
    const auto r = train_classifier(init, 1, d, cfg);
    EXPECT_EQ(evaluate_classifier(build_ansatz(1, 1, r.centers, 0.0, 0), d), 1.0);
    EXPECT_LT(r.loss_history.back(), r.loss_history.front());
}

TEST(Training, BasBaselineBeatsChance) {
    RunConfig cfg;
    cfg.task = Task::bas;
    cfg.seed = 0;
    const auto b = prepare_baseline(cfg);
    const auto c = build_ansatz(4, cfg.depth, b.centers, 0.0, 0);
    EXPECT_GT(evaluate_classifier(c, b.data, b.data.validation), 0.5);
}

TEST(Tfim, SmallChainSpectra) {
    const auto zz = build_tfim(2, 1.0, 0.0);
    auto ev = testing::eigvals_oracle(zz.hamiltonian);
    std::sort(ev.begin(), ev.end());
    const std::vector<double> expect{-1.0, -1.0, 1.0, 1.0};
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_NEAR(ev[i], expect[i], 1e-12);
    }
    EXPECT_LT((zz.hamiltonian - zz.hamiltonian.adjoint()).max_abs(), 1e-15);
    EXPECT_THROW(build_tfim(1, 1.0, 1.0), std::invalid_argument);
}

TEST(Tfim, StrongFieldGroundStateIsAllPlus) {
    const auto t = build_tfim(2, 1.0, 100.0);
    Eigen::SelfAdjointEigenSolver<testing::EMat> es(testing::to_eigen(t.hamiltonian));
    const auto gs = es.eigenvectors().col(0);
    cplx overlap = 0.0;
    for (Eigen::Index i = 0; i < 4; ++i) {
        overlap += 0.5 * gs(i);
    }
    EXPECT_GT(std::abs(overlap), 0.999);
}

TEST(Vqe, ZeroIterations) {
    const auto t = build_tfim(3, 1.0, 1.0);
    const auto init = random_centers(3, 2, 5);
    VqeConfig cfg;
    cfg.iters = 0;
    cfg.snapshots = 4;
    const auto r = run_vqe(t, init, 2, cfg);
    EXPECT_EQ(r.centers, init);
    EXPECT_EQ(r.energies.size(), 1u);
    EXPECT_EQ(r.trajectory.size(), 4u);
}

TEST(Vqe, EnergyDecreasesAndStaysAboveGround) {
    const auto t = build_tfim(3, 1.0, 1.0);
    VqeConfig cfg;
    cfg.iters = 60;
    cfg.lr = 0.005;
    cfg.snapshots = 7;
    const auto r = run_vqe(t, random_centers(3, 2, 5), 2, cfg);
    ASSERT_EQ(r.energies.size(), 61u);
    for (std::size_t i = 1; i < r.energies.size(); ++i) {
        EXPECT_LE(r.energies[i], r.energies[i - 1] + 1e-12) << "iteration " << i;
    }
    const auto ev = testing::eigvals_oracle(t.hamiltonian);
    const double ground = *std::min_element(ev.begin(), ev.end());
    EXPECT_GE(r.energies.back(), ground - 1e-12);
    EXPECT_EQ(r.snapshot_iters, (std::vector<std::size_t>{0, 10, 20, 30, 40, 50, 60}));
}

TEST(Ensemble, SamplingRules) {
    std::vector<StateVector> pool;
    for (std::size_t i = 0; i < 80; ++i) {
        pool.push_back(StateVector::basis(7, i));
    }
    const auto e = build_ensemble(pool, EnsembleSource::validation_sample, kDefaultEnsembleSize, 3);
    EXPECT_EQ(e.states.size(), 50u);
    EXPECT_FALSE(e.with_replacement);
    std::set<std::size_t> picked;
    for (const auto &s : e.states) {
        for (std::size_t i = 0; i < s.dim(); ++i) {
            if (s[i] != cplx(0.0)) {
                picked.insert(i);
            }
        }
    }
    EXPECT_EQ(picked.size(), 50u);

    const auto again = build_ensemble(pool, EnsembleSource::validation_sample, 50, 3);
    for (std::size_t k = 0; k < 50; ++k) {
        EXPECT_TRUE(std::ranges::equal(again.states[k].amplitudes(), e.states[k].amplitudes()));
    }
    EXPECT_EQ(build_ensemble(pool, EnsembleSource::validation_sample, 1, 3).states.size(), 1u);

    const auto small = build_ensemble(std::span(pool).first(10), EnsembleSource::validation_sample, 50, 3);
    EXPECT_TRUE(small.with_replacement);
    EXPECT_EQ(small.states.size(), 50u);
    EXPECT_THROW(build_ensemble(pool, EnsembleSource::validation_sample, 0, 3), std::invalid_argument);
    EXPECT_THROW(build_ensemble(std::span(pool).first(0), EnsembleSource::validation_sample, 5, 3),
                 std::invalid_argument);
}

TEST(Ensemble, TrajectoryKeepsOrderAndEndpoints) {
    std::vector<StateVector> pool;
    for (std::size_t i = 0; i < 9; ++i) {
        pool.push_back(StateVector::basis(4, i));
    }
    const auto e = build_ensemble(pool, EnsembleSource::vqe_trajectory, 3, 1);
    EXPECT_EQ(e.states[0][0], cplx(1.0));
    EXPECT_EQ(e.states[1][4], cplx(1.0));
    EXPECT_EQ(e.states[2][8], cplx(1.0));
}

TEST(Baseline, IdxTasksUseDataDir) {
    const auto root = scratch("datadir");
    testing::write_data_dir(root, 20);
    RunConfig cfg;
    cfg.task = Task::mnist49;
    cfg.data_dir = root.string();
    cfg.depth = 2;
    cfg.epochs = 1;
    cfg.M = 5;
    const auto b = prepare_baseline(cfg);
    EXPECT_EQ(b.data.samples.size(), 40u);
    EXPECT_EQ(b.ensemble.states.size(), 5u);
    EXPECT_EQ(b.data.validation.size(), 8u);
    cfg.task = Task::fashion_sb;
    EXPECT_EQ(prepare_baseline(cfg).data.samples.size(), 40u);
    cfg.data_dir = (root / "absent").string();
    EXPECT_THROW(prepare_baseline(cfg), std::runtime_error);
}

} // namespace
} // namespace qiprune
