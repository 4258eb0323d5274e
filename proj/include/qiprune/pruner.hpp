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
 * @file pruner.hpp
 * One-shot structured pruning of Rot blocks with drift certificates.
 *
 * Each (layer, qubit) block of Rot gates forms one subgroup. A reference gate
 * is chosen per subgroup; every other member is compared with it by d_q over
 * the task ensemble propagated to the block's first gate, and is replaced by
 * the reference (same location, reference's unitary) iff d_q ≤ ε_q.
 *
 * Decisions use the ensemble mean of d_q in the configured geometry. The
 * report also keeps the per-state maximum at q = 1, which is what the
 * per-state deviation bound needs.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qiprune/circuit.hpp"
#include "qiprune/linalg.hpp"
#include "qiprune/qmetric.hpp"

namespace qiprune {

struct SubgroupPartition {
    /// Gate ids per group, ascending; groups ordered by first member.
    std::vector<std::vector<std::size_t>> groups;
    /// Reference gate id per group.
    std::vector<std::size_t> reference;
};

/**
 * One group per contiguous run of Rot gates sharing (layer, qubit). Throws if
 * a block is split by another gate, which the benchmark ansatz never does.
 */
inline SubgroupPartition partition(const Circuit &c) {
    c.validate();
    SubgroupPartition p;
    std::map<std::pair<std::size_t, std::size_t>, bool> seen;
    const Gate *prev = nullptr;
    for (const auto &g : c.gates) {
        if (!g.is_rot()) {
            prev = nullptr;
            continue;
        }
        const bool continues = prev != nullptr && prev->layer == g.layer && prev->rot().qubit == g.rot().qubit;
        if (continues) {
            p.groups.back().push_back(g.id);
        } else {
            const auto key = std::make_pair(g.layer, g.rot().qubit);
            if (seen.contains(key)) {
                throw std::invalid_argument("partition: Rot block (layer " + std::to_string(g.layer) + ", qubit " +
                                            std::to_string(g.rot().qubit) + ") is not contiguous");
            }
            seen[key] = true;
            p.groups.push_back({g.id});
        }
        prev = &g;
    }
    p.reference.reserve(p.groups.size());
    for (const auto &grp : p.groups) {
        p.reference.push_back(grp.front());
    }
    return p;
}

enum class PruneMode { reference_only, pairwise_medoid };

inline std::string_view to_string(PruneMode m) {
    return m == PruneMode::reference_only ? "reference_only" : "pairwise_medoid";
}

inline PruneMode prune_mode_from_string(std::string_view s) {
    if (s == "reference_only") {
        return PruneMode::reference_only;
    }
    if (s == "pairwise_medoid") {
        return PruneMode::pairwise_medoid;
    }
    throw std::invalid_argument("unknown prune mode '" + std::string(s) + "'");
}

struct ReferenceChoice {
    std::size_t gate_id = 0;
    std::size_t comparisons = 0;
};

namespace detail {

inline const Rot &rot_at(const Circuit &c, std::size_t id) {
    if (id >= c.gates.size() || !c.gates[id].is_rot()) {
        throw std::invalid_argument("gate " + std::to_string(id) + " is not a Rot gate of this circuit");
    }
    return c.gates[id].rot();
}

} // namespace detail

/// Medoid under d_q on the group's prefix ensemble; ties go to the smallest id.
inline ReferenceChoice select_reference(std::span<const std::size_t> group, const Circuit &c,
                                        std::span<const StateVector> ensemble, const QGeometry &geo) {
    if (group.empty()) {
        throw std::invalid_argument("select_reference: empty group");
    }
    const std::size_t n = group.size();
    std::vector<ComplexMatrix> mats;
    std::vector<std::size_t> wire;
    for (auto id : group) {
        const Rot &r = detail::rot_at(c, id);
        mats.push_back(compile_rot(r.angles));
        wire = {r.qubit};
    }
    std::vector<double> sums(n, 0.0);
    ReferenceChoice out;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = d_q(mats[i], mats[j], ensemble, geo, wire);
            ++out.comparisons;
            sums[i] += d;
            sums[j] += d;
        }
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (sums[i] < sums[best] || (sums[i] == sums[best] && group[i] < group[best])) {
            best = i;
        }
    }
    out.gate_id = group[best];
    return out;
}

/// Parameter-space medoid under the q-weighted norm; performs no d_q evaluations.
inline ReferenceChoice select_reference_by_params(std::span<const std::size_t> group, const Circuit &c, double q) {
    if (group.empty()) {
        throw std::invalid_argument("select_reference: empty group");
    }
    std::size_t best = 0;
    double best_sum = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < group.size(); ++i) {
        const auto &ai = detail::rot_at(c, group[i]).angles;
        double s = 0.0;
        for (std::size_t j = 0; j < group.size(); ++j) {
            s += q_weighted_param_norm(ai, detail::rot_at(c, group[j]).angles, q);
        }
        if (s < best_sum || (s == best_sum && group[i] < group[best])) {
            best_sum = s;
            best = i;
        }
    }
    return {group[best], 0};
}

struct PruneOptions {
    PruneMode mode = PruneMode::pairwise_medoid;
    /// Upper bound on replacements per group; the smallest-d_q candidates win.
    std::optional<std::size_t> max_replace_per_group;
    /// ‖O‖_op entering the reported RHS; 1 for normalised observables.
    double observable_norm = 1.0;
};

struct PruneReport {
    PruneMode mode = PruneMode::pairwise_medoid;
    std::vector<std::size_t> references;
    std::vector<std::size_t> kept;
    std::vector<std::size_t> replaced;
    std::map<std::size_t, std::size_t> replaced_by;
    std::size_t L = 0;
    std::size_t n_rot = 0;
    std::size_t n_groups = 0;
    double replace_pct = 0.0;
    /// Ensemble-mean d_q to the reference (decision geometry), per non-reference gate.
    std::map<std::size_t, double> dq_values;
    /// Largest per-state angle in the decision geometry, per non-reference gate.
    std::map<std::size_t, double> dq_state_max;
    /// Largest per-state angle at q = 1, per non-reference gate.
    std::map<std::size_t, double> dq_state_max_std;
    double dq_max_replaced = 0.0;
    double dq_state_max_std_replaced = 0.0;
    double delta = 0.0;
    double epsilon_q = 0.0;
    EpsilonRule rule = EpsilonRule::half_delta_rule;
    double q = 1.0;
    double M_q = 1.0;
    double op_norm = 1.0;
    double rhs_raw = 0.0;
    double rhs_clip = 0.0;
    std::size_t comparisons = 0;
    std::size_t violations = 0;
    /// Eligible gates kept only because of max_replace_per_group.
    std::size_t capped = 0;
    std::size_t gate_count = 0;
    std::size_t merged_gate_count = 0;
};

struct PruneResult {
    Circuit pruned;
    PruneReport report;
};

/**
 * Executable form of `c` with runs of identical adjacent Rot gates in one
 * block fused into a single compiled unitary.
 */
inline std::vector<CompiledOp> fuse_identical_runs(const Circuit &c) {
    std::vector<CompiledOp> ops;
    const Gate *prev = nullptr;
    for (const auto &g : c.gates) {
        if (g.is_rot() && prev != nullptr && prev->is_rot() && prev->layer == g.layer &&
            prev->rot().qubit == g.rot().qubit && prev->rot().angles == g.rot().angles) {
            ops.back().matrix = compile_rot(g.rot().angles) * ops.back().matrix;
        } else {
            ops.push_back({compile_gate(g), gate_wires(g), g.id});
        }
        prev = &g;
    }
    return ops;
}

/// Recounts violations = |{g replaced : d_q(g) > ε_q}| from the report alone.
inline std::size_t count_violations(const PruneReport &r) {
    std::size_t v = 0;
    for (auto id : r.replaced) {
        const auto it = r.dq_values.find(id);
        if (it == r.dq_values.end() || it->second > r.epsilon_q) {
            ++v;
        }
    }
    return v;
}

inline PruneResult prune(const Circuit &c, const SubgroupPartition &part, std::span<const StateVector> ensemble,
                         const QGeometry &geo, const Tolerance &tol, const PruneOptions &opts = {}) {
    if (ensemble.empty()) {
        throw std::invalid_argument("prune: empty ensemble");
    }
    if (geo.dim() != (std::size_t{1} << c.n_qubits)) {
        throw std::invalid_argument("prune: geometry dimension does not match the circuit");
    }
    if (!(tol.epsilon_q >= 0.0 && tol.epsilon_q <= std::numbers::pi / 2)) {
        throw std::invalid_argument("prune: epsilon_q must lie in [0, pi/2]");
    }
    if (part.reference.size() != part.groups.size()) {
        throw std::invalid_argument("prune: partition has no reference for some group");
    }
    const QGeometry geo_std = build_geometry(c.n_qubits, 1.0);

    PruneResult res{c, {}};
    PruneReport &rep = res.report;
    rep.mode = opts.mode;
    rep.delta = tol.delta;
    rep.epsilon_q = tol.epsilon_q;
    rep.rule = tol.rule;
    rep.q = geo.q;
    rep.M_q = geo.M_q;
    rep.op_norm = opts.observable_norm;
    rep.n_rot = c.rot_count();
    rep.n_groups = part.groups.size();
    rep.gate_count = c.gates.size();

    std::vector<std::size_t> positions;
    std::size_t covered = 0;
    for (const auto &grp : part.groups) {
        if (grp.empty()) {
            throw std::invalid_argument("prune: empty group in partition");
        }
        positions.push_back(grp.front());
        covered += grp.size();
    }
    if (!std::is_sorted(positions.begin(), positions.end())) {
        throw std::invalid_argument("prune: groups must be ordered by first gate");
    }
    if (covered != rep.n_rot) {
        throw std::invalid_argument("prune: partition does not cover every Rot gate exactly once");
    }
    const auto snapshots = prefix_snapshots(c, ensemble, positions);

    for (std::size_t r = 0; r < part.groups.size(); ++r) {
        const auto &grp = part.groups[r];
        const auto &local = snapshots[r];
        std::size_t ref = part.reference[r];
        if (opts.mode == PruneMode::pairwise_medoid) {
            const auto choice = select_reference(grp, c, local, geo);
            ref = choice.gate_id;
            rep.comparisons += choice.comparisons;
        } else {
            ref = select_reference_by_params(grp, c, geo.q).gate_id;
        }
        if (std::find(grp.begin(), grp.end(), ref) == grp.end()) {
            throw std::invalid_argument("prune: reference is not a member of its group");
        }
        rep.references.push_back(ref);
        rep.kept.push_back(ref);

        const Rot &ref_rot = detail::rot_at(c, ref);
        const ComplexMatrix u_ref = compile_rot(ref_rot.angles);
        const std::size_t wire[] = {ref_rot.qubit};

        std::vector<std::pair<double, std::size_t>> eligible;
        for (auto id : grp) {
            if (id == ref) {
                continue;
            }
            const Rot &rot = detail::rot_at(c, id);
            if (rot.qubit != ref_rot.qubit) {
                throw std::invalid_argument("prune: group mixes qubits");
            }
            const ComplexMatrix u = compile_rot(rot.angles);
            const auto per = dq_per_state(u_ref, u, local, geo, wire);
            const auto per_std = dq_per_state(u_ref, u, local, geo_std, wire);
            ++rep.comparisons;
            const double d = mean(per);
            rep.dq_values[id] = d;
            rep.dq_state_max[id] = *std::max_element(per.begin(), per.end());
            rep.dq_state_max_std[id] = *std::max_element(per_std.begin(), per_std.end());
            if (d <= tol.epsilon_q) {
                eligible.emplace_back(d, id);
            } else {
                rep.kept.push_back(id);
            }
        }
        std::sort(eligible.begin(), eligible.end());
        const std::size_t cap = opts.max_replace_per_group.value_or(eligible.size());
        for (std::size_t i = 0; i < eligible.size(); ++i) {
            const std::size_t id = eligible[i].second;
            if (i < cap) {
                rep.replaced.push_back(id);
                rep.replaced_by[id] = ref;
                res.pruned.gates[id].rot().angles = ref_rot.angles;
            } else {
                rep.kept.push_back(id);
                ++rep.capped;
            }
        }
    }
    std::sort(rep.kept.begin(), rep.kept.end());
    std::sort(rep.replaced.begin(), rep.replaced.end());

    rep.L = rep.replaced.size();
    rep.replace_pct = rep.n_rot == 0 ? 0.0 : 100.0 * static_cast<double>(rep.L) / static_cast<double>(rep.n_rot);
    for (auto id : rep.replaced) {
        rep.dq_max_replaced = std::max(rep.dq_max_replaced, rep.dq_values[id]);
        rep.dq_state_max_std_replaced = std::max(rep.dq_state_max_std_replaced, rep.dq_state_max_std[id]);
    }
    const auto rhs = drift_rhs(rep.L, rep.epsilon_q, rep.M_q, rep.op_norm);
    rep.rhs_raw = rhs.raw;
    rep.rhs_clip = rhs.clipped;
    rep.violations = count_violations(rep);
    rep.merged_gate_count = fuse_identical_runs(res.pruned).size();
    return res;
}

struct CertificateRecord {
    std::vector<double> trace_distances;
    std::vector<double> observable_drifts;
    double max_trace_distance = 0.0;
    double mean_trace_distance = 0.0;
    double max_observable_drift = 0.0;
    double mean_observable_drift = 0.0;
    double op_norm = 0.0;
    /// min(2, 2L sin(ε_q)/M_q), bound on ‖ρ − ρ'‖₁.
    double trace_bound = 0.0;
    /// ‖O‖_op · 2L sin(ε_q)/M_q.
    double observable_bound = 0.0;
    /// min(1, 2L sin(ε_q)/M_q), bound on ½‖ρ − ρ'‖₁.
    double rhs_clip = 0.0;
    /// Largest per-state q = 1 angle among replaced gates, and the bound it implies.
    double certified_epsilon = 0.0;
    double certified_trace_bound = 0.0;
    double trace_slack = 0.0;
    double observable_slack = 0.0;
    bool passed = false;
};

inline constexpr double kCertificateTol = 1e-9;

inline CertificateRecord certify(const PruneReport &rep, const Circuit &original, const Circuit &pruned,
                                 std::span<const StateVector> ensemble, const ComplexMatrix &observable) {
    if (original.gates.size() != pruned.gates.size() || original.n_qubits != pruned.n_qubits ||
        rep.gate_count != original.gates.size()) {
        throw std::invalid_argument("certify: report/circuit mismatch (gate counts differ)");
    }
    for (std::size_t i = 0; i < original.gates.size(); ++i) {
        if (!(original.gates[i] == pruned.gates[i]) &&
            !std::binary_search(rep.replaced.begin(), rep.replaced.end(), i)) {
            throw std::invalid_argument("certify: report/circuit mismatch (gate " + std::to_string(i) +
                                        " changed but is not listed as replaced)");
        }
    }
    if (observable.dim() != (std::size_t{1} << original.n_qubits)) {
        throw std::invalid_argument("certify: observable dimension mismatch");
    }
    CertificateRecord cert;
    cert.op_norm = operator_norm(observable);
    const double L = static_cast<double>(rep.L);
    const double lin = 2.0 * L * std::sin(rep.epsilon_q) / rep.M_q;
    cert.trace_bound = std::min(2.0, lin);
    cert.observable_bound = cert.op_norm * lin;
    cert.rhs_clip = std::min(1.0, lin);
    cert.certified_epsilon = rep.dq_state_max_std_replaced;
    cert.certified_trace_bound = std::min(2.0, 2.0 * L * std::sin(cert.certified_epsilon));

    const auto ops_a = compile(original);
    const auto ops_b = compile(pruned);
    for (const auto &psi : ensemble) {
        require_dims(original, psi);
        const StateVector a = run_ops(ops_a, psi);
        const StateVector b = run_ops(ops_b, psi);
        const double td = pure_trace_distance(a, b);
        const double drift = std::abs(expectation(a, observable) - expectation(b, observable));
        cert.trace_distances.push_back(td);
        cert.observable_drifts.push_back(drift);
        cert.max_trace_distance = std::max(cert.max_trace_distance, td);
        cert.max_observable_drift = std::max(cert.max_observable_drift, drift);
    }
    cert.mean_trace_distance = mean(cert.trace_distances);
    cert.mean_observable_drift = mean(cert.observable_drifts);
    cert.trace_slack = cert.trace_bound - cert.max_trace_distance;
    cert.observable_slack = cert.observable_bound - cert.max_observable_drift;
    cert.passed = cert.max_trace_distance <= cert.trace_bound + kCertificateTol &&
                  cert.max_observable_drift <= cert.observable_bound + kCertificateTol &&
                  0.5 * cert.max_trace_distance <= cert.rhs_clip + kCertificateTol;
    return cert;
}

} // namespace qiprune
