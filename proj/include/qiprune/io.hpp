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
 * @file io.hpp
 * JSON and CSV serialisation: circuits, encoded datasets, run configs, prune
 * reports, check results and the sweep CSV.
 *
 * Circuit document:
 *
 *     {"n_qubits": 4, "depth": 12, "gates": [
 *       {"id": 0, "kind": "rot", "params": [a, b, c], "qubit": 0, "layer": 0, "slot": 0},
 *       {"id": 5, "kind": "cnot", "control": 0, "target": 1, "layer": 0, "slot": 0}, ...]}
 *
 * Dataset cache: {"name", "n_qubits", "samples": [{"amplitudes": [[re, im], ...], "label": ±1}]}
 * plus optional "train"/"validation" index lists.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "qiprune/circuit.hpp"
#include "qiprune/experiment.hpp"
#include "qiprune/pruner.hpp"
#include "qiprune/tasks.hpp"
#include "qiprune/verify.hpp"

namespace qiprune {

using json = nlohmann::ordered_json;

// Circuits -------------------------------------------------------------------

inline json circuit_to_json(const Circuit &c) {
    json gates = json::array();
    for (const auto &g : c.gates) {
        json j;
        j["id"] = g.id;
        if (g.is_rot()) {
            j["kind"] = "rot";
            j["params"] = g.rot().angles;
            j["qubit"] = g.rot().qubit;
        } else {
            j["kind"] = "cnot";
            j["control"] = g.cnot().control;
            j["target"] = g.cnot().target;
        }
        j["layer"] = g.layer;
        j["slot"] = g.slot;
        gates.push_back(std::move(j));
    }
    return json{{"n_qubits", c.n_qubits}, {"depth", c.depth}, {"gates", std::move(gates)}};
}

inline Circuit circuit_from_json(const json &j) {
    try {
        Circuit c;
        c.n_qubits = j.at("n_qubits").get<std::size_t>();
        c.depth = j.at("depth").get<std::size_t>();
        for (const auto &g : j.at("gates")) {
            Gate gate;
            gate.id = g.at("id").get<std::size_t>();
            gate.layer = g.at("layer").get<std::size_t>();
            gate.slot = g.at("slot").get<std::size_t>();
            const auto kind = g.at("kind").get<std::string>();
            if (kind == "rot") {
                gate.op = Rot{g.at("params").get<Angles>(), g.at("qubit").get<std::size_t>()};
            } else if (kind == "cnot") {
                gate.op = Cnot{g.at("control").get<std::size_t>(), g.at("target").get<std::size_t>()};
            } else {
                throw std::invalid_argument("circuit json: unknown gate kind '" + kind + "'");
            }
            c.gates.push_back(std::move(gate));
        }
        c.validate();
        return c;
    } catch (const json::exception &e) {
        throw std::invalid_argument(std::string("circuit json: ") + e.what());
    }
}

// Datasets -------------------------------------------------------------------

inline json dataset_to_json(const EncodedDataset &d) {
    json samples = json::array();
    for (const auto &s : d.samples) {
        json amps = json::array();
        for (const auto &a : s.state.amplitudes()) {
            amps.push_back({a.real(), a.imag()});
        }
        samples.push_back({{"amplitudes", std::move(amps)}, {"label", s.label}});
    }
    return json{{"name", d.name},
                {"n_qubits", d.n_qubits},
                {"samples", std::move(samples)},
                {"train", d.train},
                {"validation", d.validation}};
}

inline EncodedDataset dataset_from_json(const json &j) {
    try {
        EncodedDataset d;
        d.name = j.at("name").get<std::string>();
        d.n_qubits = j.at("n_qubits").get<std::size_t>();
        for (const auto &s : j.at("samples")) {
            std::vector<cplx> amps;
            for (const auto &a : s.at("amplitudes")) {
                amps.emplace_back(a.at(0).get<double>(), a.at(1).get<double>());
            }
            const int label = s.at("label").get<int>();
            if (label != 1 && label != -1) {
                throw std::invalid_argument("dataset json: labels must be +1 or -1");
            }
            d.samples.push_back({StateVector::from_amplitudes(d.n_qubits, std::move(amps)), label});
        }
        if (j.contains("train")) {
            d.train = j.at("train").get<std::vector<std::size_t>>();
            d.validation = j.at("validation").get<std::vector<std::size_t>>();
        }
        for (auto i : d.train) {
            if (i >= d.samples.size()) {
                throw std::invalid_argument("dataset json: split index out of range");
            }
        }
        for (auto i : d.validation) {
            if (i >= d.samples.size()) {
                throw std::invalid_argument("dataset json: split index out of range");
            }
        }
        return d;
    } catch (const json::exception &e) {
        throw std::invalid_argument(std::string("dataset json: ") + e.what());
    }
}

// Run configs ----------------------------------------------------------------

inline json config_to_json(const RunConfig &c) {
    json j;
    j["task"] = to_string(c.task);
    j["n_qubits"] = c.qubits();
    j["depth"] = c.depth;
    j["delta"] = c.delta;
    j["sigma"] = c.sigma;
    j["gamma"] = c.gamma;
    j["alpha"] = c.alpha;
    j["beta"] = c.beta;
    j["M"] = c.M;
    j["seed"] = c.seed;
    j["epsilon_rule"] = to_string(c.epsilon_rule);
    j["mode"] = to_string(c.mode);
    j["max_replace_per_group"] = c.max_replace_per_group ? json(*c.max_replace_per_group) : json(nullptr);
    j["data_dir"] = c.data_dir;
    j["output_dir"] = c.output_dir;
    j["images_path"] = c.images_path;
    j["labels_path"] = c.labels_path;
    j["epochs"] = c.epochs;
    j["lr"] = c.lr;
    j["train_samples"] = c.train_samples;
    j["validation_fraction"] = c.validation_fraction;
    j["vqe_iters"] = c.vqe_iters;
    j["vqe_lr"] = c.vqe_lr;
    j["tfim_J"] = c.tfim_J;
    j["tfim_g"] = c.tfim_g;
    return j;
}

/// Applies the keys present in `j` on top of `base`; unknown keys are an error.
inline RunConfig config_from_json(const json &j, RunConfig base = {}) {
    if (!j.is_object()) {
        throw std::invalid_argument("config: expected a JSON object");
    }
    static const std::set<std::string> known = {
        "task",  "n_qubits",     "depth", "delta",       "sigma",       "gamma",         "alpha",
        "beta",  "M",            "seed",  "epsilon_rule", "mode",       "max_replace_per_group",
        "data_dir", "output_dir", "images_path", "labels_path", "epochs", "lr", "train_samples",
        "validation_fraction", "vqe_iters", "vqe_lr", "tfim_J", "tfim_g"};
    for (const auto &[k, v] : j.items()) {
        if (!known.contains(k)) {
            throw std::invalid_argument("config: unknown key '" + k + "'");
        }
    }
    try {
        auto get = [&](const char *k, auto &dst) {
            if (j.contains(k)) {
                dst = j.at(k).get<std::decay_t<decltype(dst)>>();
            }
        };
        if (j.contains("task")) {
            base.task = task_from_string(j.at("task").get<std::string>());
        }
        get("n_qubits", base.n_qubits);
        get("depth", base.depth);
        get("delta", base.delta);
        get("sigma", base.sigma);
        get("gamma", base.gamma);
        get("alpha", base.alpha);
        get("beta", base.beta);
        get("M", base.M);
        get("seed", base.seed);
        if (j.contains("epsilon_rule")) {
            base.epsilon_rule = epsilon_rule_from_string(j.at("epsilon_rule").get<std::string>());
        }
        if (j.contains("mode")) {
            base.mode = prune_mode_from_string(j.at("mode").get<std::string>());
        }
        if (j.contains("max_replace_per_group")) {
            const auto &v = j.at("max_replace_per_group");
            base.max_replace_per_group = v.is_null() ? std::nullopt : std::optional(v.get<std::size_t>());
        }
        get("data_dir", base.data_dir);
        get("output_dir", base.output_dir);
        get("images_path", base.images_path);
        get("labels_path", base.labels_path);
        get("epochs", base.epochs);
        get("lr", base.lr);
        get("train_samples", base.train_samples);
        get("validation_fraction", base.validation_fraction);
        get("vqe_iters", base.vqe_iters);
        get("vqe_lr", base.vqe_lr);
        get("tfim_J", base.tfim_J);
        get("tfim_g", base.tfim_g);
    } catch (const json::exception &e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    return base;
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Hash of every field that affects results (output_dir excluded), as 16 hex digits.
inline std::string config_hash(const RunConfig &c) {
    json j = config_to_json(c);
    j.erase("output_dir");
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(j.dump())));
    return buf;
}

// Reports --------------------------------------------------------------------

template <class K, class V> json map_to_json(const std::map<K, V> &m) {
    json out = json::object();
    for (const auto &[k, v] : m) {
        out[std::to_string(k)] = v;
    }
    return out;
}

inline json report_to_json(const PruneReport &r) {
    json j;
    j["mode"] = to_string(r.mode);
    j["n_rot"] = r.n_rot;
    j["n_groups"] = r.n_groups;
    j["L"] = r.L;
    j["replace_pct"] = r.replace_pct;
    j["references"] = r.references;
    j["kept"] = r.kept;
    j["replaced"] = r.replaced;
    j["replaced_by"] = map_to_json(r.replaced_by);
    j["dq_values"] = map_to_json(r.dq_values);
    j["dq_state_max"] = map_to_json(r.dq_state_max);
    j["dq_state_max_q1"] = map_to_json(r.dq_state_max_std);
    j["dq_max_replaced"] = r.dq_max_replaced;
    j["dq_state_max_q1_replaced"] = r.dq_state_max_std_replaced;
    j["delta"] = r.delta;
    j["epsilon_q"] = r.epsilon_q;
    j["epsilon_rule"] = to_string(r.rule);
    j["q"] = r.q;
    j["M_q"] = r.M_q;
    j["op_norm"] = r.op_norm;
    j["rhs_raw"] = r.rhs_raw;
    j["rhs_clip"] = r.rhs_clip;
    j["comparisons"] = r.comparisons;
    j["violations"] = r.violations;
    j["capped"] = r.capped;
    j["gate_count"] = r.gate_count;
    j["merged_gate_count"] = r.merged_gate_count;
    return j;
}

inline json certificate_to_json(const CertificateRecord &c) {
    return json{{"passed", c.passed},
                {"max_trace_distance", c.max_trace_distance},
                {"mean_trace_distance", c.mean_trace_distance},
                {"trace_bound", c.trace_bound},
                {"trace_slack", c.trace_slack},
                {"max_observable_drift", c.max_observable_drift},
                {"mean_observable_drift", c.mean_observable_drift},
                {"observable_bound", c.observable_bound},
                {"observable_slack", c.observable_slack},
                {"op_norm", c.op_norm},
                {"rhs_clip", c.rhs_clip},
                {"certified_epsilon", c.certified_epsilon},
                {"certified_trace_bound", c.certified_trace_bound},
                {"trace_distances", c.trace_distances},
                {"observable_drifts", c.observable_drifts}};
}

/// Full run document: table columns, report, certificate and provenance.
inline json run_to_json(const RunConfig &cfg, const RunOutcome &o) {
    const bool energy = cfg.task == Task::tfim;
    json table;
    table[energy ? "E_base" : "Acc_base"] = o.metric_base;
    table[energy ? "E_pruned" : "Acc_pruned"] = o.metric_pruned;
    table[energy ? "E_drop" : "Acc_drop"] = o.metric_drop;
    table["Replace(%)"] = o.report.replace_pct;
    table["RHS_raw"] = o.report.rhs_raw;
    table["RHS_clip"] = o.report.rhs_clip;
    table["dq_max(repl.)"] = o.report.dq_max_replaced;

    json j;
    j["dataset"] = to_string(cfg.task);
    j["table"] = std::move(table);
    j["deformation"] = {{"q", o.q}, {"lambda", o.lambda}};
    j["report"] = report_to_json(o.report);
    j["certificate"] = certificate_to_json(o.certificate);
    j["provenance"] = {{"seed", cfg.seed}, {"config_hash", config_hash(cfg)}, {"config", config_to_json(cfg)}};
    return j;
}

inline json checks_to_json(const std::vector<CheckResult> &rs) {
    json arr = json::array();
    for (const auto &r : rs) {
        arr.push_back({{"name", r.name},
                       {"passed", r.passed},
                       {"assertion", r.assertion},
                       {"measured", r.measured},
                       {"bound", r.bound},
                       {"slack", r.slack},
                       {"tolerance", r.tolerance},
                       {"trials", r.trials},
                       {"seed", r.seed}});
    }
    return arr;
}

inline json table_rows_to_json(const std::vector<TableRow> &rows) {
    json arr = json::array();
    for (const auto &r : rows) {
        arr.push_back({{"dataset", r.dataset},
                       {"delta", r.delta},
                       {"sigma", r.sigma},
                       {"replace_pct", r.replace_pct},
                       {"n_rot", r.n_rot},
                       {"rhs_raw", r.rhs_raw},
                       {"rhs_clip", r.rhs_clip ? json(*r.rhs_clip) : json(nullptr)},
                       {"dq_max", r.dq_max}});
    }
    return arr;
}

inline std::vector<TableRow> table_rows_from_json(const json &j) {
    try {
        std::vector<TableRow> rows;
        for (const auto &r : j) {
            TableRow t;
            t.dataset = r.at("dataset").get<std::string>();
            t.delta = r.at("delta").get<double>();
            t.sigma = r.at("sigma").get<double>();
            t.replace_pct = r.at("replace_pct").get<double>();
            t.n_rot = r.at("n_rot").get<std::size_t>();
            t.rhs_raw = r.at("rhs_raw").get<double>();
            if (r.contains("rhs_clip") && !r.at("rhs_clip").is_null()) {
                t.rhs_clip = r.at("rhs_clip").get<double>();
            }
            t.dq_max = r.at("dq_max").get<double>();
            rows.push_back(std::move(t));
        }
        if (rows.empty()) {
            throw std::invalid_argument("table fixture: no rows");
        }
        return rows;
    } catch (const json::exception &e) {
        throw std::invalid_argument(std::string("table fixture: ") + e.what());
    }
}

inline json read_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "'");
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error &e) {
        throw std::invalid_argument("'" + path + "': " + e.what());
    }
}

inline void write_text_file(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write '" + path + "'");
    }
    out << text;
}

inline void write_json_file(const std::string &path, const json &j) { write_text_file(path, j.dump(2) + "\n"); }

// CSV ------------------------------------------------------------------------

inline const std::vector<std::string> &sweep_csv_columns() {
    static const std::vector<std::string> cols = {"dataset",       "delta",      "sigma",       "metric_base",
                                                  "metric_pruned", "metric_drop", "replace_pct", "rhs_raw",
                                                  "rhs_clip",      "dq_max_repl"};
    return cols;
}

/// Shortest round-trip decimal form, plain notation for ordinary magnitudes.
inline std::string format_double(double x) {
    char buf[40];
    const double ax = std::abs(x);
    const bool plain = ax == 0.0 || (ax >= 1e-5 && ax < 1e15);
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, x);
        if (std::strtod(buf, nullptr) == x && (!plain || std::string_view(buf).find('e') == std::string_view::npos)) {
            break;
        }
    }
    return buf;
}

inline std::string csv_header() {
    std::string s;
    for (const auto &c : sweep_csv_columns()) {
        s += (s.empty() ? "" : ",") + c;
    }
    return s + "\n";
}

inline std::string csv_row(const RunConfig &cfg, const RunOutcome &o) {
    std::string s(to_string(cfg.task));
    for (double x : {cfg.delta, cfg.sigma, o.metric_base, o.metric_pruned, o.metric_drop, o.report.replace_pct,
                     o.report.rhs_raw, o.report.rhs_clip, o.report.dq_max_replaced}) {
        s += "," + format_double(x);
    }
    return s + "\n";
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    [[nodiscard]] std::size_t column(const std::string &name) const {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
            throw std::invalid_argument("csv: missing column '" + name + "'");
        }
        return static_cast<std::size_t>(it - header.begin());
    }
};

inline std::vector<std::string> split_csv_line(const std::string &line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) {
        out.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

inline CsvTable parse_csv(std::istream &in, const std::string &source = "csv") {
    CsvTable t;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        auto cells = split_csv_line(line);
        if (t.header.empty()) {
            t.header = std::move(cells);
        } else if (cells.size() != t.header.size()) {
            throw std::invalid_argument(source + ": row has " + std::to_string(cells.size()) + " cells, header has " +
                                        std::to_string(t.header.size()));
        } else {
            t.rows.push_back(std::move(cells));
        }
    }
    return t;
}

/// One tidy panel: dataset, delta, sigma, value. Rows sorted by (dataset, delta, sigma).
struct Panel {
    std::string metric;
    std::string csv;
};

/// Figure panels: Replace%, metric drop and dq_max against σ, one series per δ.
inline std::vector<Panel> make_panels(const std::vector<CsvTable> &inputs) {
    struct Row {
        std::string dataset;
        double delta, sigma;
        std::vector<std::string> values;
    };
    const std::vector<std::string> metrics = {"replace_pct", "metric_drop", "dq_max_repl"};
    std::vector<Row> rows;
    for (const auto &t : inputs) {
        const std::size_t cd = t.column("dataset"), cdelta = t.column("delta"), csig = t.column("sigma");
        std::vector<std::size_t> cm;
        for (const auto &m : metrics) {
            cm.push_back(t.column(m));
        }
        for (const auto &r : t.rows) {
            Row row{r[cd], std::stod(r[cdelta]), std::stod(r[csig]), {}};
            for (auto c : cm) {
                row.values.push_back(r[c]);
            }
            rows.push_back(std::move(row));
        }
    }
    if (rows.empty()) {
        throw std::invalid_argument("report: no rows in input");
    }
    std::stable_sort(rows.begin(), rows.end(), [](const Row &a, const Row &b) {
        return std::tie(a.dataset, a.delta, a.sigma) < std::tie(b.dataset, b.delta, b.sigma);
    });
    std::vector<Panel> panels;
    for (std::size_t m = 0; m < metrics.size(); ++m) {
        std::string csv = "dataset,delta,sigma," + metrics[m] + "\n";
        for (const auto &r : rows) {
            csv += r.dataset + "," + format_double(r.delta) + "," + format_double(r.sigma) + "," + r.values[m] + "\n";
        }
        panels.push_back({metrics[m], std::move(csv)});
    }
    return panels;
}

} // namespace qiprune
