// Copyright 2026 The tcilab Authors
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
 * @file
 * JSON run configuration: parsing with per-field default tracking, semantic
 * validation, and the effective-config echo written into every manifest.
 */

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "json.hpp"

#include "tcilab/dense.hpp"
#include "tcilab/errors.hpp"
#include "tcilab/model.hpp"
#include "tcilab/variational.hpp"

namespace tcilab {

using json = nlohmann::json;

enum class Task {
    exact_solve,
    vqe,
    vqd,
    correlators,
    entropy,
    central_charge,
    gap_ratios,
    layer_scaling,
    noise_study
};

inline constexpr std::array<std::pair<Task, std::string_view>, 9> kTaskNames{{
    {Task::exact_solve, "exact-solve"},
    {Task::vqe, "vqe"},
    {Task::vqd, "vqd"},
    {Task::correlators, "correlators"},
    {Task::entropy, "entropy"},
    {Task::central_charge, "central-charge"},
    {Task::gap_ratios, "gap-ratios"},
    {Task::layer_scaling, "layer-scaling"},
    {Task::noise_study, "noise-study"},
}};

inline std::string_view to_string(Task t) {
    for (const auto &[k, name] : kTaskNames) {
        if (k == t) {
            return name;
        }
    }
    return "?";
}

inline std::optional<Task> task_from_string(std::string_view s) {
    for (const auto &[k, name] : kTaskNames) {
        if (name == s) {
            return k;
        }
    }
    return std::nullopt;
}

struct ExperimentConfig {
    Task task = Task::exact_solve;
    ModelSpec model;
    std::string preset;     // echo only; empty when the model was given inline
    std::vector<int> sizes; // sweep tasks; empty means {model.L}
    std::uint64_t seed = 1;
    std::string output = "tcilab-run";

    // ansatz
    int layers = 0;             // 0: L on periodic chains, L + 1 on open chains
    std::string cost = "energy"; // vqe: energy | infidelity

    OptimizerOptions optimizer;

    // sampling; zero shots means exact probabilities
    std::uint64_t shots = 0;
    std::string basis = "both"; // X | Z | both

    // exact-solve
    int levels = 4;
    bool supercharge_check = false;

    // correlators
    std::string correlator = "both"; // C | D | both
    int correlator_site = 1;
    bool pair_average = false;
    int fit_min = 1;
    int fit_max = 0; // 0: L - 1

    // entropy and central charge
    int ell_min = 1;
    int ell_max = 0; // 0: L - ell_min

    // vqd
    int vqd_levels = 2;
    std::vector<double> vqd_weights;

    // layer-scaling
    double target_fidelity = 0.99;
    int max_extra_layers = 1;

    // noise-study
    std::string calibration;
    double p01 = 0.0;
    double p10 = 0.0;
    int noise_qubits = 5;
    std::uint64_t noise_shots = 100000;
    int noise_trials = 20;

    [[nodiscard]] std::vector<int> sweep() const {
        return sizes.empty() ? std::vector<int>{model.L} : sizes;
    }

    [[nodiscard]] int layers_for(int L) const {
        if (layers > 0) {
            return layers;
        }
        return model.bc == Boundary::periodic ? L : L + 1;
    }
};

struct ValidationReport {
    std::vector<std::string> defaulted;
    std::vector<std::string> violations;

    [[nodiscard]] bool ok() const { return violations.empty(); }

    [[nodiscard]] json to_json() const {
        return json{{"defaulted", defaulted}, {"valid", ok()}, {"violations", violations}};
    }
};

/// Thrown by run() when the configuration does not validate.
class ConfigError : public std::invalid_argument {
  public:
    explicit ConfigError(ValidationReport report)
        : std::invalid_argument("invalid configuration"), report_(std::move(report)) {}
    [[nodiscard]] const ValidationReport &report() const { return report_; }

  private:
    ValidationReport report_;
};

namespace detail {

class ConfigReader {
  public:
    ConfigReader(const json &root, ValidationReport &report) : root_(root), report_(report) {}

    /// Reads section.key into dst when present; records a default otherwise.
    template <class T> void get(const std::string &section, const std::string &key, T &dst) {
        const std::string path = section.empty() ? key : section + "." + key;
        known_[section].insert(key);
        if (!section.empty()) {
            known_[""].insert(section);
            auto sec = root_.find(section);
            if (sec != root_.end() && !sec->is_object() && !bad_sections_.count(section)) {
                bad_sections_.insert(section);
                report_.violations.push_back(section + ": expected an object");
            }
        }
        const json *node = lookup(section, key);
        if (node == nullptr) {
            report_.defaulted.push_back(path);
            return;
        }
        if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
            if (!node->is_number_integer() ||
                (std::is_unsigned_v<T> && !node->is_number_unsigned() &&
                 node->get<std::int64_t>() < 0)) {
                report_.violations.push_back(path + ": expected " +
                                             (std::is_unsigned_v<T> ? "a nonnegative integer"
                                                                    : "an integer"));
                return;
            }
        }
        try {
            dst = node->get<T>();
        } catch (const json::exception &) {
            report_.violations.push_back(path + ": wrong type (" + std::string(node->type_name()) +
                                         ")");
        }
    }

    [[nodiscard]] bool has(const std::string &section, const std::string &key) const {
        return lookup(section, key) != nullptr;
    }

    void mark_known(const std::string &section, const std::string &key) {
        known_[section].insert(key);
    }

    /// Lists keys that no reader consumed.
    void check_unknown() {
        for (const auto &[key, value] : root_.items()) {
            if (known_[""].count(key) == 0) {
                report_.violations.push_back(key + ": unknown key");
                continue;
            }
            if (value.is_object() && known_.count(key) != 0) {
                for (const auto &[sub, _] : value.items()) {
                    if (known_[key].count(sub) == 0) {
                        report_.violations.push_back(key + "." + sub + ": unknown key");
                    }
                }
            }
        }
    }

  private:
    [[nodiscard]] const json *lookup(const std::string &section, const std::string &key) const {
        const json *base = &root_;
        if (!section.empty()) {
            auto it = root_.find(section);
            if (it == root_.end() || !it->is_object()) {
                return nullptr;
            }
            base = &*it;
        }
        auto it = base->find(key);
        return it == base->end() || it->is_null() ? nullptr : &*it;
    }

    const json &root_;
    ValidationReport &report_;
    std::map<std::string, std::set<std::string>> known_;
    std::set<std::string> bad_sections_;
};

inline void check(ValidationReport &r, bool ok, const std::string &message) {
    if (!ok) {
        r.violations.push_back(message);
    }
}

} // namespace detail

/// Message for the first size above the exact-oracle cap, if any.
inline std::optional<std::string> oracle_cap_violation(const ExperimentConfig &c) {
    if (c.task == Task::noise_study) {
        return std::nullopt;
    }
    for (int L : c.sweep()) {
        if (L > kDenseQubitCap) {
            return "model: L = " + std::to_string(L) + " exceeds the exact oracle cap of " +
                   std::to_string(kDenseQubitCap) + " qubits";
        }
    }
    return std::nullopt;
}

/// Semantic checks on a parsed configuration; appends to `report`.
inline void validate_config(const ExperimentConfig &c, ValidationReport &report) {
    using detail::check;
    try {
        c.model.validate();
    } catch (const std::exception &e) {
        report.violations.push_back(std::string("model: ") + e.what());
    }
    for (int L : c.sizes) {
        check(report, L >= 2 && L <= 64, "sizes: L must lie in [2, 64], got " + std::to_string(L));
    }
    if (auto cap = oracle_cap_violation(c)) {
        report.violations.push_back(*cap);
    }
    check(report, c.layers >= 0, "ansatz.layers: must be >= 0");
    check(report, c.cost == "energy" || c.cost == "infidelity",
          "ansatz.cost: expected energy or infidelity");
    check(report, c.optimizer.budget >= 1, "optimizer.budget: must be >= 1");
    check(report, c.optimizer.restarts >= 1, "optimizer.restarts: must be >= 1");
    check(report, c.optimizer.patience >= 1, "optimizer.patience: must be >= 1");
    check(report, c.optimizer.improvement_tol >= 0.0, "optimizer.improvement_tol: must be >= 0");
    check(report, c.optimizer.gradient_tol > 0.0, "optimizer.gradient_tol: must be > 0");
    check(report, c.optimizer.simplex_size_tol > 0.0, "optimizer.simplex_size_tol: must be > 0");
    check(report, c.optimizer.restart_spread >= 0.0, "optimizer.restart_spread: must be >= 0");
    check(report, c.basis == "X" || c.basis == "Z" || c.basis == "both",
          "sampling.basis: expected X, Z or both");
    check(report, c.levels >= 1, "exact.levels: must be >= 1");
    if (c.supercharge_check) {
        check(report, c.model.lambda_3 > 0.0, "exact.supercharge_check: requires lambda_3 > 0");
        check(report, c.model.bc == Boundary::periodic,
              "exact.supercharge_check: requires periodic boundary");
    }
    check(report, c.correlator == "C" || c.correlator == "D" || c.correlator == "both",
          "correlators.kind: expected C, D or both");
    for (int L : c.sweep()) {
        if (c.task == Task::correlators) {
            check(report, c.correlator_site >= 1 && c.correlator_site < L,
                  "correlators.site: must lie in 1..L-1");
        }
    }
    check(report, c.fit_min >= 1, "correlators.fit_min: must be >= 1");
    check(report, c.fit_max >= 0, "correlators.fit_max: must be >= 0");
    check(report, c.ell_min >= 1, "entropy.ell_min: must be >= 1");
    check(report, c.ell_max >= 0, "entropy.ell_max: must be >= 0");
    check(report, c.vqd_levels >= 1, "vqd.levels: must be >= 1");
    check(report, c.vqd_weights.empty() || c.vqd_weights.size() >= static_cast<std::size_t>(c.vqd_levels),
          "vqd.weights: need one weight per deflated level");
    for (double w : c.vqd_weights) {
        check(report, w > 0.0, "vqd.weights: must be positive");
    }
    check(report, c.target_fidelity > 0.0 && c.target_fidelity < 1.0,
          "layer_scaling.target_fidelity: must lie in (0, 1)");
    check(report, c.max_extra_layers >= 0, "layer_scaling.max_extra_layers: must be >= 0");
    check(report, c.p01 >= 0.0 && c.p01 < 1.0 && c.p10 >= 0.0 && c.p10 < 1.0,
          "noise.p01/p10: must lie in [0, 1)");
    check(report, c.noise_qubits >= 1 && c.noise_qubits <= kDenseQubitCap,
          "noise.qubits: must lie in 1.." + std::to_string(kDenseQubitCap));
    check(report, c.noise_shots >= 1, "noise.shots: must be >= 1");
    check(report, c.noise_trials >= 1, "noise.trials: must be >= 1");
    check(report, c.task != Task::vqd || c.model.L <= kDeflationOracleCap,
          "vqd: L above " + std::to_string(kDeflationOracleCap) + " is not supported");
}

/// Parses `root` into a configuration, recording defaults and violations.
inline ExperimentConfig parse_config(const json &root, ValidationReport &report) {
    ExperimentConfig c;
    if (!root.is_object()) {
        report.violations.emplace_back("config: top level must be a JSON object");
        return c;
    }
    detail::ConfigReader r(root, report);

    r.mark_known("", "task");
    if (!r.has("", "task")) {
        report.violations.emplace_back("task: required");
    } else if (!root["task"].is_string() || !task_from_string(root["task"].get<std::string>())) {
        report.violations.push_back("task: unknown task " + root["task"].dump());
    } else {
        c.task = *task_from_string(root["task"].get<std::string>());
    }

    r.mark_known("", "model");
    if (!r.has("", "model")) {
        report.violations.emplace_back("model: required");
    } else if (root["model"].is_string()) {
        c.preset = root["model"].get<std::string>();
        if (auto p = model_preset(c.preset)) {
            c.model = *p;
        } else {
            report.violations.push_back("model: unknown preset '" + c.preset + "'");
        }
    } else if (root["model"].is_object()) {
        std::string bc = "open";
        r.get("model", "L", c.model.L);
        r.get("model", "lambda_i", c.model.lambda_i);
        r.get("model", "lambda_3", c.model.lambda_3);
        r.get("model", "boundary", bc);
        try {
            c.model.bc = boundary_from_string(bc);
        } catch (const std::exception &e) {
            report.violations.push_back(std::string("model.boundary: ") + e.what());
        }
    } else {
        report.violations.emplace_back("model: expected a preset name or an object");
    }

    r.get("", "sizes", c.sizes);
    r.get("", "seed", c.seed);
    r.get("", "output", c.output);

    r.get("ansatz", "layers", c.layers);
    r.get("ansatz", "cost", c.cost);

    std::string method(to_string(c.optimizer.method));
    r.get("optimizer", "method", method);
    try {
        c.optimizer.method = method_from_string(method);
    } catch (const std::exception &e) {
        report.violations.push_back(std::string("optimizer.method: ") + e.what());
    }
    r.get("optimizer", "budget", c.optimizer.budget);
    r.get("optimizer", "restarts", c.optimizer.restarts);
    r.get("optimizer", "patience", c.optimizer.patience);
    r.get("optimizer", "improvement_tol", c.optimizer.improvement_tol);
    r.get("optimizer", "gradient_tol", c.optimizer.gradient_tol);
    r.get("optimizer", "simplex_size_tol", c.optimizer.simplex_size_tol);
    r.get("optimizer", "restart_spread", c.optimizer.restart_spread);

    r.get("sampling", "shots", c.shots);
    r.get("sampling", "basis", c.basis);

    r.get("exact", "levels", c.levels);
    r.get("exact", "supercharge_check", c.supercharge_check);

    r.get("correlators", "kind", c.correlator);
    r.get("correlators", "site", c.correlator_site);
    r.get("correlators", "pair_average", c.pair_average);
    r.get("correlators", "fit_min", c.fit_min);
    r.get("correlators", "fit_max", c.fit_max);

    r.get("entropy", "ell_min", c.ell_min);
    r.get("entropy", "ell_max", c.ell_max);

    r.get("vqd", "levels", c.vqd_levels);
    r.get("vqd", "weights", c.vqd_weights);

    r.get("layer_scaling", "target_fidelity", c.target_fidelity);
    r.get("layer_scaling", "max_extra_layers", c.max_extra_layers);

    r.get("noise", "calibration", c.calibration);
    r.get("noise", "p01", c.p01);
    r.get("noise", "p10", c.p10);
    r.get("noise", "qubits", c.noise_qubits);
    r.get("noise", "shots", c.noise_shots);
    r.get("noise", "trials", c.noise_trials);

    r.check_unknown();
    if (report.ok()) {
        validate_config(c, report);
    }
    return c;
}

/// Effective configuration with every knob spelled out.
inline json config_to_json(const ExperimentConfig &c) {
    json j;
    j["task"] = std::string(to_string(c.task));
    j["model"] = json{{"L", c.model.L},
                      {"lambda_i", c.model.lambda_i},
                      {"lambda_3", c.model.lambda_3},
                      {"boundary", std::string(to_string(c.model.bc))}};
    j["sizes"] = c.sweep();
    j["seed"] = c.seed;
    j["output"] = c.output;
    j["ansatz"] = json{{"layers", c.layers}, {"cost", c.cost}};
    j["optimizer"] = json{{"method", std::string(to_string(c.optimizer.method))},
                          {"budget", c.optimizer.budget},
                          {"restarts", c.optimizer.restarts},
                          {"patience", c.optimizer.patience},
                          {"improvement_tol", c.optimizer.improvement_tol},
                          {"gradient_tol", c.optimizer.gradient_tol},
                          {"simplex_size_tol", c.optimizer.simplex_size_tol},
                          {"restart_spread", c.optimizer.restart_spread}};
    j["sampling"] = json{{"shots", c.shots}, {"basis", c.basis}};
    j["exact"] = json{{"levels", c.levels}, {"supercharge_check", c.supercharge_check}};
    j["correlators"] = json{{"kind", c.correlator},
                            {"site", c.correlator_site},
                            {"pair_average", c.pair_average},
                            {"fit_min", c.fit_min},
                            {"fit_max", c.fit_max}};
    j["entropy"] = json{{"ell_min", c.ell_min}, {"ell_max", c.ell_max}};
    j["vqd"] = json{{"levels", c.vqd_levels}, {"weights", c.vqd_weights}};
    j["layer_scaling"] =
        json{{"target_fidelity", c.target_fidelity}, {"max_extra_layers", c.max_extra_layers}};
    j["noise"] = json{{"calibration", c.calibration}, {"p01", c.p01},          {"p10", c.p10},
                      {"qubits", c.noise_qubits},     {"shots", c.noise_shots}, {"trials", c.noise_trials}};
    return j;
}

} // namespace tcilab
