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

// Command-line front end:
//   tcilab run --config <path> [--seed <u64>] [--out <dir>]
//   tcilab validate --config <path>
//
// Exit status: 0 success, 1 runtime failure, 2 invalid configuration,
// 3 oracle size cap exceeded. Failures print a JSON error report on stdout.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "tcilab/experiment.hpp"

namespace {

using tcilab::json;

enum Exit { kOk = 0, kRuntime = 1, kConfig = 2, kCap = 3 };

int report_error(std::string_view kind, const std::string &message,
                 const tcilab::ValidationReport *report = nullptr) {
    json j{{"status", "error"}, {"kind", kind}, {"message", message}};
    if (report != nullptr) {
        j["violations"] = report->violations;
    }
    std::cout << j.dump(2) << '\n';
    return kind == "config" ? kConfig : kind == "cap" ? kCap : kRuntime;
}

/// Reads the config file and applies command-line overrides.
std::optional<json> load(const std::string &path, std::optional<std::uint64_t> seed,
                         const std::optional<std::string> &out, std::string &error) {
    std::ifstream f(path);
    if (!f) {
        error = "cannot open config " + path;
        return std::nullopt;
    }
    json root = json::parse(f, nullptr, false);
    if (root.is_discarded()) {
        error = "config " + path + " is not valid JSON";
        return std::nullopt;
    }
    if (!root.is_object()) {
        return root;
    }
    if (seed) {
        root["seed"] = *seed;
    }
    if (out) {
        root["output"] = *out;
    }
    // Calibration files are looked up next to the config when given relatively.
    if (auto n = root.find("noise"); n != root.end() && n->is_object()) {
        if (auto cal = n->find("calibration"); cal != n->end() && cal->is_string()) {
            const std::filesystem::path p(cal->get<std::string>());
            if (!p.empty() && p.is_relative()) {
                const auto beside = std::filesystem::path(path).parent_path() / p;
                if (!std::filesystem::exists(p) && std::filesystem::exists(beside)) {
                    *cal = beside.string();
                }
            }
        }
    }
    return root;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"tcilab: tricritical Ising chain simulation laboratory"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(tcilab::kVersion));

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;

    auto *run = app.add_subcommand("run", "execute a configured experiment");
    run->add_option("--config", config_path, "JSON configuration file")->required();
    run->add_option("--seed", seed, "override the master seed");
    run->add_option("--out", out, "override the output directory");

    auto *val = app.add_subcommand("validate", "report defaults and violations without running");
    val->add_option("--config", config_path, "JSON configuration file")->required();

    CLI11_PARSE(app, argc, argv);

    std::string error;
    const auto root = load(config_path, seed, out, error);
    if (!root) {
        return report_error("config", error);
    }

    if (val->parsed()) {
        const tcilab::ValidationReport r = tcilab::validate(*root);
        std::cout << r.to_json().dump(2) << '\n';
        return r.ok() ? kOk : kConfig;
    }

    try {
        const tcilab::RunManifest m = tcilab::run(*root);
        json summary{{"status", "ok"},
                     {"output", m.config["output"]},
                     {"artifacts", json::array()},
                     {"wall_seconds", m.wall_seconds}};
        for (const auto &a : m.artifacts) {
            summary["artifacts"].push_back(a.file);
        }
        summary["results"] = m.results["results"];
        std::cout << summary.dump(2) << '\n';
        return kOk;
    } catch (const tcilab::ConfigError &e) {
        return report_error("config", e.what(), &e.report());
    } catch (const tcilab::CapExceeded &e) {
        return report_error("cap", e.what());
    } catch (const std::exception &e) {
        return report_error("runtime", e.what());
    }
}
