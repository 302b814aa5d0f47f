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

#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tcilab/experiment.hpp"

using namespace tcilab;
namespace fs = std::filesystem;

namespace {

class TempDir {
  public:
    TempDir() {
        path_ = fs::temp_directory_path() /
                ("tcilab-test-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                 "-" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    [[nodiscard]] std::string sub(const std::string &name) const { return (path_ / name).string(); }

  private:
    fs::path path_;
};

bool contains(const std::vector<std::string> &v, const std::string &needle) {
    return std::any_of(v.begin(), v.end(),
                       [&](const std::string &s) { return s.find(needle) != std::string::npos; });
}

std::string slurp(const std::string &path) {
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> csv_rows(const std::string &path) {
    std::ifstream f(path);
    std::string line;
    std::vector<std::vector<std::string>> rows;
    std::getline(f, line); // header
    while (std::getline(f, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cells.push_back(cell);
        }
        rows.push_back(cells);
    }
    return rows;
}

} // namespace

TEST(Config, task_names_round_trip) {
    for (const auto &[task, name] : kTaskNames) {
        ASSERT_EQ(task_from_string(name), task);
        ASSERT_EQ(to_string(task), name);
    }
    EXPECT_FALSE(task_from_string("fit"));
}

TEST(Config, minimal_preset_is_valid_and_lists_defaults) {
    ValidationReport r;
    const auto c = parse_config(json{{"task", "correlators"}, {"model", "tci-open-8"}}, r);
    EXPECT_TRUE(r.ok()) << r.to_json().dump();
    EXPECT_TRUE(contains(r.defaulted, "optimizer.budget"));
    EXPECT_TRUE(contains(r.defaulted, "seed"));
    EXPECT_FALSE(contains(r.defaulted, "model"));
    EXPECT_EQ(c.model.L, 8);
    EXPECT_EQ(c.model.bc, Boundary::open);
    EXPECT_EQ(c.task, Task::correlators);
    EXPECT_EQ(c.layers_for(8), 9);
}

TEST(Config, missing_fields_are_violations) {
    ValidationReport r;
    parse_config(json{{"task", "vqe"}}, r);
    EXPECT_TRUE(contains(r.violations, "model: required"));
    ValidationReport r2;
    parse_config(json{{"model", "tci-pbc-5"}}, r2);
    EXPECT_TRUE(contains(r2.violations, "task: required"));
    ValidationReport r3;
    parse_config(json::array(), r3);
    EXPECT_FALSE(r3.ok());
}

TEST(Config, supercharge_check_needs_positive_three_spin_coupling) {
    const json base{{"task", "exact-solve"},
                    {"model", {{"L", 6}, {"lambda_3", 0.0}, {"boundary", "periodic"}}},
                    {"exact", {{"supercharge_check", true}}}};
    EXPECT_TRUE(contains(validate(base).violations, "lambda_3 > 0"));
    json ok = base;
    ok["model"]["lambda_3"] = 0.856;
    EXPECT_TRUE(validate(ok).ok()) << validate(ok).to_json().dump();
    json open = ok;
    open["model"]["boundary"] = "open";
    EXPECT_TRUE(contains(validate(open).violations, "periodic"));
}

TEST(Config, type_unknown_key_and_range_violations) {
    const json j{{"task", "vqe"},
                 {"model", "tci-pbc-4"},
                 {"seed", -3},
                 {"optimizer", {{"budget", 2.5}, {"learning_rate", 0.1}}},
                 {"sampling", {{"basis", "Y"}}},
                 {"colour", "blue"}};
    const auto r = validate(j);
    EXPECT_TRUE(contains(r.violations, "seed: expected a nonnegative integer"));
    EXPECT_TRUE(contains(r.violations, "optimizer.budget: expected"));
    EXPECT_TRUE(contains(r.violations, "optimizer.learning_rate: unknown key"));
    EXPECT_TRUE(contains(r.violations, "colour: unknown key"));
    const auto r2 = validate(json{{"task", "vqe"}, {"model", "tci-pbc-4"}, {"sampling", {{"basis", "Y"}}}});
    EXPECT_TRUE(contains(r2.violations, "sampling.basis"));
    EXPECT_TRUE(contains(validate(json{{"task", "vqe"}, {"model", "tci-ring-4"}}).violations,
                         "unknown preset"));
    EXPECT_TRUE(contains(validate(json{{"task", "vqe"}, {"model", "tci-pbc-4"}, {"optimizer", 3}}).violations,
                         "optimizer: expected an object"));
}

TEST(Config, oracle_cap_is_reported) {
    const json j{{"task", "gap-ratios"}, {"model", "tci-pbc-8"}, {"sizes", {15}}};
    EXPECT_TRUE(contains(validate(j).violations, "exceeds the exact oracle cap"));
    EXPECT_THROW(run(j), CapExceeded);
}

TEST(Config, echo_is_complete_and_round_trips) {
    ValidationReport r;
    const auto c = parse_config(json{{"task", "layer-scaling"}, {"model", "tci-open-5"}, {"sizes", {4, 5}}}, r);
    ASSERT_TRUE(r.ok());
    const json echo = config_to_json(c);
    ValidationReport again;
    const auto c2 = parse_config(echo, again);
    EXPECT_TRUE(again.ok()) << again.to_json().dump();
    EXPECT_TRUE(again.defaulted.empty()) << json(again.defaulted).dump();
    EXPECT_EQ(config_to_json(c2), echo);
}

TEST(Digest, sha256_known_vector) {
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Digest, thread_env_parsing) {
    ::setenv("TCILAB_THREADS", "3", 1);
    EXPECT_EQ(threads_from_env(), 3);
    ::setenv("TCILAB_THREADS", "three", 1);
    EXPECT_THROW(threads_from_env(), DomainError);
    ::unsetenv("TCILAB_THREADS");
    EXPECT_EQ(threads_from_env(), 1);
}

TEST(Run, gap_ratio_table_matches_published_exact_column) {
    TempDir tmp;
    const json j{{"task", "gap-ratios"},
                 {"model", "tci-pbc-3"},
                 {"sizes", {3, 4, 5, 6, 7, 8}},
                 {"output", tmp.sub("gap")}};
    const RunManifest m = run(j);
    ASSERT_NE(m.find("tableII_r2.csv"), nullptr);
    ASSERT_NE(m.find("fig6_ratios.csv"), nullptr);
    const std::vector<double> published{0.236010, 0.288045, 0.315029, 0.332215, 0.342204, 0.348891};
    const auto rows = csv_rows(tmp.sub("gap/tableII_r2.csv"));
    ASSERT_EQ(rows.size(), published.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(std::stoi(rows[i][0]), static_cast<int>(i) + 3);
        EXPECT_NEAR(std::stod(rows[i][1]), published[i], 1e-5);
    }
    EXPECT_TRUE(fs::exists(tmp.sub("gap/manifest.json")));
}

TEST(Run, correlator_pipeline_exponent_in_band) {
    TempDir tmp;
    const RunManifest m =
        run(json{{"task", "correlators"}, {"model", "tci-open-8"}, {"output", tmp.sub("c")}});
    const double e = m.results["results"]["8"]["C"]["exponent"].get<double>();
    EXPECT_GE(e, -1.6);
    EXPECT_LE(e, -1.2);
    const auto rows = csv_rows(tmp.sub("c/fig1_correlators.csv"));
    EXPECT_EQ(rows.size(), 14U);
}

TEST(Run, identical_config_and_seed_reproduce_digests) {
    TempDir tmp;
    const std::vector<json> configs{
        json{{"task", "entropy"}, {"model", "tci-pbc-6"}, {"sampling", {{"shots", 3000}}}},
        json{{"task", "vqe"}, {"model", "tci-pbc-3"}, {"optimizer", {{"restarts", 3}, {"budget", 200}}}},
        json{{"task", "correlators"}, {"model", "tci-pbc-5"}, {"sampling", {{"shots", 500}}}},
        json{{"task", "noise-study"},
             {"model", "tci-pbc-3"},
             {"noise", {{"p01", 0.02}, {"p10", 0.01}, {"qubits", 3}, {"shots", 2000}, {"trials", 3}}}},
    };
    int i = 0;
    for (json c : configs) {
        c["seed"] = 99;
        c["output"] = tmp.sub("a" + std::to_string(i));
        const RunManifest a = run(c);
        c["output"] = tmp.sub("b" + std::to_string(i));
        const RunManifest b = run(c);
        ASSERT_EQ(a.artifacts.size(), b.artifacts.size());
        for (std::size_t k = 0; k < a.artifacts.size(); ++k) {
            EXPECT_EQ(a.artifacts[k].file, b.artifacts[k].file);
            EXPECT_EQ(a.artifacts[k].sha256, b.artifacts[k].sha256) << a.artifacts[k].file;
            EXPECT_EQ(sha256_hex(slurp(tmp.sub("a" + std::to_string(i)) + "/" + a.artifacts[k].file)),
                      a.artifacts[k].sha256);
        }
        c["seed"] = 100;
        c["output"] = tmp.sub("c" + std::to_string(i));
        const RunManifest d = run(c);
        const Artifact *csv = nullptr;
        for (const auto &art : d.artifacts) {
            if (art.file.ends_with(".csv")) {
                csv = &art;
                break;
            }
        }
        ASSERT_NE(csv, nullptr);
        EXPECT_NE(csv->sha256, a.find(csv->file)->sha256) << "seed had no effect on " << csv->file;
        ++i;
    }
}

TEST(Run, manifest_is_stable_key_ordered_and_echoes_config) {
    TempDir tmp;
    const RunManifest m = run(json{{"task", "exact-solve"}, {"model", "tci-open-5"}, {"output", tmp.sub("e")}});
    const json disk = json::parse(slurp(tmp.sub("e/manifest.json")));
    EXPECT_EQ(disk["config"], m.config);
    EXPECT_EQ(disk["config"]["optimizer"]["budget"], 20000);
    EXPECT_EQ(disk["version"], std::string(kVersion));
    std::vector<std::string> keys;
    for (const auto &[k, _] : disk.items()) {
        keys.push_back(k);
    }
    EXPECT_TRUE(std::is_sorted(keys.begin(), keys.end()));
    const auto rows = csv_rows(tmp.sub("e/spectrum.csv"));
    ASSERT_EQ(rows.size(), 4U);
    EXPECT_TRUE(rows[0][3] == "parity+" || rows[0][3] == "parity-");
}

TEST(Run, invalid_config_throws_with_report) {
    try {
        run(json{{"task", "vqe"}});
        FAIL() << "expected ConfigError";
    } catch (const ConfigError &e) {
        EXPECT_TRUE(contains(e.report().violations, "model: required"));
    }
}

TEST(Run, supercharge_residuals_are_reported) {
    TempDir tmp;
    const RunManifest m = run(json{{"task", "exact-solve"},
                                   {"model", "tci-pbc-4"},
                                   {"exact", {{"supercharge_check", true}}},
                                   {"output", tmp.sub("s")}});
    const json &r = m.results["results"]["4"];
    EXPECT_LT(r["supercharge_residual_majorana"].get<double>(), 1e-10);
    EXPECT_TRUE(r.contains("supercharge_residual_spin"));
}
