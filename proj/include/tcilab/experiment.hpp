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
 * Task pipelines behind the command-line front end. A run writes its CSV
 * artifacts, results.json and manifest.json into one output directory.
 *
 * Requires OpenSSL (libcrypto) for artifact digests; link tcilab_experiment.
 */

#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include "tcilab/analysis.hpp"
#include "tcilab/config.hpp"
#include "tcilab/exact.hpp"
#include "tcilab/model.hpp"
#include "tcilab/sampling.hpp"
#include "tcilab/variational.hpp"

namespace tcilab {

inline constexpr std::string_view kVersion = "0.1.0";

/// Hex SHA-256 of a byte string.
inline std::string sha256_hex(std::string_view data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 digest failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += kHex[md[i] >> 4];
        out += kHex[md[i] & 15];
    }
    return out;
}

struct Artifact {
    std::string file;
    std::string sha256;
    std::uint64_t bytes = 0;
};

struct RunManifest {
    json config;
    std::string version{kVersion};
    std::uint64_t seed = 0;
    double wall_seconds = 0.0;
    std::string started_utc;
    int threads = 1;
    std::vector<Artifact> artifacts;
    json results;

    [[nodiscard]] json to_json() const {
        json files = json::array();
        for (const auto &a : artifacts) {
            files.push_back(json{{"bytes", a.bytes}, {"file", a.file}, {"sha256", a.sha256}});
        }
        return json{{"artifacts", files},      {"config", config},
                    {"seed", seed},            {"started_utc", started_utc},
                    {"threads", threads},      {"version", version},
                    {"wall_seconds", wall_seconds}};
    }

    [[nodiscard]] const Artifact *find(std::string_view file) const {
        for (const auto &a : artifacts) {
            if (a.file == file) {
                return &a;
            }
        }
        return nullptr;
    }
};

/// Thread count from TCILAB_THREADS (default 1).
inline int threads_from_env() {
    const char *v = std::getenv("TCILAB_THREADS");
    if (v == nullptr || *v == '\0') {
        return 1;
    }
    char *end = nullptr;
    const long n = std::strtol(v, &end, 10);
    if (*end != '\0' || n < 1 || n > 1024) {
        throw DomainError(std::string("TCILAB_THREADS must be a positive integer, got '") + v + "'");
    }
    return static_cast<int>(n);
}

namespace detail {

/// Text that reads back to the same double.
inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class ArtifactWriter {
  public:
    explicit ArtifactWriter(std::filesystem::path dir) : dir_(std::move(dir)) {}

    void write(const std::string &name, const std::string &content) {
        std::ofstream f(dir_ / name, std::ios::binary | std::ios::trunc);
        if (!f) {
            throw std::runtime_error("cannot write " + (dir_ / name).string());
        }
        f << content;
        if (!f) {
            throw std::runtime_error("write failed for " + (dir_ / name).string());
        }
        artifacts_.push_back({name, sha256_hex(content), content.size()});
    }

    [[nodiscard]] std::vector<Artifact> take() { return std::move(artifacts_); }

  private:
    std::filesystem::path dir_;
    std::vector<Artifact> artifacts_;
};

/// Derived per-purpose seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t purpose) {
    return CounterRng(master, purpose).at(0);
}

enum SeedPurpose : std::uint64_t {
    kSeedOptimizer = 1,
    kSeedSampling = 2,
    kSeedNoise = 3,
    kSeedStates = 4,
};

struct Ground {
    double energy = 0.0;
    StateVector state;
};

/// Exact ground state, sector-resolved when the Hamiltonian conserves spin-flip parity.
inline Ground exact_ground(const ModelSpec &spec) {
    const Observable h = build_hamiltonian(spec);
    if (commutes_with_spin_flip(h) && spec.L >= 2) {
        auto [even, odd] = parity_resolved(h, 1);
        if (odd.energies[0] < even.energies[0]) {
            return {odd.energies[0], odd.states[0]};
        }
        return {even.energies[0], even.states[0]};
    }
    auto s = eigensolve(h, 1);
    return {s.energies[0], s.states[0]};
}

/// Haar-like random state from Box-Muller normals on a counter stream.
inline StateVector random_state(int n, CounterRng rng) {
    std::vector<cplx> a(std::size_t{1} << n);
    for (auto &x : a) {
        const double u1 = 1.0 - rng.uniform();
        const double u2 = rng.uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        x = {r * std::cos(2 * std::numbers::pi * u2), r * std::sin(2 * std::numbers::pi * u2)};
    }
    StateVector s(n, std::move(a));
    s.normalize();
    return s;
}

inline std::vector<char> bases(const ExperimentConfig &c) {
    if (c.basis == "both") {
        return {'X', 'Z'};
    }
    return {c.basis[0]};
}

/// Basis-configuration probabilities, exact or from sampled shots.
inline std::vector<double> config_probabilities(const ExperimentConfig &c, const StateVector &psi,
                                                char basis, std::uint64_t stream) {
    if (c.shots == 0) {
        return basis_probabilities(psi, basis);
    }
    const std::uint64_t seed = derive_seed(c.seed, kSeedSampling) + stream;
    return sample(psi, MeasurementBasis::uniform(psi.num_qubits(), basis), c.shots, seed)
        .distribution();
}

inline OptimizerOptions optimizer_for(const ExperimentConfig &c, int threads) {
    OptimizerOptions o = c.optimizer;
    o.threads = threads;
    return o;
}

inline std::string angle_rows(const AnsatzParams &p) {
    std::ostringstream out;
    out << "name,value\n";
    for (int m = 2; m <= p.layers; ++m) {
        out << "alpha_" << m << ',' << num(p.alpha(m)) << '\n';
    }
    for (std::size_t m = 0; m < p.betas.size(); ++m) {
        out << "beta_" << m + 1 << ',' << num(p.betas[m]) << '\n';
    }
    for (std::size_t m = 0; m < p.gammas.size(); ++m) {
        out << "gamma_" << m + 1 << ',' << num(p.gammas[m]) << '\n';
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Tasks
// ---------------------------------------------------------------------------

inline json run_exact_solve(const ExperimentConfig &c, ArtifactWriter &w) {
    std::ostringstream csv;
    csv << "L,level,energy,sector\n";
    json res = json::object();
    std::ostringstream susy;
    susy << "L,residual_spin,residual_majorana\n";
    for (int L : c.sweep()) {
        ModelSpec spec = c.model;
        spec.L = L;
        const Observable h = build_hamiltonian(spec);
        std::vector<std::pair<double, std::string>> levels;
        if (commutes_with_spin_flip(h)) {
            auto [even, odd] = parity_resolved(h, std::min(c.levels, 1 << (L - 1)));
            for (double e : even.energies) {
                levels.emplace_back(e, std::string(to_string(Sector::even)));
            }
            for (double e : odd.energies) {
                levels.emplace_back(e, std::string(to_string(Sector::odd)));
            }
            std::stable_sort(levels.begin(), levels.end(),
                             [](const auto &a, const auto &b) { return a.first < b.first; });
            levels.resize(std::min(levels.size(), static_cast<std::size_t>(c.levels)));
        } else {
            for (double e : eigensolve(h, std::min(c.levels, 1 << L)).energies) {
                levels.emplace_back(e, std::string(to_string(Sector::all)));
            }
        }
        json energies = json::array();
        for (std::size_t k = 0; k < levels.size(); ++k) {
            csv << L << ',' << k << ',' << num(levels[k].first) << ',' << levels[k].second << '\n';
            energies.push_back(levels[k].first);
        }
        res[std::to_string(L)] = json{{"energies", energies}};
        if (c.supercharge_check) {
            const Observable qp = build_supercharge(Sign::plus, spec);
            const Observable qm = build_supercharge(Sign::minus, spec);
            const Observable sq = qp * qp + qm * qm;
            const Observable id = Observable::identity(L, energy_shift(spec));
            const double spin = observable_max_norm(sq - build_hamiltonian(spec, true));
            const Observable maj = build_ising_majorana(spec) * cplx(2.0 * spec.lambda_i) +
                                   build_h3_majorana(spec) * cplx(spec.lambda_3) + id;
            const double majorana = observable_max_norm(sq - maj);
            susy << L << ',' << num(spin) << ',' << num(majorana) << '\n';
            res[std::to_string(L)]["supercharge_residual_spin"] = spin;
            res[std::to_string(L)]["supercharge_residual_majorana"] = majorana;
        }
    }
    w.write("spectrum.csv", csv.str());
    if (c.supercharge_check) {
        w.write("supercharge.csv", susy.str());
    }
    return res;
}

inline json run_vqe(const ExperimentConfig &c, ArtifactWriter &w, int threads) {
    const ModelSpec &spec = c.model;
    const int M = c.layers_for(spec.L);
    const Ground g = exact_ground(spec);
    const CostSpec cost = c.cost == "infidelity" ? CostSpec::infidelity(g.state) : CostSpec::energy();
    const OptResult r =
        optimize(cost, spec, M, optimizer_for(c, threads), derive_seed(c.seed, kSeedOptimizer));
    const StateVector psi = AnsatzCircuit(spec.L, spec.bc).prepare(r.params);
    const double energy = expectation(psi, build_hamiltonian(spec));
    const double fid = fidelity(psi, g.state);

    std::ostringstream hist;
    hist << "iteration,best_cost\n";
    for (std::size_t i = 0; i < r.history.size(); ++i) {
        hist << i << ',' << num(r.history[i]) << '\n';
    }
    w.write("vqe_angles.csv", angle_rows(r.params));
    w.write("vqe_history.csv", hist.str());
    return json{{"L", spec.L},
                {"layers", M},
                {"cost_kind", c.cost},
                {"cost", r.cost},
                {"energy", energy},
                {"exact_energy", g.energy},
                {"excess_energy_density", (energy - g.energy) / spec.L},
                {"fidelity", fid},
                {"infidelity", 1.0 - fid},
                {"evaluations", r.evaluations},
                {"converged", r.converged},
                {"restart", r.restart}};
}

inline json run_vqd(const ExperimentConfig &c, ArtifactWriter &w, int threads) {
    const ModelSpec &spec = c.model;
    const int M = c.layers_for(spec.L);
    const Observable h = build_hamiltonian(spec);
    const auto ladder = vqd_ladder(spec, M, c.vqd_levels, c.vqd_weights, optimizer_for(c, threads),
                                   derive_seed(c.seed, kSeedOptimizer));
    const int want = std::min(c.vqd_levels + 4, 1 << spec.L);
    const SpectrumSlice exact = eigensolve(h, want);
    const AnsatzCircuit circ(spec.L, spec.bc);
    const Observable flip = spin_flip(spec.L);

    std::ostringstream csv;
    csv << "level,energy,exact_energy,overlap,parity\n";
    json levels = json::array();
    std::vector<double> even;
    std::vector<double> odd;
    for (std::size_t k = 0; k < ladder.size(); ++k) {
        const StateVector psi = circ.prepare(ladder[k].params);
        const double e = expectation(psi, h);
        // Overlap with the exact eigenspace of level k (degenerate partners included).
        double weight = 0.0;
        for (std::size_t j = 0; j < exact.energies.size(); ++j) {
            if (std::abs(exact.energies[j] - exact.energies[k]) < 1e-8) {
                weight += std::norm(exact.states[j].inner(psi));
            }
        }
        const double overlap = std::sqrt(weight);
        const double parity = expectation(psi, flip);
        (parity >= 0.0 ? even : odd).push_back(e);
        csv << k << ',' << num(e) << ',' << num(exact.energies[k]) << ',' << num(overlap) << ','
            << num(parity) << '\n';
        levels.push_back(json{{"energy", e},
                              {"exact_energy", exact.energies[k]},
                              {"overlap", overlap},
                              {"parity", parity},
                              {"cost", ladder[k].cost},
                              {"converged", ladder[k].converged}});
    }
    w.write("vqd_levels.csv", csv.str());
    json res{{"L", spec.L}, {"layers", M}, {"levels", levels}};
    if (even.size() >= 2 && !odd.empty() && spec.bc == Boundary::periodic) {
        std::sort(even.begin(), even.end());
        std::sort(odd.begin(), odd.end());
        res["r2"] = (odd[0] - even[0]) / (even[1] - even[0]);
        auto [ev, od] = parity_resolved(h, 2);
        res["r2_exact"] = gap_ratios(ev, od, spec.L).r2;
    }
    return res;
}

inline json run_correlators(const ExperimentConfig &c, ArtifactWriter &w) {
    std::ostringstream csv;
    csv << "L,kind,separation,j,k,value,stderr\n";
    json res = json::object();
    std::uint64_t stream = 0;
    for (int L : c.sweep()) {
        ModelSpec spec = c.model;
        spec.L = L;
        const Ground g = exact_ground(spec);
        json fits = json::object();
        for (CorrelatorKind kind : {CorrelatorKind::C, CorrelatorKind::D}) {
            const std::string name = kind == CorrelatorKind::C ? "C" : "D";
            if (c.correlator != "both" && c.correlator != name) {
                continue;
            }
            CorrelatorSeries s;
            if (c.shots > 0) {
                s = correlator_series_shots(g.state, kind, spec, c.shots,
                                            derive_seed(c.seed, kSeedSampling) + 100000 * stream++,
                                            c.correlator_site);
            } else if (c.pair_average) {
                s = correlator_series_averaged(g.state, kind, spec);
            } else {
                s = correlator_series(g.state, kind, spec, c.correlator_site);
            }
            for (const auto &p : s.points) {
                csv << L << ',' << name << ',' << p.separation << ',' << p.j << ',' << p.k << ','
                    << num(p.value) << ',' << num(p.stderr_) << '\n';
            }
            const PowerLawFit f = fit_power_law(s, c.fit_min, c.fit_max);
            fits[name] = json{{"exponent", f.exponent},
                              {"amplitude", f.amplitude},
                              {"residual", f.residual},
                              {"points", f.points}};
        }
        res[std::to_string(L)] = fits;
    }
    w.write("fig1_correlators.csv", csv.str());
    return res;
}

struct CentralChargeRow {
    int L;
    std::string source;
    CentralChargeFit fit;
};

/// MI curves (per basis) and the entanglement curve for every size; fits per source.
inline std::vector<CentralChargeRow> entropy_sweep(const ExperimentConfig &c, ArtifactWriter &w) {
    std::ostringstream mi;
    mi << "L,basis,ell,mi\n";
    std::ostringstream ee;
    ee << "L,ell,entropy\n";
    std::vector<CentralChargeRow> rows;
    std::uint64_t stream = 0;
    for (int L : c.sweep()) {
        ModelSpec spec = c.model;
        spec.L = L;
        const Ground g = exact_ground(spec);
        for (char b : bases(c)) {
            const auto probs = config_probabilities(c, g.state, b, stream++);
            const auto curve = mutual_information_curve(probs, L);
            for (int ell = 1; ell < L; ++ell) {
                mi << L << ',' << b << ',' << ell << ','
                   << num(curve[static_cast<std::size_t>(ell - 1)]) << '\n';
            }
            CentralChargeFit f = fit_central_charge(curve, L, c.ell_min, c.ell_max);
            f.source = b == 'X' ? CentralChargeSource::shannon_x : CentralChargeSource::shannon_z;
            rows.push_back({L, std::string("shannon-") + b, f});
        }
        const auto curve = entanglement_curve(g.state);
        for (int ell = 1; ell < L; ++ell) {
            ee << L << ',' << ell << ',' << num(curve[static_cast<std::size_t>(ell - 1)]) << '\n';
        }
        rows.push_back({L, "entanglement", fit_central_charge_ee(curve, L, c.ell_min, c.ell_max)});
    }
    w.write("fig4_mi.csv", mi.str());
    w.write("entanglement.csv", ee.str());
    return rows;
}

inline json fits_json(const std::vector<CentralChargeRow> &rows) {
    json res = json::object();
    for (const auto &r : rows) {
        res[r.source][std::to_string(r.L)] =
            json{{"c", r.fit.c}, {"intercept", r.fit.intercept}, {"ell_min", r.fit.ell_min},
                 {"ell_max", r.fit.ell_max}};
    }
    return res;
}

inline json run_entropy(const ExperimentConfig &c, ArtifactWriter &w) {
    return json{{"fits", fits_json(entropy_sweep(c, w))}};
}

inline json run_central_charge(const ExperimentConfig &c, ArtifactWriter &w) {
    const auto rows = entropy_sweep(c, w);
    std::ostringstream csv;
    csv << "source,L,c\n";
    std::map<std::string, std::vector<std::pair<int, double>>> series;
    for (const auto &r : rows) {
        csv << r.source << ',' << r.L << ',' << num(r.fit.c) << '\n';
        series[r.source].emplace_back(r.L, r.fit.c);
    }
    json res{{"fits", fits_json(rows)}};
    json extrap = json::object();
    for (const auto &[source, pts] : series) {
        if (pts.size() >= 3) {
            const auto e = extrapolate_quadratic(pts);
            extrap[source] = json{{"c_inf", e.c_inf}, {"a1", e.a1}, {"a2", e.a2}};
            csv << source << ",inf," << num(e.c_inf) << '\n';
        }
    }
    res["extrapolation"] = extrap;
    w.write("fig5_extrapolation.csv", csv.str());
    return res;
}

inline json run_gap_ratios(const ExperimentConfig &c, ArtifactWriter &w) {
    std::ostringstream t2;
    t2 << "L,r2\n";
    std::ostringstream f6;
    f6 << "L,r2,r3\n";
    json res = json::object();
    for (int L : c.sweep()) {
        ModelSpec spec = c.model;
        spec.L = L;
        auto [even, odd] = parity_resolved(build_hamiltonian(spec), 2);
        const GapRatios g = gap_ratios(even, odd, L);
        t2 << L << ',' << num(g.r2) << '\n';
        f6 << L << ',' << num(g.r2) << ',' << num(g.r3) << '\n';
        res[std::to_string(L)] = json{{"r2", g.r2}, {"r3", g.r3}};
    }
    w.write("tableII_r2.csv", t2.str());
    w.write("fig6_ratios.csv", f6.str());
    return json{{"ratios", res}, {"r2_limit", kR2Limit}, {"r3_limit", kR3Limit}};
}

inline json run_layer_scaling(const ExperimentConfig &c, ArtifactWriter &w, int threads) {
    const auto rows =
        layer_scaling_study(c.sweep(), c.model.bc, c.target_fidelity, c.max_extra_layers,
                            optimizer_for(c, threads), derive_seed(c.seed, kSeedOptimizer));
    std::ostringstream summary;
    summary << "L,minimal_layers,reached\n";
    std::ostringstream curve;
    curve << "L,layers,infidelity\n";
    json res = json::object();
    for (const auto &r : rows) {
        summary << r.L << ',' << r.minimal_layers << ',' << (r.reached ? 1 : 0) << '\n';
        for (std::size_t m = 0; m < r.infidelity_by_layers.size(); ++m) {
            curve << r.L << ',' << m + 1 << ',' << num(r.infidelity_by_layers[m]) << '\n';
        }
        res[std::to_string(r.L)] = json{{"minimal_layers", r.minimal_layers},
                                        {"reached", r.reached},
                                        {"infidelity_by_layers", r.infidelity_by_layers}};
    }
    w.write("layer_scaling.csv", summary.str());
    w.write("layer_scaling_infidelity.csv", curve.str());
    return res;
}

inline json run_noise_study(const ExperimentConfig &c, ArtifactWriter &w) {
    const int n = c.noise_qubits;
    ReadoutModel model = c.calibration.empty() ? ReadoutModel::uniform(n, c.p01, c.p10)
                                               : read_calibration_csv(c.calibration).truncated(n);
    const std::uint64_t noise_seed = derive_seed(c.seed, kSeedNoise);
    const std::uint64_t sample_seed = derive_seed(c.seed, kSeedSampling);
    const MeasurementBasis zb = MeasurementBasis::uniform(n, 'Z');

    // Round trip on |0...0>.
    std::ostringstream rt;
    rt << "qubit,label,raw_z,mitigated_z,stderr,z_score\n";
    const CountsTable noisy0 = apply_readout_noise(sample(StateVector(n), zb, c.noise_shots, sample_seed),
                                                   model, noise_seed);
    double worst = 0.0;
    for (int q = 1; q <= n; ++q) {
        PauliString z(n);
        z.set(q, Pauli::Z);
        const PauliEstimate raw = estimate_pauli(noisy0, z);
        const PauliEstimate mit = mitigated_z(noisy0, model, q);
        const double dev = std::abs(mit.mean - 1.0);
        const double score = mit.stderr_ > 0.0 ? dev / mit.stderr_ : (dev > 1e-12 ? INFINITY : 0.0);
        worst = std::max(worst, score);
        rt << q << ',' << model.qubits[static_cast<std::size_t>(q - 1)].label << ','
           << num(raw.mean) << ',' << num(mit.mean) << ',' << num(mit.stderr_) << ','
           << num(score) << '\n';
    }
    w.write("noise_roundtrip.csv", rt.str());

    // Random states: mean absolute single-qubit <Z> error with and without mitigation.
    std::ostringstream tr;
    tr << "trial,unmitigated_error,mitigated_error,improved\n";
    int improved = 0;
    for (int t = 0; t < c.noise_trials; ++t) {
        const auto tt = static_cast<std::uint64_t>(t);
        const StateVector psi = random_state(n, CounterRng(derive_seed(c.seed, kSeedStates), tt));
        const auto probs = psi.probabilities();
        const CountsTable noisy = apply_readout_noise(
            sample(psi, zb, c.noise_shots, sample_seed + 1 + tt), model, noise_seed + 1 + tt);
        double raw_err = 0.0;
        double mit_err = 0.0;
        for (int q = 1; q <= n; ++q) {
            PauliString z(n);
            z.set(q, Pauli::Z);
            const double exact = parity_expectation(probs, 1ULL << (q - 1));
            raw_err += std::abs(estimate_pauli(noisy, z).mean - exact);
            mit_err += std::abs(mitigated_z(noisy, model, q).mean - exact);
        }
        raw_err /= n;
        mit_err /= n;
        const bool better = mit_err <= raw_err;
        improved += better ? 1 : 0;
        tr << t << ',' << num(raw_err) << ',' << num(mit_err) << ',' << (better ? 1 : 0) << '\n';
    }
    w.write("noise_trials.csv", tr.str());
    return json{{"qubits", n},
                {"shots", c.noise_shots},
                {"roundtrip_max_z_score", worst},
                {"trials", c.noise_trials},
                {"mitigation_improved", improved}};
}

inline std::string utc_now() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace detail

/// Parses and validates without executing.
inline ValidationReport validate(const json &root) {
    ValidationReport report;
    parse_config(root, report);
    return report;
}

/**
 * Executes the configured task. Throws ConfigError when the configuration
 * does not validate and CapExceeded when a size exceeds an oracle cap.
 */
inline RunManifest run(const ExperimentConfig &config) {
    if (auto cap = oracle_cap_violation(config)) {
        throw CapExceeded(*cap);
    }
    ValidationReport report;
    validate_config(config, report);
    if (!report.ok()) {
        throw ConfigError(report);
    }
    const auto start = std::chrono::steady_clock::now();
    const std::filesystem::path dir(config.output);
    std::filesystem::create_directories(dir);

    RunManifest m;
    m.config = config_to_json(config);
    m.seed = config.seed;
    m.started_utc = detail::utc_now();
    m.threads = threads_from_env();

    detail::ArtifactWriter w(dir);
    json results;
    switch (config.task) {
    case Task::exact_solve:
        results = detail::run_exact_solve(config, w);
        break;
    case Task::vqe:
        results = detail::run_vqe(config, w, m.threads);
        break;
    case Task::vqd:
        results = detail::run_vqd(config, w, m.threads);
        break;
    case Task::correlators:
        results = detail::run_correlators(config, w);
        break;
    case Task::entropy:
        results = detail::run_entropy(config, w);
        break;
    case Task::central_charge:
        results = detail::run_central_charge(config, w);
        break;
    case Task::gap_ratios:
        results = detail::run_gap_ratios(config, w);
        break;
    case Task::layer_scaling:
        results = detail::run_layer_scaling(config, w, m.threads);
        break;
    case Task::noise_study:
        results = detail::run_noise_study(config, w);
        break;
    }
    m.results = json{{"task", std::string(to_string(config.task))}, {"results", results}};
    w.write("results.json", m.results.dump(2) + "\n");
    m.artifacts = w.take();
    m.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const std::string text = m.to_json().dump(2) + "\n";
    std::ofstream f(dir / "manifest.json", std::ios::trunc);
    f << text;
    if (!f) {
        throw std::runtime_error("cannot write " + (dir / "manifest.json").string());
    }
    return m;
}

/// Parses, validates and runs a JSON configuration.
inline RunManifest run(const json &root) {
    ValidationReport report;
    const ExperimentConfig c = parse_config(root, report);
    if (auto cap = oracle_cap_violation(c)) {
        throw CapExceeded(*cap);
    }
    if (!report.ok()) {
        throw ConfigError(report);
    }
    return run(c);
}

} // namespace tcilab
