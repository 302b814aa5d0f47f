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

#include <random>

#include "oracle.hpp"
#include "tcilab/exact.hpp"
#include "tcilab/variational.hpp"

using namespace tcilab;

namespace {

AnsatzParams random_params(int layers, std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> flat(AnsatzParams::count_for(layers));
    for (auto &v : flat) {
        v = u(rng);
    }
    return AnsatzParams::from_flat(layers, flat);
}

void expect_gradient_matches(const CostFunction &cost, const AnsatzParams &p) {
    std::vector<double> grad;
    const double f = cost.value_and_gradient(p, grad);
    ASSERT_NEAR(f, cost.value(p), 1e-12);
    const auto flat = p.flat();
    ASSERT_EQ(grad.size(), flat.size());
    const double h = 1e-5;
    for (std::size_t i = 0; i < flat.size(); ++i) {
        auto up = flat;
        auto dn = flat;
        up[i] += h;
        dn[i] -= h;
        const double fd = (cost.value(AnsatzParams::from_flat(p.layers, up)) -
                           cost.value(AnsatzParams::from_flat(p.layers, dn))) /
                          (2 * h);
        EXPECT_NEAR(grad[i], fd, 1e-6) << "angle " << i;
    }
}

OptimizerOptions quick_options() {
    OptimizerOptions o;
    o.restarts = 4;
    o.budget = 4000;
    return o;
}

} // namespace

TEST(CostSpec, names_round_trip) {
    for (CostKind k : {CostKind::energy, CostKind::infidelity, CostKind::vqd}) {
        EXPECT_EQ(cost_kind_from_string(to_string(k)), k);
    }
    EXPECT_THROW(cost_kind_from_string("overlap"), DomainError);
    EXPECT_EQ(method_from_string("nelder-mead"), Method::simplex);
    EXPECT_EQ(method_from_string("bfgs"), Method::bfgs);
    EXPECT_THROW(method_from_string("adam"), DomainError);
}

TEST(CostSpec, validation_errors) {
    const ModelSpec m = ModelSpec::tricritical(4, Boundary::periodic);
    CostSpec missing;
    missing.kind = CostKind::infidelity;
    EXPECT_THROW(CostFunction(missing, m), DomainError);
    EXPECT_THROW(CostFunction(CostSpec::infidelity(StateVector::basis_state(3, 0)), m),
                 DimensionError);
    StateVector unnormalized(4, std::vector<cplx>(16, cplx(1.0)));
    EXPECT_THROW(CostFunction(CostSpec::infidelity(unnormalized), m), DomainError);
    EXPECT_THROW(CostFunction(CostSpec::vqd({{AnsatzParams::zeros(2), 0.0}}), m), DomainError);
}

TEST(CostFunction, energy_equals_dense_expectation) {
    std::mt19937_64 rng(11);
    const ModelSpec m = ModelSpec::tricritical(5, Boundary::open);
    const AnsatzParams p = random_params(3, rng);
    const auto psi = oracle::vec(AnsatzCircuit(5, Boundary::open).prepare(p));
    const double want = (psi.adjoint() * oracle::matrix_of(build_hamiltonian(m)) * psi)(0).real();
    EXPECT_NEAR(evaluate_cost(CostSpec::energy(), p, m), want, 1e-10);
}

TEST(CostFunction, infidelity_and_vqd_values) {
    std::mt19937_64 rng(12);
    const ModelSpec m = ModelSpec::tricritical(4, Boundary::periodic);
    const StateVector target = oracle::random_state(4, rng);
    const AnsatzParams p = random_params(2, rng);
    const AnsatzParams q = random_params(2, rng);
    const AnsatzCircuit circ(4, Boundary::periodic);
    const auto psi = oracle::vec(circ.prepare(p));
    const auto phi = oracle::vec(circ.prepare(q));

    EXPECT_NEAR(evaluate_cost(CostSpec::infidelity(target), p, m),
                1.0 - std::abs(oracle::vec(target).dot(psi)), 1e-12);

    const double e = (psi.adjoint() * oracle::matrix_of(build_hamiltonian(m)) * psi)(0).real();
    EXPECT_NEAR(evaluate_cost(CostSpec::vqd({{q, 3.5}}), p, m),
                e + 3.5 * std::norm(phi.dot(psi)), 1e-10);
}

TEST(CostFunction, adjoint_gradients_match_finite_differences) {
    std::mt19937_64 rng(13);
    for (Boundary bc : {Boundary::open, Boundary::periodic}) {
        const ModelSpec m = ModelSpec::tricritical(4, bc);
        const AnsatzParams p = random_params(3, rng);
        expect_gradient_matches(CostFunction(CostSpec::energy(), m), p);
        expect_gradient_matches(CostFunction(CostSpec::infidelity(oracle::random_state(4, rng)), m), p);
        expect_gradient_matches(
            CostFunction(CostSpec::vqd({{random_params(3, rng), 2.0}, {random_params(3, rng), 5.0}}), m),
            p);
    }
}

TEST(Optimize, rejects_bad_options) {
    const ModelSpec m = ModelSpec::tricritical(3, Boundary::periodic);
    OptimizerOptions o;
    EXPECT_THROW(optimize(CostSpec::energy(), m, 0, o, 1), DomainError);
    o.restarts = 0;
    EXPECT_THROW(optimize(CostSpec::energy(), m, 2, o, 1), DomainError);
    o = {};
    o.budget = 0;
    EXPECT_THROW(optimize(CostSpec::energy(), m, 2, o, 1), DomainError);
    o = {};
    o.initial = AnsatzParams::zeros(3);
    EXPECT_THROW(optimize(CostSpec::energy(), m, 2, o, 1), DimensionError);
}

TEST(Optimize, vqe_reaches_exact_ground_state_l4_pbc) {
    const ModelSpec m = ModelSpec::tricritical(4, Boundary::periodic);
    const auto exact = eigensolve(build_hamiltonian(m), 1);
    const OptResult r = optimize(CostSpec::energy(), m, 4, quick_options(), 5);
    EXPECT_NEAR(r.cost, exact.energies[0], 1e-8);
    const StateVector psi = AnsatzCircuit(4, Boundary::periodic).prepare(r.params);
    EXPECT_GT(fidelity(psi, exact.states[0]), 1.0 - 1e-6);
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.seed, 5U);
}

TEST(Optimize, simplex_lowers_energy_from_start) {
    const ModelSpec m = ModelSpec::tricritical(3, Boundary::periodic);
    OptimizerOptions o = quick_options();
    o.method = Method::simplex;
    o.restarts = 2;
    const double start = evaluate_cost(
        CostSpec::energy(), AnsatzParams::from_flat(2, std::vector<double>(5, 0.01)), m);
    const OptResult r = optimize(CostSpec::energy(), m, 2, o, 3);
    EXPECT_LT(r.cost, start - 0.1);
    EXPECT_GE(r.cost, eigensolve(build_hamiltonian(m), 1).energies[0] - 1e-10);
}

TEST(Optimize, deterministic_and_thread_invariant) {
    const ModelSpec m = ModelSpec::tricritical(4, Boundary::open);
    OptimizerOptions o = quick_options();
    o.budget = 300;
    const OptResult a = optimize(CostSpec::energy(), m, 2, o, 42);
    const OptResult b = optimize(CostSpec::energy(), m, 2, o, 42);
    o.threads = 3;
    const OptResult c = optimize(CostSpec::energy(), m, 2, o, 42);
    for (const OptResult *r : {&b, &c}) {
        EXPECT_EQ(r->cost, a.cost);
        EXPECT_EQ(r->params.flat(), a.params.flat());
        EXPECT_EQ(r->evaluations, a.evaluations);
        EXPECT_EQ(r->restart, a.restart);
        EXPECT_EQ(r->history, a.history);
    }
    // Restart 0 ignores the seed; later restarts start elsewhere.
    const OptResult d = optimize(CostSpec::energy(), m, 2, o, 43);
    EXPECT_NE(d.history, a.history);
}

TEST(Optimize, history_is_nonincreasing) {
    const ModelSpec m = ModelSpec::tricritical(4, Boundary::periodic);
    const OptResult r = optimize(CostSpec::energy(), m, 2, quick_options(), 8);
    ASSERT_FALSE(r.history.empty());
    for (std::size_t i = 1; i < r.history.size(); ++i) {
        ASSERT_LE(r.history[i], r.history[i - 1]);
    }
    EXPECT_DOUBLE_EQ(r.history.back(), r.cost);
}

TEST(Optimize, budget_exhaustion_is_reported) {
    const ModelSpec m = ModelSpec::tricritical(5, Boundary::open);
    OptimizerOptions o;
    o.restarts = 2;
    o.budget = 3;
    const OptResult r = optimize(CostSpec::energy(), m, 4, o, 1);
    EXPECT_FALSE(r.converged);
    EXPECT_GE(r.evaluations, 6U);
    EXPECT_LT(r.evaluations, 40U);
}

TEST(Optimize, warm_start_is_restart_zero) {
    const ModelSpec m = ModelSpec::tricritical(4, Boundary::periodic);
    OptimizerOptions o = quick_options();
    const OptResult first = optimize(CostSpec::energy(), m, 4, o, 5);
    o.initial = first.params;
    o.restarts = 1;
    const OptResult again = optimize(CostSpec::energy(), m, 4, o, 99);
    EXPECT_LE(again.cost, first.cost + 1e-12);
    EXPECT_EQ(again.restart, 0);
}

TEST(Deflation, default_weight_is_twice_spectral_width) {
    const ModelSpec m = ModelSpec::tricritical(4, Boundary::open);
    Eigen::SelfAdjointEigenSolver<oracle::Mat> es(oracle::matrix_of(build_hamiltonian(m)));
    const auto &ev = es.eigenvalues();
    EXPECT_NEAR(default_deflation_weight(m), 2.0 * (ev(ev.size() - 1) - ev(0)), 1e-9);
}

TEST(Deflation, large_chains_use_coefficient_bound) {
    const ModelSpec m = ModelSpec::tricritical(kDeflationOracleCap + 1, Boundary::periodic);
    double sum = 0.0;
    for (const auto &t : build_hamiltonian(m).terms()) {
        if (!t.string.is_identity()) {
            sum += std::abs(t.coeff);
        }
    }
    EXPECT_NEAR(default_deflation_weight(m), 4.0 * sum, 1e-9);
}

TEST(Deflation, ladder_recovers_low_spectrum_l4_pbc) {
    const ModelSpec m = ModelSpec::tricritical(4, Boundary::periodic);
    const auto exact = eigensolve(build_hamiltonian(m), 3);
    const auto ladder = vqd_ladder(m, 4, 2, {}, quick_options(), 7);
    ASSERT_EQ(ladder.size(), 3U);
    // The deflated cost equals the energy once overlaps vanish.
    const AnsatzCircuit circ(4, Boundary::periodic);
    const Observable h = build_hamiltonian(m);
    for (std::size_t k = 0; k < 3; ++k) {
        const double e = expectation(circ.prepare(ladder[k].params), h);
        EXPECT_NEAR(e, exact.energies[k], 1e-6) << "level " << k;
    }
    EXPECT_THROW(vqd_ladder(m, 4, 0, {}, quick_options(), 7), DomainError);
    EXPECT_THROW(vqd_ladder(m, 4, 2, {1.0}, quick_options(), 7), DimensionError);
}

TEST(LayerScaling, small_chains_reach_target_within_chain_length_layers) {
    OptimizerOptions o = quick_options();
    const auto rows = layer_scaling_study({3, 4}, Boundary::periodic, 0.999, 1, o, 17);
    ASSERT_EQ(rows.size(), 2U);
    for (const auto &row : rows) {
        EXPECT_TRUE(row.reached) << "L=" << row.L;
        EXPECT_LE(row.minimal_layers, row.L);
        EXPECT_EQ(row.infidelity_by_layers.size(), static_cast<std::size_t>(row.minimal_layers));
        EXPECT_LE(row.infidelity_by_layers.back(), 1e-3);
    }
}
