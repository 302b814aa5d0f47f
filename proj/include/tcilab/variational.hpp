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
 * Variational loops over the layered ansatz: ground-state search under an
 * energy or overlap cost, and deflation-penalized excited states.
 *
 * Local minimization is delegated to GSL's multimin. Gradients come from
 * adjoint differentiation of the statevector, so a gradient costs about three
 * state preparations regardless of the parameter count.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>
#include <gsl/gsl_vector.h>

#include "tcilab/errors.hpp"
#include "tcilab/exact.hpp"
#include "tcilab/model.hpp"
#include "tcilab/rng.hpp"
#include "tcilab/simulator.hpp"
#include "tcilab/state.hpp"

namespace tcilab {

enum class CostKind { energy, infidelity, vqd };

inline std::string_view to_string(CostKind k) {
    switch (k) {
    case CostKind::energy:
        return "energy";
    case CostKind::infidelity:
        return "infidelity";
    case CostKind::vqd:
        return "vqd";
    }
    return "?";
}

inline CostKind cost_kind_from_string(std::string_view s) {
    if (s == "energy") {
        return CostKind::energy;
    }
    if (s == "infidelity") {
        return CostKind::infidelity;
    }
    if (s == "vqd") {
        return CostKind::vqd;
    }
    throw DomainError("unknown cost kind '" + std::string(s) + "'");
}

/// A previously found state and its penalty weight.
struct DeflationTerm {
    AnsatzParams params;
    double weight = 0.0;
};

struct CostSpec {
    CostKind kind = CostKind::energy;
    std::optional<StateVector> target;    // infidelity
    std::vector<DeflationTerm> deflation; // vqd

    static CostSpec energy() { return {}; }

    static CostSpec infidelity(StateVector target) {
        return {CostKind::infidelity, std::move(target), {}};
    }

    static CostSpec vqd(std::vector<DeflationTerm> deflation) {
        return {CostKind::vqd, std::nullopt, std::move(deflation)};
    }

    void validate(int num_qubits) const {
        if (kind == CostKind::infidelity) {
            if (!target) {
                throw DomainError("infidelity cost needs a target state");
            }
            if (target->num_qubits() != num_qubits) {
                throw DimensionError("target state has the wrong qubit count");
            }
            if (std::abs(target->norm_squared() - 1.0) > 1e-10) {
                throw DomainError("infidelity target must be normalized");
            }
        }
        if (kind == CostKind::vqd) {
            for (const auto &d : deflation) {
                if (!(d.weight > 0.0)) {
                    throw DomainError("deflation weights must be positive");
                }
                d.params.validate();
            }
        }
    }
};

/**
 * A cost bound to a model: Hamiltonian, circuit and any fixed reference
 * states are built once and reused across evaluations.
 */
class CostFunction {
  public:
    CostFunction(CostSpec spec, const ModelSpec &model)
        : spec_(std::move(spec)), model_(model), h_(build_hamiltonian(model)),
          circuit_(model.L, model.bc) {
        model.validate();
        spec_.validate(model.L);
        for (const auto &d : spec_.deflation) {
            deflated_.push_back(circuit_.prepare(d.params));
        }
    }

    [[nodiscard]] const CostSpec &spec() const { return spec_; }
    [[nodiscard]] const ModelSpec &model() const { return model_; }
    [[nodiscard]] const Observable &hamiltonian() const { return h_; }
    [[nodiscard]] const AnsatzCircuit &circuit() const { return circuit_; }

    [[nodiscard]] double value(const AnsatzParams &p) const {
        return value_of(circuit_.prepare(p));
    }

    /// Cost of an already prepared state.
    [[nodiscard]] double value_of(const StateVector &psi) const {
        switch (spec_.kind) {
        case CostKind::energy:
            return expectation(psi, h_);
        case CostKind::infidelity:
            return 1.0 - std::abs(spec_.target->inner(psi));
        case CostKind::vqd: {
            double f = expectation(psi, h_);
            for (std::size_t j = 0; j < deflated_.size(); ++j) {
                f += spec_.deflation[j].weight * std::norm(deflated_[j].inner(psi));
            }
            return f;
        }
        }
        return 0.0;
    }

    /// Cost and its gradient in flat parameter order.
    double value_and_gradient(const AnsatzParams &p, std::vector<double> &grad) const {
        const StateVector psi = circuit_.prepare(p);
        std::vector<cplx> chi(psi.dim(), cplx{0.0, 0.0});
        double f = 0.0;
        if (spec_.kind == CostKind::infidelity) {
            const cplx o = spec_.target->inner(psi);
            const double a = std::abs(o);
            f = 1.0 - a;
            const cplx scale = a > 0.0 ? -o / (2.0 * a) : cplx(-0.5);
            for (std::size_t i = 0; i < chi.size(); ++i) {
                chi[i] = scale * (*spec_.target)[i];
            }
        } else {
            const StateVector hpsi = apply_observable(h_, psi);
            f = psi.inner(hpsi).real();
            for (std::size_t i = 0; i < chi.size(); ++i) {
                chi[i] = hpsi[i];
            }
            for (std::size_t j = 0; j < deflated_.size(); ++j) {
                const cplx o = deflated_[j].inner(psi);
                const double w = spec_.deflation[j].weight;
                f += w * std::norm(o);
                for (std::size_t i = 0; i < chi.size(); ++i) {
                    chi[i] += w * o * deflated_[j][i];
                }
            }
        }
        grad = circuit_.gradient(p, psi, StateVector(model_.L, std::move(chi)));
        return f;
    }

  private:
    CostSpec spec_;
    ModelSpec model_;
    Observable h_;
    AnsatzCircuit circuit_;
    std::vector<StateVector> deflated_;
};

/// Cost of `params` for `model` under `spec`.
inline double evaluate_cost(const CostSpec &spec, const AnsatzParams &params,
                            const ModelSpec &model) {
    params.validate();
    return CostFunction(spec, model).value(params);
}

// ---------------------------------------------------------------------------
// Optimizer
// ---------------------------------------------------------------------------

enum class Method { bfgs, simplex };

inline std::string_view to_string(Method m) { return m == Method::bfgs ? "bfgs" : "simplex"; }

inline Method method_from_string(std::string_view s) {
    if (s == "bfgs") {
        return Method::bfgs;
    }
    if (s == "simplex" || s == "nelder-mead") {
        return Method::simplex;
    }
    throw DomainError("unknown optimizer method '" + std::string(s) + "'");
}

struct OptimizerOptions {
    Method method = Method::bfgs;
    std::uint64_t budget = 20000; // cost evaluations per restart
    int restarts = 8;
    std::uint64_t patience = 50;  // evaluations without improvement
    double improvement_tol = 1e-8;
    double gradient_tol = 1e-9;   // bfgs stopping rule
    double simplex_size_tol = 1e-9;
    double restart_spread = 1.0;  // restarts >= 1 add U(-spread, spread) to the start
    int threads = 1;
    std::optional<AnsatzParams> initial;
};

struct OptResult {
    AnsatzParams params;
    double cost = 0.0;
    std::uint64_t evaluations = 0; // summed over restarts
    bool converged = false;
    std::uint64_t seed = 0;
    int restart = 0; // index of the winning restart
    std::vector<double> history; // best-so-far cost, one entry per optimizer iteration
};

namespace detail {

struct RestartOutcome {
    std::vector<double> best_x;
    double best_f = std::numeric_limits<double>::infinity();
    std::uint64_t evaluations = 0;
    bool converged = false;
    std::vector<double> trace;
};

/// Evaluation bookkeeping shared by the GSL callbacks of one restart.
struct Tracker {
    const CostFunction *cost;
    int layers;
    const OptimizerOptions *opt;
    RestartOutcome out;
    std::uint64_t last_improvement = 0;
    double reference = std::numeric_limits<double>::infinity();

    void record(const gsl_vector *x, double f) {
        ++out.evaluations;
        if (f < out.best_f) {
            out.best_f = f;
            out.best_x.assign(x->data, x->data + x->size);
        }
        if (f < reference - opt->improvement_tol) {
            reference = f;
            last_improvement = out.evaluations;
        }
    }

    [[nodiscard]] AnsatzParams params(const gsl_vector *x) const {
        return AnsatzParams::from_flat(layers, std::span<const double>(x->data, x->size));
    }

    [[nodiscard]] bool stalled() const {
        return out.evaluations - last_improvement >= opt->patience;
    }
    [[nodiscard]] bool exhausted() const { return out.evaluations >= opt->budget; }
};

inline double gsl_f(const gsl_vector *x, void *ctx) {
    auto *t = static_cast<Tracker *>(ctx);
    const double f = t->cost->value(t->params(x));
    t->record(x, f);
    return f;
}

inline void gsl_fdf(const gsl_vector *x, void *ctx, double *f, gsl_vector *g) {
    auto *t = static_cast<Tracker *>(ctx);
    std::vector<double> grad;
    *f = t->cost->value_and_gradient(t->params(x), grad);
    for (std::size_t i = 0; i < grad.size(); ++i) {
        gsl_vector_set(g, i, grad[i]);
    }
    t->record(x, *f);
}

inline void gsl_df(const gsl_vector *x, void *ctx, gsl_vector *g) {
    double f = 0.0;
    gsl_fdf(x, ctx, &f, g);
}

inline RestartOutcome run_restart(const CostFunction &cost, int layers,
                                  const std::vector<double> &start, const OptimizerOptions &opt) {
    Tracker tracker{&cost, layers, &opt, {}, 0, std::numeric_limits<double>::infinity()};
    const std::size_t n = start.size();
    gsl_vector *x = gsl_vector_alloc(n);
    for (std::size_t i = 0; i < n; ++i) {
        gsl_vector_set(x, i, start[i]);
    }
    int status = GSL_CONTINUE;
    bool converged = false;
    auto step_loop = [&](auto &&iterate, auto &&test) {
        while (!tracker.exhausted()) {
            status = iterate();
            tracker.out.trace.push_back(tracker.out.best_f);
            if (status != GSL_SUCCESS) {
                // no further progress possible from this point
                converged = true;
                break;
            }
            if (test() == GSL_SUCCESS || tracker.stalled()) {
                converged = true;
                break;
            }
        }
    };
    if (opt.method == Method::bfgs) {
        gsl_multimin_function_fdf fn{&gsl_f, &gsl_df, &gsl_fdf, n, &tracker};
        gsl_multimin_fdfminimizer *s =
            gsl_multimin_fdfminimizer_alloc(gsl_multimin_fdfminimizer_vector_bfgs2, n);
        gsl_multimin_fdfminimizer_set(s, &fn, x, 0.01, 0.1);
        step_loop([&] { return gsl_multimin_fdfminimizer_iterate(s); },
                  [&] { return gsl_multimin_test_gradient(s->gradient, opt.gradient_tol); });
        gsl_multimin_fdfminimizer_free(s);
    } else {
        gsl_multimin_function fn{&gsl_f, n, &tracker};
        gsl_multimin_fminimizer *s =
            gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
        gsl_vector *step = gsl_vector_alloc(n);
        gsl_vector_set_all(step, 0.1);
        gsl_multimin_fminimizer_set(s, &fn, x, step);
        step_loop([&] { return gsl_multimin_fminimizer_iterate(s); },
                  [&] {
                      return gsl_multimin_test_size(gsl_multimin_fminimizer_size(s),
                                                    opt.simplex_size_tol);
                  });
        gsl_vector_free(step);
        gsl_multimin_fminimizer_free(s);
    }
    gsl_vector_free(x);
    tracker.out.converged = converged;
    if (tracker.out.best_x.empty()) {
        tracker.out.best_x = start;
        tracker.out.best_f = cost.value(AnsatzParams::from_flat(layers, start));
    }
    return std::move(tracker.out);
}

inline void silence_gsl() {
    static std::once_flag once;
    std::call_once(once, [] { gsl_set_error_handler_off(); });
}

} // namespace detail

/**
 * Multi-start local minimization of `spec` over M-layer ansatz angles.
 *
 * Restart 0 starts from `options.initial` (or all angles at 0.01); restart
 * r >= 1 adds U(-spread, spread) noise drawn from stream r of `seed`. The
 * winner is the lowest cost, ties going to the lower restart index.
 */
inline OptResult optimize(const CostSpec &spec, const ModelSpec &model, int layers,
                          const OptimizerOptions &options, std::uint64_t seed) {
    if (layers < 1) {
        throw DomainError("optimize: M must be >= 1");
    }
    if (options.budget < 1) {
        throw DomainError("optimize: budget must be >= 1 evaluation");
    }
    if (options.restarts < 1) {
        throw DomainError("optimize: restarts must be >= 1");
    }
    detail::silence_gsl();
    const CostFunction cost(spec, model);
    const std::size_t n = AnsatzParams::count_for(layers);

    std::vector<double> base(n, 0.01);
    if (options.initial) {
        if (options.initial->layers != layers) {
            throw DimensionError("optimize: initial parameters have the wrong layer count");
        }
        options.initial->validate();
        base = options.initial->flat();
    }

    const auto R = static_cast<std::size_t>(options.restarts);
    std::vector<std::vector<double>> starts(R, base);
    for (std::size_t r = 1; r < R; ++r) {
        CounterRng rng(seed, r);
        for (auto &v : starts[r]) {
            v += options.restart_spread * (2.0 * rng.uniform() - 1.0);
        }
    }

    std::vector<detail::RestartOutcome> outcomes(R);
    const int threads = std::max(1, std::min(options.threads, options.restarts));
    if (threads == 1) {
        for (std::size_t r = 0; r < R; ++r) {
            outcomes[r] = detail::run_restart(cost, layers, starts[r], options);
        }
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                for (std::size_t r = static_cast<std::size_t>(t); r < R;
                     r += static_cast<std::size_t>(threads)) {
                    outcomes[r] = detail::run_restart(cost, layers, starts[r], options);
                }
            });
        }
        for (auto &th : pool) {
            th.join();
        }
    }

    OptResult res;
    res.seed = seed;
    std::size_t best = 0;
    double running = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < R; ++r) {
        res.evaluations += outcomes[r].evaluations;
        if (outcomes[r].best_f < outcomes[best].best_f) {
            best = r;
        }
        for (double v : outcomes[r].trace) {
            running = std::min(running, v);
            res.history.push_back(running);
        }
    }
    res.params = AnsatzParams::from_flat(layers, outcomes[best].best_x);
    res.cost = outcomes[best].best_f;
    res.converged = outcomes[best].converged;
    res.restart = static_cast<int>(best);
    return res;
}

// ---------------------------------------------------------------------------
// Deflation ladder and layer scaling
// ---------------------------------------------------------------------------

/// Largest size for which the deflation weight uses the exact spectral width.
inline constexpr int kDeflationOracleCap = 10;

/**
 * 2 (E_max - E_min). Exact for L <= kDeflationOracleCap; above that the width
 * is bounded by 2 sum |c| over non-identity terms.
 */
inline double default_deflation_weight(const ModelSpec &model) {
    const Observable h = build_hamiltonian(model);
    if (model.L <= kDeflationOracleCap) {
        const double lo = eigensolve(h, 1).energies[0];
        const double hi = -eigensolve(h * cplx(-1.0), 1).energies[0];
        return 2.0 * (hi - lo);
    }
    double bound = 0.0;
    for (const auto &t : h.terms()) {
        if (!t.string.is_identity()) {
            bound += std::abs(t.coeff);
        }
    }
    return 2.0 * (2.0 * bound);
}

/**
 * Ground state by energy minimization, then states 1..k_max each deflating
 * against all earlier ones. `weights[j]` penalizes overlap with state j; an
 * empty list uses default_deflation_weight for every state. Level k uses
 * seed + k.
 */
inline std::vector<OptResult> vqd_ladder(const ModelSpec &model, int layers, int k_max,
                                         std::vector<double> weights,
                                         const OptimizerOptions &options, std::uint64_t seed) {
    if (k_max < 1) {
        throw DomainError("vqd_ladder: k_max must be >= 1");
    }
    if (weights.empty()) {
        weights.assign(static_cast<std::size_t>(k_max), default_deflation_weight(model));
    }
    if (weights.size() < static_cast<std::size_t>(k_max)) {
        throw DimensionError("vqd_ladder: need one weight per deflated state");
    }
    std::vector<OptResult> out;
    out.push_back(optimize(CostSpec::energy(), model, layers, options, seed));
    for (int k = 1; k <= k_max; ++k) {
        std::vector<DeflationTerm> d;
        for (int j = 0; j < k; ++j) {
            d.push_back({out[static_cast<std::size_t>(j)].params, weights[static_cast<std::size_t>(j)]});
        }
        out.push_back(optimize(CostSpec::vqd(std::move(d)), model, layers, options,
                               seed + static_cast<std::uint64_t>(k)));
    }
    return out;
}

struct LayerScalingRow {
    int L = 0;
    int minimal_layers = 0; // 0 when no M up to the limit reached the target
    bool reached = false;
    std::vector<double> infidelity_by_layers; // index M - 1
};

/**
 * For each L, the smallest M whose optimized infidelity against the exact
 * ground state is <= 1 - target_fidelity. M grows from 1; each M starts from
 * the previous optimum with a zero layer appended.
 */
inline std::vector<LayerScalingRow> layer_scaling_study(const std::vector<int> &sizes, Boundary bc,
                                                        double target_fidelity, int max_extra_layers,
                                                        const OptimizerOptions &options,
                                                        std::uint64_t seed) {
    std::vector<LayerScalingRow> rows;
    for (int L : sizes) {
        const ModelSpec model = ModelSpec::tricritical(L, bc);
        const StateVector ground = eigensolve(build_hamiltonian(model), 1).states[0];
        LayerScalingRow row;
        row.L = L;
        std::optional<AnsatzParams> warm;
        for (int M = 1; M <= L + max_extra_layers; ++M) {
            OptimizerOptions o = options;
            if (warm) {
                o.initial = warm->extended();
            }
            const OptResult r = optimize(CostSpec::infidelity(ground), model, M, o,
                                         seed + static_cast<std::uint64_t>(1000 * L + M));
            row.infidelity_by_layers.push_back(r.cost);
            warm = r.params;
            if (r.cost <= 1.0 - target_fidelity) {
                row.minimal_layers = M;
                row.reached = true;
                break;
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace tcilab
