// Copyright 2026 The qsvt_ir Authors
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

#include "qsvt_ir/refine.h"

#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <random>

namespace qsvt_ir {

namespace {

enum SeedStream : uint64_t { kNoiseStream = 1, kShotStream = 2 };

CVector gaussian_vector(size_t n, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    CVector v(n);
    for (auto &x : v) {
        x = normal(rng);
    }
    return v;
}

CVector scaled(const CVector &v, double s) {
    CVector out = v;
    for (auto &x : out) {
        x *= s;
    }
    return out;
}

CVector unit(const CVector &v) {
    double n = two_norm(v);
    if (!(n > 0)) {
        throw std::invalid_argument("cannot normalize a zero vector");
    }
    return scaled(v, 1 / n);
}

CVector residual(const ComplexMatrix &a, const CVector &x, const CVector &b) {
    return axpy(-1, matvec(a, x), b);
}

}  // namespace

std::string backend_kind_name(BackendKind k) {
    switch (k) {
        case BackendKind::qsvt_full:
            return "qsvt_full";
        case BackendKind::spectral_oracle:
            return "spectral_oracle";
        case BackendKind::noisy_oracle:
            return "noisy_oracle";
    }
    return "?";
}

BackendKind backend_kind_from_name(const std::string &name) {
    for (BackendKind k : {BackendKind::qsvt_full, BackendKind::spectral_oracle, BackendKind::noisy_oracle}) {
        if (backend_kind_name(k) == name) {
            return k;
        }
    }
    throw std::invalid_argument("unknown backend '" + name + "'");
}

std::string readout_mode_name(ReadoutMode m) {
    return m == ReadoutMode::exact ? "exact" : "shot";
}

ReadoutMode readout_mode_from_name(const std::string &name) {
    if (name == "exact") {
        return ReadoutMode::exact;
    }
    if (name == "shot") {
        return ReadoutMode::shot;
    }
    throw std::invalid_argument("unknown readout mode '" + name + "'");
}

std::string encoding_kind_name(EncodingKind k) {
    return k == EncodingKind::dilation ? "dilation" : "fable";
}

EncodingKind encoding_kind_from_name(const std::string &name) {
    if (name == "dilation") {
        return EncodingKind::dilation;
    }
    if (name == "fable") {
        return EncodingKind::fable;
    }
    throw std::invalid_argument("unknown encoding '" + name + "'");
}

double samples_for_accuracy(double eps) {
    if (!(eps > 0)) {
        throw std::invalid_argument("sample count needs eps > 0");
    }
    return std::ceil(1 / (eps * eps));
}

InversePlan make_inverse_plan(double kappa, double eps_l, PlanLevel level) {
    InversePlan plan;
    plan.kappa = kappa;
    plan.eps_l = eps_l;
    plan.eps_prime = eps_l / kappa;
    if (eps_l == 0) {
        if (level != PlanLevel::degree_only) {
            throw std::invalid_argument("an inverse series needs eps_l > 0");
        }
        return plan;
    }
    plan.degree = inverse_series_degree(kappa, plan.eps_prime);
    if (level == PlanLevel::degree_only) {
        return plan;
    }
    BoundedSeries bounded = enforce_qsvt_bounds(inverse_cheb_series(InverseApproxSpec::make(kappa, plan.eps_prime)));
    plan.series = std::move(bounded.series);
    plan.applied_scale = bounded.applied_scale;
    if (level == PlanLevel::phases) {
        if (plan.degree > kMaxQsvtFullDegree) {
            throw std::invalid_argument(
                "qsvt_full needs a degree-" + std::to_string(plan.degree) + " polynomial; phase finding is limited to degree " +
                std::to_string(kMaxQsvtFullDegree) + " (use spectral_oracle)");
        }
        PhaseFindOptions opts;
        plan.phases = find_phases(plan.series, opts, &plan.phase_report);
    }
    return plan;
}

std::shared_ptr<const InversePlan> PlanCache::get(double kappa, double eps_l, PlanLevel level) {
    auto key = std::make_tuple(kappa, eps_l, level);
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = plans_.find(key);
        if (it != plans_.end()) {
            return it->second;
        }
    }
    // Built outside the lock; a racing duplicate build is harmless and deterministic.
    auto plan = std::make_shared<const InversePlan>(make_inverse_plan(kappa, eps_l, level));
    std::lock_guard<std::mutex> lock(mu_);
    return plans_.emplace(key, plan).first->second;
}

SolverBackend::SolverBackend(const BackendConfig &config, const ComplexMatrix &a, PlanCache *cache)
    : config_(config), a_(a) {
    if (!a.is_square()) {
        throw std::invalid_argument("the system matrix must be square");
    }
    bool noisy = config.kind == BackendKind::noisy_oracle;
    if (!(config.eps_l >= 0 && config.eps_l < 1) || (!noisy && config.eps_l == 0)) {
        throw std::invalid_argument("eps_l must lie in (0, 1) (noisy_oracle also accepts 0)");
    }
    Svd s = svd(a);
    double smax = s.singular_values.front();
    double smin = s.singular_values.back();
    if (!(smin > 1e-14 * smax)) {
        throw std::domain_error("matrix numerically singular");
    }
    double true_kappa = smax / smin;
    kappa_ = config.kappa.value_or(true_kappa);
    if (true_kappa > kappa_ * (1 + 1e-6)) {
        throw std::invalid_argument("configured kappa is below the matrix condition number");
    }

    alpha_ = smax;
    double plan_kappa = kappa_;
    if (config.kind == BackendKind::qsvt_full && config.encoding == EncodingKind::fable) {
        // FABLE divides by another 2^n, which shrinks the smallest singular value too.
        plan_kappa = kappa_ * static_cast<double>(a.rows());
    }
    PlanLevel level = config.kind == BackendKind::qsvt_full     ? PlanLevel::phases
                      : config.kind == BackendKind::spectral_oracle ? PlanLevel::series
                                                                    : PlanLevel::degree_only;
    plan_ = cache ? cache->get(plan_kappa, config.eps_l, level) : std::make_shared<const InversePlan>(make_inverse_plan(plan_kappa, config.eps_l, level));

    ComplexMatrix a_dag = a.adjoint();
    switch (config.kind) {
        case BackendKind::qsvt_full: {
            BlockEncoding be;
            if (config.encoding == EncodingKind::dilation) {
                be = dilation_encoding(a_dag, alpha_);
            } else {
                FableEncoding f = fable_encoding(a_dag * Complex(1 / alpha_), config.fable_threshold);
                gate_count_ = f.gate_count;
                alpha_ *= f.encoding.alpha;
                be = std::move(f.encoding);
            }
            op_ = build_u_phi(be, *plan_->phases, plan_->series);
            break;
        }
        case BackendKind::spectral_oracle:
            dense_solver_ = spectral_oracle(a_dag * Complex(1 / alpha_), plan_->series);
            break;
        case BackendKind::noisy_oracle: {
            std::vector<double> inv(s.singular_values.size());
            for (size_t k = 0; k < inv.size(); k++) {
                inv[k] = 1 / s.singular_values[k];
            }
            dense_solver_ = s.v * ComplexMatrix::diagonal(inv) * s.u.adjoint();
            break;
        }
    }
}

double SolverBackend::samples_per_solve() const {
    return config_.eps_l > 0 ? samples_for_accuracy(config_.eps_l) : 1;
}

SolverBackend::Output SolverBackend::solve_direction(const CVector &rhs_unit, uint64_t call_index) const {
    switch (config_.kind) {
        case BackendKind::qsvt_full: {
            InverseStateResult r = apply_inverse_state(*op_, StateVector{rhs_unit});
            return Output{r.out_state.amplitudes, r.success_probability};
        }
        case BackendKind::spectral_oracle: {
            CVector y = matvec(dense_solver_, rhs_unit);
            double n = two_norm(y);
            if (!(n * n >= 1e-14)) {
                throw PostSelectionError(n * n);
            }
            return Output{scaled(y, 1 / n), std::min(n * n, 1.0)};
        }
        case BackendKind::noisy_oracle: {
            CVector x = matvec(dense_solver_, rhs_unit);
            if (config_.eps_l > 0) {
                CVector g = gaussian_vector(x.size(), derive_seed(config_.seed, kNoiseStream, call_index));
                x = axpy(config_.eps_l * two_norm(x) / two_norm(g), g, x);
            }
            return Output{unit(x), 1};
        }
    }
    throw std::logic_error("unhandled backend kind");
}

SolveOnceResult solve_once(const SolverBackend &backend, const ComplexMatrix &a, const CVector &rhs, uint64_t call_index) {
    if (rhs.size() != a.rows()) {
        throw std::invalid_argument("right-hand side length does not match the matrix");
    }
    if (!(two_norm(rhs) > 0)) {
        throw std::invalid_argument("right-hand side must be nonzero");
    }
    SolverBackend::Output out = backend.solve_direction(unit(rhs), call_index);
    SolveOnceResult result{out.eta, out.eta, out.success_probability};
    if (backend.config().readout == ReadoutMode::shot && backend.config().eps_l > 0) {
        double shots = backend.samples_per_solve();
        double sigma = 1 / std::sqrt(shots * static_cast<double>(rhs.size()));
        CVector g = gaussian_vector(rhs.size(), derive_seed(backend.config().seed, kShotStream, call_index));
        result.readout = unit(axpy(sigma, g, out.eta));
    }
    return result;
}

double denormalize(const ComplexMatrix &a, const CVector &x_current, const CVector &eta, const CVector &b) {
    CVector a_eta = matvec(a, eta);
    double n2 = two_norm(a_eta);
    if (!(n2 > 1e-14)) {
        throw std::invalid_argument("degenerate direction: ||A eta|| <= 1e-14");
    }
    return inner(a_eta, residual(a, x_current, b)).real() / (n2 * n2);
}

double denormalize_bracketed(const ComplexMatrix &a, const CVector &x_current, const CVector &eta, const CVector &b) {
    CVector a_eta = matvec(a, eta);
    double n2 = two_norm(a_eta);
    if (!(n2 > 1e-14)) {
        throw std::invalid_argument("degenerate direction: ||A eta|| <= 1e-14");
    }
    CVector r0 = residual(a, x_current, b);
    double rn = two_norm(r0);
    if (rn == 0) {
        return 0;
    }
    // Half-derivative of ||A(x + mu eta) - b||^2, formed from a fresh product at each mu.
    auto g = [&](double mu) {
        CVector r = residual(a, axpy(mu, eta, x_current), b);
        return -inner(a_eta, r).real();
    };
    // |mu*| <= ||r|| / ||A eta|| by Cauchy-Schwarz.
    double half = 2 * rn / n2;
    double lo = -half;
    double hi = half;
    double glo = g(lo);
    double ghi = g(hi);
    for (int k = 0; k < 60 && glo * ghi > 0; k++) {
        lo *= 2;
        hi *= 2;
        glo = g(lo);
        ghi = g(hi);
    }
    if (glo == 0) {
        return lo;
    }
    if (ghi == 0) {
        return hi;
    }
    if (glo * ghi > 0) {
        throw std::runtime_error("could not bracket the de-normalization minimizer");
    }
    boost::uintmax_t max_iter = 200;
    auto root = boost::math::tools::toms748_solve(g, lo, hi, glo, ghi, boost::math::tools::eps_tolerance<double>(52), max_iter);
    return 0.5 * (root.first + root.second);
}

CostEntry make_cost_entry(size_t solves, size_t be_calls_per_solve, double samples_per_solve) {
    return CostEntry{solves, be_calls_per_solve, samples_per_solve,
                     static_cast<double>(solves) * static_cast<double>(be_calls_per_solve) * samples_per_solve};
}

CostEntry direct_solve_cost(double kappa, double eps) {
    return make_cost_entry(1, inverse_series_degree(kappa, eps / kappa), samples_for_accuracy(eps));
}

DivergenceError::DivergenceError(const std::string &what, RefinementTrace trace)
    : std::runtime_error(what), trace(std::move(trace)) {
}

size_t theorem_bound(double kappa, double eps_l, double eps_target) {
    double q = eps_l * kappa;
    if (!(q > 0 && q < 1) || !(eps_target > 0 && eps_target < 1)) {
        return 0;
    }
    return static_cast<size_t>(std::ceil(std::log(eps_target) / std::log(q)));
}

RefineResult iterative_refine(
    const ComplexMatrix &a, const CVector &b, const SolverBackend &backend, double eps_target, size_t max_iter) {
    if (!(eps_target > 0)) {
        throw std::invalid_argument("eps_target must be positive");
    }
    if (eps_target < 1e-14) {
        throw std::invalid_argument(
            "eps_target below 1e-14 is refused: double-precision residuals (u ~ 1e-16) leave under two digits of headroom");
    }
    if (b.size() != a.rows()) {
        throw std::invalid_argument("right-hand side length does not match the matrix");
    }
    double bnorm = two_norm(b);
    if (!(bnorm > 0)) {
        throw std::invalid_argument("right-hand side must be nonzero");
    }

    RefineResult out;
    RefinementTrace &trace = out.trace;
    trace.kappa = backend.kappa();
    trace.eps_l = backend.config().eps_l;
    trace.eps_target = eps_target;
    trace.theorem_bound = theorem_bound(trace.kappa, trace.eps_l, eps_target);
    trace.hypothesis_violated = trace.eps_l * trace.kappa >= 1;

    const size_t d = backend.be_calls_per_solve();
    const double samples = backend.samples_per_solve();
    const size_t n = b.size();
    CVector &x = out.x;
    x.assign(n, Complex(0));
    uint64_t call = 0;

    auto inner_solve = [&](const CVector &rhs) {
        SolveOnceResult s = solve_once(backend, a, rhs, call++);
        double mu = denormalize(a, x, s.readout, b);
        x = axpy(mu, s.readout, x);
        trace.mu_values.push_back(mu);
        trace.success_probabilities.push_back(s.success_probability);
        trace.cpu_to_qpu_messages++;
        trace.qpu_to_cpu_messages++;
        trace.values_transferred += 2 * n;
        trace.scaled_residuals.push_back(two_norm(residual(a, x, b)) / bnorm);
    };
    auto finalize = [&]() {
        size_t solves = trace.scaled_residuals.size();
        trace.be_calls_total = solves * d;
        trace.samples_total = static_cast<double>(solves) * samples;
        trace.converged = trace.scaled_residuals.back() <= eps_target;
    };

    inner_solve(b);
    size_t non_decreasing = 0;
    while (trace.scaled_residuals.back() > eps_target && trace.iterations < max_iter) {
        CVector r = residual(a, x, b);
        if (two_norm(r) == 0) {
            break;
        }
        inner_solve(r);
        trace.iterations++;
        size_t m = trace.scaled_residuals.size();
        non_decreasing = trace.scaled_residuals[m - 1] >= trace.scaled_residuals[m - 2] ? non_decreasing + 1 : 0;
        if (non_decreasing >= 3) {
            finalize();
            throw DivergenceError("iterative refinement diverged: 3 consecutive non-decreasing scaled residuals", trace);
        }
    }
    finalize();

    out.cost.refined = make_cost_entry(trace.scaled_residuals.size(), d, samples);
    out.cost.comparison_direct = direct_solve_cost(trace.kappa, eps_target);
    out.cost.encoding_gate_count = backend.encoding_gate_count();
    return out;
}

ContractionResult contraction_check(const RefinementTrace &trace, double kappa, double eps_l, double slack) {
    ContractionResult r;
    double q = eps_l * kappa;
    double bound = 1;
    for (double omega : trace.scaled_residuals) {
        bound *= q;
        double ratio = bound > 0 ? omega / bound : (omega > 0 ? INFINITY : 0);
        r.worst_ratio = std::max(r.worst_ratio, ratio);
    }
    r.passed = r.worst_ratio <= 1 + slack;
    return r;
}

}  // namespace qsvt_ir
