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

#ifndef QSVT_IR_REFINE_H
#define QSVT_IR_REFINE_H

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "qsvt_ir/blockenc.h"
#include "qsvt_ir/invpoly.h"
#include "qsvt_ir/numerics.h"
#include "qsvt_ir/qsp_phases.h"
#include "qsvt_ir/qsvt_core.h"

namespace qsvt_ir {

enum class BackendKind { qsvt_full, spectral_oracle, noisy_oracle };
enum class ReadoutMode { exact, shot };
enum class EncodingKind { dilation, fable };

std::string backend_kind_name(BackendKind k);
BackendKind backend_kind_from_name(const std::string &name);
std::string readout_mode_name(ReadoutMode m);
ReadoutMode readout_mode_from_name(const std::string &name);
std::string encoding_kind_name(EncodingKind k);
EncodingKind encoding_kind_from_name(const std::string &name);

/// Largest polynomial degree the qsvt_full backend attempts phase finding for.
inline constexpr size_t kMaxQsvtFullDegree = 500;

struct BackendConfig {
    BackendKind kind = BackendKind::spectral_oracle;
    /// Relative accuracy of one inner solve.
    double eps_l = 1e-2;
    ReadoutMode readout = ReadoutMode::exact;
    uint64_t seed = 0;
    EncodingKind encoding = EncodingKind::dilation;
    double fable_threshold = 0;
    /// Condition number used for the polynomial. Defaults to condition_number(a); must
    /// not be smaller than the true value (up to 1e-6 relative).
    std::optional<double> kappa;
};

enum class PlanLevel { degree_only, series, phases };

/// Matrix-independent part of an inner solve: the inverse series for (kappa, eps_l)
/// built with eps' = eps_l / kappa and scale 1 / (2 kappa), bounded for QSVT, and its
/// phases when the backend needs them.
struct InversePlan {
    double kappa = 0;
    double eps_l = 0;
    double eps_prime = 0;
    /// Degree of the inverse series (0 when eps_l = 0).
    size_t degree = 0;
    /// Empty at PlanLevel::degree_only.
    ChebyshevSeries series;
    double applied_scale = 1;
    std::optional<PhaseVector> phases;
    PhaseFindReport phase_report;
};

InversePlan make_inverse_plan(double kappa, double eps_l, PlanLevel level);

/// Builds plans once per (kappa, eps_l, level) and shares them between threads.
class PlanCache {
   public:
    std::shared_ptr<const InversePlan> get(double kappa, double eps_l, PlanLevel level);

   private:
    std::mutex mu_;
    std::map<std::tuple<double, double, PlanLevel>, std::shared_ptr<const InversePlan>> plans_;
};

/// Number of samples ceil(1 / eps^2), kept in floating point because it reaches 1e22.
double samples_for_accuracy(double eps);

/// Inner solver: given r / ||r|| returns a unit direction approximating A^{-1} r.
class SolverBackend {
   public:
    SolverBackend(const BackendConfig &config, const ComplexMatrix &a, PlanCache *cache = nullptr);

    struct Output {
        /// Unit-norm direction before readout.
        CVector eta;
        /// Post-selection probability (1 for the noisy oracle).
        double success_probability = 1;
    };

    /// `call_index` seeds the noise of this call.
    Output solve_direction(const CVector &rhs_unit, uint64_t call_index) const;

    const BackendConfig &config() const {
        return config_;
    }
    double kappa() const {
        return kappa_;
    }
    /// Block-encoding calls per inner solve (the degree d; nominal for the noisy oracle).
    size_t be_calls_per_solve() const {
        return plan_->degree;
    }
    /// Shots per inner solve, ceil(1 / eps_l^2).
    double samples_per_solve() const;
    const InversePlan &plan() const {
        return *plan_;
    }
    /// Subnormalization of the encoded A^dag (= ||A|| times the FABLE factor if used).
    double alpha() const {
        return alpha_;
    }
    /// Gates in the encoding circuit (FABLE only; 0 for dilation).
    size_t encoding_gate_count() const {
        return gate_count_;
    }

   private:
    BackendConfig config_;
    ComplexMatrix a_;
    double kappa_ = 0;
    double alpha_ = 1;
    size_t gate_count_ = 0;
    std::shared_ptr<const InversePlan> plan_;
    std::optional<QsvtOperator> op_;
    /// P(A^dag / alpha) for spectral_oracle; A^{-1} via SVD for noisy_oracle.
    ComplexMatrix dense_solver_;
};

struct SolveOnceResult {
    CVector eta;
    /// eta after the readout model (equal to eta for exact readout).
    CVector readout;
    double success_probability = 1;
};

/// Normalizes rhs, calls the backend, applies the readout model.
SolveOnceResult solve_once(const SolverBackend &backend, const ComplexMatrix &a, const CVector &rhs, uint64_t call_index = 0);

/// argmin over real mu of ||A (x + mu eta) - b|| in closed form:
/// mu = Re <A eta, b - A x> / ||A eta||^2.
double denormalize(const ComplexMatrix &a, const CVector &x_current, const CVector &eta, const CVector &b);

/// Same minimizer found by a bracketing root search (TOMS 748) on the derivative of the
/// objective, evaluated by matrix-vector products only.
double denormalize_bracketed(const ComplexMatrix &a, const CVector &x_current, const CVector &eta, const CVector &b);

struct RefinementTrace {
    /// omega_0, omega_1, ... (one per inner solve).
    std::vector<double> scaled_residuals;
    std::vector<double> mu_values;
    std::vector<double> success_probabilities;
    size_t iterations = 0;
    bool converged = false;
    size_t be_calls_total = 0;
    double samples_total = 0;
    /// ceil(ln eps / ln(eps_l kappa)); 0 when eps_l kappa is outside (0, 1).
    size_t theorem_bound = 0;
    /// Set when eps_l * kappa >= 1 (the contraction hypothesis fails).
    bool hypothesis_violated = false;
    double kappa = 0;
    double eps_l = 0;
    double eps_target = 0;
    /// Transfer counters for the CPU/QPU loop: one right-hand side up and one readout
    /// down per inner solve, each of N values.
    size_t cpu_to_qpu_messages = 0;
    size_t qpu_to_cpu_messages = 0;
    size_t values_transferred = 0;
};

struct CostEntry {
    size_t solves = 0;
    size_t be_calls_per_solve = 0;
    double samples_per_solve = 0;
    double total = 0;
};

struct CostReport {
    CostEntry refined;
    /// Single solve at the target accuracy (degree from kappa, eps / kappa; ceil(1/eps^2) samples).
    CostEntry comparison_direct;
    size_t encoding_gate_count = 0;
};

CostEntry make_cost_entry(size_t solves, size_t be_calls_per_solve, double samples_per_solve);
/// Closed-form cost of one direct solve to accuracy eps.
CostEntry direct_solve_cost(double kappa, double eps);

struct RefineResult {
    CVector x;
    RefinementTrace trace;
    CostReport cost;
};

class DivergenceError : public std::runtime_error {
   public:
    DivergenceError(const std::string &what, RefinementTrace trace);
    RefinementTrace trace;
};

size_t theorem_bound(double kappa, double eps_l, double eps_target);

/// Mixed-precision iterative refinement around the inner solver. Residuals and updates
/// are computed in double precision. Throws std::invalid_argument for eps_target < 1e-14
/// and DivergenceError after 3 consecutive non-decreasing scaled residuals.
RefineResult iterative_refine(
    const ComplexMatrix &a, const CVector &b, const SolverBackend &backend, double eps_target, size_t max_iter);

struct ContractionResult {
    bool passed = true;
    /// max over i of omega_i / (eps_l kappa)^{i+1}.
    double worst_ratio = 0;
};

ContractionResult contraction_check(const RefinementTrace &trace, double kappa, double eps_l, double slack = 0.1);

}  // namespace qsvt_ir

#endif
