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

#ifndef QSVT_IR_QSP_PHASES_H
#define QSVT_IR_QSP_PHASES_H

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qsvt_ir/invpoly.h"
#include "qsvt_ir/numerics.h"

namespace qsvt_ir {

/// Signal convention shared by the 2x2 reduction here and the projector-phase
/// sequence in qsvt_core:
///
///     S(x) = e^{i phi_1 Z} R(x) e^{i phi_2 Z} R(x) ... e^{i phi_d Z} R(x),
///     R(x) = [[x, sqrt(1-x^2)], [sqrt(1-x^2), -x]],
///
/// and the realized polynomial is Re S(x)_{00}. R(x) is the two-dimensional restriction
/// of a block-encoding between its right and left singular subspaces, and e^{i phi Z}
/// is the restriction of e^{i phi (2 Pi - I)}.
inline constexpr std::string_view kConventionTag = "reflection-z/re00";

struct PhaseVector {
    std::vector<double> phases;
    std::string convention_tag = std::string(kConventionTag);

    size_t degree() const {
        return phases.size();
    }
};

class PhaseFindingError : public std::runtime_error {
   public:
    PhaseFindingError(const std::string &what, double final_residual, size_t evaluations);
    double final_residual;
    size_t evaluations;
};

/// 2x2 product in the kConventionTag order. Throws std::domain_error for |x| > 1.
ComplexMatrix signal_unitary(double x, const PhaseVector &phases);

/// Re S(x)_{00}.
double signal_polynomial(double x, const PhaseVector &phases);

struct PhaseFindOptions {
    /// Required max mismatch on the verification nodes.
    double tol = 1e-10;
    size_t max_evaluations = 100000;
};

struct PhaseFindReport {
    size_t evaluations = 0;
    size_t iterations = 0;
    double node_residual = 0;
};

/// Finds phases realizing a definite-parity target with max |P| <= 1 - 1e-8 on [-1, 1].
///
/// The phases are parametrized symmetrically in the W(x) = e^{i arccos(x) X} signal
/// convention (d+1 palindromic phases, d/2+1 free parameters), fitted at the positive
/// Chebyshev nodes by Newton steps on the node residuals (analytic Jacobian, backtracking
/// on the squared mismatch), and then mapped to the d phases
/// of kConventionTag. The last d-1 of the returned phases are palindromic.
PhaseVector find_phases(const ChebyshevSeries &target, double tol = 1e-10);
PhaseVector find_phases(const ChebyshevSeries &target, const PhaseFindOptions &options, PhaseFindReport *report);

/// max |Re S(x)_{00} - P(x)| over `grid` evenly spaced points of [-1, 1]. A grid of
/// one point samples x = -1 only, so every finer grid is a superset.
double verify_phases(const PhaseVector &phases, const ChebyshevSeries &target, size_t grid);

/// Maps palindromic W(x)-convention phases (psi_0..psi_d) to kConventionTag phases
/// realizing the same Re of the (0,0) entry.
PhaseVector phases_from_wx_convention(const std::vector<double> &wx_phases);

/// (0,0) entry of e^{i psi_0 Z} W(x) e^{i psi_1 Z} ... W(x) e^{i psi_d Z}.
Complex wx_signal_entry(double x, const std::vector<double> &wx_phases);

}  // namespace qsvt_ir

#endif
