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

#ifndef QSVT_IR_QSVT_CORE_H
#define QSVT_IR_QSVT_CORE_H

#include <optional>
#include <stdexcept>

#include "qsvt_ir/blockenc.h"
#include "qsvt_ir/invpoly.h"
#include "qsvt_ir/numerics.h"
#include "qsvt_ir/qsp_phases.h"

namespace qsvt_ir {

/// Order in which the phase vector is consumed by the alternating sequence.
/// `ascending` places phi_1 in the outermost (leftmost) slot and is the order that
/// matches signal_unitary; `descending` exists for the ordering regression test.
enum class SequenceOrder { ascending, descending };

/// Dense alternating phase modulation sequence
///
///     U_Phi = e^{i phi_1 (2 Pi_L - I)} U e^{i phi_2 (2 Pi_R - I)} U^dag ... e^{i phi_d (2 Pi_L - I)} U   (odd d)
///     U_Phi = e^{i phi_1 (2 Pi_R - I)} U^dag e^{i phi_2 (2 Pi_L - I)} U ... e^{i phi_d (2 Pi_L - I)} U  (even d)
///
/// together with the same sequence for -Phi. For a real encoding, U_{-Phi} = conj(U_Phi),
/// so the two-term combination (U_Phi + U_{-Phi}) / 2 carries Re P on its data block.
struct QsvtOperator {
    ComplexMatrix u_phi;
    ComplexMatrix u_phi_negated;
    BlockEncoding encoding;
    PhaseVector phases;
    std::optional<ChebyshevSeries> polynomial;
    Parity parity = Parity::odd;
    /// Calls to U or U^dag per application (= d). The -Phi branch shares these calls
    /// because only its projector phases differ.
    size_t be_calls = 0;
};

QsvtOperator build_u_phi(const BlockEncoding &encoding, const PhaseVector &phases, SequenceOrder order = SequenceOrder::ascending);
QsvtOperator build_u_phi(const BlockEncoding &encoding, const PhaseVector &phases, const ChebyshevSeries &polynomial);

/// Data block Pi_L U_Phi Pi_R (complex).
ComplexMatrix extract_block(const QsvtOperator &op);

/// Data block of (U_Phi + U_{-Phi}) / 2. Throws std::invalid_argument unless the
/// encoding unitary is real, which is what makes this block equal Re P(A).
ComplexMatrix real_block(const QsvtOperator &op);

/// W P(Sigma) V^dag for odd series, V P(Sigma) V^dag for even series.
ComplexMatrix spectral_oracle(const ComplexMatrix &a, const ChebyshevSeries &series);

class PostSelectionError : public std::runtime_error {
   public:
    explicit PostSelectionError(double success_probability);
    double success_probability;
};

struct InverseStateResult {
    StateVector out_state;
    /// Squared norm of the accepted (all-ancilla-zero) component before renormalizing.
    double success_probability = 0;
    size_t be_calls = 0;
};

/// Applies the real-part combination of U_Phi to |0>_a |b> by statevector simulation,
/// projects onto ancilla zero and renormalizes. The encoding must encode A^dag so
/// that the odd polynomial approximates a multiple of A^{-1}.
InverseStateResult apply_inverse_state(
    const BlockEncoding &encoding, const PhaseVector &phases, const ChebyshevSeries &series, const StateVector &b_state);

/// Same measurement using an already built operator.
InverseStateResult apply_inverse_state(const QsvtOperator &op, const StateVector &b_state);

}  // namespace qsvt_ir

#endif
