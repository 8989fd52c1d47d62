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

#include "qsvt_ir/qsvt_core.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace qsvt_ir {

namespace {

constexpr double kRealEncodingTol = 1e-12;

void check_inputs(const BlockEncoding &encoding, const PhaseVector &phases) {
    if (phases.convention_tag != kConventionTag) {
        throw std::invalid_argument("phase convention '" + phases.convention_tag + "' is not " + std::string(kConventionTag));
    }
    if (phases.degree() < 1) {
        throw std::invalid_argument("the phase sequence needs d >= 1");
    }
    size_t dim = encoding.unitary.rows();
    if (!encoding.unitary.is_square() || dim != (encoding.data_dim() << encoding.ancilla_qubits)) {
        throw std::invalid_argument("block-encoding unitary does not match its qubit counts");
    }
}

// Phases in slot order (slot 1 is leftmost).
std::vector<double> slot_phases(const PhaseVector &phases, SequenceOrder order, double sign) {
    std::vector<double> out = phases.phases;
    if (order == SequenceOrder::descending) {
        std::reverse(out.begin(), out.end());
    }
    for (double &p : out) {
        p *= sign;
    }
    return out;
}

// Slot j (0-based) acts on the left projector and is followed by U when d-1-j is even,
// and on the right projector followed by U^dag otherwise.
bool slot_uses_u(size_t j, size_t d) {
    return (d - 1 - j) % 2 == 0;
}

ComplexMatrix dense_sequence(const BlockEncoding &be, const ComplexMatrix &u_dag, const std::vector<double> &phi) {
    size_t d = phi.size();
    size_t dim = be.unitary.rows();
    ComplexMatrix m = ComplexMatrix::identity(dim);
    for (size_t j = 0; j < d; j++) {
        bool use_u = slot_uses_u(j, d);
        CVector diag = projector_phase_diagonal(phi[j], use_u ? ProjectorSide::left : ProjectorSide::right, be);
        for (size_t r = 0; r < dim; r++) {
            for (size_t c = 0; c < dim; c++) {
                m(r, c) *= diag[c];
            }
        }
        m = m * (use_u ? be.unitary : u_dag);
    }
    return m;
}

CVector apply_sequence(const BlockEncoding &be, const ComplexMatrix &u_dag, const std::vector<double> &phi, CVector state) {
    size_t d = phi.size();
    for (size_t j = d; j-- > 0;) {
        bool use_u = slot_uses_u(j, d);
        state = matvec(use_u ? be.unitary : u_dag, state);
        CVector diag = projector_phase_diagonal(phi[j], use_u ? ProjectorSide::left : ProjectorSide::right, be);
        for (size_t k = 0; k < state.size(); k++) {
            state[k] *= diag[k];
        }
    }
    return state;
}

InverseStateResult finish_post_selection(const CVector &combined, size_t data_dim, size_t be_calls) {
    CVector accepted(combined.begin(), combined.begin() + static_cast<std::ptrdiff_t>(data_dim));
    double p = two_norm(accepted);
    p *= p;
    if (!(p >= 1e-14)) {
        throw PostSelectionError(p);
    }
    return InverseStateResult{StateVector::normalized_from(accepted), std::min(p, 1.0), be_calls};
}

void check_state(const StateVector &b_state, size_t data_dim) {
    if (b_state.dim() != data_dim) {
        throw std::invalid_argument("state dimension does not match the encoding's data register");
    }
    if (!b_state.is_normalized()) {
        throw std::invalid_argument("input state must be normalized");
    }
}

void check_real(const BlockEncoding &be) {
    if (be.unitary.max_abs_imag() > kRealEncodingTol) {
        throw std::invalid_argument("real-part extraction requires a real block-encoding unitary");
    }
}

}  // namespace

PostSelectionError::PostSelectionError(double p)
    : std::runtime_error([p] {
          char buf[96];
          std::snprintf(buf, sizeof(buf), "post-selection failure (success probability %.3e)", p);
          return std::string(buf);
      }()),
      success_probability(p) {
}

QsvtOperator build_u_phi(const BlockEncoding &encoding, const PhaseVector &phases, SequenceOrder order) {
    check_inputs(encoding, phases);
    ComplexMatrix u_dag = encoding.unitary.adjoint();
    QsvtOperator op;
    op.u_phi = dense_sequence(encoding, u_dag, slot_phases(phases, order, 1));
    op.u_phi_negated = dense_sequence(encoding, u_dag, slot_phases(phases, order, -1));
    op.encoding = encoding;
    op.phases = phases;
    op.parity = phases.degree() % 2 ? Parity::odd : Parity::even;
    op.be_calls = phases.degree();
    return op;
}

QsvtOperator build_u_phi(const BlockEncoding &encoding, const PhaseVector &phases, const ChebyshevSeries &polynomial) {
    if (polynomial.degree() != phases.degree()) {
        throw std::invalid_argument("polynomial degree does not match the number of phases");
    }
    QsvtOperator op = build_u_phi(encoding, phases);
    op.polynomial = polynomial;
    return op;
}

ComplexMatrix extract_block(const QsvtOperator &op) {
    size_t n = op.encoding.data_dim();
    return op.u_phi.block(0, 0, n, n);
}

ComplexMatrix real_block(const QsvtOperator &op) {
    check_real(op.encoding);
    size_t n = op.encoding.data_dim();
    return (op.u_phi.block(0, 0, n, n) + op.u_phi_negated.block(0, 0, n, n)) * Complex(0.5);
}

ComplexMatrix spectral_oracle(const ComplexMatrix &a, const ChebyshevSeries &series) {
    if (series.parity() == Parity::none) {
        throw std::invalid_argument("spectral_oracle requires a definite-parity series");
    }
    Svd s = svd(a);
    std::vector<double> p(s.singular_values.size());
    for (size_t k = 0; k < p.size(); k++) {
        double sigma = s.singular_values[k];
        if (sigma > 1 && sigma <= 1 + 1e-12) {
            sigma = 1;
        }
        p[k] = clenshaw_eval(series, sigma);
    }
    const ComplexMatrix &left = series.parity() == Parity::odd ? s.u : s.v;
    return left * ComplexMatrix::diagonal(p) * s.v.adjoint();
}

InverseStateResult apply_inverse_state(
    const BlockEncoding &encoding, const PhaseVector &phases, const ChebyshevSeries &series, const StateVector &b_state) {
    check_inputs(encoding, phases);
    if (series.parity() != Parity::odd) {
        throw std::invalid_argument("apply_inverse_state requires an odd series");
    }
    if (series.degree() != phases.degree()) {
        throw std::invalid_argument("series degree does not match the number of phases");
    }
    check_real(encoding);
    size_t n = encoding.data_dim();
    check_state(b_state, n);
    CVector input(encoding.unitary.rows(), Complex(0));
    std::copy(b_state.amplitudes.begin(), b_state.amplitudes.end(), input.begin());

    ComplexMatrix u_dag = encoding.unitary.adjoint();
    CVector plus = apply_sequence(encoding, u_dag, slot_phases(phases, SequenceOrder::ascending, 1), input);
    CVector minus = apply_sequence(encoding, u_dag, slot_phases(phases, SequenceOrder::ascending, -1), input);
    CVector combined = axpy(1, plus, minus);
    for (auto &x : combined) {
        x *= 0.5;
    }
    return finish_post_selection(combined, n, phases.degree());
}

InverseStateResult apply_inverse_state(const QsvtOperator &op, const StateVector &b_state) {
    if (op.parity != Parity::odd) {
        throw std::invalid_argument("apply_inverse_state requires an odd sequence");
    }
    size_t n = op.encoding.data_dim();
    check_state(b_state, n);
    ComplexMatrix block = real_block(op);
    return finish_post_selection(matvec(block, b_state.amplitudes), n, op.be_calls);
}

}  // namespace qsvt_ir
