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

#ifndef QSVT_IR_BLOCKENC_H
#define QSVT_IR_BLOCKENC_H

#include <cstddef>
#include <string>
#include <vector>

#include "qsvt_ir/numerics.h"

namespace qsvt_ir {

/// Projector onto the ancilla-all-zero subspace. Ancilla qubits are the most
/// significant ones, so the projector's range is the first 2^data_qubits basis states.
struct AncillaZeroProjector {
    size_t data_qubits = 0;
    size_t ancilla_qubits = 0;

    bool contains(size_t basis_index) const {
        return (basis_index >> data_qubits) == 0;
    }
};

enum class ProjectorSide { left, right };

/// Unitary U with (top-left 2^n x 2^n block of U) = A / alpha.
struct BlockEncoding {
    ComplexMatrix unitary;
    size_t data_qubits = 0;
    size_t ancilla_qubits = 0;
    double alpha = 1;
    AncillaZeroProjector projector_left;
    AncillaZeroProjector projector_right;

    size_t data_dim() const {
        return size_t{1} << data_qubits;
    }
    /// Top-left data block (= A / alpha up to the encoding tolerance).
    ComplexMatrix top_left_block() const;
};

enum class GateKind { ry, rz, h, cnot, swap, mcx, cry };

std::string gate_kind_name(GateKind kind);
GateKind gate_kind_from_name(const std::string &name);

/// Qubit 0 is the most significant bit of the basis index. Controls come first in
/// `qubits` and the target last (for swap, the two swapped qubits).
struct Gate {
    GateKind kind;
    std::vector<size_t> qubits;
    double angle = 0;

    bool operator==(const Gate &other) const = default;
};

struct Circuit {
    size_t num_qubits = 0;
    std::vector<Gate> gates;

    /// Throws std::invalid_argument on bad arity, repeated or out-of-range qubits.
    void validate() const;
    bool operator==(const Circuit &other) const = default;
};

/// U = [[A, sqrt(I - A A^dag)], [sqrt(I - A^dag A), -A^dag]] for A = a / alpha, with
/// matrix square roots taken through the SVD of A. One ancilla.
BlockEncoding dilation_encoding(const ComplexMatrix &a, double alpha = 1.0);

struct FableEncoding {
    BlockEncoding encoding;
    Circuit circuit;
    size_t gate_count = 0;
    size_t rotations_kept = 0;
    /// Spectral-norm bound on (block - A / 2^n) implied by the dropped rotation angles.
    double eps_thresh = 0;
};

/// FABLE-style encoding: Hadamards on an n-qubit row register, a uniformly controlled
/// RY oracle with angles 2 arccos(a_ij) in Gray-code order, a register/data swap and
/// Hadamards again. Walsh-transformed angles with magnitude below `threshold` are
/// dropped and the CNOTs that become adjacent are merged. alpha = 2^n.
FableEncoding fable_encoding(const ComplexMatrix &a, double threshold);

/// Product of the gate matrices in order (the first gate acts first).
ComplexMatrix compile_circuit(const Circuit &c);

/// e^{i phi (2 Pi - I)}: e^{i phi} on the ancilla-zero subspace and e^{-i phi} elsewhere.
ComplexMatrix projector_phase_operator(double phi, ProjectorSide which, const BlockEncoding &be);

/// Diagonal of projector_phase_operator, for applying it without forming the matrix.
CVector projector_phase_diagonal(double phi, ProjectorSide which, const BlockEncoding &be);

}  // namespace qsvt_ir

#endif
