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

#include "qsvt_ir/blockenc.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qsvt_ir {

namespace {

struct Gate2 {
    Complex m00, m01, m10, m11;
};

Gate2 single_qubit_matrix(GateKind kind, double angle) {
    switch (kind) {
        case GateKind::ry:
        case GateKind::cry: {
            double c = std::cos(angle / 2);
            double s = std::sin(angle / 2);
            return Gate2{c, -s, s, c};
        }
        case GateKind::rz:
            return Gate2{std::polar(1.0, -angle / 2), 0, 0, std::polar(1.0, angle / 2)};
        case GateKind::h: {
            double r = std::numbers::sqrt2 / 2;
            return Gate2{r, r, r, -r};
        }
        case GateKind::cnot:
        case GateKind::mcx:
            return Gate2{0, 1, 1, 0};
        case GateKind::swap:
            break;
    }
    throw std::logic_error("swap has no single-qubit matrix");
}

size_t bit_of(size_t qubit, size_t num_qubits) {
    return size_t{1} << (num_qubits - 1 - qubit);
}

// Left-multiplies `m` (rows indexed by basis states) by the gate.
void apply_gate(const Gate &g, size_t num_qubits, ComplexMatrix &m) {
    size_t dim = m.rows();
    size_t cols = m.cols();
    if (g.kind == GateKind::swap) {
        size_t a = bit_of(g.qubits[0], num_qubits);
        size_t b = bit_of(g.qubits[1], num_qubits);
        for (size_t i = 0; i < dim; i++) {
            if ((i & a) && !(i & b)) {
                size_t j = (i & ~a) | b;
                for (size_t c = 0; c < cols; c++) {
                    std::swap(m(i, c), m(j, c));
                }
            }
        }
        return;
    }
    size_t control_mask = 0;
    for (size_t k = 0; k + 1 < g.qubits.size(); k++) {
        control_mask |= bit_of(g.qubits[k], num_qubits);
    }
    size_t target = bit_of(g.qubits.back(), num_qubits);
    Gate2 u = single_qubit_matrix(g.kind, g.angle);
    for (size_t i = 0; i < dim; i++) {
        if ((i & target) || (i & control_mask) != control_mask) {
            continue;
        }
        size_t j = i | target;
        for (size_t c = 0; c < cols; c++) {
            Complex x0 = m(i, c);
            Complex x1 = m(j, c);
            m(i, c) = u.m00 * x0 + u.m01 * x1;
            m(j, c) = u.m10 * x0 + u.m11 * x1;
        }
    }
}

size_t expected_arity(GateKind kind) {
    switch (kind) {
        case GateKind::ry:
        case GateKind::rz:
        case GateKind::h:
            return 1;
        case GateKind::cnot:
        case GateKind::swap:
        case GateKind::cry:
            return 2;
        case GateKind::mcx:
            return 0;
    }
    return 0;
}

}  // namespace

ComplexMatrix BlockEncoding::top_left_block() const {
    return unitary.block(0, 0, data_dim(), data_dim());
}

std::string gate_kind_name(GateKind kind) {
    switch (kind) {
        case GateKind::ry:
            return "ry";
        case GateKind::rz:
            return "rz";
        case GateKind::h:
            return "h";
        case GateKind::cnot:
            return "cnot";
        case GateKind::swap:
            return "swap";
        case GateKind::mcx:
            return "mcx";
        case GateKind::cry:
            return "cry";
    }
    return "?";
}

GateKind gate_kind_from_name(const std::string &name) {
    for (GateKind k : {GateKind::ry, GateKind::rz, GateKind::h, GateKind::cnot, GateKind::swap, GateKind::mcx, GateKind::cry}) {
        if (gate_kind_name(k) == name) {
            return k;
        }
    }
    throw std::invalid_argument("unknown gate kind '" + name + "'");
}

void Circuit::validate() const {
    for (size_t n = 0; n < gates.size(); n++) {
        const Gate &g = gates[n];
        size_t arity = expected_arity(g.kind);
        if (arity ? g.qubits.size() != arity : g.qubits.empty()) {
            throw std::invalid_argument("gate " + std::to_string(n) + " (" + gate_kind_name(g.kind) + ") has wrong arity");
        }
        for (size_t a = 0; a < g.qubits.size(); a++) {
            if (g.qubits[a] >= num_qubits) {
                throw std::invalid_argument("gate " + std::to_string(n) + " uses qubit " + std::to_string(g.qubits[a]) +
                                            " of a " + std::to_string(num_qubits) + "-qubit circuit");
            }
            for (size_t b = 0; b < a; b++) {
                if (g.qubits[a] == g.qubits[b]) {
                    throw std::invalid_argument("gate " + std::to_string(n) + " repeats qubit " + std::to_string(g.qubits[a]));
                }
            }
        }
    }
}

ComplexMatrix compile_circuit(const Circuit &c) {
    c.validate();
    if (c.num_qubits >= 16) {
        throw std::invalid_argument("compile_circuit is limited to 15 qubits");
    }
    ComplexMatrix m = ComplexMatrix::identity(size_t{1} << c.num_qubits);
    for (const Gate &g : c.gates) {
        apply_gate(g, c.num_qubits, m);
    }
    return m;
}

BlockEncoding dilation_encoding(const ComplexMatrix &a, double alpha) {
    if (!a.is_square()) {
        throw std::invalid_argument("dilation_encoding requires a square matrix");
    }
    if (!(alpha > 0)) {
        throw std::invalid_argument("dilation_encoding requires alpha > 0");
    }
    size_t n = a.rows();
    size_t data_qubits = log2_exact(n);
    ComplexMatrix scaled = a * Complex(1 / alpha);
    Svd s = svd(scaled);
    std::vector<double> comp(n);
    for (size_t k = 0; k < n; k++) {
        double c = 1 - s.singular_values[k] * s.singular_values[k];
        if (c < -1e-14) {
            throw std::invalid_argument("pre-scale required: spectral norm of a/alpha exceeds 1");
        }
        comp[k] = std::sqrt(std::max(c, 0.0));
    }
    ComplexMatrix d = ComplexMatrix::diagonal(comp);
    ComplexMatrix left = s.u * d * s.u.adjoint();
    ComplexMatrix right = s.v * d * s.v.adjoint();

    BlockEncoding be;
    be.unitary = ComplexMatrix(2 * n, 2 * n);
    be.unitary.set_block(0, 0, scaled);
    be.unitary.set_block(0, n, left);
    be.unitary.set_block(n, 0, right);
    be.unitary.set_block(n, n, scaled.adjoint() * Complex(-1));
    be.data_qubits = data_qubits;
    be.ancilla_qubits = 1;
    be.alpha = alpha;
    be.projector_left = AncillaZeroProjector{data_qubits, 1};
    be.projector_right = be.projector_left;
    return be;
}

FableEncoding fable_encoding(const ComplexMatrix &a, double threshold) {
    if (!a.is_square()) {
        throw std::invalid_argument("fable_encoding requires a square matrix");
    }
    size_t n = log2_exact(a.rows());
    size_t dim = a.rows();
    if (a.max_abs_imag() != 0) {
        throw std::invalid_argument("fable_encoding requires a real matrix");
    }
    for (auto x : a.entries()) {
        if (!(std::abs(x.real()) <= 1)) {
            throw std::invalid_argument("fable_encoding requires entries in [-1, 1]");
        }
    }

    // Control register = (row register, data register); qubit 1 is its most significant bit.
    size_t k = 2 * n;
    size_t count = size_t{1} << k;
    std::vector<double> alpha(count);
    for (size_t i = 0; i < dim; i++) {
        for (size_t j = 0; j < dim; j++) {
            alpha[i * dim + j] = 2 * std::acos(a(i, j).real());
        }
    }
    // Rotation t sees every control state x with sign (-1)^{x . gray(t)}.
    std::vector<double> theta(count, 0.0);
    for (size_t t = 0; t < count; t++) {
        size_t g = t ^ (t >> 1);
        double acc = 0;
        for (size_t x = 0; x < count; x++) {
            acc += (std::popcount(x & g) % 2 ? -alpha[x] : alpha[x]);
        }
        theta[t] = acc / static_cast<double>(count);
    }

    FableEncoding out;
    Circuit &c = out.circuit;
    c.num_qubits = 2 * n + 1;
    for (size_t q = 1; q <= n; q++) {
        c.gates.push_back(Gate{GateKind::h, {q}, 0});
    }
    size_t pending = 0;
    auto flush = [&]() {
        for (size_t p = k; p-- > 0;) {
            if (pending >> p & 1) {
                c.gates.push_back(Gate{GateKind::cnot, {k - p, 0}, 0});
            }
        }
        pending = 0;
    };
    double dropped = 0;
    for (size_t t = 0; t < count; t++) {
        if (std::abs(theta[t]) < threshold) {
            dropped += std::abs(theta[t]);
        } else {
            flush();
            c.gates.push_back(Gate{GateKind::ry, {0}, theta[t]});
            out.rotations_kept++;
        }
        if (k > 0) {
            size_t changed = t + 1 < count ? static_cast<size_t>(std::countr_zero(t + 1)) : k - 1;
            pending ^= size_t{1} << changed;
        }
    }
    flush();
    for (size_t q = 0; q < n; q++) {
        c.gates.push_back(Gate{GateKind::swap, {1 + q, n + 1 + q}, 0});
    }
    for (size_t q = 1; q <= n; q++) {
        c.gates.push_back(Gate{GateKind::h, {q}, 0});
    }

    out.gate_count = c.gates.size();
    out.eps_thresh = 0.5 * dropped;
    out.encoding.unitary = compile_circuit(c);
    out.encoding.data_qubits = n;
    out.encoding.ancilla_qubits = n + 1;
    out.encoding.alpha = static_cast<double>(dim);
    out.encoding.projector_left = AncillaZeroProjector{n, n + 1};
    out.encoding.projector_right = out.encoding.projector_left;
    return out;
}

CVector projector_phase_diagonal(double phi, ProjectorSide /*which*/, const BlockEncoding &be) {
    // Both projectors select the ancilla-zero subspace for the encodings built here.
    size_t dim = be.unitary.rows();
    CVector diag(dim);
    Complex in = std::polar(1.0, phi);
    Complex out = std::polar(1.0, -phi);
    for (size_t i = 0; i < dim; i++) {
        diag[i] = be.projector_left.contains(i) ? in : out;
    }
    return diag;
}

ComplexMatrix projector_phase_operator(double phi, ProjectorSide which, const BlockEncoding &be) {
    CVector diag = projector_phase_diagonal(phi, which, be);
    ComplexMatrix m(diag.size(), diag.size());
    for (size_t i = 0; i < diag.size(); i++) {
        m(i, i) = diag[i];
    }
    return m;
}

}  // namespace qsvt_ir
