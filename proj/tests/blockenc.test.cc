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

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <unsupported/Eigen/MatrixFunctions>

#include "gtest/gtest.h"

#include "test_util.test.h"

using namespace qsvt_ir;
using qsvt_ir::testing::max_abs_diff;
using qsvt_ir::testing::spectral_distance;

namespace {

ComplexMatrix random_real(size_t n, double bound, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-bound, bound);
    ComplexMatrix m(n, n);
    for (auto &x : m.entries()) {
        x = u(rng);
    }
    return m;
}

}  // namespace

TEST(blockenc, dilation_scalar) {
    BlockEncoding be = dilation_encoding(ComplexMatrix::from_real_rows({{0.5}}));
    double r = std::sqrt(0.75);
    ASSERT_LE(max_abs_diff(be.unitary, ComplexMatrix::from_real_rows({{0.5, r}, {r, -0.5}})), 1e-15);
    ASSERT_EQ(be.ancilla_qubits, 1u);
    ASSERT_EQ(be.data_qubits, 0u);
}

TEST(blockenc, dilation_identity) {
    BlockEncoding be = dilation_encoding(ComplexMatrix::identity(2));
    ComplexMatrix expected = ComplexMatrix::identity(4);
    expected(2, 2) = -1;
    expected(3, 3) = -1;
    ASSERT_LE(max_abs_diff(be.unitary, expected), 1e-15);
}

TEST(blockenc, dilation_random) {
    for (uint64_t seed = 0; seed < 50; seed++) {
        ComplexMatrix a = random_real(4, 1, seed);
        a = a * Complex(0.9 / spectral_norm(a));
        BlockEncoding be = dilation_encoding(a);
        ASSERT_LE(unitarity_defect(be.unitary), 1e-11);
        ASSERT_LE(max_abs_diff(be.top_left_block(), a), 1e-11);
    }
}

TEST(blockenc, dilation_with_alpha_and_norm_one) {
    ComplexMatrix a = random_with_condition(8, 10, 3) * Complex(5);
    BlockEncoding be = dilation_encoding(a, 5);
    ASSERT_EQ(be.alpha, 5);
    ASSERT_LE(unitarity_defect(be.unitary), 1e-11);
    ASSERT_LE(max_abs_diff(be.top_left_block() * Complex(5), a), 1e-11);
}

TEST(blockenc, dilation_errors) {
    try {
        dilation_encoding(ComplexMatrix::from_real_rows({{2, 0}, {0, 1}}));
        FAIL() << "expected error";
    } catch (const std::invalid_argument &e) {
        ASSERT_NE(std::string(e.what()).find("pre-scale required"), std::string::npos);
    }
    ASSERT_THROW(dilation_encoding(ComplexMatrix(3, 3)), std::invalid_argument);
    ASSERT_THROW(dilation_encoding(ComplexMatrix(2, 4)), std::invalid_argument);
}

TEST(blockenc, compile_circuit_examples) {
    Circuit empty{2, {}};
    ASSERT_EQ(compile_circuit(empty), ComplexMatrix::identity(4));

    double r = std::numbers::sqrt2 / 2;
    Circuit h{1, {Gate{GateKind::h, {0}, 0}}};
    ASSERT_LE(max_abs_diff(compile_circuit(h), ComplexMatrix::from_real_rows({{r, r}, {r, -r}})), 1e-16);

    Circuit cc{2, {Gate{GateKind::cnot, {0, 1}, 0}, Gate{GateKind::cnot, {0, 1}, 0}}};
    ASSERT_EQ(compile_circuit(cc), ComplexMatrix::identity(4));

    // Qubit 0 is the most significant bit: CNOT(0 -> 1) maps |10> to |11>.
    Circuit c1{2, {Gate{GateKind::cnot, {0, 1}, 0}}};
    ComplexMatrix cnot = ComplexMatrix::from_real_rows({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}});
    ASSERT_EQ(compile_circuit(c1), cnot);
}

TEST(blockenc, compile_circuit_gate_matrices) {
    double t = 0.7;
    ComplexMatrix ry = compile_circuit(Circuit{1, {Gate{GateKind::ry, {0}, t}}});
    ASSERT_LE(max_abs_diff(ry, ComplexMatrix::from_real_rows({{std::cos(t / 2), -std::sin(t / 2)}, {std::sin(t / 2), std::cos(t / 2)}})), 1e-16);
    ComplexMatrix rz = compile_circuit(Circuit{1, {Gate{GateKind::rz, {0}, t}}});
    ASSERT_NEAR(std::abs(rz(0, 0) - std::polar(1.0, -t / 2)), 0, 1e-16);
    ASSERT_NEAR(std::abs(rz(1, 1) - std::polar(1.0, t / 2)), 0, 1e-16);

    ComplexMatrix sw = compile_circuit(Circuit{2, {Gate{GateKind::swap, {0, 1}, 0}}});
    ASSERT_EQ(sw, ComplexMatrix::from_real_rows({{1, 0, 0, 0}, {0, 0, 1, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}}));

    ComplexMatrix toffoli = compile_circuit(Circuit{3, {Gate{GateKind::mcx, {0, 1, 2}, 0}}});
    ComplexMatrix expected = ComplexMatrix::identity(8);
    expected(6, 6) = expected(7, 7) = 0;
    expected(6, 7) = expected(7, 6) = 1;
    ASSERT_EQ(toffoli, expected);

    ComplexMatrix cry = compile_circuit(Circuit{2, {Gate{GateKind::cry, {1, 0}, t}}});
    ASSERT_NEAR(cry(1, 1).real(), std::cos(t / 2), 1e-16);
    ASSERT_NEAR(cry(3, 1).real(), std::sin(t / 2), 1e-16);
    ASSERT_EQ(cry(0, 0), Complex(1));
}

TEST(blockenc, circuit_validation) {
    ASSERT_THROW(compile_circuit(Circuit{2, {Gate{GateKind::h, {2}, 0}}}), std::invalid_argument);
    ASSERT_THROW(compile_circuit(Circuit{2, {Gate{GateKind::cnot, {1, 1}, 0}}}), std::invalid_argument);
    ASSERT_THROW(compile_circuit(Circuit{2, {Gate{GateKind::cnot, {1}, 0}}}), std::invalid_argument);
    ASSERT_EQ(gate_kind_from_name(gate_kind_name(GateKind::cry)), GateKind::cry);
    ASSERT_THROW(gate_kind_from_name("toffoli"), std::invalid_argument);
}

TEST(blockenc, fable_exact_at_zero_threshold) {
    for (uint64_t seed = 0; seed < 20; seed++) {
        ComplexMatrix a = random_real(8, 1, 100 + seed);
        FableEncoding f = fable_encoding(a, 0);
        ASSERT_EQ(f.encoding.alpha, 8);
        ASSERT_EQ(f.encoding.ancilla_qubits, 4u);
        ASSERT_EQ(f.circuit.num_qubits, 7u);
        ASSERT_LE(unitarity_defect(f.encoding.unitary), 1e-11);
        ASSERT_LE(max_abs_diff(f.encoding.top_left_block(), a * Complex(1.0 / 8)), 1e-10);
        ASSERT_EQ(f.eps_thresh, 0);
    }
}

TEST(blockenc, fable_matches_dilation_after_alpha) {
    ComplexMatrix a = random_real(4, 0.2, 9);
    FableEncoding f = fable_encoding(a, 0);
    BlockEncoding d = dilation_encoding(a);
    ASSERT_LE(max_abs_diff(f.encoding.top_left_block() * Complex(f.encoding.alpha), d.top_left_block() * Complex(d.alpha)), 1e-10);
}

TEST(blockenc, fable_zero_matrix) {
    FableEncoding f = fable_encoding(ComplexMatrix(4, 4), 0);
    ASSERT_LE(max_abs_diff(f.encoding.top_left_block(), ComplexMatrix(4, 4)), 1e-15);
    ASSERT_EQ(f.rotations_kept, 16u);
    // Every angle is pi, so only the constant Walsh term survives compression.
    FableEncoding g = fable_encoding(ComplexMatrix(4, 4), 1e-12);
    size_t ry = 0;
    for (const Gate &gate : g.circuit.gates) {
        ry += gate.kind == GateKind::ry;
    }
    ASSERT_EQ(ry, 1u);
    ASSERT_EQ(g.rotations_kept, 1u);
    ASSERT_EQ(g.eps_thresh, 0);
    ASSERT_LE(max_abs_diff(g.encoding.top_left_block(), ComplexMatrix(4, 4)), 1e-15);
}

TEST(blockenc, fable_one_by_one) {
    FableEncoding f = fable_encoding(ComplexMatrix::from_real_rows({{-0.3}}), 0);
    ASSERT_NEAR(f.encoding.unitary(0, 0).real(), -0.3, 1e-15);
    ASSERT_EQ(f.gate_count, 1u);
}

TEST(blockenc, fable_compression) {
    ComplexMatrix a = random_real(8, 1, 77);
    const double inf = std::numeric_limits<double>::infinity();
    size_t previous_count = std::numeric_limits<size_t>::max();
    double previous_eps = 0;
    FableEncoding first = fable_encoding(a, 0);
    for (double threshold : {0.0, 1e-4, 1e-2, 0.1, inf}) {
        FableEncoding f = fable_encoding(a, threshold);
        ASSERT_LE(f.gate_count, previous_count) << threshold;
        ASSERT_GE(f.eps_thresh, previous_eps) << threshold;
        ASSERT_LE(spectral_distance(f.encoding.top_left_block(), a * Complex(1.0 / 8)), f.eps_thresh + 1e-12) << threshold;
        ASSERT_LE(unitarity_defect(f.encoding.unitary), 1e-11);
        previous_count = f.gate_count;
        previous_eps = f.eps_thresh;
    }
    FableEncoding none = fable_encoding(a, inf);
    ASSERT_LT(none.gate_count, first.gate_count);
    ASSERT_EQ(none.rotations_kept, 0u);
}

TEST(blockenc, fable_sparse_structure_compresses) {
    // A constant matrix has a single nonzero Walsh coefficient.
    ComplexMatrix a(4, 4);
    for (auto &x : a.entries()) {
        x = 0.25;
    }
    FableEncoding f = fable_encoding(a, 1e-12);
    ASSERT_EQ(f.rotations_kept, 1u);
    ASSERT_LE(max_abs_diff(f.encoding.top_left_block(), a * Complex(0.25)), 1e-12);
}

TEST(blockenc, fable_errors) {
    ASSERT_THROW(fable_encoding(ComplexMatrix(3, 3), 0), std::invalid_argument);
    ASSERT_THROW(fable_encoding(ComplexMatrix::from_real_rows({{1.5, 0}, {0, 0}}), 0), std::invalid_argument);
    ComplexMatrix c(2, 2);
    c(0, 0) = Complex(0, 0.1);
    ASSERT_THROW(fable_encoding(c, 0), std::invalid_argument);
}

TEST(blockenc, projector_phase_operator) {
    BlockEncoding be = dilation_encoding(random_real(4, 0.2, 1));
    ASSERT_LE(max_abs_diff(projector_phase_operator(0, ProjectorSide::left, be), ComplexMatrix::identity(8)), 1e-16);

    for (double phi : {0.3, std::numbers::pi, -1.1}) {
        Eigen::MatrixXcd gen = Eigen::MatrixXcd::Zero(8, 8);
        for (int k = 0; k < 8; k++) {
            gen(k, k) = (k < 4) ? 1.0 : -1.0;
        }
        Eigen::MatrixXcd expm = (Complex(0, phi) * gen).exp();
        ComplexMatrix op = projector_phase_operator(phi, ProjectorSide::right, be);
        ASSERT_LE(max_abs_diff(op, qsvt_ir::testing::from_eigen(expm)), 1e-12) << phi;
    }

    ComplexMatrix sum = projector_phase_operator(0.4 + 0.9, ProjectorSide::left, be);
    ComplexMatrix prod = projector_phase_operator(0.4, ProjectorSide::left, be) * projector_phase_operator(0.9, ProjectorSide::left, be);
    ASSERT_LE(max_abs_diff(sum, prod), 1e-15);
}
