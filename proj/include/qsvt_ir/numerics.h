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

#ifndef QSVT_IR_NUMERICS_H
#define QSVT_IR_NUMERICS_H

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qsvt_ir {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

/// Dense row-major complex matrix.
class ComplexMatrix {
   public:
    ComplexMatrix() = default;
    ComplexMatrix(size_t rows, size_t cols);
    ComplexMatrix(size_t rows, size_t cols, std::vector<Complex> entries);

    static ComplexMatrix identity(size_t n);
    static ComplexMatrix diagonal(std::span<const double> diag);
    /// Builds a matrix from nested real rows, e.g. {{1, 2}, {3, 4}}.
    static ComplexMatrix from_real_rows(const std::vector<std::vector<double>> &rows);

    size_t rows() const {
        return rows_;
    }
    size_t cols() const {
        return cols_;
    }
    bool is_square() const {
        return rows_ == cols_;
    }

    Complex &operator()(size_t r, size_t c) {
        return data_[r * cols_ + c];
    }
    const Complex &operator()(size_t r, size_t c) const {
        return data_[r * cols_ + c];
    }
    std::span<const Complex> entries() const {
        return data_;
    }
    std::span<Complex> entries() {
        return data_;
    }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    /// Top-left `r` x `c` sub-block.
    ComplexMatrix block(size_t row0, size_t col0, size_t r, size_t c) const;
    void set_block(size_t row0, size_t col0, const ComplexMatrix &b);
    ComplexMatrix real_part() const;
    ComplexMatrix imag_part() const;

    ComplexMatrix operator*(const ComplexMatrix &rhs) const;
    ComplexMatrix operator+(const ComplexMatrix &rhs) const;
    ComplexMatrix operator-(const ComplexMatrix &rhs) const;
    ComplexMatrix operator*(Complex s) const;
    bool operator==(const ComplexMatrix &other) const = default;

    /// Frobenius norm.
    double frobenius_norm() const;
    /// Largest absolute value of an imaginary part.
    double max_abs_imag() const;

   private:
    size_t rows_ = 0;
    size_t cols_ = 0;
    std::vector<Complex> data_;
};

/// Normalized or unnormalized amplitude vector over a power-of-two dimension.
struct StateVector {
    CVector amplitudes;

    size_t dim() const {
        return amplitudes.size();
    }
    double norm() const;
    bool is_normalized(double tol = 1e-12) const;
    static StateVector normalized_from(std::span<const Complex> v);
};

/// Thin SVD: a = u * diag(singular_values) * v^dagger.
struct Svd {
    ComplexMatrix u;
    std::vector<double> singular_values;
    ComplexMatrix v;
    int sweeps = 0;

    ComplexMatrix reconstruct() const;
};

class SvdConvergenceError : public std::runtime_error {
   public:
    SvdConvergenceError(int sweeps, double off_diagonal);
    int sweeps;
    double off_diagonal;
};

/// One-sided (Hestenes) Jacobi SVD. Works for any shape.
Svd svd(const ComplexMatrix &a);

/// sigma_max / sigma_min. Throws std::domain_error when sigma_min <= 1e-14 * sigma_max.
double condition_number(const ComplexMatrix &a);

double spectral_norm(const ComplexMatrix &a);
double two_norm(std::span<const Complex> v);
double two_norm(std::span<const double> v);
CVector matvec(const ComplexMatrix &a, std::span<const Complex> v);
/// Hermitian inner product <x, y> = sum conj(x_k) y_k.
Complex inner(std::span<const Complex> x, std::span<const Complex> y);
CVector axpy(Complex alpha, std::span<const Complex> x, std::span<const Complex> y);
CVector to_complex(std::span<const double> v);
std::vector<double> real_parts(std::span<const Complex> v);

/// ||u^dagger u - I||_F; zero for exact unitaries.
double unitarity_defect(const ComplexMatrix &u);
bool is_unitary(const ComplexMatrix &u, double tol_per_dim = 1e-12);

/// Random orthogonal matrix (real), from QR of a seeded standard normal matrix with
/// positive R diagonal.
ComplexMatrix random_orthogonal(size_t n, uint64_t seed);

/// Real n x n matrix W diag(sigma) V^T with sigma log-spaced in [1/kappa, 1].
/// Deterministic per seed; spectral norm is 1 and condition number is kappa.
ComplexMatrix random_with_condition(size_t n, double kappa, uint64_t seed);

/// Mixes a base seed with stream indices (splitmix64 finalizer), so that independent
/// random draws of one run never share an RNG stream.
uint64_t derive_seed(uint64_t base, uint64_t stream, uint64_t index = 0);

/// Seeded real vector with unit two-norm.
CVector random_unit_vector(size_t n, uint64_t seed);

/// Solves a x = b via the SVD pseudo-inverse (high precision reference).
CVector direct_solve(const ComplexMatrix &a, std::span<const Complex> b);
CVector direct_solve(const Svd &decomposition, std::span<const Complex> b);

bool is_power_of_two(size_t n);
/// log2(n) for powers of two; throws std::invalid_argument otherwise.
size_t log2_exact(size_t n);

}  // namespace qsvt_ir

#endif
