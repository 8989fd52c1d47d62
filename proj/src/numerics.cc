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

#include "qsvt_ir/numerics.h"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>
#include <random>

namespace qsvt_ir {

namespace {

constexpr int kMaxSweeps = 100;

void require_same_shape(const ComplexMatrix &a, const ComplexMatrix &b, const char *op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument(std::string("dimension mismatch in ") + op);
    }
}

std::vector<std::vector<double>> gaussian_columns(std::mt19937_64 &rng, size_t n) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<std::vector<double>> cols(n, std::vector<double>(n));
    for (auto &col : cols) {
        for (auto &x : col) {
            x = normal(rng);
        }
    }
    return cols;
}

// Classical Gram-Schmidt with one reorthogonalization pass. R's diagonal is the
// (positive) residual norm, which fixes the sign ambiguity of the factorization.
ComplexMatrix orthonormalize_columns(std::vector<std::vector<double>> cols) {
    size_t n = cols.size();
    for (size_t j = 0; j < n; j++) {
        for (int pass = 0; pass < 2; pass++) {
            for (size_t k = 0; k < j; k++) {
                double d = 0;
                for (size_t i = 0; i < n; i++) {
                    d += cols[k][i] * cols[j][i];
                }
                for (size_t i = 0; i < n; i++) {
                    cols[j][i] -= d * cols[k][i];
                }
            }
        }
        double nrm = two_norm(std::span<const double>(cols[j]));
        if (nrm == 0) {
            throw std::runtime_error("degenerate gaussian sample");
        }
        for (auto &x : cols[j]) {
            x /= nrm;
        }
    }
    ComplexMatrix q(n, n);
    for (size_t j = 0; j < n; j++) {
        for (size_t i = 0; i < n; i++) {
            q(i, j) = cols[j][i];
        }
    }
    return q;
}

Svd svd_tall(const ComplexMatrix &a) {
    size_t m = a.rows();
    size_t n = a.cols();
    std::vector<CVector> work(n, CVector(m));
    std::vector<CVector> vcols(n, CVector(n));
    for (size_t j = 0; j < n; j++) {
        for (size_t i = 0; i < m; i++) {
            work[j][i] = a(i, j);
        }
        vcols[j][j] = 1;
    }

    const double rel_tol = static_cast<double>(std::max<size_t>(m, 1)) * DBL_EPSILON;
    int sweep = 0;
    double worst = 0;
    bool converged = false;
    for (; sweep < kMaxSweeps; sweep++) {
        bool rotated = false;
        worst = 0;
        for (size_t p = 0; p + 1 < n; p++) {
            for (size_t q = p + 1; q < n; q++) {
                double alpha = 0;
                double beta = 0;
                Complex gamma = 0;
                for (size_t i = 0; i < m; i++) {
                    alpha += std::norm(work[p][i]);
                    beta += std::norm(work[q][i]);
                    gamma += std::conj(work[p][i]) * work[q][i];
                }
                double g = std::abs(gamma);
                if (g == 0 || alpha == 0 || beta == 0) {
                    continue;
                }
                double scale = std::sqrt(alpha * beta);
                worst = std::max(worst, g / scale);
                if (g <= rel_tol * scale) {
                    continue;
                }
                rotated = true;
                Complex phase = std::conj(gamma / g);
                double zeta = (beta - alpha) / (2 * g);
                double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1 + zeta * zeta));
                double c = 1 / std::sqrt(1 + t * t);
                double s = c * t;
                for (size_t i = 0; i < m; i++) {
                    Complex xp = work[p][i];
                    Complex xq = phase * work[q][i];
                    work[p][i] = c * xp - s * xq;
                    work[q][i] = s * xp + c * xq;
                }
                for (size_t i = 0; i < n; i++) {
                    Complex xp = vcols[p][i];
                    Complex xq = phase * vcols[q][i];
                    vcols[p][i] = c * xp - s * xq;
                    vcols[q][i] = s * xp + c * xq;
                }
            }
        }
        if (!rotated) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        throw SvdConvergenceError(sweep, worst);
    }

    std::vector<double> sigma(n);
    for (size_t j = 0; j < n; j++) {
        sigma[j] = two_norm(std::span<const Complex>(work[j]));
    }
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](size_t x, size_t y) { return sigma[x] > sigma[y]; });

    Svd out;
    out.u = ComplexMatrix(m, n);
    out.v = ComplexMatrix(n, n);
    out.singular_values.resize(n);
    out.sweeps = sweep;
    double smax = n ? sigma[order[0]] : 0.0;
    std::vector<CVector> ucols;
    std::vector<bool> filled(n, false);
    for (size_t k = 0; k < n; k++) {
        size_t j = order[k];
        out.singular_values[k] = sigma[j];
        for (size_t i = 0; i < n; i++) {
            out.v(i, k) = vcols[j][i];
        }
        CVector u(m);
        if (sigma[j] > 0 && sigma[j] > smax * 1e-300) {
            for (size_t i = 0; i < m; i++) {
                u[i] = work[j][i] / sigma[j];
            }
            filled[k] = true;
        }
        ucols.push_back(std::move(u));
    }
    // Zero singular values leave their left vectors undetermined; complete the basis.
    size_t e = 0;
    for (size_t k = 0; k < n; k++) {
        while (!filled[k] && e < m) {
            CVector cand(m);
            cand[e++] = 1;
            for (int pass = 0; pass < 2; pass++) {
                for (size_t other = 0; other < n; other++) {
                    if (!filled[other]) {
                        continue;
                    }
                    Complex d = inner(ucols[other], cand);
                    for (size_t i = 0; i < m; i++) {
                        cand[i] -= d * ucols[other][i];
                    }
                }
            }
            double nrm = two_norm(std::span<const Complex>(cand));
            if (nrm > 1e-8) {
                for (auto &x : cand) {
                    x /= nrm;
                }
                ucols[k] = std::move(cand);
                filled[k] = true;
            }
        }
    }
    for (size_t k = 0; k < n; k++) {
        for (size_t i = 0; i < m; i++) {
            out.u(i, k) = ucols[k][i];
        }
    }
    return out;
}

}  // namespace

ComplexMatrix::ComplexMatrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {
}

ComplexMatrix::ComplexMatrix(size_t rows, size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows * cols) {
        throw std::invalid_argument("entries length must equal rows * cols");
    }
}

ComplexMatrix ComplexMatrix::identity(size_t n) {
    ComplexMatrix m(n, n);
    for (size_t i = 0; i < n; i++) {
        m(i, i) = 1;
    }
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> diag) {
    ComplexMatrix m(diag.size(), diag.size());
    for (size_t i = 0; i < diag.size(); i++) {
        m(i, i) = diag[i];
    }
    return m;
}

ComplexMatrix ComplexMatrix::from_real_rows(const std::vector<std::vector<double>> &rows) {
    size_t r = rows.size();
    size_t c = r ? rows[0].size() : 0;
    ComplexMatrix m(r, c);
    for (size_t i = 0; i < r; i++) {
        if (rows[i].size() != c) {
            throw std::invalid_argument("ragged rows");
        }
        for (size_t j = 0; j < c; j++) {
            m(i, j) = rows[i][j];
        }
    }
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (size_t i = 0; i < rows_; i++) {
        for (size_t j = 0; j < cols_; j++) {
            out(j, i) = std::conj((*this)(i, j));
        }
    }
    return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix out(cols_, rows_);
    for (size_t i = 0; i < rows_; i++) {
        for (size_t j = 0; j < cols_; j++) {
            out(j, i) = (*this)(i, j);
        }
    }
    return out;
}

ComplexMatrix ComplexMatrix::block(size_t row0, size_t col0, size_t r, size_t c) const {
    if (row0 + r > rows_ || col0 + c > cols_) {
        throw std::out_of_range("block exceeds matrix bounds");
    }
    ComplexMatrix out(r, c);
    for (size_t i = 0; i < r; i++) {
        for (size_t j = 0; j < c; j++) {
            out(i, j) = (*this)(row0 + i, col0 + j);
        }
    }
    return out;
}

void ComplexMatrix::set_block(size_t row0, size_t col0, const ComplexMatrix &b) {
    if (row0 + b.rows() > rows_ || col0 + b.cols() > cols_) {
        throw std::out_of_range("block exceeds matrix bounds");
    }
    for (size_t i = 0; i < b.rows(); i++) {
        for (size_t j = 0; j < b.cols(); j++) {
            (*this)(row0 + i, col0 + j) = b(i, j);
        }
    }
}

ComplexMatrix ComplexMatrix::real_part() const {
    ComplexMatrix out(rows_, cols_);
    for (size_t k = 0; k < data_.size(); k++) {
        out.data_[k] = data_[k].real();
    }
    return out;
}

ComplexMatrix ComplexMatrix::imag_part() const {
    ComplexMatrix out(rows_, cols_);
    for (size_t k = 0; k < data_.size(); k++) {
        out.data_[k] = data_[k].imag();
    }
    return out;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix &rhs) const {
    if (cols_ != rhs.rows_) {
        throw std::invalid_argument("dimension mismatch in matrix product");
    }
    ComplexMatrix out(rows_, rhs.cols_);
    for (size_t i = 0; i < rows_; i++) {
        for (size_t k = 0; k < cols_; k++) {
            Complex a = (*this)(i, k);
            if (a == Complex(0)) {
                continue;
            }
            const Complex *brow = &rhs.data_[k * rhs.cols_];
            Complex *orow = &out.data_[i * rhs.cols_];
            for (size_t j = 0; j < rhs.cols_; j++) {
                orow[j] += a * brow[j];
            }
        }
    }
    return out;
}

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix &rhs) const {
    require_same_shape(*this, rhs, "matrix sum");
    ComplexMatrix out = *this;
    for (size_t k = 0; k < data_.size(); k++) {
        out.data_[k] += rhs.data_[k];
    }
    return out;
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix &rhs) const {
    require_same_shape(*this, rhs, "matrix difference");
    ComplexMatrix out = *this;
    for (size_t k = 0; k < data_.size(); k++) {
        out.data_[k] -= rhs.data_[k];
    }
    return out;
}

ComplexMatrix ComplexMatrix::operator*(Complex s) const {
    ComplexMatrix out = *this;
    for (auto &x : out.data_) {
        x *= s;
    }
    return out;
}

double ComplexMatrix::frobenius_norm() const {
    double acc = 0;
    for (const auto &x : data_) {
        acc += std::norm(x);
    }
    return std::sqrt(acc);
}

double ComplexMatrix::max_abs_imag() const {
    double m = 0;
    for (const auto &x : data_) {
        m = std::max(m, std::abs(x.imag()));
    }
    return m;
}

double StateVector::norm() const {
    return two_norm(std::span<const Complex>(amplitudes));
}

bool StateVector::is_normalized(double tol) const {
    return std::abs(norm() - 1) <= tol;
}

StateVector StateVector::normalized_from(std::span<const Complex> v) {
    if (!is_power_of_two(v.size())) {
        throw std::invalid_argument("state dimension must be a power of two");
    }
    double nrm = two_norm(v);
    if (nrm == 0) {
        throw std::invalid_argument("cannot normalize the zero vector");
    }
    StateVector s;
    s.amplitudes.reserve(v.size());
    for (auto x : v) {
        s.amplitudes.push_back(x / nrm);
    }
    return s;
}

ComplexMatrix Svd::reconstruct() const {
    ComplexMatrix us = u;
    for (size_t i = 0; i < us.rows(); i++) {
        for (size_t k = 0; k < us.cols(); k++) {
            us(i, k) *= singular_values[k];
        }
    }
    return us * v.adjoint();
}

SvdConvergenceError::SvdConvergenceError(int sweeps, double off_diagonal)
    : std::runtime_error(
          "one-sided Jacobi SVD did not converge after " + std::to_string(sweeps) +
          " sweeps (worst relative off-diagonal " + std::to_string(off_diagonal) + ")"),
      sweeps(sweeps),
      off_diagonal(off_diagonal) {
}

Svd svd(const ComplexMatrix &a) {
    for (auto x : a.entries()) {
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) {
            throw std::invalid_argument("svd input must be finite");
        }
    }
    if (a.rows() >= a.cols()) {
        return svd_tall(a);
    }
    Svd t = svd_tall(a.adjoint());
    std::swap(t.u, t.v);
    return t;
}

double condition_number(const ComplexMatrix &a) {
    Svd s = svd(a);
    if (s.singular_values.empty()) {
        throw std::domain_error("matrix numerically singular");
    }
    double smax = s.singular_values.front();
    double smin = s.singular_values.back();
    if (!(smin > 1e-14 * smax)) {
        throw std::domain_error("matrix numerically singular");
    }
    return smax / smin;
}

double spectral_norm(const ComplexMatrix &a) {
    Svd s = svd(a);
    return s.singular_values.empty() ? 0.0 : s.singular_values.front();
}

double two_norm(std::span<const Complex> v) {
    double scale = 0;
    for (auto x : v) {
        scale = std::max(scale, std::abs(x));
    }
    if (scale == 0) {
        return 0;
    }
    double acc = 0;
    for (auto x : v) {
        acc += std::norm(x / scale);
    }
    return scale * std::sqrt(acc);
}

double two_norm(std::span<const double> v) {
    double acc = 0;
    for (double x : v) {
        acc += x * x;
    }
    return std::sqrt(acc);
}

CVector matvec(const ComplexMatrix &a, std::span<const Complex> v) {
    if (a.cols() != v.size()) {
        throw std::invalid_argument("dimension mismatch in matvec");
    }
    CVector out(a.rows());
    for (size_t i = 0; i < a.rows(); i++) {
        Complex acc = 0;
        for (size_t j = 0; j < a.cols(); j++) {
            acc += a(i, j) * v[j];
        }
        out[i] = acc;
    }
    return out;
}

Complex inner(std::span<const Complex> x, std::span<const Complex> y) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("dimension mismatch in inner product");
    }
    Complex acc = 0;
    for (size_t i = 0; i < x.size(); i++) {
        acc += std::conj(x[i]) * y[i];
    }
    return acc;
}

CVector axpy(Complex alpha, std::span<const Complex> x, std::span<const Complex> y) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("dimension mismatch in axpy");
    }
    CVector out(y.begin(), y.end());
    for (size_t i = 0; i < x.size(); i++) {
        out[i] += alpha * x[i];
    }
    return out;
}

CVector to_complex(std::span<const double> v) {
    return CVector(v.begin(), v.end());
}

std::vector<double> real_parts(std::span<const Complex> v) {
    std::vector<double> out;
    out.reserve(v.size());
    for (auto x : v) {
        out.push_back(x.real());
    }
    return out;
}

double unitarity_defect(const ComplexMatrix &u) {
    if (!u.is_square()) {
        throw std::invalid_argument("unitarity check requires a square matrix");
    }
    return (u.adjoint() * u - ComplexMatrix::identity(u.rows())).frobenius_norm();
}

bool is_unitary(const ComplexMatrix &u, double tol_per_dim) {
    return u.is_square() && unitarity_defect(u) <= tol_per_dim * static_cast<double>(u.rows());
}

ComplexMatrix random_orthogonal(size_t n, uint64_t seed) {
    std::mt19937_64 rng(seed);
    return orthonormalize_columns(gaussian_columns(rng, n));
}

ComplexMatrix random_with_condition(size_t n, double kappa, uint64_t seed) {
    if (n < 1) {
        throw std::invalid_argument("random_with_condition requires n >= 1");
    }
    if (!(kappa >= 1)) {
        throw std::invalid_argument("random_with_condition requires kappa >= 1");
    }
    std::mt19937_64 rng(seed);
    ComplexMatrix w = orthonormalize_columns(gaussian_columns(rng, n));
    ComplexMatrix v = orthonormalize_columns(gaussian_columns(rng, n));
    std::vector<double> sigma(n, 1.0);
    for (size_t k = 1; k < n; k++) {
        sigma[k] = std::pow(kappa, -static_cast<double>(k) / static_cast<double>(n - 1));
    }
    sigma[n - 1] = n > 1 ? 1 / kappa : 1.0;
    return w * ComplexMatrix::diagonal(sigma) * v.transpose();
}

uint64_t derive_seed(uint64_t base, uint64_t stream, uint64_t index) {
    auto mix = [](uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(mix(mix(base) ^ stream) ^ index);
}

CVector random_unit_vector(size_t n, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> v(n);
    for (auto &x : v) {
        x = normal(rng);
    }
    double nrm = two_norm(std::span<const double>(v));
    for (auto &x : v) {
        x /= nrm;
    }
    return to_complex(v);
}

CVector direct_solve(const Svd &s, std::span<const Complex> b) {
    CVector coeff = matvec(s.u.adjoint(), b);
    for (size_t k = 0; k < coeff.size(); k++) {
        coeff[k] /= s.singular_values[k];
    }
    return matvec(s.v, coeff);
}

CVector direct_solve(const ComplexMatrix &a, std::span<const Complex> b) {
    if (!a.is_square()) {
        throw std::invalid_argument("direct_solve requires a square matrix");
    }
    condition_number(a);
    return direct_solve(svd(a), b);
}

bool is_power_of_two(size_t n) {
    return n != 0 && (n & (n - 1)) == 0;
}

size_t log2_exact(size_t n) {
    if (!is_power_of_two(n)) {
        throw std::invalid_argument("dimension " + std::to_string(n) + " is not a power of two");
    }
    size_t k = 0;
    while ((size_t{1} << k) < n) {
        k++;
    }
    return k;
}

}  // namespace qsvt_ir
