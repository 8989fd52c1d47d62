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

#ifndef QSVT_IR_INVPOLY_H
#define QSVT_IR_INVPOLY_H

#include <cstddef>
#include <string>
#include <vector>

namespace qsvt_ir {

enum class Parity { even, odd, none };

std::string parity_name(Parity p);
Parity parity_from_name(const std::string &name);

/// Real polynomial in the Chebyshev basis: sum_k coefficients[k] * T_k(x).
///
/// Trailing zero coefficients are trimmed on construction, so `degree()` is the index
/// of the last nonzero coefficient. A definite parity is validated: every coefficient
/// of the opposite parity must be exactly zero.
///
/// `kappa`, `eps` and `scale` are provenance for inverse-function series and are
/// zero/one for generic polynomials.
class ChebyshevSeries {
   public:
    ChebyshevSeries() = default;
    ChebyshevSeries(std::vector<double> coefficients, Parity parity);

    /// Single basis polynomial weight * T_k.
    static ChebyshevSeries basis(size_t k, double weight = 1.0);

    const std::vector<double> &coefficients() const {
        return coefficients_;
    }
    Parity parity() const {
        return parity_;
    }
    size_t degree() const {
        return coefficients_.empty() ? 0 : coefficients_.size() - 1;
    }
    ChebyshevSeries scaled(double factor) const;

    double kappa = 0;
    double eps = 0;
    double scale = 1;

   private:
    std::vector<double> coefficients_;
    Parity parity_ = Parity::none;
};

struct DegreeParams {
    size_t b;
    size_t cap_degree;
};

/// b = ceil(kappa^2 ln(kappa/eps)), D = ceil(sqrt(b ln(4b/eps))).
DegreeParams degree_params(double kappa, double eps);

/// Polynomial degree 2D+1 of the inverse-function series for (kappa, eps).
size_t inverse_series_degree(double kappa, double eps);

struct InverseApproxSpec {
    double kappa;
    double eps;
    size_t b;
    size_t cap_degree;
    double scale;

    /// Fills b and D from the formulas; scale defaults to 1/(2 kappa).
    static InverseApproxSpec make(double kappa, double eps);
    static InverseApproxSpec make(double kappa, double eps, double scale);
};

/// Odd Chebyshev series approximating scale/x on [-1,-1/kappa] U [1/kappa,1].
///
/// The coefficient of T_{2j+1} is 4 (-1)^j 2^{-2b} sum_{i=j+1}^{b} C(2b, b+i), i.e. four
/// times a binomial upper tail, computed from log-gamma terms with compensated suffix
/// sums. Coefficients with j >= b vanish.
ChebyshevSeries inverse_cheb_series(const InverseApproxSpec &spec);

/// f(x) = (1 - (1 - x^2)^b) / x, the function the series expands (times scale).
double smoothed_inverse(double x, size_t b);

/// Backward Clenshaw recurrence. Throws std::domain_error for |x| > 1.
double clenshaw_eval(const ChebyshevSeries &series, double x);

/// max |P(x)| over [lo, hi]: grid of 4*degree Chebyshev-spaced points followed by
/// bracketed Brent refinement around the largest grid values.
double max_abs_on_interval(const ChebyshevSeries &series, double lo, double hi);

struct BoundedSeries {
    ChebyshevSeries series;
    double applied_scale;
};

/// Rescales by 1 / max(1, (1 + 1e-6) * max_{[-1,1]} |P|) so that |P| <= 1.
BoundedSeries enforce_qsvt_bounds(const ChebyshevSeries &series);

struct ApproxErrorReport {
    /// max |P(x) - scale/x| on a 10^4-point grid of [1/kappa, 1].
    double max_err_on_domain;
    /// max |P(x)| on a 10^4-point grid of [-1/kappa, 1/kappa].
    double max_abs_on_gap;
};

ApproxErrorReport approx_error_report(const ChebyshevSeries &series, double kappa, double eps);

}  // namespace qsvt_ir

#endif
