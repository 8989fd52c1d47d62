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

#include "qsvt_ir/invpoly.h"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qsvt_ir {

namespace {

constexpr size_t kReportGrid = 10000;

double grid_point(double lo, double hi, size_t k, size_t count) {
    if (count == 1) {
        return lo;
    }
    return lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(count - 1);
}

}  // namespace

std::string parity_name(Parity p) {
    switch (p) {
        case Parity::even:
            return "even";
        case Parity::odd:
            return "odd";
        case Parity::none:
            return "none";
    }
    return "none";
}

Parity parity_from_name(const std::string &name) {
    if (name == "even") {
        return Parity::even;
    }
    if (name == "odd") {
        return Parity::odd;
    }
    if (name == "none") {
        return Parity::none;
    }
    throw std::invalid_argument("unknown parity '" + name + "'");
}

ChebyshevSeries::ChebyshevSeries(std::vector<double> coefficients, Parity parity)
    : coefficients_(std::move(coefficients)), parity_(parity) {
    while (!coefficients_.empty() && coefficients_.back() == 0) {
        coefficients_.pop_back();
    }
    for (size_t k = 0; k < coefficients_.size(); k++) {
        if (!std::isfinite(coefficients_[k])) {
            throw std::invalid_argument("Chebyshev coefficients must be finite");
        }
        bool wrong_parity = (parity_ == Parity::odd && k % 2 == 0) || (parity_ == Parity::even && k % 2 == 1);
        if (wrong_parity && coefficients_[k] != 0) {
            throw std::invalid_argument(
                "coefficient of T_" + std::to_string(k) + " violates declared " + parity_name(parity_) + " parity");
        }
    }
}

ChebyshevSeries ChebyshevSeries::basis(size_t k, double weight) {
    std::vector<double> c(k + 1, 0.0);
    c[k] = weight;
    return ChebyshevSeries(std::move(c), k % 2 ? Parity::odd : Parity::even);
}

ChebyshevSeries ChebyshevSeries::scaled(double factor) const {
    std::vector<double> c = coefficients_;
    for (auto &x : c) {
        x *= factor;
    }
    ChebyshevSeries out(std::move(c), parity_);
    out.kappa = kappa;
    out.eps = eps;
    out.scale = scale * factor;
    return out;
}

DegreeParams degree_params(double kappa, double eps) {
    if (!(kappa >= 1)) {
        throw std::invalid_argument("degree_params requires kappa >= 1");
    }
    if (!(eps > 0 && eps < 1)) {
        throw std::invalid_argument("degree_params requires 0 < eps < 1");
    }
    if (eps >= kappa) {
        throw std::invalid_argument("degree_params requires eps < kappa (log(kappa/eps) must be positive)");
    }
    double b = std::ceil(kappa * kappa * std::log(kappa / eps));
    if (!(b >= 1)) {
        throw std::invalid_argument("degree_params produced a non-positive b");
    }
    double d = std::ceil(std::sqrt(b * std::log(4 * b / eps)));
    return DegreeParams{static_cast<size_t>(b), static_cast<size_t>(d)};
}

size_t inverse_series_degree(double kappa, double eps) {
    DegreeParams p = degree_params(kappa, eps);
    size_t j_max = std::min(p.cap_degree, p.b - 1);
    return 2 * j_max + 1;
}

InverseApproxSpec InverseApproxSpec::make(double kappa, double eps) {
    return make(kappa, eps, 1 / (2 * kappa));
}

InverseApproxSpec InverseApproxSpec::make(double kappa, double eps, double scale) {
    if (!(scale > 0 && scale <= 1)) {
        throw std::invalid_argument("inverse series scale must lie in (0, 1]");
    }
    DegreeParams p = degree_params(kappa, eps);
    return InverseApproxSpec{kappa, eps, p.b, p.cap_degree, scale};
}

ChebyshevSeries inverse_cheb_series(const InverseApproxSpec &spec) {
    const size_t b = spec.b;
    const size_t j_max = std::min(spec.cap_degree, b - 1);
    const double two_b = 2.0 * static_cast<double>(b);
    const double log_norm = std::lgamma(two_b + 1) - two_b * std::numbers::ln2;

    // tail[j] = 2^{-2b} sum_{i=j+1}^{b} C(2b, b+i), accumulated from i = b downward.
    std::vector<double> tail(j_max + 1, 0.0);
    double sum = 0;
    double carry = 0;
    for (size_t i = b; i >= 1; i--) {
        double log_term = log_norm - std::lgamma(static_cast<double>(b + i) + 1) - std::lgamma(static_cast<double>(b - i) + 1);
        double term = std::exp(log_term);
        double y = term - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
        if (i - 1 <= j_max) {
            tail[i - 1] = sum;
        }
    }

    std::vector<double> coeffs(2 * j_max + 2, 0.0);
    for (size_t j = 0; j <= j_max; j++) {
        double c = 4 * tail[j] * spec.scale;
        if (!std::isfinite(c)) {
            throw std::overflow_error("binomial accumulation overflowed; use a log-domain tail");
        }
        coeffs[2 * j + 1] = (j % 2 ? -c : c);
    }
    ChebyshevSeries out(std::move(coeffs), Parity::odd);
    out.kappa = spec.kappa;
    out.eps = spec.eps;
    out.scale = spec.scale;
    return out;
}

double smoothed_inverse(double x, size_t b) {
    if (x == 0) {
        return 0;
    }
    // 1 - (1-x^2)^b without cancellation for small x.
    double numer = -std::expm1(static_cast<double>(b) * std::log1p(-x * x));
    return numer / x;
}

double clenshaw_eval(const ChebyshevSeries &series, double x) {
    if (!(std::abs(x) <= 1)) {
        throw std::domain_error("clenshaw_eval requires |x| <= 1");
    }
    const auto &c = series.coefficients();
    if (c.empty()) {
        return 0;
    }
    double b1 = 0;
    double b2 = 0;
    for (size_t k = c.size() - 1; k >= 1; k--) {
        double b0 = c[k] + 2 * x * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    return c[0] + x * b1 - b2;
}

double max_abs_on_interval(const ChebyshevSeries &series, double lo, double hi) {
    if (lo > hi) {
        std::swap(lo, hi);
    }
    size_t count = 4 * std::max<size_t>(series.degree(), 1) + 2;
    // Chebyshev-spaced points mapped onto [lo, hi], endpoints included.
    std::vector<double> xs(count);
    std::vector<double> vals(count);
    double mid = 0.5 * (lo + hi);
    double half = 0.5 * (hi - lo);
    for (size_t k = 0; k < count; k++) {
        double t = std::cos(std::numbers::pi * static_cast<double>(k) / static_cast<double>(count - 1));
        xs[k] = std::clamp(mid - half * t, lo, hi);
        vals[k] = std::abs(clenshaw_eval(series, xs[k]));
    }
    std::vector<size_t> order(count);
    for (size_t k = 0; k < count; k++) {
        order[k] = k;
    }
    size_t refine = std::min<size_t>(4, count);
    std::partial_sort(order.begin(), order.begin() + refine, order.end(), [&](size_t a, size_t b) { return vals[a] > vals[b]; });

    double best = vals[order[0]];
    for (size_t r = 0; r < refine; r++) {
        size_t k = order[r];
        double a = xs[k > 0 ? k - 1 : 0];
        double b = xs[k + 1 < count ? k + 1 : count - 1];
        if (a == b) {
            continue;
        }
        auto neg_abs = [&](double x) { return -std::abs(clenshaw_eval(series, std::clamp(x, lo, hi))); };
        auto found = boost::math::tools::brent_find_minima(neg_abs, a, b, std::numeric_limits<double>::digits / 2);
        best = std::max(best, -found.second);
    }
    return best;
}

BoundedSeries enforce_qsvt_bounds(const ChebyshevSeries &series) {
    double m = max_abs_on_interval(series, -1, 1);
    double divisor = std::max(1.0, m * (1 + 1e-6));
    if (divisor == 1.0) {
        return BoundedSeries{series, 1.0};
    }
    double applied = 1 / divisor;
    return BoundedSeries{series.scaled(applied), applied};
}

ApproxErrorReport approx_error_report(const ChebyshevSeries &series, double kappa, double /*eps*/) {
    if (!(kappa >= 1)) {
        throw std::invalid_argument("approx_error_report requires kappa >= 1");
    }
    ApproxErrorReport rep{0, 0};
    double lo = 1 / kappa;
    for (size_t k = 0; k < kReportGrid; k++) {
        double x = grid_point(lo, 1.0, k, kReportGrid);
        rep.max_err_on_domain = std::max(rep.max_err_on_domain, std::abs(clenshaw_eval(series, x) - series.scale / x));
        double g = grid_point(-lo, lo, k, kReportGrid);
        rep.max_abs_on_gap = std::max(rep.max_abs_on_gap, std::abs(clenshaw_eval(series, g)));
    }
    return rep;
}

}  // namespace qsvt_ir
