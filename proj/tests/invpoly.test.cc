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

#include <cmath>
#include <random>

#include "gtest/gtest.h"

using namespace qsvt_ir;

namespace {

double trig_eval(const ChebyshevSeries &s, double x) {
    double t = std::acos(x);
    double acc = 0;
    for (size_t k = 0; k < s.coefficients().size(); k++) {
        acc += s.coefficients()[k] * std::cos(static_cast<double>(k) * t);
    }
    return acc;
}

// Exact integer binomial for small arguments.
double binomial(unsigned n, unsigned k) {
    double r = 1;
    for (unsigned i = 1; i <= k; i++) {
        r = r * (n - k + i) / i;
    }
    return r;
}

}  // namespace

TEST(invpoly, degree_params_values) {
    DegreeParams p = degree_params(2, 0.1);
    ASSERT_EQ(p.b, 12u);
    ASSERT_EQ(p.cap_degree, static_cast<size_t>(std::ceil(std::sqrt(12 * std::log(480.0)))));
    p = degree_params(10, 0.01);
    ASSERT_EQ(p.b, 691u);
    ASSERT_EQ(p.cap_degree, static_cast<size_t>(std::ceil(std::sqrt(691 * std::log(4 * 691 / 0.01)))));
    ASSERT_EQ(p.cap_degree, 94u);
    ASSERT_EQ(inverse_series_degree(10, 5e-3), 203u);
}

TEST(invpoly, degree_params_errors) {
    ASSERT_THROW(degree_params(0.5, 0.1), std::invalid_argument);
    ASSERT_THROW(degree_params(2, 0), std::invalid_argument);
    ASSERT_THROW(degree_params(2, 1), std::invalid_argument);
    ASSERT_THROW(degree_params(1 + 1e-9, 1 + 1e-10), std::invalid_argument);
}

TEST(invpoly, series_parity_validation) {
    ASSERT_THROW(ChebyshevSeries({1, 1}, Parity::odd), std::invalid_argument);
    ASSERT_THROW(ChebyshevSeries({0, 1}, Parity::even), std::invalid_argument);
    ChebyshevSeries s({0, 1, 0, 0}, Parity::odd);
    ASSERT_EQ(s.degree(), 1u);
    ASSERT_EQ(parity_from_name(parity_name(Parity::odd)), Parity::odd);
    ASSERT_THROW(parity_from_name("both"), std::invalid_argument);
}

TEST(invpoly, clenshaw_examples) {
    ASSERT_DOUBLE_EQ(clenshaw_eval(ChebyshevSeries::basis(3), 0.5), -1);
    ASSERT_DOUBLE_EQ(clenshaw_eval(ChebyshevSeries::basis(0), 0.37), 1);
    ASSERT_THROW(clenshaw_eval(ChebyshevSeries::basis(1), 1.0001), std::domain_error);
    ASSERT_EQ(clenshaw_eval(ChebyshevSeries(), 0.3), 0);
}

TEST(invpoly, clenshaw_matches_trigonometric_form) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<double> c9(10);
    for (auto &c : c9) {
        c = u(rng);
    }
    ChebyshevSeries s9(c9, Parity::none);
    ASSERT_NEAR(clenshaw_eval(s9, 0.3), trig_eval(s9, 0.3), 1e-13);

    std::vector<double> c500(501);
    for (size_t k = 0; k < c500.size(); k++) {
        c500[k] = u(rng) / static_cast<double>(k + 1);
    }
    ChebyshevSeries s500(c500, Parity::none);
    for (int k = 0; k < 1000; k++) {
        double x = u(rng);
        ASSERT_NEAR(clenshaw_eval(s500, x), trig_eval(s500, x), 1e-12);
    }
}

TEST(invpoly, coefficients_match_exact_binomials) {
    InverseApproxSpec spec = InverseApproxSpec::make(2, 0.1, 1.0);
    ChebyshevSeries s = inverse_cheb_series(spec);
    const unsigned b = 12;
    ASSERT_EQ(s.degree(), 2 * std::min<size_t>(spec.cap_degree, b - 1) + 1);
    for (unsigned j = 0; 2 * j + 1 <= s.degree(); j++) {
        double tail = 0;
        for (unsigned i = j + 1; i <= b; i++) {
            tail += binomial(2 * b, b + i);
        }
        double expected = 4 * (j % 2 ? -1 : 1) * tail / std::pow(2.0, 2 * b);
        ASSERT_NEAR(s.coefficients()[2 * j + 1], expected, 1e-14 * std::abs(expected)) << j;
        ASSERT_EQ(s.coefficients()[2 * j], 0);
    }
}

TEST(invpoly, series_is_odd_and_close_to_smoothed_inverse) {
    InverseApproxSpec spec = InverseApproxSpec::make(2, 0.1, 1.0);
    ChebyshevSeries s = inverse_cheb_series(spec);
    ASSERT_EQ(s.parity(), Parity::odd);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int k = 0; k < 100; k++) {
        double x = u(rng);
        ASSERT_NEAR(clenshaw_eval(s, -x), -clenshaw_eval(s, x), 1e-14);
    }
    for (int k = 0; k < 10000; k++) {
        double x = 0.5 + 0.5 * k / 9999.0;
        ASSERT_LE(std::abs(clenshaw_eval(s, x) - smoothed_inverse(x, spec.b)), 2 * spec.eps);
    }
}

TEST(invpoly, smoothed_inverse_formula) {
    ASSERT_NEAR(smoothed_inverse(0.5, 3), (1 - std::pow(0.75, 3)) / 0.5, 1e-15);
    ASSERT_EQ(smoothed_inverse(0, 3), 0);
    ASSERT_NEAR(smoothed_inverse(1e-9, 10), 10 * 1e-9, 1e-20);
}

TEST(invpoly, accuracy_grid) {
    for (double kappa : {2.0, 5.0, 10.0}) {
        for (double eps : {0.1, 0.01}) {
            ChebyshevSeries s = inverse_cheb_series(InverseApproxSpec::make(kappa, eps));
            ApproxErrorReport rep = approx_error_report(s, kappa, eps);
            ASSERT_LE(rep.max_err_on_domain, 2 * eps * s.scale) << kappa << " " << eps;
            ASSERT_TRUE(std::isfinite(rep.max_abs_on_gap));
        }
    }
}

TEST(invpoly, coefficients_eventually_decrease) {
    for (auto [kappa, eps] : std::vector<std::pair<double, double>>{{2, 0.1}, {5, 0.01}, {10, 0.01}}) {
        ChebyshevSeries s = inverse_cheb_series(InverseApproxSpec::make(kappa, eps));
        const auto &c = s.coefficients();
        size_t half = c.size() / 2;
        for (size_t k = half | 1; k + 2 < c.size(); k += 2) {
            ASSERT_LE(std::abs(c[k + 2]), std::abs(c[k]));
        }
    }
}

TEST(invpoly, large_b_is_finite) {
    ChebyshevSeries s = inverse_cheb_series(InverseApproxSpec::make(300, 4.44e-6));
    for (double c : s.coefficients()) {
        ASSERT_TRUE(std::isfinite(c));
    }
    ASSERT_EQ(s.degree(), 2 * 6742u + 1);
}

TEST(invpoly, enforce_bounds) {
    BoundedSeries same = enforce_qsvt_bounds(ChebyshevSeries::basis(3, 0.5));
    ASSERT_EQ(same.applied_scale, 1);
    ASSERT_EQ(same.series.coefficients(), ChebyshevSeries::basis(3, 0.5).coefficients());

    BoundedSeries halved = enforce_qsvt_bounds(ChebyshevSeries::basis(1, 2));
    ASSERT_NEAR(halved.applied_scale, 0.5, 1e-6);
    ASSERT_NEAR(halved.series.coefficients()[1], 1, 1e-6);

    ChebyshevSeries inv = inverse_cheb_series(InverseApproxSpec::make(4, 0.05));
    BoundedSeries bounded = enforce_qsvt_bounds(inv);
    double worst = 0;
    for (int k = 0; k <= 20000; k++) {
        worst = std::max(worst, std::abs(clenshaw_eval(bounded.series, -1 + 2.0 * k / 20000)));
    }
    ASSERT_LE(worst, 1);
    ASSERT_EQ(enforce_qsvt_bounds(bounded.series).applied_scale, 1);
    ASSERT_EQ(enforce_qsvt_bounds(halved.series).applied_scale, 1);
}

TEST(invpoly, max_abs_refines_grid_maximum) {
    // |T_5| peaks at 1; a shifted copy peaks between grid points.
    ChebyshevSeries s({0.1, 0, 0, 0, 0, 0.7}, Parity::none);
    double dense = 0;
    for (int k = 0; k <= 200000; k++) {
        dense = std::max(dense, std::abs(clenshaw_eval(s, -1 + 2.0 * k / 200000)));
    }
    ASSERT_NEAR(max_abs_on_interval(s, -1, 1), dense, 1e-8);
}

TEST(invpoly, error_report_small_kappa) {
    ChebyshevSeries s = inverse_cheb_series(InverseApproxSpec::make(2, 0.1));
    ApproxErrorReport rep = approx_error_report(enforce_qsvt_bounds(s).series, 2, 0.1);
    ASSERT_LE(rep.max_abs_on_gap, 1);
    ASSERT_LE(approx_error_report(s, 2, 0.1).max_err_on_domain, 2 * 0.1 * s.scale);
}
