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

#include "qsvt_ir/qsp_phases.h"

#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"

using namespace qsvt_ir;

namespace {

ChebyshevSeries random_odd(size_t degree, double peak, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<double> c(degree + 1, 0.0);
    for (size_t k = 1; k <= degree; k += 2) {
        c[k] = u(rng) / static_cast<double>(k);
    }
    ChebyshevSeries s(c, Parity::odd);
    return s.scaled(peak / max_abs_on_interval(s, -1, 1));
}

// Independent 2x2 product with explicit matrices.
Complex direct_entry(double x, const std::vector<double> &phases) {
    using M = std::array<Complex, 4>;
    auto mul = [](const M &a, const M &b) {
        return M{a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
    };
    double s = std::sqrt(1 - x * x);
    M acc{1, 0, 0, 1};
    for (double phi : phases) {
        acc = mul(acc, M{std::polar(1.0, phi), 0, 0, std::polar(1.0, -phi)});
        acc = mul(acc, M{x, s, s, -x});
    }
    return acc[0];
}

}  // namespace

TEST(qsp_phases, signal_unitary_examples) {
    PhaseVector t1;
    t1.phases = {0};
    for (double x : {-1.0, -0.3, 0.0, 0.7, 1.0}) {
        ASSERT_NEAR(signal_polynomial(x, t1), x, 1e-15);
    }
    PhaseVector empty;
    ASSERT_EQ(signal_unitary(0.4, empty), ComplexMatrix::identity(2));
    ASSERT_THROW(signal_unitary(1.01, t1), std::domain_error);

    PhaseVector wrong = t1;
    wrong.convention_tag = "wx/im00";
    ASSERT_THROW(signal_unitary(0.3, wrong), std::invalid_argument);
}

TEST(qsp_phases, signal_unitary_is_unitary_and_matches_direct_product) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
    PhaseVector p;
    for (int k = 0; k < 9; k++) {
        p.phases.push_back(u(rng));
    }
    for (double x : {-0.9, -0.2, 0.1, 0.55, 1.0}) {
        ComplexMatrix s = signal_unitary(x, p);
        ASSERT_LE(unitarity_defect(s), 1e-13);
        ASSERT_NEAR(std::abs(s(0, 0) - direct_entry(x, p.phases)), 0, 1e-13);
    }
}

TEST(qsp_phases, wx_conversion_preserves_real_part) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (size_t d : {1u, 2u, 5u, 8u}) {
        std::vector<double> psi(d + 1);
        for (size_t k = 0; k <= d / 2; k++) {
            psi[k] = psi[d - k] = u(rng);
        }
        PhaseVector phi = phases_from_wx_convention(psi);
        ASSERT_EQ(phi.degree(), d);
        for (double x : {-0.8, 0.0, 0.3, 0.95}) {
            ASSERT_NEAR(signal_polynomial(x, phi), wx_signal_entry(x, psi).real(), 1e-13);
        }
    }
}

TEST(qsp_phases, find_phases_t1) {
    PhaseVector p = find_phases(ChebyshevSeries::basis(1, 1 - 1e-8));
    ASSERT_EQ(p.degree(), 1u);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int k = 0; k < 100; k++) {
        double x = u(rng);
        ASSERT_NEAR(signal_polynomial(x, p), (1 - 1e-8) * x, 1e-10);
    }
}

TEST(qsp_phases, find_phases_t3) {
    ChebyshevSeries t = ChebyshevSeries::basis(3, 0.9);
    PhaseVector p = find_phases(t, 1e-10);
    ASSERT_EQ(p.degree(), 3u);
    for (size_t k = 0; k <= 3; k++) {
        double x = std::cos((2.0 * k + 1) * std::numbers::pi / 12);
        ASSERT_LE(std::abs(signal_polynomial(x, p) - clenshaw_eval(t, x)), 1e-10);
    }
    ASSERT_LE(verify_phases(p, t, 1000), 1e-9);
}

TEST(qsp_phases, find_phases_even_target) {
    ChebyshevSeries t({0.2, 0, -0.5, 0, 0.1}, Parity::even);
    PhaseVector p = find_phases(t, 1e-10);
    ASSERT_EQ(p.degree(), 4u);
    ASSERT_LE(verify_phases(p, t, 2001), 1e-9);
}

TEST(qsp_phases, find_phases_inverse_series) {
    ChebyshevSeries inv = enforce_qsvt_bounds(inverse_cheb_series(InverseApproxSpec::make(2, 0.1))).series;
    PhaseVector p = find_phases(inv, 1e-10);
    ASSERT_LE(verify_phases(p, inv, 10000), 1e-8);
}

TEST(qsp_phases, find_phases_random_odd_targets) {
    std::mt19937_64 rng(17);
    for (uint64_t trial = 0; trial < 50; trial++) {
        size_t degree = 2 * (rng() % 16) + 1;
        ChebyshevSeries t = random_odd(degree, 0.8, 1000 + trial);
        PhaseVector p = find_phases(t, 1e-10);
        ASSERT_EQ(p.degree(), t.degree());
        ASSERT_LE(verify_phases(p, t, 2000), 1e-8) << "trial " << trial << " degree " << degree;
        ASSERT_LE(std::abs(signal_polynomial(0, p)), 1e-10);
        for (size_t j = 1; j < p.degree(); j++) {
            ASSERT_NEAR(p.phases[j], p.phases[p.degree() - j], 1e-9);
        }
    }
}

TEST(qsp_phases, find_phases_preconditions) {
    ASSERT_THROW(find_phases(ChebyshevSeries({0.1, 0.5}, Parity::none)), std::invalid_argument);
    ASSERT_THROW(find_phases(ChebyshevSeries::basis(0, 0.5)), std::invalid_argument);
    ASSERT_THROW(find_phases(ChebyshevSeries::basis(3, 1.0)), std::invalid_argument);
}

TEST(qsp_phases, phase_finding_error_reports_residual) {
    PhaseFindOptions opts;
    opts.max_evaluations = 3;
    opts.tol = 1e-14;
    try {
        find_phases(random_odd(21, 0.8, 4), opts, nullptr);
        FAIL() << "expected PhaseFindingError";
    } catch (const PhaseFindingError &e) {
        ASSERT_GT(e.final_residual, 0);
        ASSERT_NE(std::string(e.what()).find("final residual"), std::string::npos);
    }
}

TEST(qsp_phases, verify_phases_examples) {
    PhaseVector p;
    p.phases = {0};
    ChebyshevSeries t1 = ChebyshevSeries::basis(1);
    ASSERT_LE(verify_phases(p, t1, 1000), 1e-12);

    ChebyshevSeries t = random_odd(9, 0.8, 2);
    PhaseVector found = find_phases(t);
    PhaseVector bumped = found;
    bumped.phases[0] += 0.1;
    ASSERT_GT(verify_phases(bumped, t, 1000), 1e-3);
    ASSERT_GE(verify_phases(bumped, t, 10000), verify_phases(bumped, t, 1));
}
