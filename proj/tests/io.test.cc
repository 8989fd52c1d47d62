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


#include "qsvt_ir/io.h"

#include <cmath>
#include <limits>
#include <random>

#include "gtest/gtest.h"

using namespace qsvt_ir;

TEST(io, series_round_trip) {
    ChebyshevSeries s = inverse_cheb_series(InverseApproxSpec{.kappa = 5, .eps = 0.01});
    ChebyshevSeries t = series_from_json(Json::parse(to_json(s).dump()));
    ASSERT_EQ(t.coefficients(), s.coefficients());
    ASSERT_EQ(t.parity(), Parity::odd);
    ASSERT_EQ(t.kappa, s.kappa);
    ASSERT_EQ(t.eps, s.eps);
    ASSERT_EQ(t.scale, s.scale);
}

TEST(io, phases_round_trip) {
    PhaseVector p;
    p.phases = {0.1, -0.7, 1e-300, 3.141592653589793};
    PhaseVector q = phases_from_json(Json::parse(to_json(p).dump()));
    ASSERT_EQ(q.phases, p.phases);
    ASSERT_EQ(q.convention_tag, kConventionTag);
    Json j = to_json(p);
    j["convention"] = "wx";
    ASSERT_THROW(phases_from_json(j), std::invalid_argument);
}

TEST(io, circuit_round_trip) {
    ComplexMatrix a = ComplexMatrix::from_real_rows({{0.1, -0.4, 0.3, 0}, {0.2, 0.5, -0.1, 0.7}, {0, 0, 0.9, -0.2}, {0.3, 0.3, 0.3, 0.3}});
    FableEncoding f = fable_encoding(a, 1e-3);
    Circuit c = circuit_from_json(Json::parse(to_json(f.circuit).dump()));
    ASSERT_EQ(c, f.circuit);
    Json bad = to_json(f.circuit);
    bad["num_qubits"] = 2;
    ASSERT_THROW(circuit_from_json(bad), std::invalid_argument);
}

TEST(io, backend_config_round_trip) {
    BackendConfig c;
    c.kind = BackendKind::qsvt_full;
    c.eps_l = 0.05;
    c.readout = ReadoutMode::shot;
    c.seed = 18446744073709551615ull;
    c.encoding = EncodingKind::fable;
    c.fable_threshold = 1e-4;
    c.kappa = 12.5;
    BackendConfig d = backend_config_from_json(Json::parse(to_json(c).dump()));
    ASSERT_EQ(d.kind, c.kind);
    ASSERT_EQ(d.eps_l, c.eps_l);
    ASSERT_EQ(d.readout, c.readout);
    ASSERT_EQ(d.seed, c.seed);
    ASSERT_EQ(d.encoding, c.encoding);
    ASSERT_EQ(d.fable_threshold, c.fable_threshold);
    ASSERT_EQ(d.kappa, c.kappa);
    ASSERT_FALSE(backend_config_from_json(Json::object()).kappa.has_value());
}

TEST(io, trace_and_cost_fields) {
    RefinementTrace t;
    t.scaled_residuals = {0.1, 0.001};
    t.mu_values = {2, 0.01};
    t.iterations = 1;
    t.cpu_to_qpu_messages = 2;
    Json j = to_json(t);
    ASSERT_EQ(j["scaled_residuals"].get<std::vector<double>>(), t.scaled_residuals);
    ASSERT_EQ(j["communication"]["cpu_to_qpu_messages"], 2);
    CostReport r;
    r.refined = make_cost_entry(3, 15, 5);
    Json k = to_json(r);
    ASSERT_EQ(k["refined"]["total"].get<double>(), 225);
}

TEST(io, format_double_round_trips) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-30, 30);
    for (int k = 0; k < 1000; k++) {
        double x = std::pow(10.0, u(rng)) * (k % 2 ? -1 : 1);
        ASSERT_EQ(std::stod(format_double(x)), x);
    }
    ASSERT_EQ(format_double(0.5), "0.5");
    ASSERT_EQ(format_double(std::numeric_limits<double>::quiet_NaN()), "nan");
    ASSERT_EQ(format_double(-INFINITY), "-inf");
}

TEST(io, csv_escaping) {
    ASSERT_EQ(csv_line({"a", "b,c", "say \"hi\""}), "a,\"b,c\",\"say \"\"hi\"\"\"\n");
    ASSERT_EQ(csv_line({}), "\n");
}
