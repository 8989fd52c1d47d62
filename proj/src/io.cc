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
#include <cstdio>
#include <stdexcept>

namespace qsvt_ir {

Json to_json(const ChebyshevSeries &series) {
    return Json{{"coefficients", series.coefficients()},
                {"parity", parity_name(series.parity())},
                {"kappa", series.kappa},
                {"eps", series.eps},
                {"scale", series.scale}};
}

ChebyshevSeries series_from_json(const Json &j) {
    ChebyshevSeries s(j.at("coefficients").get<std::vector<double>>(), parity_from_name(j.at("parity").get<std::string>()));
    s.kappa = j.value("kappa", 0.0);
    s.eps = j.value("eps", 0.0);
    s.scale = j.value("scale", 1.0);
    return s;
}

Json to_json(const PhaseVector &phases) {
    return Json{{"convention", phases.convention_tag}, {"phases", phases.phases}};
}

PhaseVector phases_from_json(const Json &j) {
    PhaseVector p;
    p.convention_tag = j.at("convention").get<std::string>();
    if (p.convention_tag != kConventionTag) {
        throw std::invalid_argument("unsupported phase convention '" + p.convention_tag + "'");
    }
    p.phases = j.at("phases").get<std::vector<double>>();
    return p;
}

Json to_json(const Circuit &circuit) {
    Json gates = Json::array();
    for (const Gate &g : circuit.gates) {
        gates.push_back(Json{{"kind", gate_kind_name(g.kind)}, {"qubits", g.qubits}, {"angle", g.angle}});
    }
    return Json{{"num_qubits", circuit.num_qubits}, {"gates", gates}};
}

Circuit circuit_from_json(const Json &j) {
    Circuit c;
    c.num_qubits = j.at("num_qubits").get<size_t>();
    for (const Json &g : j.at("gates")) {
        c.gates.push_back(Gate{gate_kind_from_name(g.at("kind").get<std::string>()), g.at("qubits").get<std::vector<size_t>>(),
                               g.value("angle", 0.0)});
    }
    c.validate();
    return c;
}

Json to_json(const BackendConfig &config) {
    Json j{{"kind", backend_kind_name(config.kind)},
           {"eps_l", config.eps_l},
           {"readout", readout_mode_name(config.readout)},
           {"seed", config.seed},
           {"encoding", encoding_kind_name(config.encoding)},
           {"fable_threshold", config.fable_threshold}};
    if (config.kappa) {
        j["kappa"] = *config.kappa;
    }
    return j;
}

BackendConfig backend_config_from_json(const Json &j) {
    BackendConfig c;
    c.kind = backend_kind_from_name(j.value("kind", backend_kind_name(c.kind)));
    c.eps_l = j.value("eps_l", c.eps_l);
    c.readout = readout_mode_from_name(j.value("readout", readout_mode_name(c.readout)));
    c.seed = j.value("seed", c.seed);
    c.encoding = encoding_kind_from_name(j.value("encoding", encoding_kind_name(c.encoding)));
    c.fable_threshold = j.value("fable_threshold", c.fable_threshold);
    if (j.contains("kappa")) {
        c.kappa = j.at("kappa").get<double>();
    }
    return c;
}

Json to_json(const RefinementTrace &trace) {
    return Json{{"kappa", trace.kappa},
                {"eps_l", trace.eps_l},
                {"eps_target", trace.eps_target},
                {"iterations", trace.iterations},
                {"converged", trace.converged},
                {"theorem_bound", trace.theorem_bound},
                {"hypothesis_violated", trace.hypothesis_violated},
                {"scaled_residuals", trace.scaled_residuals},
                {"mu_values", trace.mu_values},
                {"success_probabilities", trace.success_probabilities},
                {"be_calls_total", trace.be_calls_total},
                {"samples_total", trace.samples_total},
                {"communication",
                 {{"cpu_to_qpu_messages", trace.cpu_to_qpu_messages},
                  {"qpu_to_cpu_messages", trace.qpu_to_cpu_messages},
                  {"values_transferred", trace.values_transferred}}}};
}

Json to_json(const CostEntry &entry) {
    return Json{{"solves", entry.solves},
                {"be_calls_per_solve", entry.be_calls_per_solve},
                {"samples_per_solve", entry.samples_per_solve},
                {"total", entry.total}};
}

Json to_json(const CostReport &cost) {
    return Json{{"refined", to_json(cost.refined)},
                {"comparison_direct", to_json(cost.comparison_direct)},
                {"encoding_gate_count", cost.encoding_gate_count}};
}

std::string format_double(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string csv_escape(const std::string &field) {
    if (field.find_first_of(",\"\n") == std::string::npos) {
        return field;
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

std::string csv_line(const std::vector<std::string> &fields) {
    std::string out;
    for (size_t k = 0; k < fields.size(); k++) {
        if (k) {
            out += ',';
        }
        out += csv_escape(fields[k]);
    }
    return out + "\n";
}

}  // namespace qsvt_ir
