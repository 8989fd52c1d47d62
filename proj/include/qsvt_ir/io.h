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


#ifndef QSVT_IR_IO_H
#define QSVT_IR_IO_H

#include <json.hpp>
#include <string>
#include <vector>

#include "qsvt_ir/blockenc.h"
#include "qsvt_ir/invpoly.h"
#include "qsvt_ir/qsp_phases.h"
#include "qsvt_ir/refine.h"

namespace qsvt_ir {

using Json = nlohmann::ordered_json;

Json to_json(const ChebyshevSeries &series);
ChebyshevSeries series_from_json(const Json &j);

Json to_json(const PhaseVector &phases);
PhaseVector phases_from_json(const Json &j);

Json to_json(const Circuit &circuit);
Circuit circuit_from_json(const Json &j);

Json to_json(const BackendConfig &config);
BackendConfig backend_config_from_json(const Json &j);

Json to_json(const RefinementTrace &trace);
Json to_json(const CostEntry &entry);
Json to_json(const CostReport &cost);

/// Round-trip formatting of a double (%.17g); non-finite values print as nan/inf.
std::string format_double(double x);

/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_escape(const std::string &field);

/// Joins the fields with commas (escaped) and a trailing newline.
std::string csv_line(const std::vector<std::string> &fields);

}  // namespace qsvt_ir

#endif
