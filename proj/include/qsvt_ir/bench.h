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


#ifndef QSVT_IR_BENCH_H
#define QSVT_IR_BENCH_H

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qsvt_ir/io.h"
#include "qsvt_ir/numerics.h"
#include "qsvt_ir/refine.h"

namespace qsvt_ir {

enum class Experiment { convergence, large_kappa, complexity, poisson };

std::string experiment_name(Experiment e);
Experiment experiment_from_name(const std::string &name);

/// Invalid experiment configuration (exit code 2 in the CLI).
class ConfigError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
    Experiment experiment = Experiment::convergence;
    size_t n_qubits = 4;
    std::vector<double> kappa;
    /// Empty means 0.4 / kappa per kappa value.
    std::vector<double> eps_l;
    double eps_target = 1e-11;
    BackendKind backend = BackendKind::spectral_oracle;
    std::vector<uint64_t> seeds;
    std::string output;
    ReadoutMode readout = ReadoutMode::exact;
    EncodingKind encoding = EncodingKind::dilation;
    size_t max_iter = 100;
    /// Target accuracies swept by the complexity experiment.
    std::vector<double> eps_sweep;
    /// Worker threads; 0 uses the hardware concurrency.
    size_t threads = 0;
};

/// Defaults for one experiment (N = 16 problems, kappa and eps_l grids of the study).
ExperimentConfig default_config(Experiment e);

/// Starts from default_config of the "experiment" field (or `fallback`) and applies the
/// remaining keys. Unknown keys, wrong types and invalid values raise ConfigError.
ExperimentConfig config_from_json(const Json &j, std::optional<Experiment> fallback = std::nullopt);
Json to_json(const ExperimentConfig &cfg);

/// Throws ConfigError when the configuration cannot be run.
void validate_config(const ExperimentConfig &cfg);

/// Parses "0,3,5-9" into a seed list.
std::vector<uint64_t> parse_seed_list(const std::string &text);

/// (1 / h^2) tridiag(-1, 2, -1) with h = 1 / (N + 1), N = 2^n_qubits.
std::pair<ComplexMatrix, double> gen_poisson(size_t n_qubits);

struct CsvRow {
    size_t run_id = 0;
    std::string experiment;
    size_t n = 0;
    double kappa = 0;
    double eps_l = 0;
    double eps_target = 0;
    std::string backend;
    std::string readout;
    uint64_t seed = 0;
    size_t iter = 0;
    std::optional<double> omega;
    std::optional<double> mu;
    size_t be_calls_cum = 0;
    double samples_cum = 0;
    std::optional<bool> converged;
    std::optional<size_t> theorem_bound;
};

extern const std::vector<std::string> kCsvColumns;

std::string to_csv(const std::vector<CsvRow> &rows);

struct ExperimentResult {
    std::vector<CsvRow> rows;
    Json summary;
    /// Experiment-level assertion failures (exit code 1 in the CLI).
    std::vector<std::string> failures;
};

ExperimentResult run_convergence(const ExperimentConfig &cfg);
ExperimentResult run_large_kappa(const ExperimentConfig &cfg);
ExperimentResult run_complexity(const ExperimentConfig &cfg);
ExperimentResult run_poisson(const ExperimentConfig &cfg);
/// Validates and dispatches on cfg.experiment.
ExperimentResult run_experiment(const ExperimentConfig &cfg);

/// Command-line entry point. Returns 0 on success, 1 on an experiment assertion
/// failure and 2 on bad flags or configuration.
int bench_main(int argc, char **argv);

}  // namespace qsvt_ir

#endif
