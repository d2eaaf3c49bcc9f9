#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lowensim/serialize.hpp"

namespace lowensim {

struct ExperimentConfig {
    std::string experiment;
    json params = json::object();
    std::optional<std::string> sweep_param;
    std::vector<json> sweep_values;
    unsigned long long seed = 0;
    std::string output;

    static ExperimentConfig from_json(const json& j);
};

struct ExperimentResult {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    bool any_failure = false;
};

std::vector<std::string> experiment_names();
std::string experiment_help(const std::string& name);

/// Runs all sweep points (params when no sweep) across a worker pool of size
/// `jobs`; rows come back ordered by sweep index with failures flagged in the
/// status column.
ExperimentResult run_experiment(const ExperimentConfig& cfg, int jobs);

std::string to_csv(const ExperimentConfig& cfg, const ExperimentResult& res,
                   bool with_timestamp = true);
json to_json_result(const ExperimentConfig& cfg, const ExperimentResult& res);

/// Shortest-round-trip decimal formatting; keeps CSV output byte-deterministic.
std::string format_double(double v);

/// Frozen constants for the clock propagation demonstration (offline search).
struct ClockDemoDefaults {
    Eigen::Index c1 = 16;
    Eigen::Index c2 = 48;
    double sigma_hat = 0.5;
    double p0_hat = 10.0;
    double t_hat = 0.2;
};
ClockDemoDefaults clock_demo_defaults();

/// The two-qubit four-gate demonstration circuit used by clock experiments.
std::vector<Matrix> clock_demo_circuit();

}  // namespace lowensim
