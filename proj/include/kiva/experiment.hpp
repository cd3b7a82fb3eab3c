#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kiva/generator.hpp"
#include "kiva/model.hpp"

namespace kiva {

struct ExperimentConfig {
    std::vector<std::string> methods{"sa", "roa", "rb"};
    std::vector<GenParams> cells;   // instance seeds are overwritten per repetition
    std::size_t repetitions = 10;
    std::uint64_t master_seed = 1;
    std::size_t threads = 1;
    SolverParams solver;            // rng_seed is overwritten per run

    /// Reads a config document. Array-valued fields of a grid entry expand
    /// into the cartesian product of cells.
    static ExperimentConfig from_json(const nlohmann::json& doc);
};

struct ResultRow {
    std::string method;
    std::uint64_t seed = 0;      // solver seed of the run
    std::uint64_t instance_seed = 0;
    std::size_t cell = 0;
    std::size_t repetition = 0;
    std::size_t n = 0, m = 0, capacity = 0, beta = 0;
    std::optional<double> sol;
    double cpu_s = 0.0;          // wall clock, never compared across runs
    std::optional<double> rd;    // against SA on the same instance
    std::optional<double> of;
    std::string error;
};

/// Seed for one grid coordinate; independent of execution order.
std::uint64_t derive_seed(std::uint64_t master, std::size_t cell, std::size_t repetition, std::uint64_t stream);

/// Runs one method on one instance and returns its objective.
std::size_t run_method(const std::string& method, const Instance& instance, const SolverParams& params);

std::vector<ResultRow> run_experiment(const ExperimentConfig& config);

inline constexpr const char* csv_header = "method,seed,n,m,C,beta,sol,cpu_s,rd,of";

std::string format_csv(const std::vector<ResultRow>& rows);
void emit_csv(const std::vector<ResultRow>& rows, const std::filesystem::path& path);
/// Inverse of format_csv for the columns it writes.
std::vector<ResultRow> parse_csv(const std::string& text);

} // namespace kiva
