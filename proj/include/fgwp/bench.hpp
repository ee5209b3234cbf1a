#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fgwp/oracle.hpp"
#include "fgwp/problem.hpp"
#include "fgwp/scenario.hpp"

namespace fgwp {

enum class Algo { Gwp, Fgwp, Oracle };
const char* to_string(Algo algo);
Algo algo_from_string(const std::string& text);

struct BenchRecord {
    int n_faps{0};
    std::uint64_t seed{0};
    Algo algo{Algo::Gwp};
    double elapsed_s{0.0};                       // median over the timed reps
    std::optional<std::uint64_t> peak_mem_bytes; // growth of the process peak RSS
    double p_t_dbm{0.0};
    SolveStatus status{SolveStatus::Infeasible};
};

struct BenchOptions {
    int warmup{2};
    int reps{10};
    Venue venue{};
    RadioConfig radio{};
    OracleConfig oracle{};

    BenchOptions();
};

/// Runs the full (size, seed, algo) sweep: per combination the scenario is
/// generated, `warmup` discarded repetitions run, then `reps` timed ones;
/// the record carries the median wall-clock time. Repetitions of one
/// algorithm never interleave with another's. Infeasible solves become
/// records with status infeasible, never aborts.
std::vector<BenchRecord> run_benchmark(const std::vector<int>& sizes,
                                       const std::vector<std::uint64_t>& seeds,
                                       const std::vector<Algo>& algos,
                                       const BenchOptions& options = BenchOptions());

struct BenchSummary {
    int n_faps{0};
    Algo algo{Algo::Gwp};
    double mean_s{0.0};
    double median_s{0.0};
    double ci95_half_s{0.0};  // 1.96 * sample stddev / sqrt(n)
    std::optional<double> mean_mem_bytes;
};

/// Per-(size, algo) mean, median and normal-approximation 95% CI across
/// records. Throws std::invalid_argument when a group has fewer than two
/// records.
std::vector<BenchSummary> summarize(const std::vector<BenchRecord>& records);

std::string records_to_csv(const std::vector<BenchRecord>& records);
std::string summaries_to_csv(const std::vector<BenchSummary>& summaries);
void write_records_csv(const std::vector<BenchRecord>& records,
                       const std::filesystem::path& path);
void write_summaries_csv(const std::vector<BenchSummary>& summaries,
                         const std::filesystem::path& path);

}  // namespace fgwp
