#include "fgwp/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include <sys/resource.h>

#include "fgwp/solver_fgwp.hpp"
#include "fgwp/solver_gwp.hpp"
#include "json_util.hpp"

namespace fgwp {

namespace {

std::optional<std::uint64_t> peak_rss_bytes() {
    rusage usage{};
    if (getrusage(RUSAGE_SELF, &usage) != 0) return std::nullopt;
    // ru_maxrss is in kilobytes on Linux.
    return static_cast<std::uint64_t>(usage.ru_maxrss) * 1024u;
}

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n == 0) return 0.0;
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

}  // namespace

const char* to_string(Algo algo) {
    switch (algo) {
        case Algo::Gwp: return "gwp";
        case Algo::Fgwp: return "fgwp";
        case Algo::Oracle: return "oracle";
    }
    return "unknown";
}

Algo algo_from_string(const std::string& text) {
    if (text == "gwp") return Algo::Gwp;
    if (text == "fgwp") return Algo::Fgwp;
    if (text == "oracle") return Algo::Oracle;
    throw std::invalid_argument("unknown algorithm '" + text + "'");
}

BenchOptions::BenchOptions() : radio(default_radio_config()) {}

std::vector<BenchRecord> run_benchmark(const std::vector<int>& sizes,
                                       const std::vector<std::uint64_t>& seeds,
                                       const std::vector<Algo>& algos,
                                       const BenchOptions& options) {
    if (sizes.empty()) throw std::invalid_argument("run_benchmark: sizes must be non-empty");
    if (options.reps < 1) throw std::invalid_argument("run_benchmark: reps must be >= 1");
    if (options.warmup < 0) throw std::invalid_argument("run_benchmark: warmup must be >= 0");

    std::vector<BenchRecord> records;
    records.reserve(sizes.size() * seeds.size() * algos.size());

    for (int size : sizes) {
        for (std::uint64_t seed : seeds) {
            const Scenario scenario = generate_scenario(size, seed, options.venue, options.radio);
            const PlacementProblem prob = make_problem(scenario);
            for (Algo algo : algos) {
                const auto solve_once = [&]() -> PlacementSolution {
                    switch (algo) {
                        case Algo::Gwp: return solve_gwp(prob);
                        case Algo::Fgwp: return solve_fgwp(prob);
                        case Algo::Oracle: return oracle_solve(prob, options.oracle);
                    }
                    throw std::logic_error("unreachable");
                };

                for (int i = 0; i < options.warmup; ++i) (void)solve_once();

                const auto mem_before = peak_rss_bytes();
                std::vector<double> times;
                times.reserve(options.reps);
                PlacementSolution last;
                for (int i = 0; i < options.reps; ++i) {
                    const auto t0 = std::chrono::steady_clock::now();
                    last = solve_once();
                    const auto t1 = std::chrono::steady_clock::now();
                    times.push_back(
                        std::max(std::chrono::duration<double>(t1 - t0).count(), 1e-9));
                }
                const auto mem_after = peak_rss_bytes();

                BenchRecord record;
                record.n_faps = size;
                record.seed = seed;
                record.algo = algo;
                record.elapsed_s = median(std::move(times));
                if (mem_before && mem_after)
                    record.peak_mem_bytes = *mem_after - *mem_before;
                record.p_t_dbm = last.p_t_dbm;
                record.status = last.status;
                records.push_back(record);
            }
        }
    }
    return records;
}

std::vector<BenchSummary> summarize(const std::vector<BenchRecord>& records) {
    std::map<std::pair<int, int>, std::vector<const BenchRecord*>> groups;
    for (const BenchRecord& record : records)
        groups[{record.n_faps, static_cast<int>(record.algo)}].push_back(&record);

    std::vector<BenchSummary> summaries;
    for (const auto& [key, group] : groups) {
        if (group.size() < 2)
            throw std::invalid_argument("summarize: group (n_faps=" +
                                        std::to_string(key.first) + ", algo=" +
                                        to_string(static_cast<Algo>(key.second)) +
                                        ") has fewer than 2 records");
        BenchSummary summary;
        summary.n_faps = key.first;
        summary.algo = static_cast<Algo>(key.second);

        std::vector<double> times;
        times.reserve(group.size());
        double sum = 0.0;
        double mem_sum = 0.0;
        int mem_count = 0;
        for (const BenchRecord* record : group) {
            times.push_back(record->elapsed_s);
            sum += record->elapsed_s;
            if (record->peak_mem_bytes) {
                mem_sum += static_cast<double>(*record->peak_mem_bytes);
                ++mem_count;
            }
        }
        const double n = static_cast<double>(times.size());
        summary.mean_s = sum / n;
        summary.median_s = median(times);
        double variance = 0.0;
        for (double t : times) variance += (t - summary.mean_s) * (t - summary.mean_s);
        variance /= (n - 1.0);
        summary.ci95_half_s = 1.96 * std::sqrt(variance) / std::sqrt(n);
        if (mem_count > 0) summary.mean_mem_bytes = mem_sum / mem_count;
        summaries.push_back(summary);
    }
    return summaries;
}

std::string records_to_csv(const std::vector<BenchRecord>& records) {
    std::ostringstream out;
    out << "n_faps,seed,algo,elapsed_s,peak_mem_bytes,p_t_dbm,status\n";
    for (const BenchRecord& r : records) {
        out << r.n_faps << ',' << r.seed << ',' << to_string(r.algo) << ','
            << format_double(r.elapsed_s) << ',';
        if (r.peak_mem_bytes) out << *r.peak_mem_bytes;
        out << ',' << format_double(r.p_t_dbm) << ',' << to_string(r.status) << '\n';
    }
    return out.str();
}

std::string summaries_to_csv(const std::vector<BenchSummary>& summaries) {
    std::ostringstream out;
    out << "n_faps,algo,mean_s,median_s,ci95_half_s,mean_mem_bytes\n";
    for (const BenchSummary& s : summaries) {
        out << s.n_faps << ',' << to_string(s.algo) << ',' << format_double(s.mean_s) << ','
            << format_double(s.median_s) << ',' << format_double(s.ci95_half_s) << ',';
        if (s.mean_mem_bytes) out << format_double(*s.mean_mem_bytes);
        out << '\n';
    }
    return out.str();
}

void write_records_csv(const std::vector<BenchRecord>& records,
                       const std::filesystem::path& path) {
    detail::write_file(path, records_to_csv(records));
}

void write_summaries_csv(const std::vector<BenchSummary>& summaries,
                         const std::filesystem::path& path) {
    detail::write_file(path, summaries_to_csv(summaries));
}

}  // namespace fgwp
