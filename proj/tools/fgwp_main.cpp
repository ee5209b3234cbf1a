// fgwp: gateway placement toolkit for flying networks.
//
// Subcommands form a pipeline: gen -> solve -> eval -> distributions, with
// bench as the standalone performance sweep. All numeric work lives in the
// library; this file only parses arguments and moves files around.
//
// Exit codes: 0 ok, 2 usage or malformed input, 3 generation failure,
// 4 infeasible solution or invalid solve/eval input.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fgwp/bench.hpp"
#include "fgwp/net_eval.hpp"
#include "fgwp/oracle.hpp"
#include "fgwp/solver_fgwp.hpp"
#include "fgwp/solver_gwp.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitGeneration = 3;
constexpr int kExitInfeasible = 4;

std::string format_g9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

fgwp::Venue parse_venue(const std::string& text) {
    fgwp::Venue venue;
    char sep1 = 0, sep2 = 0;
    if (std::sscanf(text.c_str(), "%lf%c%lf%c%lf", &venue.x_m, &sep1, &venue.y_m, &sep2,
                    &venue.z_m) != 5 ||
        (sep1 != 'x' && sep1 != 'X') || (sep2 != 'x' && sep2 != 'X'))
        throw CLI::ValidationError("--venue", "expected WIDTHxDEPTHxHEIGHT, e.g. 15x15x20");
    if (!(venue.x_m > 0 && venue.y_m > 0 && venue.z_m > 0))
        throw CLI::ValidationError("--venue", "dimensions must be positive");
    return venue;
}

// Comma lists with optional a..b ranges: "2,4,6", "0..9", "0..3,7".
std::vector<std::uint64_t> parse_uint_list(const std::string& text, const std::string& flag) {
    std::vector<std::uint64_t> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        const std::string item =
            text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (item.empty()) throw CLI::ValidationError(flag, "empty list item");
        const std::size_t dots = item.find("..");
        try {
            if (dots == std::string::npos) {
                out.push_back(std::stoull(item));
            } else {
                const std::uint64_t lo = std::stoull(item.substr(0, dots));
                const std::uint64_t hi = std::stoull(item.substr(dots + 2));
                if (hi < lo) throw CLI::ValidationError(flag, "descending range " + item);
                for (std::uint64_t v = lo; v <= hi; ++v) out.push_back(v);
            }
        } catch (const std::logic_error&) {
            throw CLI::ValidationError(flag, "cannot parse '" + item + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw CLI::ValidationError(flag, "empty list");
    return out;
}

std::vector<fgwp::Algo> parse_algo_list(const std::string& text) {
    std::vector<fgwp::Algo> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        const std::string item =
            text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        try {
            out.push_back(fgwp::algo_from_string(item));
        } catch (const std::invalid_argument& e) {
            throw CLI::ValidationError("--algos", e.what());
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

fgwp::RadioConfig resolve_radio(const std::string& radio_path) {
    if (!radio_path.empty()) return fgwp::load_radio_config(radio_path);
    if (const char* env = std::getenv("FGWP_RADIO"); env && *env)
        return fgwp::load_radio_config(env);
    return fgwp::default_radio_config();
}

// Minimal glob over the pattern's filename part; '*' and '?' only.
bool glob_match(const std::string& pattern, const std::string& name) {
    std::size_t p = 0, n = 0, star = std::string::npos, star_n = 0;
    while (n < name.size()) {
        if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == name[n])) {
            ++p;
            ++n;
        } else if (p < pattern.size() && pattern[p] == '*') {
            star = p++;
            star_n = n;
        } else if (star != std::string::npos) {
            p = star + 1;
            n = ++star_n;
        } else {
            return false;
        }
    }
    while (p < pattern.size() && pattern[p] == '*') ++p;
    return p == pattern.size();
}

std::vector<std::filesystem::path> expand_report_glob(const std::string& pattern) {
    const std::filesystem::path as_path(pattern);
    const std::string filename = as_path.filename().string();
    std::filesystem::path dir = as_path.parent_path();
    if (dir.empty()) dir = ".";

    std::vector<std::filesystem::path> matches;
    if (filename.find('*') == std::string::npos && filename.find('?') == std::string::npos) {
        if (std::filesystem::exists(as_path)) matches.push_back(as_path);
        return matches;
    }
    if (!std::filesystem::is_directory(dir)) return matches;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        if (glob_match(filename, entry.path().filename().string()))
            matches.push_back(entry.path());
    }
    std::sort(matches.begin(), matches.end());
    return matches;
}

struct GenArgs {
    int faps{0};
    std::uint64_t seed{0};
    std::string venue{"15x15x20"};
    std::string radio;
    std::string out;
    int snapshot_id{0};
};

int run_gen(const GenArgs& args) {
    fgwp::Scenario scenario;
    try {
        scenario = fgwp::generate_scenario(args.faps, args.seed, parse_venue(args.venue),
                                           resolve_radio(args.radio));
    } catch (const fgwp::PlacementExhausted& e) {
        std::cerr << "generation failed: " << e.what() << "\n";
        return kExitGeneration;
    }
    scenario.snapshot_id = args.snapshot_id;
    fgwp::save_scenario(scenario, args.out);
    std::cout << "out=" << args.out << "\n"
              << "n_faps=" << scenario.faps.size() << "\n"
              << "seed=" << scenario.seed << "\n";
    return kExitOk;
}

struct SolveArgs {
    std::string algo{"fgwp"};
    std::string scenario;
    std::string out;
    double grid_step{0.25};
    bool no_polish{false};
};

int run_solve(const SolveArgs& args) {
    const fgwp::Scenario scenario = fgwp::load_scenario(args.scenario);
    const fgwp::PlacementProblem prob = fgwp::make_problem(scenario);

    fgwp::PlacementSolution solution;
    const fgwp::Algo algo = fgwp::algo_from_string(args.algo);
    switch (algo) {
        case fgwp::Algo::Gwp:
            solution = fgwp::solve_gwp(prob);
            break;
        case fgwp::Algo::Fgwp:
            solution = fgwp::solve_fgwp(prob);
            break;
        case fgwp::Algo::Oracle: {
            fgwp::OracleConfig config = fgwp::oracle_config_for(scenario);
            config.grid_step_m = args.grid_step;
            config.polish = !args.no_polish;
            solution = fgwp::oracle_solve(prob, config);
            break;
        }
    }

    // Link rows carry problem indexes; map them to the scenario's FAP ids.
    for (fgwp::LinkReport& link : solution.links)
        link.fap_id = scenario.faps[static_cast<std::size_t>(link.fap_id)].id;

    if (!args.out.empty()) fgwp::save_solution(solution, args.out);
    std::cout << "algo=" << to_string(algo) << "\n"
              << "p_t_dbm=" << format_g9(solution.p_t_dbm) << "\n"
              << "status=" << to_string(solution.status) << "\n"
              << "iterations=" << solution.iterations << "\n"
              << "elapsed_s=" << format_g9(solution.elapsed_s) << "\n";
    return solution.status == fgwp::SolveStatus::Optimal ? kExitOk : kExitInfeasible;
}

struct EvalArgs {
    std::string scenario;
    std::string solution;
    std::string out;
    double load_scale{1.0};
};

int run_eval(const EvalArgs& args) {
    const fgwp::Scenario scenario = fgwp::load_scenario(args.scenario);
    const fgwp::PlacementSolution solution = fgwp::load_solution(args.solution);
    fgwp::EvaluationReport report;
    try {
        report = fgwp::evaluate(scenario, solution, args.load_scale);
    } catch (const fgwp::InvalidSolution& e) {
        std::cerr << "invalid solution: " << e.what() << "\n";
        return kExitInfeasible;
    }
    if (!args.out.empty()) fgwp::save_report(report, args.out);
    std::cout << "aggregate_throughput_bps=" << format_g9(report.aggregate_throughput_bps)
              << "\n"
              << "mean_delay_s="
              << (std::isfinite(report.mean_delay_s) ? format_g9(report.mean_delay_s) : "inf")
              << "\n"
              << "saturated=" << (report.saturated ? "true" : "false") << "\n";
    return kExitOk;
}

struct BenchArgs {
    std::string sizes{"2,4,6,8,10,15,20"};
    std::string seeds{"0..9"};
    std::string algos{"gwp,fgwp"};
    int warmup{2};
    int reps{10};
    std::string venue{"15x15x20"};
    std::string radio;
    std::string out;
    std::string summary_out;
};

int run_bench(const BenchArgs& args) {
    std::vector<int> sizes;
    for (std::uint64_t v : parse_uint_list(args.sizes, "--sizes"))
        sizes.push_back(static_cast<int>(v));
    const std::vector<std::uint64_t> seeds = parse_uint_list(args.seeds, "--seeds");
    const std::vector<fgwp::Algo> algos = parse_algo_list(args.algos);

    fgwp::BenchOptions options;
    options.warmup = args.warmup;
    options.reps = args.reps;
    options.venue = parse_venue(args.venue);
    options.radio = resolve_radio(args.radio);

    const std::vector<fgwp::BenchRecord> records = run_benchmark(sizes, seeds, algos, options);
    fgwp::write_records_csv(records, args.out);
    std::cout << "records=" << records.size() << "\n"
              << "out=" << args.out << "\n";

    if (!args.summary_out.empty()) {
        try {
            fgwp::write_summaries_csv(fgwp::summarize(records), args.summary_out);
            std::cout << "summary_out=" << args.summary_out << "\n";
        } catch (const std::invalid_argument& e) {
            std::cerr << "summary skipped: " << e.what() << "\n";
        }
    }
    return kExitOk;
}

struct DistributionArgs {
    std::string reports;
    std::string metric{"throughput"};
    std::string out;
};

int run_distributions(const DistributionArgs& args) {
    if (args.metric != "throughput" && args.metric != "delay") {
        std::cerr << "unknown metric '" << args.metric << "' (throughput|delay)\n";
        return kExitUsage;
    }
    const auto files = expand_report_glob(args.reports);
    std::vector<double> values;
    std::size_t skipped = 0;
    for (const auto& file : files) {
        const fgwp::EvaluationReport report = fgwp::load_report(file);
        const double v = args.metric == "throughput" ? report.aggregate_throughput_bps
                                                     : report.mean_delay_s;
        if (std::isfinite(v))
            values.push_back(v);
        else
            ++skipped;
    }
    if (values.empty()) {
        std::cerr << "no usable reports matched '" << args.reports << "'\n";
        return kExitUsage;
    }
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());

    // CCDF for throughput (fraction of samples above x, stepping 1 -> 0),
    // CDF for delay (fraction at or below x, stepping 0 -> 1).
    std::string csv = "x,fraction\n";
    if (args.metric == "throughput") {
        csv += format_g9(values.front()) + ",1\n";
        for (std::size_t k = 1; k <= values.size(); ++k)
            csv += format_g9(values[k - 1]) + "," + format_g9((n - static_cast<double>(k)) / n) +
                   "\n";
    } else {
        csv += format_g9(values.front()) + ",0\n";
        for (std::size_t k = 1; k <= values.size(); ++k)
            csv += format_g9(values[k - 1]) + "," + format_g9(static_cast<double>(k) / n) + "\n";
    }
    std::ofstream out_file(args.out, std::ios::binary | std::ios::trunc);
    if (!out_file) {
        std::cerr << "cannot write " << args.out << "\n";
        return kExitUsage;
    }
    out_file << csv;
    std::cout << "samples=" << values.size() << "\n"
              << "skipped_nonfinite=" << skipped << "\n"
              << "out=" << args.out << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gateway placement toolkit for flying networks"};
    app.require_subcommand(1);

    GenArgs gen_args;
    CLI::App* gen = app.add_subcommand("gen", "Generate a random scenario");
    gen->add_option("--faps", gen_args.faps, "Number of FAPs")
        ->required()
        ->check(CLI::PositiveNumber);
    gen->add_option("--seed", gen_args.seed, "Generator seed")->required();
    gen->add_option("--venue", gen_args.venue, "Venue dimensions WxDxH in meters")
        ->capture_default_str();
    gen->add_option("--radio", gen_args.radio, "Radio parameter file (JSON)");
    gen->add_option("--out", gen_args.out, "Output scenario file")->required();
    gen->add_option("--snapshot-id", gen_args.snapshot_id, "Snapshot index");

    SolveArgs solve_args;
    CLI::App* solve = app.add_subcommand("solve", "Place the gateway for a scenario");
    solve->add_option("--algo", solve_args.algo, "gwp | fgwp | oracle")
        ->required()
        ->check(CLI::IsMember({"gwp", "fgwp", "oracle"}));
    solve->add_option("--scenario", solve_args.scenario, "Scenario file")->required();
    solve->add_option("--out", solve_args.out, "Output solution file");
    solve->add_option("--grid-step", solve_args.grid_step, "Oracle grid step (m)")
        ->capture_default_str();
    solve->add_flag("--no-polish", solve_args.no_polish, "Disable oracle refinement");

    EvalArgs eval_args;
    CLI::App* eval = app.add_subcommand("eval", "Evaluate a solution's network performance");
    eval->add_option("--scenario", eval_args.scenario, "Scenario file")->required();
    eval->add_option("--solution", eval_args.solution, "Solution file")->required();
    eval->add_option("--out", eval_args.out, "Output report file");
    eval->add_option("--load-scale", eval_args.load_scale, "Demand multiplier")
        ->capture_default_str();

    BenchArgs bench_args;
    CLI::App* bench = app.add_subcommand("bench", "Run the computational benchmark sweep");
    bench->add_option("--sizes", bench_args.sizes, "FAP counts")->capture_default_str();
    bench->add_option("--seeds", bench_args.seeds, "Seeds (list or a..b)")
        ->capture_default_str();
    bench->add_option("--algos", bench_args.algos, "Algorithms")->capture_default_str();
    bench->add_option("--warmup", bench_args.warmup, "Discarded repetitions")
        ->capture_default_str();
    bench->add_option("--reps", bench_args.reps, "Timed repetitions")->capture_default_str();
    bench->add_option("--venue", bench_args.venue, "Venue dimensions")->capture_default_str();
    bench->add_option("--radio", bench_args.radio, "Radio parameter file (JSON)");
    bench->add_option("--out", bench_args.out, "Records CSV")->required();
    bench->add_option("--summary-out", bench_args.summary_out, "Summary CSV");

    DistributionArgs dist_args;
    CLI::App* dist = app.add_subcommand("distributions", "Aggregate reports into CDF/CCDF rows");
    dist->add_option("--reports", dist_args.reports, "Report file glob")->required();
    dist->add_option("--metric", dist_args.metric, "throughput | delay")->capture_default_str();
    dist->add_option("--out", dist_args.out, "Output CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (app.got_subcommand(gen)) return run_gen(gen_args);
        if (app.got_subcommand(solve)) return run_solve(solve_args);
        if (app.got_subcommand(eval)) return run_eval(eval_args);
        if (app.got_subcommand(bench)) return run_bench(bench_args);
        if (app.got_subcommand(dist)) return run_distributions(dist_args);
    } catch (const fgwp::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const fgwp::PlacementExhausted& e) {
        std::cerr << "generation failed: " << e.what() << "\n";
        return kExitGeneration;
    } catch (const fgwp::InvalidSolution& e) {
        std::cerr << "invalid solution: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
