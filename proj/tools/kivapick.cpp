// Command-line front end: generate instances, solve them, run benchmark grids, verify solutions.
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kiva/annealing.hpp"
#include "kiva/baselines.hpp"
#include "kiva/error.hpp"
#include "kiva/evaluation.hpp"
#include "kiva/experiment.hpp"
#include "kiva/generator.hpp"
#include "kiva/io.hpp"
#include "kiva/oracle.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_infeasible = 1;
constexpr int exit_invalid = 2;

void print_report(const kiva::FeasibilityReport& report) {
    for (const auto& v : report.violations)
        std::cerr << "violation " << kiva::to_string(v.constraint) << " station " << v.station << ": " << v.detail << '\n';
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
}

struct SolveArgs {
    std::string instance;
    std::string method = "sa";
    std::string out;
    std::string rsp_mode = "auto";
    std::uint64_t seed = 1;
    double time_limit = 600.0;
    double w = 0.05;
    double alpha = 0.95;
    std::vector<std::size_t> gamma{1, 4, 16, 64};
    std::size_t restarts = 1;
    bool trace = false;
};

int run_solve(const SolveArgs& a) {
    const kiva::Instance instance = kiva::instance_from_json(kiva::read_json_file(a.instance));
    kiva::validate_instance(instance);

    kiva::SolverParams params;
    params.rng_seed = a.seed;
    params.time_limit_seconds = a.time_limit;
    params.w = a.w;
    params.alpha = a.alpha;
    params.gamma = a.gamma;
    params.restarts = a.restarts;
    if (a.rsp_mode == "exact") params.rsp_mode = kiva::RspMode::exact;
    else if (a.rsp_mode == "greedy") params.rsp_mode = kiva::RspMode::greedy;
    else params.rsp_mode = kiva::RspMode::automatic;
    params.validate();

    kiva::Solution solution;
    if (a.method == "sa") {
        auto result = kiva::sa_solve(instance, params);
        std::cerr << "iterations " << result.stats.iterations << ", stop " << kiva::to_string(result.stats.stop)
                  << ", initial " << result.stats.initial_fitness << '\n';
        solution = std::move(result.best);
    } else if (a.method == "roa") {
        solution = kiva::roa_solve(instance, params).best;
    } else if (a.method == "rb") {
        solution = kiva::rb_solve(instance);
    } else {
        solution = kiva::brute_force_solve(instance).solution;
    }

    const auto report = kiva::check_solution_feasibility(instance, solution);
    print_report(report);
    std::cout << "objective " << kiva::evaluate_fitness(solution.mu) << '\n';
    if (a.trace)
        for (std::size_t p = 0; p < solution.theta.stations.size(); ++p)
            std::cout << kiva::format_trace(p, kiva::replay_station(instance, solution.theta.stations[p], solution.mu.stations[p]));
    const std::string doc = kiva::solution_to_json(solution).dump() + "\n";
    if (a.out.empty()) std::cout << doc;
    else kiva::write_text_file(a.out, doc);
    return report.feasible ? exit_ok : exit_infeasible;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Order assignment and picking station scheduling for rack-to-picker warehouses"};
    app.require_subcommand(1);

    kiva::GenParams gen;
    std::string gen_out;
    auto* generate = app.add_subcommand("generate", "Write a random instance as JSON");
    generate->add_option("--n", gen.n, "Number of orders");
    generate->add_option("--m", gen.m, "Number of stations");
    generate->add_option("--capacity", gen.capacity, "Bench capacity per station");
    generate->add_option("--beta", gen.beta, "SKUs per rack");
    generate->add_option("--racks", gen.rack_count, "Rack count (0 picks a default)");
    generate->add_option("--skus", gen.sku_count, "SKU universe size");
    generate->add_option("--seed", gen.seed, "Generator seed");
    generate->add_option("--out", gen_out, "Output file (stdout if omitted)");

    SolveArgs solve_args;
    auto* solve = app.add_subcommand("solve", "Solve an instance");
    solve->add_option("--instance", solve_args.instance, "Instance JSON")->required();
    solve->add_option("--method", solve_args.method, "sa, roa, rb or exact")
        ->check(CLI::IsMember({"sa", "roa", "rb", "exact"}));
    solve->add_option("--seed", solve_args.seed, "Solver seed");
    solve->add_option("--time-limit", solve_args.time_limit, "Wall-clock limit in seconds");
    solve->add_option("--w", solve_args.w, "Initial temperature weight");
    solve->add_option("--alpha", solve_args.alpha, "Cooling factor");
    solve->add_option("--bw-list", solve_args.gamma, "Beam widths for iterated beam search")->delimiter(',');
    solve->add_option("--rsp-mode", solve_args.rsp_mode, "exact, greedy or auto")
        ->check(CLI::IsMember({"exact", "greedy", "auto"}));
    solve->add_option("--restarts", solve_args.restarts, "Independent annealing restarts");
    solve->add_flag("--trace", solve_args.trace, "Print the per-slot station trace");
    solve->add_option("--out", solve_args.out, "Solution file (stdout if omitted)");

    std::string config_path, csv_out;
    auto* bench = app.add_subcommand("bench", "Run a benchmark grid and write CSV");
    bench->add_option("--config", config_path, "Experiment config JSON")->required();
    bench->add_option("--out", csv_out, "CSV output (stdout if omitted)");

    std::string verify_instance, verify_solution;
    auto* verify = app.add_subcommand("verify", "Check a solution against an instance");
    verify->add_option("--instance", verify_instance, "Instance JSON")->required();
    verify->add_option("--solution", verify_solution, "Solution JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_invalid;
    }

    try {
        if (*generate) {
            gen.validate();
            const std::string doc = kiva::instance_to_json(kiva::generate_instance(gen)).dump() + "\n";
            if (gen_out.empty()) std::cout << doc;
            else kiva::write_text_file(gen_out, doc);
            return exit_ok;
        }
        if (*solve) return run_solve(solve_args);
        if (*bench) {
            const auto config = kiva::ExperimentConfig::from_json(kiva::read_json_file(config_path));
            const auto rows = kiva::run_experiment(config);
            for (const auto& r : rows)
                if (!r.error.empty()) std::cerr << r.method << " cell " << r.cell << " rep " << r.repetition << ": " << r.error << '\n';
            if (csv_out.empty()) std::cout << kiva::format_csv(rows);
            else kiva::emit_csv(rows, csv_out);
            return exit_ok;
        }
        const kiva::Instance instance = kiva::instance_from_json(kiva::read_json_file(verify_instance));
        const kiva::Solution solution = kiva::solution_from_json(kiva::read_json_file(verify_solution));
        const auto report = kiva::check_solution_feasibility(instance, solution);
        print_report(report);
        if (report.feasible) std::cout << "feasible, objective " << kiva::evaluate_fitness(solution.mu) << '\n';
        else std::cout << "infeasible\n";
        return report.feasible ? exit_ok : exit_infeasible;
    } catch (const kiva::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.kind() == kiva::ErrorKind::infeasible ? exit_infeasible : exit_invalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_invalid;
    }
}
