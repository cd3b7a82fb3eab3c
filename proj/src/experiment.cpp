#include "kiva/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <sstream>
#include <thread>

#include "kiva/annealing.hpp"
#include "kiva/baselines.hpp"
#include "kiva/error.hpp"
#include "kiva/evaluation.hpp"
#include "kiva/io.hpp"
#include "kiva/metrics.hpp"
#include "kiva/oracle.hpp"

namespace kiva {

using nlohmann::json;

namespace {

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

template <typename T>
void read_if(const json& doc, const char* key, T& out) {
    if (doc.contains(key)) out = doc.at(key).get<T>();
}

void read_solver(const json& doc, SolverParams& p) {
    read_if(doc, "w", p.w);
    read_if(doc, "alpha", p.alpha);
    read_if(doc, "k0", p.k0);
    read_if(doc, "max_iterations", p.max_iterations);
    read_if(doc, "tau_floor", p.tau_floor);
    read_if(doc, "time_limit", p.time_limit_seconds);
    read_if(doc, "gamma", p.gamma);
    read_if(doc, "restarts", p.restarts);
    read_if(doc, "rsp_node_budget", p.rsp_node_budget);
    if (doc.contains("rsp_mode")) {
        const auto mode = doc.at("rsp_mode").get<std::string>();
        if (mode == "exact") p.rsp_mode = RspMode::exact;
        else if (mode == "greedy") p.rsp_mode = RspMode::greedy;
        else if (mode == "auto") p.rsp_mode = RspMode::automatic;
        else fail(ErrorKind::invalid_input, "unknown rsp_mode '" + mode + "'");
    }
}

GenParams read_cell(const json& cell) {
    GenParams g;
    read_if(cell, "n", g.n);
    read_if(cell, "m", g.m);
    read_if(cell, "capacity", g.capacity);
    read_if(cell, "beta", g.beta);
    read_if(cell, "racks", g.rack_count);
    read_if(cell, "skus", g.sku_count);
    read_if(cell, "order_min", g.order_min);
    read_if(cell, "order_max", g.order_max);
    read_if(cell, "skew", g.skew);
    read_if(cell, "rank_scale", g.rank_scale);
    g.validate();
    return g;
}

// Expands array-valued fields of one grid entry into all combinations.
void expand(const json& cell, std::vector<json>& out) {
    for (auto it = cell.begin(); it != cell.end(); ++it) {
        if (!it.value().is_array()) continue;
        for (const auto& v : it.value()) {
            json copy = cell;
            copy[it.key()] = v;
            expand(copy, out);
        }
        return;
    }
    out.push_back(cell);
}

std::string fixed4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

std::string opt4(const std::optional<double>& v) { return v ? fixed4(*v) : std::string(); }

} // namespace

ExperimentConfig ExperimentConfig::from_json(const json& doc) {
    ExperimentConfig c;
    try {
        read_if(doc, "methods", c.methods);
        read_if(doc, "repetitions", c.repetitions);
        read_if(doc, "master_seed", c.master_seed);
        read_if(doc, "threads", c.threads);
        if (doc.contains("solver")) read_solver(doc.at("solver"), c.solver);
        if (doc.contains("time_limit")) c.solver.time_limit_seconds = doc.at("time_limit").get<double>();
        if (!doc.contains("grid")) fail(ErrorKind::invalid_input, "config has no grid");
        const json& grid = doc.at("grid");
        std::vector<json> entries;
        for (const auto& entry : grid.is_array() ? grid : json::array({grid})) expand(entry, entries);
        for (const auto& e : entries) c.cells.push_back(read_cell(e));
    } catch (const json::exception& e) {
        fail(ErrorKind::invalid_input, std::string("bad experiment config: ") + e.what());
    }
    for (const auto& m : c.methods)
        if (m != "sa" && m != "roa" && m != "rb" && m != "exact") fail(ErrorKind::invalid_input, "unknown method '" + m + "'");
    c.solver.validate();
    if (c.threads < 1) c.threads = 1;
    return c;
}

std::uint64_t derive_seed(std::uint64_t master, std::size_t cell, std::size_t repetition, std::uint64_t stream) {
    std::uint64_t h = splitmix(master);
    h = splitmix(h ^ static_cast<std::uint64_t>(cell));
    h = splitmix(h ^ static_cast<std::uint64_t>(repetition));
    return splitmix(h ^ stream);
}

std::size_t run_method(const std::string& method, const Instance& instance, const SolverParams& params) {
    Solution solution;
    if (method == "sa") solution = sa_solve(instance, params).best;
    else if (method == "roa") solution = roa_solve(instance, params).best;
    else if (method == "rb") solution = rb_solve(instance);
    else if (method == "exact") solution = brute_force_solve(instance).solution;
    else fail(ErrorKind::invalid_input, "unknown method '" + method + "'");
    const auto report = check_solution_feasibility(instance, solution);
    if (!report.feasible)
        fail(ErrorKind::infeasible, method + " produced an infeasible solution: " + report.violations.front().detail);
    return evaluate_fitness(solution.mu);
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& config) {
    const std::size_t tasks = config.cells.size() * config.repetitions;
    const std::size_t per_task = config.methods.size();
    std::vector<ResultRow> rows(tasks * per_task);

    auto run_task = [&](std::size_t task) {
        const std::size_t cell = task / config.repetitions;
        const std::size_t rep = task % config.repetitions;
        GenParams gen = config.cells[cell];
        gen.seed = derive_seed(config.master_seed, cell, rep, 0);
        SolverParams params = config.solver;
        params.rng_seed = derive_seed(config.master_seed, cell, rep, 1);

        std::optional<Instance> instance;
        std::string gen_error;
        try {
            instance = generate_instance(gen);
        } catch (const std::exception& e) {
            gen_error = e.what();
        }
        for (std::size_t k = 0; k < per_task; ++k) {
            ResultRow& row = rows[task * per_task + k];
            row.method = config.methods[k];
            row.seed = params.rng_seed;
            row.instance_seed = gen.seed;
            row.cell = cell;
            row.repetition = rep;
            row.n = gen.n;
            row.m = gen.m;
            row.capacity = gen.capacity;
            row.beta = gen.beta;
            if (!instance) {
                row.error = gen_error;
                continue;
            }
            const auto started = std::chrono::steady_clock::now();
            try {
                row.sol = static_cast<double>(run_method(row.method, *instance, params));
                row.of = of_metric(static_cast<double>(gen.n), *row.sol);
            } catch (const std::exception& e) {
                row.error = e.what();
            }
            row.cpu_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        }
        const ResultRow* sa = nullptr;
        for (std::size_t k = 0; k < per_task; ++k)
            if (rows[task * per_task + k].method == "sa" && rows[task * per_task + k].sol) sa = &rows[task * per_task + k];
        if (sa && *sa->sol > 0.0)
            for (std::size_t k = 0; k < per_task; ++k) {
                ResultRow& row = rows[task * per_task + k];
                if (row.sol) row.rd = rd_metric(*row.sol, *sa->sol);
            }
    };

    std::atomic<std::size_t> cursor{0};
    auto worker = [&] {
        for (std::size_t t = cursor++; t < tasks; t = cursor++) run_task(t);
    };
    const std::size_t threads = std::min(config.threads, std::max<std::size_t>(1, tasks));
    std::vector<std::thread> pool;
    for (std::size_t i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::vector<std::size_t> method_rank(rows.size());
    auto rank_of = [&](const std::string& m) {
        return static_cast<std::size_t>(std::find(config.methods.begin(), config.methods.end(), m) - config.methods.begin());
    };
    std::stable_sort(rows.begin(), rows.end(), [&](const ResultRow& a, const ResultRow& b) {
        if (a.cell != b.cell) return a.cell < b.cell;
        if (a.method != b.method) return rank_of(a.method) < rank_of(b.method);
        return a.repetition < b.repetition;
    });
    return rows;
}

std::string format_csv(const std::vector<ResultRow>& rows) {
    std::ostringstream out;
    out << csv_header << '\n';
    for (const auto& r : rows)
        out << r.method << ',' << r.seed << ',' << r.n << ',' << r.m << ',' << r.capacity << ',' << r.beta << ','
            << opt4(r.sol) << ',' << fixed4(r.cpu_s) << ',' << opt4(r.rd) << ',' << opt4(r.of) << '\n';
    return out.str();
}

void emit_csv(const std::vector<ResultRow>& rows, const std::filesystem::path& path) {
    write_text_file(path, format_csv(rows));
}

std::vector<ResultRow> parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != csv_header) fail(ErrorKind::invalid_input, "unexpected CSV header");
    std::vector<ResultRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::string field;
        std::istringstream ls(line);
        while (std::getline(ls, field, ',')) f.push_back(field);
        if (!line.empty() && line.back() == ',') f.emplace_back();
        if (f.size() != 10) fail(ErrorKind::invalid_input, "CSV row has " + std::to_string(f.size()) + " fields");
        auto opt = [](const std::string& s) { return s.empty() ? std::optional<double>() : std::optional<double>(std::stod(s)); };
        ResultRow r;
        r.method = f[0];
        r.seed = std::stoull(f[1]);
        r.n = std::stoul(f[2]);
        r.m = std::stoul(f[3]);
        r.capacity = std::stoul(f[4]);
        r.beta = std::stoul(f[5]);
        r.sol = opt(f[6]);
        r.cpu_s = std::stod(f[7]);
        r.rd = opt(f[8]);
        r.of = opt(f[9]);
        rows.push_back(std::move(r));
    }
    return rows;
}

} // namespace kiva
