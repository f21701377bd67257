#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "psearch/common.hpp"
#include "psearch/exact.hpp"
#include "psearch/generator.hpp"
#include "psearch/heuristics.hpp"
#include "psearch/io.hpp"
#include "psearch/kmst.hpp"

namespace psearch {

// One paired sweep: every solver runs on the same generated instances at
// every sweep point. Sweeping p_succ reuses identical instances across
// points; sweeping the probability expectation regenerates tier tables per
// point (same seeds, so topology and costs stay paired) with the stddev
// pinned to a third of the mean.
struct ExperimentConfig {
    GeneratorConfig generator;
    std::vector<std::string> solvers{"greedy", "aco", "bl", "nb"};
    enum class Sweep { p_succ, prob_mean } sweep = Sweep::p_succ;
    std::vector<double> sweep_values{0.7, 0.8, 0.9, 0.975};
    double fixed_p_succ = 0.9; // target when sweeping prob_mean
    int instances_per_point = 40;
    SearchLimits limits{10'000'000, 64, 60'000.0};
    AcoParams aco;
    bool record_time = true; // off -> wall_time_ms column written as 0
    int threads = 0;         // 0 = hardware; PSEARCH_THREADS caps either way
    std::string output_path;
};

struct ResultRow {
    double sweep_value = 0.0;
    long long instance_seed = 0; // -1 marks the per-(point, solver) aggregate
    std::string solver;
    double budget = 0.0;      // mean budget on aggregate rows
    double walk_length = 0.0; // edges walked; mean on aggregate rows
    double wall_time_ms = 0.0;
    std::string status;
    double budget_stddev = 0.0; // sample stddev, aggregate rows only

    bool is_aggregate() const { return instance_seed < 0; }
};

inline std::string emit_csv(const std::vector<ResultRow>& rows) {
    std::string out = "sweep_value,instance_seed,solver,budget,walk_length,wall_time_ms,status,budget_stddev\n";
    for (const ResultRow& r : rows) {
        out += detail::format_double(r.sweep_value) + ',' + std::to_string(r.instance_seed) + ',' +
               r.solver + ',' + detail::format_double(r.budget) + ',' +
               detail::format_double(r.walk_length) + ',' + detail::format_double(r.wall_time_ms) +
               ',' + r.status + ',' + detail::format_double(r.budget_stddev) + '\n';
    }
    return out;
}

inline std::vector<ResultRow> parse_csv(const std::string& text) {
    std::vector<ResultRow> rows;
    std::istringstream in(text);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (header) {
            header = false;
            continue;
        }
        if (line.empty()) continue;
        auto fields = detail::split(line, ',');
        if (fields.size() != 8) throw ParseError("csv row: expected 8 fields");
        ResultRow r;
        r.sweep_value = detail::parse_double(fields[0], "csv");
        r.instance_seed = std::stoll(std::string(fields[1]));
        r.solver = std::string(fields[2]);
        r.budget = detail::parse_double(fields[3], "csv");
        r.walk_length = detail::parse_double(fields[4], "csv");
        r.wall_time_ms = detail::parse_double(fields[5], "csv");
        r.status = std::string(fields[6]);
        r.budget_stddev = detail::parse_double(fields[7], "csv");
        rows.push_back(std::move(r));
    }
    return rows;
}

namespace detail {

inline MinBudgetSolution dispatch_solver(const std::string& name, const Instance& inst,
                                         double p_succ, const SearchLimits& limits,
                                         const AcoParams& aco) {
    if (name == "optimal") return solve_min_budget_exact(inst, p_succ, limits);
    if (name == "greedy") return greedy_min_budget(inst, p_succ);
    if (name == "aco") return aco_min_budget(inst, p_succ, aco);
    if (name == "bl") return bl_min_budget(inst, p_succ, limits);
    if (name == "nb") return nb_min_budget(inst, p_succ, limits);
    if (name == "kmst") {
        auto r = kmst_min_budget(inst, p_succ, KmstMode::exact, limits);
        MinBudgetSolution s;
        s.status = r.status;
        s.walk = r.walk;
        s.budget = r.budget;
        s.probability = r.probability;
        return s;
    }
    throw std::invalid_argument("unknown solver '" + name + "'");
}

inline int effective_threads(int requested) {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    int t = requested > 0 ? requested : hw;
    if (const char* env = std::getenv("PSEARCH_THREADS")) {
        int cap = std::atoi(env);
        if (cap > 0 && cap < t) t = cap;
    }
    return t;
}

} // namespace detail

// Runs the paired sweep and returns detail rows in canonical order (sweep
// value, seed, solver) followed by one aggregate row per (point, solver)
// carrying the mean and sample stddev of the budgets over OK rows. Cells are
// solved in parallel up to the thread cap; ordering and every solver output
// are independent of the schedule.
inline std::vector<ResultRow> run_experiment(const ExperimentConfig& config) {
    struct Cell {
        int point;
        int index;
        int solver;
        const Instance* instance;
    };

    // Instances per sweep point, generated up front (identical across points
    // for a p_succ sweep).
    std::vector<std::vector<GeneratedInstance>> instances(
        config.sweep == ExperimentConfig::Sweep::p_succ ? 1 : config.sweep_values.size());
    for (std::size_t pi = 0; pi < instances.size(); ++pi) {
        GeneratorConfig gen = config.generator;
        if (config.sweep == ExperimentConfig::Sweep::prob_mean) {
            gen.prob_model.mean = config.sweep_values[pi];
            gen.prob_model.stddev = config.sweep_values[pi] / 3.0;
        }
        for (int i = 0; i < config.instances_per_point; ++i) {
            instances[pi].push_back(generate_instance(gen, gen.seed + static_cast<std::uint64_t>(i)));
        }
    }

    std::vector<Cell> cells;
    for (std::size_t pi = 0; pi < config.sweep_values.size(); ++pi) {
        auto& pool = instances[config.sweep == ExperimentConfig::Sweep::p_succ ? 0 : pi];
        for (int i = 0; i < config.instances_per_point; ++i) {
            for (std::size_t si = 0; si < config.solvers.size(); ++si) {
                cells.push_back({static_cast<int>(pi), i, static_cast<int>(si), &pool[i].instance});
            }
        }
    }

    std::vector<ResultRow> rows(cells.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            std::size_t at = next.fetch_add(1);
            if (at >= cells.size()) return;
            const Cell& cell = cells[at];
            double sweep_value = config.sweep_values[cell.point];
            double p_succ = config.sweep == ExperimentConfig::Sweep::p_succ ? sweep_value
                                                                            : config.fixed_p_succ;
            AcoParams aco = config.aco;
            aco.seed = hash_stream(config.aco.seed, static_cast<std::uint64_t>(cell.point),
                                   static_cast<std::uint64_t>(cell.index));
            ResultRow& row = rows[at];
            row.sweep_value = sweep_value;
            row.instance_seed =
                static_cast<long long>(config.generator.seed) + cell.index;
            row.solver = config.solvers[cell.solver];
            auto t0 = std::chrono::steady_clock::now();
            MinBudgetSolution sol;
            try {
                sol = detail::dispatch_solver(row.solver, *cell.instance, p_succ, config.limits,
                                              aco);
            } catch (const std::exception&) {
                sol.status = SolveStatus::no_solution;
            }
            auto t1 = std::chrono::steady_clock::now();
            row.status = to_string(sol.status);
            if (sol.status == SolveStatus::ok || sol.status == SolveStatus::limit_exceeded) {
                row.budget = sol.budget;
                row.walk_length = sol.walk.verts.empty()
                                      ? 0.0
                                      : static_cast<double>(sol.walk.verts.size() - 1);
            } else {
                row.budget = std::nan("");
                row.walk_length = std::nan("");
            }
            row.wall_time_ms =
                config.record_time
                    ? std::chrono::duration<double, std::milli>(t1 - t0).count()
                    : 0.0;
        }
    };

    int threads = detail::effective_threads(config.threads);
    if (threads <= 1 || cells.size() <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    // Aggregates over OK rows, appended per (point, solver).
    for (std::size_t pi = 0; pi < config.sweep_values.size(); ++pi) {
        for (std::size_t si = 0; si < config.solvers.size(); ++si) {
            std::vector<double> budgets;
            double time_sum = 0.0, length_sum = 0.0;
            for (const ResultRow& r : rows) {
                if (r.is_aggregate()) continue;
                if (r.sweep_value != config.sweep_values[pi] || r.solver != config.solvers[si]) {
                    continue;
                }
                if (r.status != "OK") continue;
                budgets.push_back(r.budget);
                time_sum += r.wall_time_ms;
                length_sum += r.walk_length;
            }
            ResultRow agg;
            agg.sweep_value = config.sweep_values[pi];
            agg.instance_seed = -1;
            agg.solver = config.solvers[si];
            agg.status = "AGGREGATE";
            if (budgets.empty()) {
                agg.budget = std::nan("");
                agg.walk_length = std::nan("");
                agg.wall_time_ms = 0.0;
            } else {
                double mean = 0.0;
                for (double b : budgets) mean += b;
                mean /= static_cast<double>(budgets.size());
                double var = 0.0;
                for (double b : budgets) var += (b - mean) * (b - mean);
                agg.budget = mean;
                agg.budget_stddev =
                    budgets.size() > 1 ? std::sqrt(var / static_cast<double>(budgets.size() - 1)) : 0.0;
                agg.walk_length = length_sum / static_cast<double>(budgets.size());
                agg.wall_time_ms = time_sum / static_cast<double>(budgets.size());
            }
            rows.push_back(std::move(agg));
        }
    }
    return rows;
}

// Flat key=value experiment configuration ('#' comments allowed). Unknown
// keys are rejected so typos fail loudly.
inline ExperimentConfig parse_experiment_config(const std::string& text) {
    ExperimentConfig config;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view body = detail::trim(detail::strip_comment(line));
        if (body.empty()) continue;
        std::string context = "config line " + std::to_string(lineno);
        auto eq = body.find('=');
        if (eq == std::string_view::npos) throw ParseError(context + ": expected key=value");
        std::string key{detail::trim(body.substr(0, eq))};
        std::string value{detail::trim(body.substr(eq + 1))};
        auto as_double = [&] { return detail::parse_double(value, context); };
        auto as_int = [&] { return static_cast<int>(detail::parse_id(value, context)); };
        if (key == "n") config.generator.topology.n = as_int();
        else if (key == "neighbors") config.generator.topology.neighbors = as_int();
        else if (key == "rewire_prob") config.generator.topology.rewire_prob = as_double();
        else if (key == "edge_cost_min") config.generator.topology.edge_cost_min = as_double();
        else if (key == "edge_cost_max") config.generator.topology.edge_cost_max = as_double();
        else if (key == "cost_mean") config.generator.cost_model.mean = as_double();
        else if (key == "cost_stddev") config.generator.cost_model.stddev = as_double();
        else if (key == "prob_mean") config.generator.prob_model.mean = as_double();
        else if (key == "prob_stddev") config.generator.prob_model.stddev = as_double();
        else if (key == "tier_count_min") config.generator.tier_count_min = as_int();
        else if (key == "tier_count_max") config.generator.tier_count_max = as_int();
        else if (key == "seed") config.generator.seed = static_cast<std::uint64_t>(detail::parse_id(value, context));
        else if (key == "solvers") {
            config.solvers.clear();
            for (auto part : detail::split(value, ',')) {
                config.solvers.emplace_back(detail::trim(part));
            }
        } else if (key == "sweep") {
            if (value == "p_succ") config.sweep = ExperimentConfig::Sweep::p_succ;
            else if (value == "prob_mean") config.sweep = ExperimentConfig::Sweep::prob_mean;
            else throw ParseError(context + ": sweep must be p_succ or prob_mean");
        } else if (key == "sweep_values") {
            config.sweep_values.clear();
            for (auto part : detail::split(value, ',')) {
                config.sweep_values.push_back(detail::parse_double(part, context));
            }
        } else if (key == "p_succ") config.fixed_p_succ = as_double();
        else if (key == "instances_per_point") config.instances_per_point = as_int();
        else if (key == "max_expansions") config.limits.max_expansions = static_cast<std::uint64_t>(detail::parse_id(value, context));
        else if (key == "time_limit_ms") config.limits.time_limit_ms = as_double();
        else if (key == "aco_iterations") config.aco.iterations = as_int();
        else if (key == "aco_evaporation") config.aco.evaporation = as_double();
        else if (key == "aco_seed") config.aco.seed = static_cast<std::uint64_t>(detail::parse_id(value, context));
        else if (key == "record_time") {
            if (value == "on") config.record_time = true;
            else if (value == "off") config.record_time = false;
            else throw ParseError(context + ": record_time must be on or off");
        } else if (key == "threads") config.threads = as_int();
        else if (key == "output_path") config.output_path = value;
        else throw ParseError(context + ": unknown key '" + key + "'");
    }
    return config;
}

} // namespace psearch
