// Command-line front end: generate, transform, solve, evaluate, validate,
// and benchmark probabilistic physical search instances.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "psearch/psearch.hpp"

namespace {

// 0 ok, 1 runtime error, 2 usage, then one code per empty-handed status so
// scripts can tell a NO_SOLUTION apart from a crash.
int exit_code_for(psearch::SolveStatus s) {
    switch (s) {
        case psearch::SolveStatus::ok: return 0;
        case psearch::SolveStatus::no_solution: return 3;
        case psearch::SolveStatus::infeasible: return 4;
        case psearch::SolveStatus::stuck: return 5;
        case psearch::SolveStatus::not_uniform: return 6;
        case psearch::SolveStatus::insufficient_vertices: return 6;
        case psearch::SolveStatus::limit_exceeded: return 7;
    }
    return 1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spill(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

std::string walk_to_string(const psearch::Instance& inst, const psearch::Walk& walk) {
    std::string out;
    for (std::size_t i = 0; i < walk.verts.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(inst.external_id(walk.verts[i]));
    }
    return out;
}

struct InstanceArgs {
    std::string graph_path;
    std::string sites_path;

    void attach(CLI::App* cmd) {
        cmd->add_option("--graph", graph_path, "edge list file")->required();
        cmd->add_option("--sites", sites_path, "site table file")->required();
    }

    psearch::Instance load() const {
        return psearch::load_instance(slurp(graph_path), slurp(sites_path));
    }
};

void print_trace(const psearch::SearchTrace& trace, const psearch::Instance& inst,
                 std::ostream& out) {
    for (const auto& ev : trace.incumbents) {
        nlohmann::json j;
        j["event"] = "incumbent";
        j["expansion"] = ev.expansion;
        j["value"] = ev.value;
        nlohmann::json walk = nlohmann::json::array();
        for (int v : ev.walk) walk.push_back(inst.external_id(v));
        j["walk"] = walk;
        out << j.dump() << '\n';
    }
    nlohmann::json done;
    done["event"] = "done";
    done["expansions"] = trace.expansions;
    out << done.dump() << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"probabilistic physical search solver"};
    app.require_subcommand(1);

    // --- gen ---------------------------------------------------------------
    auto* gen = app.add_subcommand("gen", "generate a small-world instance");
    psearch::GeneratorConfig gen_config;
    std::string gen_graph_out, gen_sites_out;
    gen->add_option("--n", gen_config.topology.n, "vertex count");
    gen->add_option("--neighbors", gen_config.topology.neighbors, "ring lattice degree (even)");
    gen->add_option("--rewire", gen_config.topology.rewire_prob, "rewire probability");
    gen->add_option("--edge-cost-min", gen_config.topology.edge_cost_min, "");
    gen->add_option("--edge-cost-max", gen_config.topology.edge_cost_max, "");
    gen->add_option("--cost-mean", gen_config.cost_model.mean, "");
    gen->add_option("--cost-stddev", gen_config.cost_model.stddev, "");
    gen->add_option("--prob-mean", gen_config.prob_model.mean, "");
    gen->add_option("--prob-stddev", gen_config.prob_model.stddev, "");
    gen->add_option("--tiers-min", gen_config.tier_count_min, "");
    gen->add_option("--tiers-max", gen_config.tier_count_max, "");
    gen->add_option("--seed", gen_config.seed, "generator seed");
    gen->add_option("--out-graph", gen_graph_out, "output edge list")->required();
    gen->add_option("--out-sites", gen_sites_out, "output site table")->required();

    // --- solve -------------------------------------------------------------
    auto* solve = app.add_subcommand("solve", "solve one instance with one algorithm");
    InstanceArgs solve_inst;
    solve_inst.attach(solve);
    std::string algo = "optimal";
    double p_succ = -1.0, budget_flag = -1.0;
    std::uint64_t solve_seed = 0;
    psearch::SearchLimits solve_limits;
    std::string trace_path;
    solve->add_option("--algo", algo, "optimal|greedy|aco|bl|nb|kmst");
    solve->add_option("--p-succ", p_succ, "target success probability (Min-Budget)");
    solve->add_option("--budget", budget_flag, "budget (Max-Probability, optimal only)");
    solve->add_option("--seed", solve_seed, "ACO seed");
    solve->add_option("--max-expansions", solve_limits.max_expansions, "");
    solve->add_option("--time-limit-ms", solve_limits.time_limit_ms, "");
    solve->add_option("--trace", trace_path, "JSON-lines search trace ('-' = stdout)");

    // --- eval --------------------------------------------------------------
    auto* eval = app.add_subcommand("eval", "score a fixed walk");
    InstanceArgs eval_inst;
    eval_inst.attach(eval);
    std::string eval_walk;
    double eval_budget = -1.0, eval_p_succ = -1.0;
    eval->add_option("--walk", eval_walk, "comma-separated vertex ids")->required();
    eval->add_option("--budget", eval_budget, "budget to evaluate under");
    eval->add_option("--p-succ", eval_p_succ, "report the minimal budget for this target");

    // --- validate ----------------------------------------------------------
    auto* validate = app.add_subcommand("validate", "Monte-Carlo check of a walk/budget");
    InstanceArgs val_inst;
    val_inst.attach(validate);
    std::string val_walk;
    double val_budget = 0.0;
    std::uint64_t trials = 100000, val_seed = 0;
    validate->add_option("--walk", val_walk, "comma-separated vertex ids")->required();
    validate->add_option("--budget", val_budget, "")->required();
    validate->add_option("--trials", trials, "trial count");
    validate->add_option("--seed", val_seed, "simulation seed");

    // --- transform ---------------------------------------------------------
    auto* transform = app.add_subcommand("transform", "emit the reduction of an instance");
    InstanceArgs tr_inst;
    tr_inst.attach(transform);
    std::string tr_mode = "dtsp";
    double tr_budget = 0.0;
    bool tr_round = false;
    std::string tr_graph_out, tr_sites_out;
    transform->add_option("--mode", tr_mode, "single|dtsp");
    transform->add_option("--budget", tr_budget, "budget (dtsp mode)");
    transform->add_flag("--round", tr_round, "round prizes to integers (dtsp mode)");
    transform->add_option("--out-graph", tr_graph_out, "default stdout");
    transform->add_option("--out-sites", tr_sites_out, "default stdout");

    // --- maxprob -----------------------------------------------------------
    auto* maxprob = app.add_subcommand("maxprob", "approximate Max-Probability pipeline");
    InstanceArgs mp_inst;
    mp_inst.attach(maxprob);
    double mp_budget = 0.0;
    std::string mp_solver = "exact";
    bool mp_no_round = false;
    psearch::SearchLimits mp_limits;
    maxprob->add_option("--budget", mp_budget, "")->required();
    maxprob->add_option("--solver", mp_solver, "exact|greedy");
    maxprob->add_flag("--no-rounding", mp_no_round, "skip the integer prize rounding");
    maxprob->add_option("--max-expansions", mp_limits.max_expansions, "");
    maxprob->add_option("--time-limit-ms", mp_limits.time_limit_ms, "");

    // --- bench -------------------------------------------------------------
    auto* bench = app.add_subcommand("bench", "run an experiment sweep from a config file");
    std::string bench_config_path, bench_out;
    bench->add_option("--config", bench_config_path, "key=value config file")->required();
    bench->add_option("--out", bench_out, "override output_path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            auto generated = psearch::generate_instance(gen_config, gen_config.seed);
            spill(gen_graph_out, psearch::write_graph(generated.instance));
            spill(gen_sites_out, psearch::write_sites(generated.instance));
            std::cout << "vertices: " << generated.instance.vertex_count()
                      << "\nedges: " << generated.instance.edges.size()
                      << "\ntopology_seed: " << generated.topology_seed
                      << "\nregenerations: " << generated.regenerations << '\n';
            return 0;
        }

        if (*solve) {
            psearch::Instance inst = solve_inst.load();
            psearch::SearchTrace trace;
            psearch::SearchTrace* tr = trace_path.empty() ? nullptr : &trace;
            auto emit_trace = [&](const psearch::Instance& i) {
                if (trace_path.empty()) return;
                if (trace_path == "-") {
                    print_trace(trace, i, std::cout);
                } else {
                    std::ofstream out(trace_path);
                    print_trace(trace, i, out);
                }
            };

            if (budget_flag >= 0.0) {
                if (algo != "optimal") {
                    std::cerr << "--budget (Max-Probability) is supported by --algo=optimal only\n";
                    return 2;
                }
                auto sol = psearch::solve_max_prob_exact(inst, budget_flag, solve_limits, tr);
                emit_trace(inst);
                std::cout << "status: " << to_string(sol.status)
                          << "\nprobability: " << psearch::detail::format_double(sol.probability)
                          << "\nwalk: " << walk_to_string(inst, sol.walk)
                          << "\nexpansions: " << sol.expansions << '\n';
                return exit_code_for(sol.status);
            }
            if (p_succ < 0.0) {
                std::cerr << "one of --p-succ or --budget is required\n";
                return 2;
            }

            psearch::MinBudgetSolution sol;
            if (algo == "optimal") {
                sol = psearch::solve_min_budget_exact(inst, p_succ, solve_limits, tr);
            } else if (algo == "greedy") {
                sol = psearch::greedy_min_budget(inst, p_succ);
            } else if (algo == "aco") {
                psearch::AcoParams params;
                params.seed = solve_seed;
                sol = psearch::aco_min_budget(inst, p_succ, params);
            } else if (algo == "bl") {
                sol = psearch::bl_min_budget(inst, p_succ, solve_limits, tr);
            } else if (algo == "nb") {
                sol = psearch::nb_min_budget(inst, p_succ, solve_limits, tr);
            } else if (algo == "kmst") {
                auto r = psearch::kmst_min_budget(inst, p_succ, psearch::KmstMode::exact, solve_limits);
                if (r.status == psearch::SolveStatus::ok) {
                    std::cout << "status: OK\nk: " << r.k << "\ntree_weight: "
                              << psearch::detail::format_double(r.tree.weight)
                              << "\nbudget: " << psearch::detail::format_double(r.budget)
                              << "\nprobability: " << psearch::detail::format_double(r.probability)
                              << "\nwalk: " << walk_to_string(inst, r.walk) << '\n';
                } else {
                    std::cout << "status: " << to_string(r.status) << '\n';
                }
                return exit_code_for(r.status);
            } else {
                std::cerr << "unknown --algo '" << algo << "'\n";
                return 2;
            }
            emit_trace(inst);
            std::cout << "status: " << to_string(sol.status) << '\n';
            if (sol.status == psearch::SolveStatus::ok ||
                sol.status == psearch::SolveStatus::limit_exceeded) {
                std::cout << "budget: " << psearch::detail::format_double(sol.budget)
                          << "\nprobability: " << psearch::detail::format_double(sol.probability)
                          << "\nwalk: " << walk_to_string(inst, sol.walk) << '\n';
            }
            return exit_code_for(sol.status);
        }

        if (*eval) {
            psearch::Instance inst = eval_inst.load();
            psearch::Walk walk = psearch::make_walk(inst, psearch::parse_walk_ids(inst, eval_walk));
            if (eval_budget >= 0.0) {
                std::cout << "travel_cost: " << psearch::detail::format_double(walk.total_cost())
                          << "\nprobability: "
                          << psearch::detail::format_double(
                                 psearch::success_probability(inst, walk, eval_budget))
                          << "\nprize: "
                          << psearch::detail::format_double(
                                 psearch::collected_prize(inst, walk, eval_budget))
                          << '\n';
            }
            if (eval_p_succ >= 0.0) {
                auto b = psearch::minimal_budget_for_walk(inst, walk, eval_p_succ);
                if (b) {
                    std::cout << "minimal_budget: " << psearch::detail::format_double(*b) << '\n';
                } else {
                    std::cout << "minimal_budget: INFEASIBLE\n";
                    return 4;
                }
            }
            return 0;
        }

        if (*validate) {
            psearch::Instance inst = val_inst.load();
            psearch::Walk walk = psearch::make_walk(inst, psearch::parse_walk_ids(inst, val_walk));
            auto report = psearch::simulate(inst, walk, val_budget, trials, val_seed);
            std::cout << "trials,successes,empirical_rate,analytic_rate,standard_error\n"
                      << report.trials << ',' << report.successes << ','
                      << psearch::detail::format_double(report.empirical_rate) << ','
                      << psearch::detail::format_double(report.analytic_rate) << ','
                      << psearch::detail::format_double(report.standard_error) << '\n';
            return 0;
        }

        if (*transform) {
            psearch::Instance inst = tr_inst.load();
            auto sc = psearch::to_single_cost(inst);
            std::string graph_text, table_text;
            if (tr_mode == "single") {
                graph_text = psearch::write_graph(sc.split);
                table_text = psearch::write_sites(sc.split);
            } else if (tr_mode == "dtsp") {
                auto dtsp = psearch::to_deadline_tsp(sc, tr_budget);
                double c = 0.0;
                if (tr_round) dtsp = psearch::round_prizes(dtsp, &c);
                graph_text = psearch::write_dtsp_graph(dtsp);
                table_text = psearch::write_dtsp_table(dtsp);
                if (tr_round) std::cerr << "prize lower-bound constant c: "
                                        << psearch::detail::format_double(c) << '\n';
            } else {
                std::cerr << "unknown --mode '" << tr_mode << "'\n";
                return 2;
            }
            if (tr_graph_out.empty()) {
                std::cout << graph_text;
            } else {
                spill(tr_graph_out, graph_text);
            }
            if (tr_sites_out.empty()) {
                std::cout << table_text;
            } else {
                spill(tr_sites_out, table_text);
            }
            return 0;
        }

        if (*maxprob) {
            psearch::Instance inst = mp_inst.load();
            psearch::DtspSolver solver = mp_solver == "greedy"
                                             ? psearch::DtspSolver(psearch::dtsp_solve_greedy)
                                             : psearch::DtspSolver(psearch::dtsp_solve_exact);
            if (mp_solver != "exact" && mp_solver != "greedy") {
                std::cerr << "unknown --solver '" << mp_solver << "'\n";
                return 2;
            }
            psearch::MaxProbPipelineOptions options;
            options.round = !mp_no_round;
            options.limits = mp_limits;
            auto result = psearch::approx_max_probability(inst, mp_budget, solver, options);
            std::cout << "status: " << to_string(result.status)
                      << "\nprobability: " << psearch::detail::format_double(result.probability)
                      << "\nwalk: " << walk_to_string(inst, result.walk)
                      << "\nmin_conditional_prob: "
                      << psearch::detail::format_double(result.min_conditional_prob) << '\n';
            std::cout << "# prize ledger: vertex tier prize deadline\n";
            for (const auto& entry : result.ledger) {
                std::cout << "collected: " << inst.external_id(entry.vertex) << ' ' << entry.tier
                          << ' ' << psearch::detail::format_double(entry.prize) << ' '
                          << psearch::detail::format_double(entry.deadline) << '\n';
            }
            return exit_code_for(result.status);
        }

        if (*bench) {
            auto config = psearch::parse_experiment_config(slurp(bench_config_path));
            if (!bench_out.empty()) config.output_path = bench_out;
            auto rows = psearch::run_experiment(config);
            std::string csv = psearch::emit_csv(rows);
            if (config.output_path.empty()) {
                std::cout << csv;
            } else {
                spill(config.output_path, csv);
                std::cout << "rows: " << rows.size() << "\nwritten: " << config.output_path << '\n';
            }
            return 0;
        }
    } catch (const psearch::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
