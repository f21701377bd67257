#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef PSEARCH_CLI_PATH
#define PSEARCH_CLI_PATH "psearch"
#endif

namespace {

namespace fs = std::filesystem;

struct RunResult {
    int exit_code = 0;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    fs::path out_path = fs::temp_directory_path() / "psearch_cli_out.txt";
    std::string cmd = std::string(PSEARCH_CLI_PATH) + " " + args + " > " + out_path.string() + " 2>&1";
    int raw = std::system(cmd.c_str());
    RunResult result;
    result.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    std::ifstream in(out_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    result.out = ss.str();
    return result;
}

fs::path write_temp(const std::string& name, const std::string& text) {
    fs::path p = fs::temp_directory_path() / name;
    std::ofstream out(p);
    out << text;
    return p;
}

} // namespace

TEST_CASE("gen then solve round trip through files") {
    fs::path dir = fs::temp_directory_path();
    fs::path graph = dir / "cli_gen.graph";
    fs::path sites = dir / "cli_gen.sites";
    auto gen = run_cli("gen --n 8 --neighbors 4 --edge-cost-min 1 --edge-cost-max 4"
                       " --cost-mean 10 --cost-stddev 3 --prob-mean 0.3 --prob-stddev 0.1"
                       " --tiers-min 1 --tiers-max 3 --seed 5 --out-graph " + graph.string() +
                       " --out-sites " + sites.string());
    INFO(gen.out);
    REQUIRE(gen.exit_code == 0);
    REQUIRE(fs::exists(graph));
    REQUIRE(fs::exists(sites));

    for (std::string algo : {"optimal", "greedy", "aco", "bl", "nb"}) {
        auto solve = run_cli("solve --graph " + graph.string() + " --sites " + sites.string() +
                             " --algo " + algo + " --p-succ 0.5 --seed 3");
        INFO(algo << ": " << solve.out);
        REQUIRE(solve.exit_code == 0);
        CHECK(solve.out.find("status: OK") != std::string::npos);
        CHECK(solve.out.find("budget:") != std::string::npos);
    }
}

TEST_CASE("solve emits a JSON-lines trace on demand") {
    fs::path graph = write_temp("cli_trace.graph", "0 1 2.0\n");
    fs::path sites = write_temp("cli_trace.sites", "start: 0\n1: 3.0@0.5\n");
    auto r = run_cli("solve --graph " + graph.string() + " --sites " + sites.string() +
                     " --algo optimal --p-succ 0.5 --trace -");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("\"event\":\"incumbent\"") != std::string::npos);
    CHECK(r.out.find("\"event\":\"done\"") != std::string::npos);
    CHECK(r.out.find("budget: 5") != std::string::npos);
}

TEST_CASE("exit codes distinguish the empty-handed statuses") {
    // Star whose target needs two leaves: no-backtrack cannot do it.
    fs::path graph = write_temp("cli_star.graph", "0 1 1\n0 2 1\n0 3 1\n");
    fs::path sites = write_temp("cli_star.sites",
                                "start: 0\n1: 1@0.5\n2: 1@0.5\n3: 1@0.5\n");
    auto nb = run_cli("solve --graph " + graph.string() + " --sites " + sites.string() +
                      " --algo nb --p-succ 0.7");
    CHECK(nb.exit_code == 3);
    CHECK(nb.out.find("NO_SOLUTION") != std::string::npos);

    auto optimal = run_cli("solve --graph " + graph.string() + " --sites " + sites.string() +
                           " --algo optimal --p-succ 0.7");
    CHECK(optimal.exit_code == 0);

    auto infeasible = run_cli("solve --graph " + graph.string() + " --sites " + sites.string() +
                              " --algo optimal --p-succ 0.999");
    CHECK(infeasible.exit_code == 4);
}

TEST_CASE("eval and validate agree on a fixed walk") {
    fs::path graph = write_temp("cli_eval.graph", "0 1 2.0\n");
    fs::path sites = write_temp("cli_eval.sites", "start: 0\n1: 3.0@0.5\n");
    auto eval = run_cli("eval --graph " + graph.string() + " --sites " + sites.string() +
                        " --walk 0,1 --budget 5 --p-succ 0.5");
    REQUIRE(eval.exit_code == 0);
    CHECK(eval.out.find("probability: 0.5") != std::string::npos);
    CHECK(eval.out.find("minimal_budget: 5") != std::string::npos);

    auto validate = run_cli("validate --graph " + graph.string() + " --sites " + sites.string() +
                            " --walk 0,1 --budget 5 --trials 20000 --seed 9");
    REQUIRE(validate.exit_code == 0);
    CHECK(validate.out.find("analytic_rate") != std::string::npos);
    CHECK(validate.out.find(",0.5,") != std::string::npos);
}

TEST_CASE("eval exits with the infeasible code when the target is unreachable") {
    fs::path graph = write_temp("cli_inf.graph", "0 1 2.0\n");
    fs::path sites = write_temp("cli_inf.sites", "start: 0\n1: 3.0@0.5\n");
    auto r = run_cli("eval --graph " + graph.string() + " --sites " + sites.string() +
                     " --walk 0,1 --p-succ 0.9");
    CHECK(r.exit_code == 4);
    CHECK(r.out.find("INFEASIBLE") != std::string::npos);
}

TEST_CASE("transform prints the split instance and the prize table") {
    fs::path graph = write_temp("cli_tr.graph", "0 1 1.0\n");
    fs::path sites = write_temp("cli_tr.sites", "start: 0\n1: 1.0@0.3, 2.0@0.2\n");
    auto single = run_cli("transform --graph " + graph.string() + " --sites " + sites.string() +
                          " --mode single");
    REQUIRE(single.exit_code == 0);
    CHECK(single.out.find("0 1 1\n") != std::string::npos);
    CHECK(single.out.find("1 2 0\n") != std::string::npos); // zero-weight chain edge

    auto dtsp = run_cli("transform --graph " + graph.string() + " --sites " + sites.string() +
                        " --mode dtsp --budget 10");
    REQUIRE(dtsp.exit_code == 0);
    CHECK(dtsp.out.find("root: 0") != std::string::npos);
    CHECK(dtsp.out.find("deadline") != std::string::npos);
}

TEST_CASE("maxprob pipeline reports the prize ledger") {
    fs::path graph = write_temp("cli_mp.graph", "0 1 2.0\n");
    fs::path sites = write_temp("cli_mp.sites", "start: 0\n1: 3.0@0.5\n");
    auto r = run_cli("maxprob --graph " + graph.string() + " --sites " + sites.string() +
                     " --budget 5 --solver exact");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("probability: 0.5") != std::string::npos);
    CHECK(r.out.find("collected: 1 0") != std::string::npos);
}

TEST_CASE("bench writes the CSV named by the config") {
    fs::path dir = fs::temp_directory_path();
    fs::path csv = dir / "cli_bench.csv";
    std::string config_text =
        "n = 8\nneighbors = 4\nedge_cost_min = 1\nedge_cost_max = 4\n"
        "cost_mean = 10\ncost_stddev = 3\nprob_mean = 0.3\nprob_stddev = 0.1\n"
        "tier_count_min = 1\ntier_count_max = 3\nseed = 5\n"
        "solvers = greedy,aco\nsweep = p_succ\nsweep_values = 0.5,0.7\n"
        "instances_per_point = 2\nrecord_time = off\noutput_path = " + csv.string() + "\n";
    fs::path config = write_temp("cli_bench.conf", config_text);
    auto r = run_cli("bench --config " + config.string());
    REQUIRE(r.exit_code == 0);
    REQUIRE(fs::exists(csv));
    std::ifstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header ==
          "sweep_value,instance_seed,solver,budget,walk_length,wall_time_ms,status,budget_stddev");
    int lines = 0;
    for (std::string line; std::getline(in, line);) {
        if (!line.empty()) ++lines;
    }
    CHECK(lines == 12); // 8 detail + 4 aggregate
}
