#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <doctest.h>

namespace {

int run_cli(const std::string& args) {
    const std::string cmd =
        std::string(CTSID_CLI_PATH) + " " + args + " > cli_stdout.txt 2> cli_stderr.txt";
    const int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -2;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void cleanup(std::initializer_list<const char*> files) {
    for (const char* f : files) std::remove(f);
}

}  // namespace

TEST_CASE("usage errors exit with code 2") {
    CHECK(run_cli("") == 2);
    CHECK(run_cli("frobnicate") == 2);
    CHECK(run_cli("generate") == 2);                       // missing --out
    CHECK(run_cli("estimate --data x.csv --estimator nope") == 2);
    CHECK(run_cli("--help") == 0);
    CHECK(run_cli("generate --help") == 0);
}

TEST_CASE("generate then estimate recovers the benchmark parameters") {
    CHECK(run_cli("generate --n 800 --h 0.3 --seed 5 --variance 0.01 "
                  "--out cli_data.csv --input-out cli_input.txt") == 0);

    CHECK(run_cli("estimate --data cli_data.csv --input cli_input.txt "
                  "--estimator srivc-c --order-n 2 --order-m 0 --report cli_report.txt") == 0);

    const std::string report = slurp("cli_report.txt");
    CHECK(report.find("converged=1") != std::string::npos);

    // theta=a1,a2,b0 on the fourth line of the report
    std::istringstream in(report);
    std::string line;
    while (std::getline(in, line))
        if (line.rfind("theta=", 0) == 0) break;
    double a1 = 0.0, a2 = 0.0, b0 = 0.0;
    REQUIRE(std::sscanf(line.c_str(), "theta=%lf,%lf,%lf", &a1, &a2, &b0) == 3);
    CHECK(a1 == doctest::Approx(0.7).epsilon(0.05));
    CHECK(a2 == doctest::Approx(0.25).epsilon(0.05));
    CHECK(b0 == doctest::Approx(1.25).epsilon(0.05));

    // The hold-based variant runs off the same file without the input definition.
    CHECK(run_cli("estimate --data cli_data.csv --estimator srivc") == 0);

    cleanup({"cli_data.csv", "cli_input.txt", "cli_report.txt"});
}

TEST_CASE("exact-input estimation requires the input definition") {
    CHECK(run_cli("generate --n 200 --h 0.3 --seed 1 --out cli_tmp.csv") == 0);
    CHECK(run_cli("estimate --data cli_tmp.csv --estimator srivc-c") == 2);
    cleanup({"cli_tmp.csv"});
}

TEST_CASE("generation is deterministic in the seed") {
    CHECK(run_cli("generate --n 100 --h 0.3 --seed 9 --out cli_a.csv") == 0);
    CHECK(run_cli("generate --n 100 --h 0.3 --seed 9 --out cli_b.csv") == 0);
    CHECK(run_cli("generate --n 100 --h 0.3 --seed 10 --out cli_c.csv") == 0);
    CHECK(slurp("cli_a.csv") == slurp("cli_b.csv"));
    CHECK(slurp("cli_a.csv") != slurp("cli_c.csv"));
    cleanup({"cli_a.csv", "cli_b.csv", "cli_c.csv"});
}

TEST_CASE("diagnostics subcommands") {
    CHECK(run_cli("diagnose power --n-samples 20000 --h 0.3") == 0);
    CHECK(run_cli("diagnose phistar") == 0);
    CHECK(run_cli("diagnose condsweep") == 0);
    CHECK(run_cli("diagnose psi --n-samples 20000 --seed 3") == 0);
}

TEST_CASE("a violated excitation assumption is reported with exit code 5") {
    std::ofstream("cli_one_sine.txt") << "offset=0\namp,freq_rad_s,phase_rad\n1,1,0\n";
    CHECK(run_cli("diagnose phistar --input-file cli_one_sine.txt") == 5);
    const std::string out = slurp("cli_stdout.txt");
    CHECK(out.find("AssumptionA3Violated") != std::string::npos);
    cleanup({"cli_one_sine.txt"});
}

TEST_CASE("small reproduction run writes the result tables") {
    CHECK(run_cli("reproduce fig1 --runs 2 --n-list 150,300 --seed 4 --jobs 1 "
                  "--out-dir cli_repro") == 0);
    const std::string summary = slurp("cli_repro/fig1_summary.csv");
    CHECK(summary.rfind("estimator,condition,param,", 0) == 0);
    CHECK(summary.find("srivc-c") != std::string::npos);
    CHECK(slurp("cli_repro/fig1_plot.csv").find("150") != std::string::npos);
    cleanup({"cli_repro/fig1_summary.csv", "cli_repro/fig1_per_run.csv",
             "cli_repro/fig1_plot.csv"});
    std::remove("cli_repro");
}

TEST_CASE("cli scratch files are removed") {
    cleanup({"cli_stdout.txt", "cli_stderr.txt"});
    CHECK(true);
}
