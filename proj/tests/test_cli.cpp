// Exercises the installed CLI binary end to end. The binary path comes
// from the LOCALINT_CLI environment variable (set by ctest).

#include "doctest.h"

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

using json = nlohmann::json;

namespace {

struct RunResult {
    int status = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const char* cli = std::getenv("LOCALINT_CLI");
    REQUIRE_MESSAGE(cli != nullptr, "LOCALINT_CLI must point at the CLI binary");
    const std::string cmd = std::string(cli) + " " + args + " 2>&1";
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    while (fgets(buf.data(), buf.size(), pipe)) r.out += buf.data();
    const int rc = pclose(pipe);
    r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return r;
}

std::string tmp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

json first_json_line(const std::string& out) {
    std::stringstream ss(out);
    std::string line;
    std::getline(ss, line);
    return json::parse(line);
}

json last_json_line(const std::string& out) {
    std::stringstream ss(out);
    std::string line, last;
    while (std::getline(ss, line))
        if (!line.empty()) last = line;
    return json::parse(last);
}

}  // namespace

TEST_CASE("simulate then estimate recovers the effect near 1") {
    const auto data = tmp_path("cli_basic.csv");
    const auto sim = run_cli("simulate --dgp basic --units 11000 --contexts 1000 --seed 7 --out " +
                             data + " --format json-lines");
    REQUIRE(sim.status == 0);
    CHECK(first_json_line(sim.out)["ground_truth"] == 1.0);

    const auto est = run_cli("estimate --data " + data +
                             " --estimand tace --adjust x+i --propensity cell --bins 20 --trim"
                             " --format json-lines");
    REQUIRE(est.status == 0);
    const auto rep = first_json_line(est.out);
    CHECK(rep["adjustment"] == "x_and_i");
    CHECK(std::fabs(rep["point"].get<double>() - 1.0) < 0.15);
    std::remove(data.c_str());
}

TEST_CASE("the three adjustments order the bias as none > x > x+i") {
    const auto data = tmp_path("cli_fig4.csv");
    REQUIRE(run_cli("simulate --dgp basic --units 11000 --contexts 1000 --seed 21 --out " + data)
                .status == 0);
    auto point = [&](const std::string& flags) {
        const auto r = run_cli("estimate --data " + data + " " + flags + " --format json-lines");
        REQUIRE(r.status == 0);
        return first_json_line(r.out)["point"].get<double>();
    };
    const double none = point("--adjust none");
    const double x = point("--adjust x --x-cols x_1");
    const double xi = point("--adjust x+i --x-cols x_1 --bins 20 --trim");
    CHECK(std::fabs(none - 1.0) > std::fabs(x - 1.0));
    CHECK(std::fabs(x - 1.0) > std::fabs(xi - 1.0));
    std::remove(data.c_str());
}

TEST_CASE("toy subcommand prints the recovered effect") {
    const auto r = run_cli("toy --example 1 --alpha 2 --beta 3 --format json-lines");
    REQUIRE(r.status == 0);
    const auto rep = first_json_line(r.out);
    CHECK(rep["recovered_alpha"] == 2.0);
    CHECK(rep["bias"] == 0.0);
}

TEST_CASE("stochastic commands are byte-reproducible under the same seed") {
    const auto a = tmp_path("cli_rep_a.csv");
    const auto b = tmp_path("cli_rep_b.csv");
    REQUIRE(run_cli("simulate --dgp tdep --units 2000 --contexts 200 --seed 5 --out " + a)
                .status == 0);
    REQUIRE(run_cli("simulate --dgp tdep --units 2000 --contexts 200 --seed 5 --out " + b)
                .status == 0);
    std::ifstream fa(a), fb(b);
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    CHECK(sa.str() == sb.str());
    std::remove(a.c_str());
    std::remove(b.c_str());
}

TEST_CASE("missing seed on a stochastic command exits 1") {
    const auto r = run_cli("simulate --dgp basic --units 100 --contexts 10 --out /tmp/x.csv");
    CHECK(r.status == 1);
    CHECK(r.out.find("error:") != std::string::npos);
}

TEST_CASE("overlap violation without --trim exits 2") {
    const auto data = tmp_path("cli_overlap.csv");
    {
        std::ofstream out(data);
        out << "unit_id,y,t,x_1\n";
        // stratum x=0 mixed, stratum x=1 all treated
        out << "0,1.0,1,0\n1,0.5,0,0\n2,2.0,1,1\n3,2.5,1,1\n";
    }
    const auto r = run_cli("estimate --data " + data +
                           " --estimand tace --adjust x --x-cols x_1 --clip 0");
    CHECK(r.status == 2);
    CHECK(r.out.find("error:") != std::string::npos);
    std::remove(data.c_str());
}

TEST_CASE("inflate computes the dependence summary and widens an interval") {
    const auto graph = tmp_path("cli_path5.csv");
    {
        std::ofstream out(graph);
        out << "0,1\n1,2\n2,3\n3,4\n";
    }
    const auto interval = tmp_path("cli_interval.json");
    {
        std::ofstream out(interval);
        out << R"({"point": 0.5, "lo": -0.5, "hi": 1.5, "replicates": 500, "seed": 3})";
    }
    const auto r = run_cli("inflate --graph " + graph + " --n 5 --method sr --interval " +
                           interval + " --format json-lines");
    REQUIRE(r.status == 0);
    const auto summary = first_json_line(r.out);
    CHECK(summary["d_avg"].get<double>() == doctest::Approx(3.8));
    CHECK(summary["d_max"] == 5);
    const auto inflated = last_json_line(r.out);
    const double width = inflated["hi_inflated"].get<double>() - inflated["lo_inflated"].get<double>();
    CHECK(width == doctest::Approx(2.0 * std::sqrt(summary["d_sr"].get<double>())));
    std::remove(graph.c_str());
    std::remove(interval.c_str());
}

TEST_CASE("signature and inject subcommands round through files") {
    const auto data = tmp_path("cli_sig.csv");
    {
        std::ofstream out(data);
        out << "unit_id,y,t,context,x_d\n";
        out << "0,1.0,1,0,2.0\n1,2.0,1,0,1.0\n2,0.5,0,0,1.5\n3,1.5,0,1,1.0\n4,2.5,1,1,2.0\n";
    }
    const auto with_sig = tmp_path("cli_sig_out.csv");
    const auto r = run_cli("signature --data " + data +
                           " --kind context_fraction --name i_ctx --out " + with_sig);
    REQUIRE(r.status == 0);

    const auto injected = tmp_path("cli_inj_out.csv");
    const auto r2 = run_cli("inject --data " + with_sig +
                            " --signature-col i_ctx --scale-col x_d --strength 2 --out " +
                            injected + " --format json-lines");
    REQUIRE(r2.status == 0);
    std::ifstream check(injected);
    std::string header;
    std::getline(check, header);
    CHECK(header.find("i_ctx") != std::string::npos);
    std::remove(data.c_str());
    std::remove(with_sig.c_str());
    std::remove(injected.c_str());
}

TEST_CASE("config file supplies defaults and flags win") {
    const auto cfg = tmp_path("cli_cfg.json");
    {
        std::ofstream out(cfg);
        out << R"({"example": 2, "alpha": 2, "beta": 3, "delta": 0.5})";
    }
    const auto from_cfg = run_cli("toy --config " + cfg + " --format json-lines");
    REQUIRE(from_cfg.status == 0);
    CHECK(first_json_line(from_cfg.out)["bias"] == -0.5);

    // explicit flag overrides the config value
    const auto overridden = run_cli("toy --config " + cfg + " --delta 0.25 --format json-lines");
    REQUIRE(overridden.status == 0);
    CHECK(first_json_line(overridden.out)["bias"] == -0.25);
    std::remove(cfg.c_str());
}

TEST_CASE("unknown flags exit 1 with usage text") {
    const auto r = run_cli("toy --no-such-flag");
    CHECK(r.status == 1);
}
