#include <catch2/catch.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <json.hpp>

#include "mnewt/matrix_io.hpp"
#include "mnewt/problems.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
};

CliResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path out_path =
        fs::temp_directory_path() / ("mnewt_cli_out_" + std::to_string(counter++) + ".txt");
    const std::string cmd =
        std::string(MNEWT_CLI_PATH) + " " + args + " > " + out_path.string() + " 2>/dev/null";
    const int raw = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    std::ifstream in(out_path);
    std::stringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    fs::remove(out_path);
    return r;
}

fs::path write_temp(const std::string& name, const std::string& content) {
    const fs::path p = fs::temp_directory_path() / name;
    std::ofstream out(p);
    out << content;
    return p;
}

fs::path write_matrix(const std::string& name, const mnewt::SymMatrix& m) {
    const fs::path p = fs::temp_directory_path() / name;
    std::ofstream out(p);
    mnewt::save_matrix(out, m);
    return p;
}

}  // namespace

TEST_CASE("solve exit codes") {
    CHECK(run_cli("solve rosenbr").exit_code == 0);
    CHECK(run_cli("solve nosuch").exit_code == 1);
    CHECK(run_cli("solve rosenbr --x0 1,2,3").exit_code == 1);
    CHECK(run_cli("solve rosenbr --norm banana").exit_code == 1);
    CHECK(run_cli("").exit_code == 1);
}

TEST_CASE("solve from the minimizer terminates with zero iterations") {
    const CliResult r = run_cli("solve rosenbr --x0 1,1 --json");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["result"]["iterations"] == 0);
    CHECK(doc["result"]["status"] == "converged");
}

TEST_CASE("solve echoes its configuration defaults in every report") {
    const CliResult r = run_cli("solve rosenbr --json");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["schema_version"] == 1);
    CHECK(doc["config"]["delta"].get<double>() == 1e-8);
    CHECK(doc["config"]["Delta"].get<double>() == 1e12);
    CHECK(doc["config"]["eps"].get<double>() == 1e-5);
    CHECK(doc["result"]["iterations"].get<int>() >= 15);
    CHECK(doc["result"]["iterations"].get<int>() <= 40);
    CHECK(doc["result"]["grad_norm_final"].get<double>() < 1e-5);
    // round trip through the parser is byte identical
    CHECK(json::parse(r.out).dump(2) + "\n" == r.out);
}

TEST_CASE("solve on the registry quadratic takes the one Newton step") {
    const CliResult r = run_cli("solve quadratic --json");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["result"]["iterations"] == 1);
    CHECK(doc["result"]["trace"][0]["gamma"] == 0.0);
    CHECK(doc["result"]["trace"][0]["alpha"] == 1.0);
}

TEST_CASE("solve accepts a matrix file as a quadratic problem") {
    const fs::path p = write_matrix("cli_quad.txt", mnewt::SymMatrix::diagonal({1.0, 4.0}));
    const CliResult r = run_cli("solve " + p.string() + " --json");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["result"]["status"] == "converged");
    // minimizer of 1/2 x'Ax is the origin
    for (double x : doc["result"]["x_final"].get<std::vector<double>>())
        CHECK(std::abs(x) < 1e-5);
}

TEST_CASE("eig command on the Toeplitz test matrix") {
    const fs::path file = write_matrix("cli_toeplitz.txt", mnewt::toeplitz_rayleigh());

    SECTION("alternating preset start") {
        const CliResult r = run_cli("eig " + file.string() + " --which min --x0 alt --json");
        REQUIRE(r.exit_code == 0);
        const json doc = json::parse(r.out);
        CHECK(doc["result"]["method"] == "sphere_cg");
        CHECK(doc["result"]["value"].get<double>() == Approx(0.0032585).margin(1e-7));
        const int iters = doc["result"]["iterations"].get<int>();
        CHECK(iters >= 4);
        CHECK(iters <= 30);
    }
    SECTION("first-basis-vector preset start") {
        const CliResult r = run_cli("eig " + file.string() + " --which min --x0 e1 --json");
        REQUIRE(r.exit_code == 0);
        const json doc = json::parse(r.out);
        CHECK(doc["result"]["value"].get<double>() == Approx(0.0032585).margin(1e-7));
        const int iters = doc["result"]["iterations"].get<int>();
        CHECK(iters >= 5);
        CHECK(iters <= 160);  // this start needs most of the 10n budget
    }
    SECTION("both extremes") {
        const CliResult r = run_cli("eig " + file.string() + " --json");
        REQUIRE(r.exit_code == 0);
        const json doc = json::parse(r.out);
        CHECK(doc["result"]["lo"]["value"].get<double>() == Approx(0.00325850037049).margin(1e-9));
        CHECK(doc["result"]["lo"]["value"].get<double>() <=
              doc["result"]["hi"]["value"].get<double>());
    }
}

TEST_CASE("eig on the identity returns immediately") {
    const fs::path file = write_matrix("cli_identity.txt", mnewt::SymMatrix::identity(4));
    const CliResult r = run_cli("eig " + file.string() + " --which max --json");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["result"]["value"].get<double>() == Approx(1.0));
    CHECK(doc["result"]["iterations"] == 0);
}

TEST_CASE("eig accepts a start vector from a file") {
    const fs::path file = write_matrix("cli_toeplitz2.txt", mnewt::toeplitz_rayleigh());
    // perturbed alternating pattern, close enough to the bottom eigenvector
    // that the run cannot drift to an internal eigenvalue
    std::string entries;
    for (int i = 0; i < 16; ++i) entries += (i % 2 == 0) ? "-1 " : (i == 7 ? "0.8 " : "1 ");
    const fs::path x0 = write_temp("cli_x0.txt", entries);
    const CliResult r =
        run_cli("eig " + file.string() + " --which min --x0 " + x0.string() + " --json");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["result"]["value"].get<double>() == Approx(0.00325850037049).margin(1e-8));
    CHECK(run_cli("eig " + file.string() + " --x0 /nonexistent").exit_code == 1);
}

TEST_CASE("eig input validation") {
    const fs::path bad = write_temp("cli_bad.txt", "not a matrix\n");
    CHECK(run_cli("eig " + bad.string()).exit_code == 1);
    const fs::path asym = write_temp("cli_asym.txt", "2\n1 2\n3 1\n");
    CHECK(run_cli("eig " + asym.string()).exit_code == 1);
    CHECK(run_cli("eig /nonexistent/file").exit_code == 1);
    const fs::path ok = write_matrix("cli_ok.txt", mnewt::SymMatrix::identity(2));
    CHECK(run_cli("eig " + ok.string() + " --which sideways").exit_code == 1);
}

TEST_CASE("bench over the standard suite") {
    const CliResult r = run_cli("bench --suite standard --norm inf --eps 1e-6 --json");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    const auto& rows = doc["result"]["rows"];
    REQUIRE(rows.size() == mnewt::standard_set().size());
    std::string prev;
    for (const auto& row : rows) {
        CHECK(row["status"] == "converged");
        CHECK(prev <= row["name"].get<std::string>());  // deterministic name order
        prev = row["name"].get<std::string>();
        if (row["name"] == "rosenbr") CHECK(row["obj"].get<double>() < 1e-10);
    }
    CHECK(doc["config"]["norm"] == "inf");
}

TEST_CASE("bench csv output") {
    const CliResult r = run_cli("bench --csv");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.rfind("name,iter,obj,grad_norm,status\n", 0) == 0);
    CHECK(run_cli("bench --suite nosuch").exit_code == 1);
}

TEST_CASE("check command") {
    CHECK(run_cli("check rosenbr").exit_code == 0);
    CHECK(run_cli("check beale").exit_code == 0);
    CHECK(run_cli("check badgrad").exit_code == 2);
    CHECK(run_cli("check nosuch").exit_code == 1);
}
