#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace fs = std::filesystem;

namespace {

const fs::path kDir = "/tmp/splineproj_cli_test";

struct CliResult {
    int code = -1;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CliResult run_cli(const std::string& args) {
    const fs::path errfile = kDir / "stderr.txt";
    const std::string cmd =
        std::string(SPLINEPROJ_CLI_PATH) + " " + args + " >/dev/null 2>" + errfile.string();
    const int rc = std::system(cmd.c_str());
    CliResult r;
    if (WIFEXITED(rc)) r.code = WEXITSTATUS(rc);
    r.err = slurp(errfile);
    return r;
}

// every output format buries plain payload under '#' comment lines
std::string strip_comments(const std::string& text) {
    std::istringstream in(text);
    std::string line, out;
    while (std::getline(in, line))
        if (line.empty() || line[0] != '#') out += line + "\n";
    return out;
}

std::vector<std::vector<double>> parse_matrix(const std::string& text) {
    std::istringstream in(strip_comments(text));
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::vector<double> row;
        double v = 0.0;
        while (ls >> v) row.push_back(v);
        rows.push_back(std::move(row));
    }
    return rows;
}

nlohmann::json parse_json_file(const fs::path& p) {
    return nlohmann::json::parse(strip_comments(slurp(p)));
}

bool starts_with_version(const fs::path& p) {
    return slurp(p).rfind("# splineproj-v1", 0) == 0;
}

struct DirSetup {
    DirSetup() {
        fs::remove_all(kDir);
        fs::create_directories(kDir);
    }
};
DirSetup setup_once;

}  // namespace

TEST_CASE("gram writes the matrix and an honest inverse") {
    const fs::path stem = kDir / "g";
    auto r = run_cli("gram -k 2 --uniform 8 --periodic --out " + stem.string());
    REQUIRE(r.code == 0);
    REQUIRE(fs::exists(kDir / "g.txt"));
    REQUIRE(fs::exists(kDir / "g_inverse.txt"));
    CHECK(starts_with_version(kDir / "g.txt"));
    CHECK(starts_with_version(kDir / "g_inverse.txt"));

    auto g = parse_matrix(slurp(kDir / "g.txt"));
    auto inv = parse_matrix(slurp(kDir / "g_inverse.txt"));
    REQUIRE(g.size() == 8);
    REQUIRE(inv.size() == 8);
    const double h = 1.0 / 8.0;
    CHECK(std::abs(g[0][0] - 2.0 * h / 3.0) <= 1e-15);
    CHECK(std::abs(g[0][1] - h / 6.0) <= 1e-15);
    CHECK(std::abs(g[0][7] - h / 6.0) <= 1e-15);  // wrap corner
    CHECK(g[0][3] == 0.0);

    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) {
            double s = 0.0;
            for (int t = 0; t < 8; ++t) s += g[i][t] * inv[t][j];
            CHECK(std::abs(s - (i == j ? 1.0 : 0.0)) <= 1e-12);
        }
}

TEST_CASE("knot files are honored and cross-checked against flags") {
    const fs::path good = kDir / "good.knots";
    {
        std::ofstream out(good);
        out << "# hand written\nk 2 periodic\n0.0\n0.25\n0.5\n0.75\n";
    }
    auto ok = run_cli("gram -k 2 --knots " + good.string() + " --periodic --out " +
                      (kDir / "gk").string());
    CHECK(ok.code == 0);

    auto mode_clash = run_cli("gram -k 2 --knots " + good.string() + " --clamped --out " +
                              (kDir / "gc").string());
    CHECK(mode_clash.code == 2);
    CHECK(mode_clash.err.find("ParseError") != std::string::npos);

    auto order_clash = run_cli("gram -k 3 --knots " + good.string() + " --periodic --out " +
                               (kDir / "go").string());
    CHECK(order_clash.code == 2);

    const fs::path bad = kDir / "bad.knots";
    {
        std::ofstream out(bad);
        out << "k 2 clamped\n0\n0\n0.5\n0.5\n0.5\n1\n1\n";
    }
    auto mult = run_cli("gram -k 2 --knots " + bad.string() + " --out " + (kDir / "gb").string());
    CHECK(mult.code == 2);
    CHECK(mult.err.find("MultiplicityViolation") != std::string::npos);

    const fs::path garbled = kDir / "garbled.knots";
    {
        std::ofstream out(garbled);
        out << "k 2 sideways\n0\n1\n";
    }
    auto garble = run_cli("gram -k 2 --knots " + garbled.string() + " --out " +
                          (kDir / "gg").string());
    CHECK(garble.code == 2);
    CHECK(garble.err.find("ParseError") != std::string::npos);
}

TEST_CASE("usage errors exit with the configuration code") {
    CHECK(run_cli("").code == 2);
    CHECK(run_cli("gram --bogus-flag 3").code == 2);
    CHECK(run_cli("gram --uniform 8").code == 2);  // missing -k
    CHECK(run_cli("gram -k 2").code == 2);         // missing knot source
    CHECK(run_cli("gram -k 2 --uniform 8 --random 8").code == 2);
    CHECK(run_cli("gram -k 2 --uniform 8 --periodic --clamped").code == 2);
}

TEST_CASE("order one operator norm is exactly one through the pipeline") {
    const fs::path stem = kDir / "leb";
    auto r = run_cli("lebesgue -k 1 --uniform 32 --periodic --out " + stem.string());
    REQUIRE(r.code == 0);
    const fs::path file = kDir / "leb.json";
    REQUIRE(fs::exists(file));
    CHECK(starts_with_version(file));
    auto j = parse_json_file(file);
    CHECK(j["format"] == "splineproj-v1");
    CHECK(j["config"]["command"] == "lebesgue");
    CHECK(j["config"]["order"] == "1");
    CHECK(j["lebesgue"].get<double>() == 1.0);
}

TEST_CASE("identical invocations produce identical bytes") {
    const std::string args = "ensemble -k 2 --ns 8 --trials 2 --seed 7 --grid 8 --out " +
                             (kDir / "ens").string();
    REQUIRE(run_cli(args).code == 0);
    const std::string csv1 = slurp(kDir / "ens.csv");
    const std::string json1 = slurp(kDir / "ens.json");
    REQUIRE(!csv1.empty());
    REQUIRE(run_cli(args).code == 0);
    CHECK(slurp(kDir / "ens.csv") == csv1);
    CHECK(slurp(kDir / "ens.json") == json1);

    auto j = parse_json_file(kDir / "ens.json");
    CHECK(j["max_lebesgue"].get<double>() >= 1.0);
    CHECK(j.contains("variation_factor"));
    CHECK(j.contains("bounded"));
}

TEST_CASE("project writes samples a plot script and a summary") {
    const fs::path stem = kDir / "proj";
    auto r = run_cli("project -k 2 --uniform 8 --periodic --fn sin --grid 64 --out " +
                     stem.string());
    REQUIRE(r.code == 0);
    REQUIRE(fs::exists(kDir / "proj.csv"));
    REQUIRE(fs::exists(kDir / "proj.gp"));
    REQUIRE(fs::exists(kDir / "proj.json"));

    const std::string csv = strip_comments(slurp(kDir / "proj.csv"));
    CHECK(csv.rfind("x,f,pf", 0) == 0);
    int lines = 0;
    for (char ch : csv)
        if (ch == '\n') ++lines;
    CHECK(lines == 1 + 64);

    CHECK(slurp(kDir / "proj.gp").find("set datafile separator comma") != std::string::npos);

    auto j = parse_json_file(kDir / "proj.json");
    CHECK(j.contains("quad_error"));
    CHECK(j["sup_sample_error"].get<double>() < 0.25);  // sin vs its projection, h = 1/8
}

TEST_CASE("localization study demands a periodic space") {
    auto r = run_cli("lemma2 -k 2 --uniform 8 --cell 0 --out " + (kDir / "l2").string());
    CHECK(r.code == 2);
    CHECK(r.err.find("ParseError") != std::string::npos);

    auto ok = run_cli("lemma2 -k 2 --uniform 16 --periodic --cell 3 --grid 64 --out " +
                      (kDir / "l2ok").string());
    REQUIRE(ok.code == 0);
    auto j = parse_json_file(kDir / "l2ok.json");
    CHECK(j["slope"].get<double>() < 0.0);
    CHECK(j["interior_moment_max"].get<double>() <= 1e-8);
}

TEST_CASE("math failures exit with the runtime code") {
    auto r = run_cli("decay -k 2 --uniform 2 --out " + (kDir / "dg").string());
    CHECK(r.code == 3);
    CHECK(r.err.find("DegenerateFit") != std::string::npos);
}

TEST_CASE("decay fits are written for healthy spaces") {
    auto r = run_cli("decay -k 3 --uniform 16 --periodic --out " + (kDir / "d").string());
    REQUIRE(r.code == 0);
    auto j = parse_json_file(kDir / "d.json");
    CHECK(j["gamma_hat"].get<double>() > 0.0);
    CHECK(j["gamma_hat"].get<double>() < 1.0);
    CHECK(j["exact_banded"].get<bool>() == false);
    const std::string csv = strip_comments(slurp(kDir / "d.csv"));
    CHECK(csv.rfind("distance,envelope", 0) == 0);
}

TEST_CASE("convergence runs report a fitted order") {
    auto r = run_cli("converge -k 2 --fn sin --ns 8,16 --grid 64 --out " +
                     (kDir / "conv").string());
    REQUIRE(r.code == 0);
    auto j = parse_json_file(kDir / "conv.json");
    CHECK(j["fitted_order"].get<double>() > 1.0);
    CHECK(j["sup_error_decreased"].get<bool>());
    const std::string csv = strip_comments(slurp(kDir / "conv.csv"));
    CHECK(csv.rfind("n,mesh_width,sup_error,l1_error", 0) == 0);
    int lines = 0;
    for (char ch : csv)
        if (ch == '\n') ++lines;
    CHECK(lines == 1 + 2);
}
