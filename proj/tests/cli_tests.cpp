// End-to-end checks of the command-line tool: runs the built binary and
// inspects its artifacts.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gramstat/monte_carlo.hpp"

namespace {

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    const std::string out_path = "cli_stdout.tmp";
    const std::string command = std::string(GRAMSTAT_CLI_PATH) + " " + args + " > " + out_path +
                                " 2> cli_stderr.tmp";
    const int status = std::system(command.c_str());
    std::ifstream in(out_path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    std::remove(out_path.c_str());
    std::remove("cli_stderr.tmp");
    return {status == 0 ? 0 : 1, buffer.str()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) fields.push_back(cell);
        rows.push_back(std::move(fields));
    }
    return rows;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace

TEST_CASE("moments: golden stable column for config1") {
    const RunResult r = run_cli("moments --nt 3 --q 5 --xi 0.85 --p 1,5,8");
    REQUIRE(r.exit_code == 0);
    const auto rows = parse_csv(r.output);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == std::vector<std::string>{"p", "stable", "baseline",
                                              "baseline_condition_warning"});
    CHECK(std::abs(std::stod(rows[1][1]) - 0.5562) <= 1e-4);
    CHECK(std::abs(std::stod(rows[2][1]) - 1.1032) <= 1e-4);
    CHECK(std::abs(std::stod(rows[3][1]) - 5.3989) <= 1e-4);
    CHECK(rows[1][3] == "0");  // config1 is below the warning threshold
}

TEST_CASE("moments: config2 stable value with baseline flagged unstable") {
    const RunResult r = run_cli("moments --nt 3 --q 20 --xi 0.85 --p 1");
    REQUIRE(r.exit_code == 0);
    const auto rows = parse_csv(r.output);
    REQUIRE(rows.size() == 2);
    CHECK(std::abs(std::stod(rows[1][1]) - 0.9612) <= 1e-4);
    CHECK(rows[1][3] == "1");
}

TEST_CASE("moments: spectrum file route, Exp(1) third moment") {
    {
        std::ofstream out("cli_spectrum.txt");
        out << "1.0\n";
    }
    const RunResult r = run_cli("moments --nt 1 --q 1 --spectrum cli_spectrum.txt --p 3");
    std::remove("cli_spectrum.txt");
    REQUIRE(r.exit_code == 0);
    const auto rows = parse_csv(r.output);
    CHECK(std::stod(rows[1][1]) == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("moments: json and csv carry identical numbers") {
    const RunResult csv = run_cli("moments --nt 3 --q 5 --xi 0.85 --p 1,5");
    const RunResult js = run_cli("moments --nt 3 --q 5 --xi 0.85 --p 1,5 --format json");
    REQUIRE(csv.exit_code == 0);
    REQUIRE(js.exit_code == 0);
    const auto rows = parse_csv(csv.output);
    const auto doc = nlohmann::json::parse(js.output);
    CHECK(doc["meta"]["command"] == "moments");
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(std::stod(rows[i + 1][1]) == doc["data"]["stable"][i].get<double>());
        CHECK(std::stod(rows[i + 1][2]) == doc["data"]["baseline"][i].get<double>());
    }
}

TEST_CASE("compare: p = 0 row is exactly ones") {
    const RunResult r = run_cli("compare --nt 3 --q 5 --xi 0.85 --p 0 --samples 100 --seed 7");
    REQUIRE(r.exit_code == 0);
    const auto rows = parse_csv(r.output);
    REQUIRE(rows.size() == 2);
    CHECK(std::stod(rows[1][1]) == doctest::Approx(1.0).epsilon(1e-9));  // baseline
    CHECK(std::stod(rows[1][2]) == 1.0);                                 // empirical
    CHECK(std::stod(rows[1][3]) == 0.0);                                 // stderr
    CHECK(std::stod(rows[1][4]) == 1.0);                                 // stable
}

TEST_CASE("compare: config1 row matches the golden values within error bars") {
    const RunResult r =
        run_cli("compare --nt 3 --q 5 --xi 0.85 --p 1 --samples 20000 --seed 11");
    REQUIRE(r.exit_code == 0);
    const auto rows = parse_csv(r.output);
    const double baseline = std::stod(rows[1][1]);
    const double empirical = std::stod(rows[1][2]);
    const double se = std::stod(rows[1][3]);
    const double stable = std::stod(rows[1][4]);
    CHECK(std::abs(baseline - 0.5563) <= 1e-4);
    CHECK(std::abs(stable - 0.5562) <= 1e-4);
    CHECK(std::abs(empirical - stable) <= 5.0 * se);
}

TEST_CASE("density: exponential-model grid matches e^-lambda") {
    {
        std::ofstream out("cli_unit_spectrum.txt");
        out << "1.0\n";
    }
    const RunResult r =
        run_cli("density --nt 1 --q 1 --spectrum cli_unit_spectrum.txt --K 3 --grid 0:6:121");
    std::remove("cli_unit_spectrum.txt");
    REQUIRE(r.exit_code == 0);
    const auto rows = parse_csv(r.output);
    REQUIRE(rows.size() == 122);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double lambda = std::stod(rows[i][0]);
        const double pdf = std::stod(rows[i][1]);
        const double cdf = std::stod(rows[i][2]);
        CHECK(std::abs(pdf - std::exp(-lambda)) < 1e-10);
        CHECK(std::abs(cdf - (1.0 - std::exp(-lambda))) < 1e-10);
    }
}

TEST_CASE("density: fit quality via CLI at the working truncation orders") {
    const RunResult small = run_cli(
        "density --nt 3 --q 5 --xi 0.85 --K 30 --samples 100000 --seed 99 --format json");
    REQUIRE(small.exit_code == 0);
    const auto doc1 = nlohmann::json::parse(small.output);
    CHECK(doc1["meta"]["diagnostics"]["ks_distance"].get<double>() <= 0.02);

    const RunResult large = run_cli(
        "density --nt 3 --q 20 --xi 0.85 --K 45 --samples 100000 --seed 99 --format json");
    REQUIRE(large.exit_code == 0);
    const auto doc2 = nlohmann::json::parse(large.output);
    CHECK(doc2["meta"]["diagnostics"]["ks_distance"].get<double>() <= 0.01);
}

TEST_CASE("density: overlay columns appear with samples") {
    const RunResult r =
        run_cli("density --nt 3 --q 5 --xi 0.85 --K 20 --samples 5000 --seed 3 --format json");
    REQUIRE(r.exit_code == 0);
    const auto doc = nlohmann::json::parse(r.output);
    CHECK(doc["data"].contains("empirical_cdf"));
    CHECK(doc["meta"]["diagnostics"].contains("ks_distance"));
    CHECK(doc["meta"]["diagnostics"]["ks_distance"].get<double>() < 0.05);
    CHECK(doc["meta"]["diagnostics"]["min_pdf_before_clip"].get<double>() <= 0.0);
    // clipped pdf column is nonnegative
    for (const auto& v : doc["data"]["pdf"]) CHECK(v.get<double>() >= 0.0);
}

TEST_CASE("sample: determinism and container formats") {
    const std::string a = "cli_sample_a.csv";
    const std::string b = "cli_sample_b.csv";
    REQUIRE(run_cli("sample --nt 3 --q 5 --xi 0.85 --samples 10 --seed 42 --out " + a)
                .exit_code == 0);
    REQUIRE(run_cli("sample --nt 3 --q 5 --xi 0.85 --samples 10 --seed 42 --out " + b)
                .exit_code == 0);
    CHECK(slurp(a) == slurp(b));

    const gramstat::EmpiricalSample imported = gramstat::import_csv(a);
    CHECK(imported.n_samples() == 10);
    CHECK(imported.n_t() == 3);
    CHECK(imported.eigenvalues().size() == 30);

    const std::string bin = "cli_sample.bin";
    REQUIRE(run_cli("sample --nt 3 --q 5 --xi 0.85 --samples 10 --seed 42 --format bin --out " +
                    bin)
                .exit_code == 0);
    const gramstat::EmpiricalSample from_bin = gramstat::import_binary(bin);
    CHECK(from_bin.eigenvalues() == imported.eigenvalues());

    std::remove(a.c_str());
    std::remove(b.c_str());
    std::remove(bin.c_str());
}

TEST_CASE("error paths exit nonzero without artifacts") {
    CHECK(run_cli("moments --nt 5 --q 3 --xi 0.85 --p 1").exit_code == 1);  // n_t > q
    CHECK(run_cli("moments --nt 3 --q 5 --p 1").exit_code == 1);            // no spectrum source
    CHECK(run_cli("sample --nt 3 --q 5 --xi 0.85 --samples 0").exit_code == 1);
    CHECK(run_cli("moments --nt 3 --q 5 --xi 1.5 --p 1").exit_code == 1);   // xi out of range

    const std::string out = "cli_must_not_exist.csv";
    CHECK(run_cli("moments --nt 5 --q 3 --xi 0.85 --p 1 --out " + out).exit_code == 1);
    std::ifstream probe(out);
    CHECK(!probe.good());  // partial results never written
}
