#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lowensim/experiments.hpp"

using namespace lowensim;

namespace {

struct CliRun {
    int exit_code = -1;
    std::string output_file_content;
};

CliRun run_cli(const std::string& args, const std::string& config_json,
               const std::string& tag) {
    const std::string cfg_path = "cli_cfg_" + tag + ".json";
    const std::string out_path = "cli_out_" + tag + ".csv";
    {
        std::ofstream out(cfg_path);
        out << config_json;
    }
    const std::string cmd = std::string(LOWENSIM_CLI_PATH) + " " + args + " --config " + cfg_path +
                            " --output " + out_path + " 2> cli_err_" + tag + ".log";
    CliRun res;
    res.exit_code = std::system(cmd.c_str());
    if (res.exit_code != -1) res.exit_code = WEXITSTATUS(res.exit_code);
    std::ifstream in(out_path);
    std::stringstream ss;
    ss << in.rdbuf();
    res.output_file_content = ss.str();
    std::remove(cfg_path.c_str());
    std::remove(out_path.c_str());
    std::remove(("cli_err_" + tag + ".log").c_str());
    return res;
}

std::string strip_timestamp(const std::string& csv) {
    std::istringstream in(csv);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line))
        if (line.rfind("# timestamp", 0) != 0) out << line << "\n";
    return out.str();
}

std::vector<std::string> data_lines(const std::string& csv) {
    std::istringstream in(csv);
    std::vector<std::string> rows;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '#') rows.push_back(line);
    return rows;
}

long long column_as_ll(const std::string& row, size_t col) {
    std::istringstream in(row);
    std::string cell;
    for (size_t i = 0; i <= col; ++i) std::getline(in, cell, ',');
    return std::stoll(cell);
}

}  // namespace

TEST_CASE("run_experiment rejects unknown names listing valid ones") {
    ExperimentConfig cfg;
    cfg.experiment = "no_such_thing";
    try {
        run_experiment(cfg, 1);
        FAIL("expected ConfigInvalid");
    } catch (const ConfigInvalid& e) {
        const std::string msg = e.what();
        CHECK(msg.find("grover_demo") != std::string::npos);
        CHECK(msg.find("trig_degree_probe") != std::string::npos);
    }
}

TEST_CASE("grover_demo config produces a high-fidelity row") {
    CliRun res = run_cli("grover_demo",
                         R"({"experiment":"grover_demo","params":{"N":16},"seed":3})", "g16");
    CHECK(res.exit_code == 0);
    auto rows = data_lines(res.output_file_content);
    REQUIRE(rows.size() == 2);  // header + one row
    // overlap is column 13 in the documented schema
    std::istringstream in(rows[1]);
    std::string cell;
    for (int i = 0; i <= 13; ++i) std::getline(in, cell, ',');
    CHECK(std::stod(cell) >= 0.999);
}

TEST_CASE("unknown experiment exits 2 and lists names") {
    const std::string cmd = std::string(LOWENSIM_CLI_PATH) + " bogus 2> cli_unknown.log";
    int rc = std::system(cmd.c_str());
    rc = WEXITSTATUS(rc);
    CHECK(rc == 2);
    std::ifstream in("cli_unknown.log");
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str().find("grover_demo") != std::string::npos);
    std::remove("cli_unknown.log");
}

TEST_CASE("sweep rows are ordered and encoding uses grow with t") {
    const std::string cfg =
        R"({"experiment":"regime_sweep","params":{"lambda":1.0,"delta":0.0625,"eps":1e-3,"gamma":"delta"},)"
        R"("sweep":{"param":"t","values":[160,320,640]},"seed":1})";
    CliRun res = run_cli("regime_sweep --jobs 3", cfg, "sweep");
    CHECK(res.exit_code == 0);
    auto rows = data_lines(res.output_file_content);
    REQUIRE(rows.size() == 4);
    long long prev = -1;
    for (size_t i = 1; i < rows.size(); ++i) {
        const long long uses = column_as_ll(rows[i], 10);
        CHECK(uses > prev);
        prev = uses;
    }
}

TEST_CASE("determinism: identical config and seed give identical CSV") {
    const std::string cfg =
        R"({"experiment":"expander_spectrum","params":{"N":16,"d":3},"seed":11})";
    CliRun a = run_cli("expander_spectrum", cfg, "deta");
    CliRun b = run_cli("expander_spectrum", cfg, "detb");
    CHECK(a.exit_code == 0);
    // wall_ms differs run to run; mask that column as well as the timestamp.
    auto mask = [](const std::string& csv) {
        auto rows = data_lines(strip_timestamp(csv));
        std::string out;
        for (auto& r : rows) {
            const auto last_comma = r.rfind(',');
            const auto prev_comma = r.rfind(',', last_comma - 1);
            out += r.substr(0, prev_comma) + r.substr(last_comma) + "\n";
        }
        return out;
    };
    CHECK(mask(a.output_file_content) == mask(b.output_file_content));
}

TEST_CASE("failed sweep points are flagged and exit code is 1") {
    // t*Delta < eps violates the plan precondition on the middle point only.
    const std::string cfg =
        R"({"experiment":"regime_sweep","params":{"lambda":1.0,"delta":0.25,"eps":1e-3},)"
        R"("sweep":{"param":"t","values":[100,1e-9,100]},"seed":0})";
    CliRun res = run_cli("regime_sweep", cfg, "fail");
    CHECK(res.exit_code == 1);
    auto rows = data_lines(res.output_file_content);
    REQUIRE(rows.size() == 4);
    CHECK(rows[2].find("error:PreconditionViolated") != std::string::npos);
    CHECK(rows[1].find("ok") != std::string::npos);
    CHECK(rows[3].find("ok") != std::string::npos);
}

TEST_CASE("json mirror carries the same rows") {
    ExperimentConfig cfg;
    cfg.experiment = "qsp_compare";
    cfg.params = json{{"t", 320.0}, {"delta", 1.0 / 64.0}, {"lambda", 1.0}, {"eps", 1e-3}};
    ExperimentResult res = run_experiment(cfg, 1);
    json j = to_json_result(cfg, res);
    REQUIRE(j["rows"].size() == 1);
    CHECK(j["rows"][0].contains("sga_encoding_uses"));
    CHECK(j["rows"][0]["status"] == "ok");
}
