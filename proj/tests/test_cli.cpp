#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + " " ROUGHEX_CLI_PATH " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    std::string out;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

const std::string kParams = "--params " ROUGHEX_PARAMS_DIR "/base.json";

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << content;
    return path;
}

} // namespace

TEST(Cli, ClassifyJson) {
    const auto r = run(kParams + " classify --u -13");
    ASSERT_EQ(r.code, 0) << r.out;
    const json j = json::parse(r.out);
    EXPECT_EQ(j["case"], "A");
    std::vector<std::string> keys;
    for (const auto& [k, v] : j.items()) keys.push_back(k);
    std::sort(keys.begin(), keys.end());
    EXPECT_EQ(keys, (std::vector<std::string>{"c1", "case", "e0", "e1", "u"}));
    EXPECT_EQ(json::parse(run(kParams + " classify --u 0.5").out)["case"], "D");
}

TEST(Cli, ClassifyCsv) {
    const auto r = run(kParams + " --format csv classify --u -5");
    ASSERT_EQ(r.code, 0);
    const auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"u", "case", "e0", "e1", "c1"}));
    EXPECT_EQ(rows[1][1], "C");
}

TEST(Cli, InputErrors) {
    EXPECT_EQ(run("--params /nonexistent/params.json classify --u 1").code, 2);
    EXPECT_EQ(run(kParams + " classify").code, 2);
    EXPECT_EQ(run(kParams + " nosuchcommand").code, 2);
    const auto bad = temp_file("roughex_bad.json", "{\"alpha\": 0.6, \"rho\": -0.8");
    EXPECT_EQ(run("--params " + bad.string() + " classify --u 1").code, 2);
    const auto extra = temp_file("roughex_extra.json",
                                 R"({"alpha":0.6,"rho":-0.8,"lambda":2,"xi":0.2,"vbar":0.04,"v0":0.04,"kappa":1})");
    EXPECT_EQ(run("--params " + extra.string() + " classify --u 1").code, 2);
}

TEST(Cli, EnvironmentParams) {
    const auto alt = temp_file("roughex_alt.json", R"({"alpha":0.6,"rho":-0.4,"lambda":2,"xi":0.2,"vbar":0.04,"v0":0.04})");
    // rho = -0.4 moves the case-A boundary to -25, so u = -13 becomes case B.
    const auto r = run("classify --u -13", "ROUGHEX_PARAMS=" + alt.string());
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_EQ(json::parse(r.out)["case"], "B");
    EXPECT_EQ(json::parse(run("classify --u -13", "env -u ROUGHEX_PARAMS").out)["case"], "A");
}

TEST(Cli, SweepColumnsAndCases) {
    const auto r = run(kParams + " sweep --from -60 --to 2 --points 32");
    ASSERT_EQ(r.code, 0) << r.out;
    const auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 33u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"u", "case", "estimate", "estimate_kind", "lower_bound", "upper_bound",
                                                 "classical"}));
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        ASSERT_EQ(row.size(), 7u);
        if (row[1] == "A" || row[1] == "B") {
            EXPECT_EQ(row[3], row[1] == "A" ? "algorithm_1" : "algorithm_2_lower_bound");
            EXPECT_LE(std::stod(row[4]), std::stod(row[5]));
            if (row[1] == "A") {
                EXPECT_LT(std::stod(row[4]), std::stod(row[2]));
                EXPECT_LT(std::stod(row[2]), std::stod(row[5]));
            }
        } else {
            EXPECT_EQ(row[2], "inf");
            EXPECT_EQ(row[3], "none");
            EXPECT_EQ(row[6], "inf");
        }
    }
    EXPECT_EQ(rows[1][0], "-60");
    EXPECT_EQ(rows.back()[0], "2");
}

TEST(Cli, SweepEmptyRange) {
    const auto r = run(kParams + " sweep --from -10 --to -1 --points 0");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "u,case,estimate,estimate_kind,lower_bound,upper_bound,classical\n");
}

TEST(Cli, SweepDeterministicAcrossThreadCounts) {
    const auto a = run(kParams + " sweep --from -40 --to -10 --points 12 --threads 1");
    const auto b = run(kParams + " sweep --from -40 --to -10 --points 12 --threads 4");
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
}

TEST(Cli, SweepToFile) {
    const auto path = std::filesystem::temp_directory_path() / "roughex_sweep.csv";
    std::filesystem::remove(path);
    ASSERT_EQ(run(kParams + " --out " + path.string() + " sweep --points 3").code, 0);
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(parse_csv(ss.str()).size(), 4u);
}

TEST(Cli, CriticalLower) {
    const auto r = run(kParams + " critical --T 0.1");
    ASSERT_EQ(r.code, 0) << r.out;
    const json j = json::parse(r.out);
    for (const char* k : {"T", "u_minus", "residual", "lee_slope", "left_tail_exponent"}) EXPECT_TRUE(j.contains(k)) << k;
    EXPECT_LT(j["residual"].get<double>(), 1e-6 * 0.1);
    EXPECT_LT(j["u_minus"].get<double>(), -12.5);
    EXPECT_EQ(j["left_tail_exponent"].get<double>(), -j["u_minus"].get<double>() - 1.0);
    EXPECT_EQ(run(kParams + " critical --T 0.1").out, r.out);
}

TEST(Cli, CriticalOutOfRange) {
    const auto r = run(kParams + " critical --T 100");
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.out.find("valid maturity range"), std::string::npos) << r.out;
    EXPECT_EQ(run(kParams + " critical --T 0.1 --side upper").code, 3);
}

TEST(Cli, Bounds) {
    const auto r = run(kParams + " bounds --u -20");
    ASSERT_EQ(r.code, 0);
    const json j = json::parse(r.out);
    EXPECT_LT(j["lower_bound"].get<double>(), j["upper_bound"].get<double>());
    EXPECT_EQ(run(kParams + " bounds --u -5").code, 3);
}

TEST(Cli, VieZeroMoment) {
    const auto r = run(kParams + " vie --u-re 0 --t-end 1 --steps 32");
    ASSERT_EQ(r.code, 0);
    const auto rows = parse_csv(r.out);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"t", "re_f", "im_f", "re_mgf", "im_mgf"}));
    ASSERT_EQ(rows.size(), 35u);
    for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
        EXPECT_EQ(std::stod(rows[i][1]), 0.0);
        EXPECT_EQ(std::stod(rows[i][3]), 1.0);
        EXPECT_EQ(std::stod(rows[i][4]), 0.0);
    }
    EXPECT_EQ(rows.back()[0], "# blew_up=false");
}

TEST(Cli, VieBlowUpInsideSandwich) {
    const auto r = run(kParams + " vie --u-re -20 --t-end 0.3 --steps 4096");
    ASSERT_EQ(r.code, 0);
    const auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.back().size(), 2u);
    EXPECT_EQ(rows.back()[0], "# blew_up=true");
    const double T = std::stod(rows.back()[1].substr(std::string("blowup_time=").size()));
    const json b = json::parse(run(kParams + " bounds --u -20").out);
    EXPECT_GT(T, b["lower_bound"].get<double>());
    EXPECT_LT(T, b["upper_bound"].get<double>());
}

TEST(Cli, VieCharacteristicFunction) {
    const auto r = run(kParams + " vie --u-re 0 --u-im 2 --t-end 0.5 --steps 256");
    ASSERT_EQ(r.code, 0);
    const auto rows = parse_csv(r.out);
    for (std::size_t i = 1; i + 1 < rows.size(); ++i)
        EXPECT_LE(std::hypot(std::stod(rows[i][3]), std::stod(rows[i][4])), 1.0);
}

TEST(Cli, VieNumericalFailure) {
    EXPECT_EQ(run(kParams + " vie --u-re 0 --u-im 200 --t-end 10 --steps 16").code, 4);
}

TEST(Cli, Coefficients) {
    const auto r = run(kParams + " coeffs --u -20 --n-max 5");
    ASSERT_EQ(r.code, 0);
    const auto rows = parse_csv(r.out);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"n", "log_abs_a", "sign"}));
    EXPECT_EQ(rows.size(), 6u);
}
