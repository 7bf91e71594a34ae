#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

namespace {

struct Run {
    int status;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(GEVLAB_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {-1, ""};
    std::string out;
    std::array<char, 4096> buf;
    while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
    const int raw = pclose(pipe);
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> row;
        std::istringstream ls(line);
        std::string f;
        while (std::getline(ls, f, ',')) row.push_back(f);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

TEST(Cli, EmptyCommandIsUsageError) { EXPECT_EQ(run("").status, 64); }

TEST(Cli, UnknownFlagIsUsageError) { EXPECT_EQ(run("eigen --bogus 3").status, 64); }

TEST(Cli, QBelowPIsUsageError) { EXPECT_EQ(run("eigen --p 3 --q 2").status, 64); }

TEST(Cli, ClassifyGeneratedBump) {
    const auto r = run("classify --order 2");
    ASSERT_EQ(r.status, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j["s"].get<double>(), 2.0, 0.2);
    EXPECT_NEAR(j["gamma"].get<double>(), 0.5, 0.0);
    for (const char* key : {"C", "delta", "r", "residual_rms", "n_points"}) EXPECT_TRUE(j["fit"].contains(key)) << key;
}

TEST(Cli, DemoTableCoversThreshold) {
    const auto r = run("demo --pairs 1,2 2,3 3,4");
    ASSERT_EQ(r.status, 0);
    const auto rows = csv_rows(r.out);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"p", "q", "q_over_p", "s0_estimate", "abs_error"}));
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double p = std::stod(rows[i][0]), q = std::stod(rows[i][1]);
        EXPECT_DOUBLE_EQ(std::stod(rows[i][2]), q / p);
        EXPECT_NEAR(std::stod(rows[i][3]), q / p, std::max(0.02, 0.01 * q / p));
        EXPECT_LE(std::stod(rows[i][4]), std::max(0.02, 0.01 * q / p));
    }
}

TEST(Cli, DemoRejectsMalformedPair) { EXPECT_EQ(run("demo --pairs 1-2").status, 64); }

TEST(Cli, ByteIdenticalReruns) {
    for (const char* args : {"demo --pairs 2,3", "classify --order 1.5", "inequalities --p 1 --q 2 --tau-ladder 1,10",
                             "transform --order 2 --freq-ladder 1,10,100"}) {
        const auto a = run(args), b = run(args);
        EXPECT_EQ(a.status, 0) << args;
        EXPECT_FALSE(a.out.empty()) << args;
        EXPECT_EQ(a.out, b.out) << args;
    }
}

TEST(Cli, CounterexampleWritesGrowthTable) {
    const std::string path = ::testing::TempDir() + "gevlab_growth.csv";
    const auto r = run("counterexample --p 1 --q 2 --n-ladder 100,1000,10000 --out " + path);
    ASSERT_EQ(r.status, 0);
    EXPECT_NE(r.out.find("s0 = "), std::string::npos);
    std::ifstream in(path);
    std::stringstream text;
    text << in.rdbuf();
    const auto rows = csv_rows(text.str());
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"N", "lambda", "log_lhs", "log_sup", "s_star"}));
    std::remove(path.c_str());
}

TEST(Cli, UnwritableOutputIsError) {
    EXPECT_EQ(run("demo --pairs 1,2 --out /nonexistent-dir/x.csv").status, 1);
}

TEST(Cli, TransformRoundTripsInputCsv) {
    const std::string path = ::testing::TempDir() + "gevlab_eigen.csv";
    ASSERT_EQ(run("eigen --p 1 --q 2 --out " + path).status, 0);
    const auto r = run("transform --input " + path + " --gamma 0 --freq-ladder 1,2");
    EXPECT_EQ(r.status, 0);
    const auto rows = csv_rows(r.out);
    ASSERT_EQ(rows.size(), 3u);
    // F_0 of pi^{-1/4} e^{-x^2/2} at the origin: pi^{-1/4} sqrt(2 pi / 3) e^{-xi^2/6}
    const double pi = std::acos(-1.0);
    for (std::size_t i = 1; i < 3; ++i) {
        const double xi = double(i);
        EXPECT_NEAR(std::stod(rows[i].back()), std::pow(pi, -0.25) * std::sqrt(2 * pi / 3) * std::exp(-xi * xi / 6), 1e-6);
    }
    std::remove(path.c_str());
}

TEST(Cli, ConfigFileSection) {
    const std::string path = ::testing::TempDir() + "gevlab_config.ini";
    {
        std::ofstream cfg(path);
        cfg << "[eigen]\np=2\nq=3\n";
    }
    const auto r = run("--config " + path + " eigen");
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(r.out.rfind("z[0] = 2.2195970860", 0), 0u) << r.out;
    std::remove(path.c_str());
}
