#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

#ifndef RSKLD_CLI
#error "RSKLD_CLI must point at the rskld executable"
#endif

namespace {

struct Run {
    int code = -1;
    std::string out;
};

// Runs the CLI with stderr discarded (or captured into out when merge is set).
Run run(const std::string& args, bool merge = false) {
    const std::string cmd = std::string(RSKLD_CLI) + " " + args + (merge ? " 2>&1" : " 2>/dev/null");
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    char buf[4096];
    for (std::size_t n; (n = fread(buf, 1, sizeof buf, p)) > 0;) r.out.append(buf, n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    for (std::string l; std::getline(is, l);) out.push_back(l);
    return out;
}

std::vector<std::string> data_rows(const std::string& s) {
    std::vector<std::string> out;
    const auto ls = lines(s);
    for (std::size_t i = 0; i < ls.size(); ++i)
        if (!ls[i].empty() && ls[i][0] != '#') out.push_back(ls[i]);
    if (!out.empty()) out.erase(out.begin());  // header
    return out;
}

std::vector<double> fields(const std::string& row) {
    std::vector<double> v;
    std::istringstream is(row);
    for (std::string f; std::getline(is, f, ',');) v.push_back(std::strtod(f.c_str(), nullptr));
    return v;
}

}  // namespace

TEST(Cli, RateGrid) {
    const auto r = run("rate --fn J --grid -3:2:0.5");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(lines(r.out)[0], "# rskld rate schema v1");
    EXPECT_EQ(lines(r.out)[1], "x,value");
    EXPECT_EQ(data_rows(r.out).size(), 11u);
    for (const auto& row : lines(r.out)) EXPECT_EQ(row.find('\r'), std::string::npos);
}

TEST(Cli, RateCompareReportsMaxDiff) {
    const auto r = run("rate --fn K --compare closed:variational --grid 0.25:1.75:0.25");
    ASSERT_EQ(r.code, 0);
    const auto ls = lines(r.out);
    EXPECT_EQ(data_rows(r.out).size(), 7u);
    const std::string last = ls.back();
    ASSERT_EQ(last.rfind("# max_abs_diff,", 0), 0u) << last;
    EXPECT_LE(std::stod(last.substr(15)), 1e-6);
}

TEST(Cli, RatePointValues) {
    const auto r = run("rate --fn I1 --at 2");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(data_rows(r.out).at(0), "2,0");
    const auto ir = run("rate --fn Ir --point 3,2.5");
    ASSERT_EQ(ir.code, 0);
    EXPECT_EQ(data_rows(ir.out).at(0).substr(0, 6), "3;2.5,");
    const auto k = run("rate --keta --grid 0.5:1.5:0.5 --eta-grid 0:1:0.5");
    ASSERT_EQ(k.code, 0);
    EXPECT_EQ(data_rows(k.out).size(), 9u);
}

TEST(Cli, UsageErrorsExitTwo) {
    EXPECT_EQ(run("rate --fn nope --at 1").code, 2);
    EXPECT_EQ(run("rate --fn J").code, 2);
    EXPECT_EQ(run("rate --fn J --grid 1:0:1").code, 2);
    EXPECT_EQ(run("rate --fn Jp --at 3").code, 2);
    EXPECT_EQ(run("sample words --n 5").code, 2);
    EXPECT_EQ(run("--format xml rate --fn J --at 0").code, 2);
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("verify ldp --preset no_such_preset").code, 2);
}

TEST(Cli, HelpExitsZeroEverywhere) {
    for (const char* sub : {"", "rate", "equilibrium", "sample", "sample words", "sample shape", "sample gue",
                            "sample traceless", "sample blocks", "sample brownian", "verify", "verify ldp",
                            "verify identity", "verify concentration", "verify oracle"})
        EXPECT_EQ(run(std::string(sub) + " --help").code, 0) << sub;
}

TEST(Cli, SampleShapeDeterministic) {
    const auto a = run("--seed 7 sample shape --uniform 5 --n 1000 --reps 3");
    const auto b = run("--seed 7 sample shape --uniform 5 --n 1000 --reps 3 --workers 3");
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(data_rows(a.out).size(), 3u);
    EXPECT_EQ(a.out, b.out);
    for (const auto& row : data_rows(a.out)) {
        const auto f = fields(row);
        EXPECT_EQ(f[3] + f[4] + f[5] + f[6] + f[7], 1000.0);
    }
}

TEST(Cli, SampleTracelessRowsSumToZero) {
    const auto r = run("sample traceless --m 20 --reps 2");
    ASSERT_EQ(r.code, 0);
    const auto rows = data_rows(r.out);
    ASSERT_EQ(rows.size(), 2u);
    for (const auto& row : rows) {
        const auto f = fields(row);
        ASSERT_EQ(f.size(), 23u);
        double s = 0.0;
        for (std::size_t i = 3; i < f.size(); ++i) s += f[i];
        EXPECT_LE(std::abs(s), 1e-9 * 20);
    }
}

TEST(Cli, SampleBlocksAndBrownianSchemas) {
    const auto b = run("sample blocks --probs 0.2,0.1 --mults 3,4 --reps 2 --full");
    ASSERT_EQ(b.code, 0);
    EXPECT_EQ(lines(b.out)[1], "rep,seed,lambda_tilde_1_0,block_spectra");
    const auto w = run("sample brownian --k 3 --steps 64 --reps 4");
    ASSERT_EQ(w.code, 0);
    EXPECT_EQ(data_rows(w.out).size(), 4u);
    const auto g = run("sample gue --m 6 --rows 2 --reps 1");
    EXPECT_EQ(lines(g.out)[1], "rep,seed,m,lambda1,lambda2");
    const auto words = run("sample words --probs 0.5,0.5 --n 8 --reps 1");
    EXPECT_EQ(fields(data_rows(words.out).at(0))[2], 8.0);
}

TEST(Cli, JsonFormatAndOutFile) {
    const auto r = run("--format json sample shape --uniform 3 --n 50 --reps 2 --seed 3");
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["schema"], "sample_shape");
    EXPECT_EQ(j["version"], 1);
    EXPECT_EQ(j["rows"].size(), 2u);
    EXPECT_EQ(j["rows"][0]["n"], 50);

    const std::string path = ::testing::TempDir() + "rskld_cli_out.csv";
    ASSERT_EQ(run("--out " + path + " rate --fn J --at 0").code, 0);
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(ss.str(), run("rate --fn J --at 0").out);
}

TEST(Cli, ConfigIsLoggedUnlessQuiet) {
    EXPECT_NE(run("rate --fn J --at 0", true).out.find("rskld: config {"), std::string::npos);
    EXPECT_EQ(run("--quiet rate --fn J --at 0", true).out.find("rskld: config"), std::string::npos);
}

TEST(Cli, Equilibrium) {
    const auto r = run("equilibrium --x 1.5");
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j["mass"].get<double>(), 1.0, 1e-8);
    EXPECT_NEAR(j["mean_plus_x"].get<double>(), 0.0, 1e-8);
    EXPECT_LE(j["diff"].get<double>(), 1e-6);
    EXPECT_EQ(run("equilibrium --x 2.5").code, 2);
}

TEST(Cli, VerifyOracleSmall) {
    const auto r = run("verify oracle --max-length 5 --max-alphabet 3", true);
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("\"passed\":true"), std::string::npos);
}

TEST(Cli, VerifyIdentityPassAndFail) {
    EXPECT_EQ(run("verify identity --which self --k 3 --reps 2000").code, 0);
    EXPECT_EQ(run("verify identity --which distinct --k 3 --reps 2000").code, 0);
    // A fixed zero threshold cannot pass: the failure list goes to stderr with exit 1.
    const auto r = run("verify identity --which self --k 3 --reps 500 --threshold 1e-9", true);
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("\"failures\":[{"), std::string::npos);
    EXPECT_EQ(run("verify identity --which self --reps 50").code, 2);
}

TEST(Cli, VerifyLdpQuickIsByteStable) {
    const auto a = run("verify ldp --preset quick --seed 42 --workers 1");
    const auto b = run("verify ldp --preset quick --seed 42 --workers 4");
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(lines(a.out)[0], "# rskld ldp_slope schema v1");
    EXPECT_NE(a.out, run("verify ldp --preset quick --seed 43").out);
}

TEST(Cli, VerifyConcentrationQuick) {
    const auto r = run("verify concentration --preset quick --workers 2");
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("# fit,upper,c_hat="), std::string::npos);
}
