#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(LGI_CLI_PATH) + " " + args + " 2>&1";
    Run r{0, {}};
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return {-1, {}};
    char buf[4096];
    while (fgets(buf, sizeof buf, p)) r.out += buf;
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// sha256sum is a separate implementation from the one the tool uses.
std::string shell_sha256(const fs::path& p) {
    FILE* f = popen(("sha256sum '" + p.string() + "'").c_str(), "r");
    char buf[128] = {};
    if (!f || !fgets(buf, sizeof buf, f)) return {};
    pclose(f);
    return std::string(buf).substr(0, 64);
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / (std::string("lgi_cli_") + info->name() + "_" + std::to_string(::getpid()));
        fs::remove_all(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path sub(const std::string& name) const { return dir_ / name; }

    fs::path dir_;
};

void expect_manifest_consistent(const fs::path& dir, const std::string& command) {
    const auto m = json::parse(slurp(dir / "manifest.json"));
    EXPECT_EQ(m["command"], command);
    EXPECT_FALSE(m["code_version"].get<std::string>().empty());
    EXPECT_FALSE(m["started_at"].get<std::string>().empty());
    EXPECT_FALSE(m["finished_at"].get<std::string>().empty());
    EXPECT_TRUE(m["argv"].is_array());
    ASSERT_FALSE(m["outputs"].empty());
    for (const auto& o : m["outputs"]) {
        const fs::path p = dir / o["file"].get<std::string>();
        ASSERT_TRUE(fs::exists(p)) << p;
        EXPECT_EQ(o["bytes"].get<std::size_t>(), fs::file_size(p));
        EXPECT_EQ(o["sha256"].get<std::string>(), shell_sha256(p));
    }
}

TEST_F(Cli, OscScanWritesConsistentOutputs) {
    const auto r = run("osc-scan --nu 0.5 --beta-range 0:3:40 --theta-range 0:6.283185307179586:50 --out " +
                       sub("a").string());
    ASSERT_EQ(r.code, 0) << r.out;
    expect_manifest_consistent(sub("a"), "osc-scan");
    const auto grid = slurp(sub("a") / "grid.csv");
    EXPECT_EQ(grid.substr(0, grid.find('\n')), "theta,beta,q_pp,q_pm,q_mp,q_mm");
    EXPECT_EQ(std::count(grid.begin(), grid.end(), '\n'), 1 + 40 * 50);
    const auto contours = slurp(sub("a") / "contours.csv");
    EXPECT_EQ(contours.substr(0, contours.find('\n')), "outcome,region_id,polyline_id,closed,vertex_index,x,y");
    EXPECT_NE(contours.find("\nmm,0,0,1,0,"), std::string::npos);
    const auto m = json::parse(slurp(sub("a") / "manifest.json"));
    EXPECT_LT(m["parameters"]["summary"]["minimum"]["q_mm"]["value"].get<double>(), -0.08);
}

TEST_F(Cli, RerunIsByteIdentical) {
    const std::string args = "osc-scan --alpha 0.2,-0.1 --nu 0.6 --r 0.3 --beta-range 0:2:25 --theta-range 0:6:30";
    ASSERT_EQ(run(args + " --out " + sub("a").string()).code, 0);
    ASSERT_EQ(run(args + " --out " + sub("b").string()).code, 0);
    for (const char* f : {"grid.csv", "contours.csv"}) EXPECT_EQ(slurp(sub("a") / f), slurp(sub("b") / f)) << f;
}

TEST_F(Cli, ThreadCountDoesNotChangeOutput) {
    const std::string args = " field-scan --omega-ell 2 --beta-range 0:3:20 --tau-range 0:8:30";
    ASSERT_EQ(std::system(("LGI_THREADS=1 " + std::string(LGI_CLI_PATH) + args + " --out " + sub("a").string() +
                           " > /dev/null")
                              .c_str()),
              0);
    ASSERT_EQ(std::system(("LGI_THREADS=6 " + std::string(LGI_CLI_PATH) + args + " --out " + sub("b").string() +
                           " > /dev/null")
                              .c_str()),
              0);
    EXPECT_EQ(slurp(sub("a") / "grid.csv"), slurp(sub("b") / "grid.csv"));
    EXPECT_EQ(slurp(sub("a") / "contours.csv"), slurp(sub("b") / "contours.csv"));
}

TEST_F(Cli, FieldScanHeaderAndManifest) {
    const auto r = run("field-scan --omega-ell 1 --beta-range 0:2:10 --tau-range 0:8:12 --out " + sub("f").string());
    ASSERT_EQ(r.code, 0) << r.out;
    expect_manifest_consistent(sub("f"), "field-scan");
    const auto grid = slurp(sub("f") / "grid.csv");
    EXPECT_EQ(grid.substr(0, grid.find('\n')), "tau,beta,q_pp,q_pm,q_mp,q_mm");
}

TEST_F(Cli, WarmStateHasNoNegativeRegion) {
    // nu = 0.75 at beta = 0.5: q_-- stays positive over the whole theta sweep.
    const auto r = run("osc-scan --nu 0.75 --beta 0.5 --theta-range 0:6.283185307179586:400 --outcomes -- --out " +
                       sub("w").string());
    ASSERT_EQ(r.code, 0) << r.out;
    const auto m = json::parse(slurp(sub("w") / "manifest.json"));
    EXPECT_GT(m["parameters"]["summary"]["minimum"]["q_mm"]["value"].get<double>(), 0.0);
}

TEST_F(Cli, OptimizeFindsNearLudersValue) {
    const auto r = run("optimize --system osc --outcome -- --seed 3 --out " + sub("o").string());
    ASSERT_EQ(r.code, 0) << r.out;
    expect_manifest_consistent(sub("o"), "optimize");
    const auto o = json::parse(slurp(sub("o") / "optimum.json"));
    const double q = o["q"].get<double>();
    EXPECT_GE(q, -0.1250);
    EXPECT_LE(q, -0.1225);
}

TEST_F(Cli, OracleCheckPassesAndDetectsPerturbation) {
    const auto ok = run("oracle-check --samples 8 --seed 2 --out " + sub("ok").string());
    ASSERT_EQ(ok.code, 0) << ok.out;
    expect_manifest_consistent(sub("ok"), "oracle-check");
    const auto bad = run("oracle-check --samples 8 --seed 2 --perturb-closed-form 1e-3 --out " + sub("bad").string());
    EXPECT_EQ(bad.code, 4) << bad.out;
    EXPECT_TRUE(fs::exists(sub("bad") / "oracle_report.json"));
}

TEST_F(Cli, UsageErrorsExitTwo) {
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("osc-scan --out " + sub("u").string()).code, 2);               // missing --nu
    EXPECT_EQ(run("osc-scan --nu 0.4 --out " + sub("u").string()).code, 2);      // unphysical state
    EXPECT_EQ(run("osc-scan --nu 0.5 --beta-range 0:1:1 --out " + sub("u").string()).code, 2);
    EXPECT_EQ(run("field-scan --omega-ell -1 --out " + sub("u").string()).code, 2);
    EXPECT_EQ(run("optimize --outcome +x --out " + sub("u").string()).code, 2);
    EXPECT_EQ(run("optimize --bounds 0:1,0:2 --out " + sub("u").string()).code, 2);
    EXPECT_EQ(run("no-such-command").code, 2);
}

TEST_F(Cli, NumericFailureExitsThree) {
    // A finite but huge squeezing overflows the hyperbolic functions.
    const auto r = run("osc-scan --nu 0.5 --r 800 --beta-range 0:1:3 --theta-range 0:1:3 --out " + sub("n").string());
    EXPECT_EQ(r.code, 3) << r.out;
}

TEST_F(Cli, HelpExitsZero) {
    const auto r = run("--help");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("osc-scan"), std::string::npos);
}

}  // namespace
