#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code = -1;
    std::string out;
};

// stdout and stderr merged
Outcome run(const std::string &args) {
    std::string cmd = std::string(MCX_CLI_PATH) + " " + args + " 2>&1";
    Outcome r;
    FILE *pipe = popen(cmd.c_str(), "r");
    if (!pipe)
        return r;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0)
        r.out.append(buf.data(), n);
    int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string data(const std::string &name) { return std::string(MCX_EXAMPLES_DIR) + "/" + name; }

class Cli : public ::testing::Test {
  protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("mcx_cli_" + std::to_string(::getpid()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string tmp(const std::string &name) const { return (dir_ / name).string(); }

  private:
    fs::path dir_;
};

} // namespace

TEST_F(Cli, CatalogEmitThenSpectral) {
    std::string file = tmp("engel.json");
    Outcome emit = run("catalog engel --poly-degree 3 --emit " + file);
    ASSERT_EQ(emit.code, 0) << emit.out;
    Outcome spec = run("spectral " + file);
    EXPECT_EQ(spec.code, 0) << spec.out;
    EXPECT_NE(spec.out.find("2 spectral complexes:"), std::string::npos) << spec.out;
}

TEST_F(Cli, ValidateBrokenFileExitsOne) {
    Outcome r = run("validate " + data("broken_d0_squared.json"));
    EXPECT_EQ(r.code, 1) << r.out;
    EXPECT_NE(r.out.find("invalid"), std::string::npos);
    Outcome lie = run("validate " + data("broken_jacobi.json"));
    EXPECT_EQ(lie.code, 1);
    EXPECT_NE(lie.out.find("Jacobi"), std::string::npos) << lie.out;
    EXPECT_EQ(run("validate " + data("two_weight.json")).code, 0);
}

TEST_F(Cli, OracleOnAlgebraFile) {
    Outcome r = run("oracle " + data("heisenberg.json"));
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("all pages match"), std::string::npos) << r.out;
}

TEST_F(Cli, MalformedJson) {
    Outcome r = run("rumin " + data("malformed.json"));
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("parse error at byte"), std::string::npos) << r.out;
}

TEST_F(Cli, UsageErrors) {
    EXPECT_EQ(run("frobnicate").code, 2);
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("report " + data("two_weight.json") + " --format svg").code, 2);
    EXPECT_EQ(run("catalog no-such-algebra").code, 2);
    EXPECT_EQ(run("--help").code, 0);
}

TEST_F(Cli, ReportFormats) {
    Outcome text = run("report " + data("heisenberg.json"));
    EXPECT_EQ(text.code, 0) << text.out;
    EXPECT_NE(text.out.find("1 spectral complex:"), std::string::npos);
    Outcome dot = run("report " + data("heisenberg.json") + " --format dot");
    EXPECT_EQ(dot.code, 0);
    EXPECT_EQ(dot.out.rfind("digraph", 0), 0u);
    Outcome j = run("report " + data("two_weight.json") + " --format json");
    EXPECT_EQ(j.code, 0);
    EXPECT_NE(j.out.find("\"chains\""), std::string::npos);
}

TEST_F(Cli, StarNeedsWedgeStructure) {
    EXPECT_EQ(run("star " + data("two_weight.json")).code, 1);
    std::string file = tmp("engel_sd.json");
    ASSERT_EQ(run("catalog engel --poly-degree 2 --self-dual --emit " + file).code, 0);
    Outcome r = run("star " + file);
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("star duality holds"), std::string::npos);
}

TEST_F(Cli, RuminConsistent) {
    Outcome r = run("rumin " + data("heisenberg.json"));
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("Rumin complex consistent"), std::string::npos);
}
