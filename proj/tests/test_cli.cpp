#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("rp_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    Outcome run(const std::string& args, const std::string& env = "") const {
        const fs::path out = dir_ / "stdout", err = dir_ / "stderr";
        const std::string cmd = env + " '" + std::string(RP_CLI_PATH) + "' " + args + " > '" +
                                out.string() + "' 2> '" + err.string() + "'";
        const int status = std::system(cmd.c_str());
        Outcome r;
        r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        r.out = slurp(out);
        r.err = slurp(err);
        return r;
    }

    fs::path path(const std::string& name) const { return dir_ / name; }

    void write(const std::string& name, const std::string& text) const {
        std::ofstream(dir_ / name, std::ios::binary) << text;
    }

    fs::path dir_;
};

} // namespace

TEST_F(Cli, VersionAndHelp) {
    const auto v = run("--version");
    EXPECT_EQ(v.code, 0);
    EXPECT_NE(v.out.find("1.0.0"), std::string::npos);
    EXPECT_EQ(run("--help").code, 0);
}

TEST_F(Cli, ModesMassive) {
    const auto r = run("modes --mass 1 --accel 1 --k-max 5");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.rfind("# rindler-purcell v1.0.0\n# length = 1; mass = 1;", 0), 0u);
    std::istringstream lines(r.out);
    std::string line;
    int rows = 0;
    double last = 0.0;
    while (std::getline(lines, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 'k')
            continue;
        ++rows;
        std::istringstream cells(line);
        std::string k, w, omega;
        std::getline(cells, k, ',');
        std::getline(cells, w, ',');
        std::getline(cells, omega, ',');
        EXPECT_GT(std::stod(omega), last);
        last = std::stod(omega);
        EXPECT_NE(line.find(",root-solve"), std::string::npos);
    }
    EXPECT_EQ(rows, 5);
}

TEST_F(Cli, ModesMasslessUsesClosedForm) {
    const auto r = run("modes --mass 0 --accel 1 --k-max 3");
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("\n1,3.14159265359,2.85960086738,"), std::string::npos);
    EXPECT_NE(r.out.find(",closed-form\n"), std::string::npos);
}

TEST_F(Cli, ModesInertialLimitShiftVanishes) {
    const auto r = run("modes --mass 1 --accel 1e-6 --k-max 5");
    ASSERT_EQ(r.code, 0);
    std::istringstream lines(r.out);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 'k')
            continue;
        const auto cells = line.substr(0, line.rfind(','));
        EXPECT_LT(std::abs(std::stod(cells.substr(cells.rfind(',') + 1))), 1e-9) << line;
    }
}

TEST_F(Cli, PointZeroTauAndVerbose) {
    const auto zero = run("point --tau 0 --accel 0.5");
    ASSERT_EQ(zero.code, 0);
    EXPECT_EQ(zero.out, "0\n");

    const auto v = run("point --figure 2 --accel 0.1 --verbose");
    ASSERT_EQ(v.code, 0) << v.err;
    EXPECT_EQ(v.out.rfind("node1,", 0), 0u);
    EXPECT_NE(v.out.find("\nnode2,"), std::string::npos);
    EXPECT_NE(v.err.find("k,Omega,term"), std::string::npos);
}

TEST_F(Cli, ExitCodeContract) {
    EXPECT_EQ(run("point").code, 0);
    // configuration
    EXPECT_EQ(run("point --accel 2").code, 1);
    EXPECT_NE(run("point --accel 2").err.find("error:"), std::string::npos);
    EXPECT_EQ(run("point --bogus 3").code, 1);
    EXPECT_EQ(run("explode").code, 1);
    EXPECT_EQ(run("").code, 1);
    EXPECT_EQ(run("point --figure 6").code, 1);
    EXPECT_EQ(run("point --mass -1").code, 1);
    EXPECT_EQ(run("point --accel 0.5 --accel-max 0.6").code, 1);
    write("typo.cfg", "mas = 3\n");
    EXPECT_EQ(run("point --config '" + path("typo.cfg").string() + "'").code, 1);
    // numerical
    EXPECT_EQ(run("point --mass 0 --tau 1e200").code, 2);
    EXPECT_EQ(run("sweep --mass 0 --accel-max 0.2 --accel-steps 3 --tau 1e200").code, 2);
    // I/O
    EXPECT_EQ(run("point --config '" + path("missing.cfg").string() + "'").code, 3);
    EXPECT_EQ(run("sweep --figure 5 --accel-steps 2 --output '" + path("no/such/dir.csv").string() + "'").code, 3);
}

TEST_F(Cli, SweepReRunIsByteIdentical) {
    const auto first = path("first.csv"), second = path("second.csv");
    ASSERT_EQ(run("sweep --mass 2 --accel-max 1.5 --accel-steps 12 --mode-n 3 --placement nodes --tau 20 "
                  "--output '" + first.string() + "'")
                  .code,
              0);
    ASSERT_EQ(run("sweep --config '" + first.string() + "' --output '" + second.string() + "'").code, 0);
    const auto a = slurp(first), b = slurp(second);
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, b);
    EXPECT_NE(a.find("\na,P_node1,P_node2\n"), std::string::npos);
}

TEST_F(Cli, FlagsOverrideConfigFile) {
    write("base.cfg", "mass = 0\naccel_max = 0.2\naccel_steps = 2\ntau = 10\n");
    const auto r = run("sweep --config '" + path("base.cfg").string() + "' --tau 5");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("mass = 0;"), std::string::npos);
    EXPECT_NE(r.out.find("tau = 5;"), std::string::npos);

    const auto fig = run("sweep --figure 5 --config '" + path("base.cfg").string() + "'");
    ASSERT_EQ(fig.code, 0);
    EXPECT_NE(fig.out.find("accel_max = 0.2;"), std::string::npos);
}

TEST_F(Cli, OutputIndependentOfThreadCount) {
    const std::string args = "sweep --mass 1 --accel-max 1.8 --accel-steps 16";
    const auto one = run(args, "RP_THREADS=1");
    const auto four = run(args, "RP_THREADS=4");
    ASSERT_EQ(one.code, 0);
    EXPECT_EQ(one.out, four.out);
}
