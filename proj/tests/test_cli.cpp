// Drives the built `pqrm` binary and checks exit codes and outputs.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path& workdir() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / "pqrm_cli_test";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

int run(const std::string& args, std::string* out = nullptr) {
    const auto log = workdir() / "stdout.txt";
    const std::string cmd = std::string(PQRM_CLI) + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    if (out) {
        std::ifstream in(log);
        std::stringstream ss;
        ss << in.rdbuf();
        *out = ss.str();
    }
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path write_file(const std::string& name, const std::string& text) {
    const auto p = workdir() / name;
    std::ofstream(p) << text;
    return p;
}

const std::string kSmall =
    "[system]\ntrap_freq_hz = 346\n"
    "[scenario]\nid = excitation_number\nmodels = pqrm, qrm\nqubit_split_hz_list = 0, 800\n"
    "t_end_periods = 0.3\nn_samples = 5\n"
    "[qrm]\nn_max = 300\n";

std::string config_dir() { return PQRM_CONFIG_DIR; }

}  // namespace

TEST(Cli, ParamsPrintsCouplingRatio) {
    std::string out;
    ASSERT_EQ(run("params --config " + config_dir() + "/fig2a_excitation.cfg", &out), 0) << out;
    EXPECT_NE(out.find("g/omega"), std::string::npos) << out;
    EXPECT_NE(out.find("6.57"), std::string::npos) << out;
}

TEST(Cli, ConfigErrorsExitTwo) {
    std::string out;
    const auto bad = write_file("bad.cfg", "[system]\ntrap_freq_hz = 346\nwhat = 1\n");
    EXPECT_EQ(run("params --config " + bad.string(), &out), 2);
    EXPECT_NE(out.find("system.what"), std::string::npos) << out;
    const auto ok = write_file("ok.cfg", kSmall);
    EXPECT_EQ(run("params --config " + ok.string() + " --override system.trap_freq_hz=0", &out), 2) << out;
    EXPECT_EQ(run("params --config " + (workdir() / "missing.cfg").string()), 2);
    EXPECT_EQ(run("run --config " + ok.string()), 2);  // no output path
    EXPECT_EQ(run("nosuchcommand"), 2);
    EXPECT_EQ(run("fluxonium --config " + ok.string()), 2);  // no [fluxonium] section
}

TEST(Cli, NumericalFailureExitsThree) {
    const auto cfg = write_file("small_box.cfg", kSmall);
    std::string out;
    EXPECT_EQ(run("run --config " + cfg.string() + " --out " + (workdir() / "box.csv").string() +
                      " --override scenario.models=grid --override grid.length_um=1 --override grid.n_points=256",
                  &out),
              3)
        << out;
    EXPECT_NE(out.find("model=grid"), std::string::npos) << out;
}

TEST(Cli, RunIsByteIdenticalAcrossRunsAndThreads) {
    const auto cfg = write_file("small.cfg", kSmall);
    const auto a = workdir() / "a.csv", b = workdir() / "b.csv", c = workdir() / "c.csv";
    ASSERT_EQ(run("run --config " + cfg.string() + " --out " + a.string()), 0);
    ASSERT_EQ(run("run --config " + cfg.string() + " --out " + b.string()), 0);
    ASSERT_EQ(run("run --config " + cfg.string() + " --out " + c.string() + " --threads 3"), 0);
    const auto text = slurp(a);
    EXPECT_EQ(text, slurp(b));
    EXPECT_EQ(text, slurp(c));
    EXPECT_EQ(text.rfind("model,time_s,ex_number", 0), 0u);
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1 + 2 * 2 * 5);
    EXPECT_TRUE(fs::exists(a.string() + ".provenance.json"));
    EXPECT_NE(slurp(a.string() + ".provenance.json").find("config_hash"), std::string::npos);
}

TEST(Cli, SweepAndPlot) {
    const auto cfg = write_file("sweep.cfg",
                                "[scenario]\nid = excitation_difference\nqubit_split_hz_list = 0, 700\n"
                                "t_end_periods = 0.2\nn_samples = 3\n");
    const auto csv = workdir() / "sweep.csv", svg = workdir() / "sweep.svg";
    fs::remove(svg);
    ASSERT_EQ(run("sweep --config " + cfg.string() + " --out " + csv.string()), 0);
    std::string out;
    ASSERT_EQ(run("plot " + csv.string() + " --out " + svg.string() + " --config " + cfg.string() +
                      " --style colormap",
                  &out),
              0)
        << out;
    EXPECT_NE(slurp(svg).find("<svg"), std::string::npos);
}

TEST(Cli, PlotOfEmptyCsvFailsWithoutOutput) {
    const auto csv = write_file("empty.csv", "");
    const auto svg = workdir() / "empty.svg";
    fs::remove(svg);
    EXPECT_NE(run("plot " + csv.string() + " --out " + svg.string()), 0);
    EXPECT_FALSE(fs::exists(svg));
}

TEST(Cli, FluxoniumMapping) {
    const auto cfg = write_file("flux.cfg", "[fluxonium]\ne_c_hz = 8e8\ne_j_hz = 4e9\ne_l_hz = 1e8\n");
    std::string out;
    ASSERT_EQ(run("fluxonium --config " + cfg.string(), &out), 0) << out;
    // (E_C / 8 E_L)^(1/4) = 1
    EXPECT_NE(out.find("g/omega              1"), std::string::npos) << out;
}
