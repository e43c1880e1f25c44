#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <sys/wait.h>
#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

std::string g_binary;

struct CommandResult {
    int exit_code;
    std::string output;  // combined stdout+stderr
};

CommandResult run(const std::string& args) {
    const std::string out_file = "cli_cmd_output.txt";
    const std::string cmd = g_binary + " " + args + " > " + out_file + " 2>&1";
    const int status = std::system(cmd.c_str());
    std::ifstream in(out_file);
    std::string output((std::istreambuf_iterator<char>(in)), {});
    std::remove(out_file.c_str());
    const int code = status == -1 ? -1 : WEXITSTATUS(status);
    return {code, output};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), {});
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::path("cli_tmp") / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& child) const { return (path / child).string(); }
};

}  // namespace

TEST_CASE("generate writes dataset and manifest, identically across reruns") {
    TempDir dir("gen");
    const std::string out = dir / "d.tsv";
    const std::string cmd = "generate --model xor2 --maf 0.5,0.5 --h2 0.4 --cases 40 "
                            "--controls 40 --features 20 --seed 7 -o " + out;
    auto r = run(cmd);
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(out));
    CHECK(fs::exists(dir / "d.manifest.json"));
    const std::string first = slurp(out);

    fs::remove(out);
    r = run(cmd);
    CHECK(r.exit_code == 0);
    CHECK(slurp(out) == first);
}

TEST_CASE("generate validates flags by name with exit code 2") {
    auto r = run("generate --h2 1.5 -o cli_tmp_bad.tsv");
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("h2") != std::string::npos);
    CHECK(!fs::exists("cli_tmp_bad.tsv"));
}

TEST_CASE("depth produces curve, report, plot and an executable manifest") {
    TempDir dir("depth");
    const std::string data = dir / "d.tsv";
    REQUIRE(run("generate --model xor2 --maf 0.5,0.5 --h2 0.4 --cases 60 --controls 60 "
                "--features 8 --seed 3 -o " + data).exit_code == 0);

    const std::string out1 = dir / "out1";
    auto r = run("depth " + data + " --sizes 1..2 --replicates 2 --fitness nonlinear "
                 "--pop 20 --gens 4 --seed 5 --workers 2 --plot --out-dir " + out1);
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(fs::path(out1) / "depth_curve.csv"));
    CHECK(fs::exists(fs::path(out1) / "depth_report.json"));
    CHECK(fs::exists(fs::path(out1) / "depth_plot.svg"));
    CHECK(fs::exists(fs::path(out1) / "manifest.json"));

    const auto report = nlohmann::json::parse(slurp(fs::path(out1) / "depth_report.json"));
    CHECK(report.contains("train"));
    CHECK(report.contains("validation"));
    CHECK(report["train"].contains("depth_at"));

    // rerun purely from the manifest: outputs must be bit-identical
    const std::string out2 = dir / "out2";
    auto manifest = nlohmann::json::parse(slurp(fs::path(out1) / "manifest.json"));
    manifest["config"]["out-dir"] = out2;
    {
        std::ofstream m(dir / "rerun.json");
        m << manifest.dump(2);
    }
    r = run("depth --config " + (dir / "rerun.json"));
    CHECK(r.exit_code == 0);
    CHECK(slurp(fs::path(out1) / "depth_curve.csv") == slurp(fs::path(out2) / "depth_curve.csv"));
    CHECK(slurp(fs::path(out1) / "depth_report.json") ==
          slurp(fs::path(out2) / "depth_report.json"));
}

TEST_CASE("depth size grids support ranges and strides") {
    TempDir dir("sizes");
    const std::string data = dir / "d.tsv";
    REQUIRE(run("generate --model xor2 --maf 0.5,0.5 --h2 0.4 --cases 50 --controls 50 "
                "--features 6 --seed 2 -o " + data).exit_code == 0);

    const std::string out = dir / "out";
    auto r = run("depth " + data + " --sizes 1..5:2 --replicates 1 --pop 10 --gens 2 "
                 "--seed 1 --out-dir " + out);
    CHECK(r.exit_code == 0);
    const std::string csv = slurp(fs::path(out) / "depth_curve.csv");
    CHECK(csv.find("\n1,0,") != std::string::npos);
    CHECK(csv.find("\n3,0,") != std::string::npos);
    CHECK(csv.find("\n5,0,") != std::string::npos);
    CHECK(csv.find("\n2,0,") == std::string::npos);

    CHECK(run("depth " + data + " --sizes 5..1 --out-dir " + out).exit_code == 2);
}

TEST_CASE("classical emits the 23-column CSV and balanced imbalance values") {
    TempDir dir("classical");
    const std::string data = dir / "d.tsv";
    REQUIRE(run("generate --model xor2 --maf 0.5,0.5 --h2 0.4 --cases 50 --controls 50 "
                "--features 6 --seed 9 -o " + data).exit_code == 0);

    const std::string out = dir / "out";
    auto r = run("classical " + data + " --seed 4 --out-dir " + out);
    CHECK(r.exit_code == 0);

    const std::string csv = slurp(fs::path(out) / "classical_report.csv");
    const std::string header = csv.substr(0, csv.find('\n'));
    CHECK(std::count(header.begin(), header.end(), ',') == 22);

    const auto j = nlohmann::json::parse(slurp(fs::path(out) / "classical_report.json"));
    CHECK(j["values"]["c1"].get<double>() == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(j["values"]["c2"].get<double>() == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(j.contains("score"));
}

TEST_CASE("report recomputes the depth report from a stored curve") {
    TempDir dir("report");
    const std::string data = dir / "d.tsv";
    REQUIRE(run("generate --model xor2 --maf 0.5,0.5 --h2 0.4 --cases 50 --controls 50 "
                "--features 6 --seed 8 -o " + data).exit_code == 0);
    const std::string out = dir / "out";
    REQUIRE(run("depth " + data + " --sizes 1..3 --replicates 2 --pop 15 --gens 3 --seed 2 "
                "--out-dir " + out).exit_code == 0);

    const std::string rep_out = dir / "rep";
    auto r = run("report " + (fs::path(out) / "depth_curve.csv").string() + " --out-dir " +
                 rep_out);
    CHECK(r.exit_code == 0);
    CHECK(slurp(fs::path(rep_out) / "depth_report.json") ==
          slurp(fs::path(out) / "depth_report.json"));
    CHECK(fs::exists(fs::path(rep_out) / "depth_plot.svg"));
}

TEST_CASE("missing input fails with a validation error") {
    CHECK(run("depth no_such_file.tsv --out-dir cli_tmp_x").exit_code == 2);
    CHECK(run("classical no_such_file.tsv --out-dir cli_tmp_x").exit_code == 2);
    CHECK(run("report no_such_file.csv --out-dir cli_tmp_x").exit_code == 2);
}

int main(int argc, char** argv) {
    if (argc > 1 && argv[argc - 1][0] != '-') {
        g_binary = argv[argc - 1];
        --argc;
    }
    if (g_binary.empty()) {
        std::fprintf(stderr, "usage: test_cli [doctest args] <path-to-gadepth-binary>\n");
        return 1;
    }
    doctest::Context ctx(argc, argv);
    return ctx.run();
}
