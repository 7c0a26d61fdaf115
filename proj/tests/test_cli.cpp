#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "dynerg/config_io.hpp"

using namespace dynerg;
namespace fs = std::filesystem;

namespace {

const std::string kCli = DYNERG_CLI_PATH;

fs::path fresh_dir(const std::string& tag) {
    static int counter = 0;
    const fs::path dir = fs::temp_directory_path() /
                         ("dynerg_cli_" + tag + "_" + std::to_string(::getpid()) + "_" +
                          std::to_string(counter++));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run(const std::string& args, const fs::path& stdout_file) {
    const std::string cmd =
        "\"" + kCli + "\" " + args + " > \"" + stdout_file.string() + "\" 2>&1";
    const int rc = std::system(cmd.c_str());
    if (rc == -1) return -1;
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -2;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path write_config(const fs::path& dir, const Json& doc) {
    const fs::path path = dir / "config.json";
    std::ofstream out(path, std::ios::binary);
    out << doc.dump(2) << "\n";
    return path;
}

Json small_config() {
    return Json{{"n_vertices", 10},
                {"motifs", Json::array({"edge"})},
                {"alpha", "1/2"},
                {"lambda_on", 1.0},
                {"lambda_off", 1.0},
                {"horizon", 1.0},
                {"grid", Json::array({0.0, 1.0})},
                {"replications", 2},
                {"seed", 3}};
}

}  // namespace

TEST_CASE("analyze writes a schema-valid report") {
    const fs::path dir = fresh_dir("analyze");
    Json doc = small_config();
    doc["motifs"] = Json::array({"edge", "triangle"});
    const fs::path cfg = write_config(dir, doc);
    const int code = run("analyze --config \"" + cfg.string() + "\" --out \"" +
                             (dir / "out").string() + "\"",
                         dir / "stdout.txt");
    CHECK(code == 0);
    const Json report = Json::parse(slurp(dir / "out" / "report.json"));
    validate_schema(report, report_schema());
    CHECK(report["motifs"].size() == 2);
    CHECK(slurp(dir / "stdout.txt").find("wrote") != std::string::npos);
}

TEST_CASE("simulate is deterministic and seed-sensitive") {
    const fs::path dir = fresh_dir("simulate");
    const fs::path cfg = write_config(dir, small_config());
    auto simulate = [&](const std::string& extra, const std::string& sub) {
        const int code = run("simulate --config \"" + cfg.string() + "\" --out \"" +
                                 (dir / sub).string() + "\" " + extra,
                             dir / (sub + ".log"));
        CHECK(code == 0);
    };
    simulate("", "a");
    simulate("", "b");
    simulate("--seed 99", "c");
    const std::string counts_a = slurp(dir / "a" / "counts.csv");
    CHECK(counts_a == slurp(dir / "b" / "counts.csv"));
    CHECK(counts_a != slurp(dir / "c" / "counts.csv"));
    CHECK(counts_a.rfind("replication,motif,time,raw,expected,normalized\r\n", 0) == 0);
    const Json summary = Json::parse(slurp(dir / "a" / "summary.json"));
    validate_schema(summary, summary_schema());
    CHECK(summary["seed"] == 3);
    CHECK(Json::parse(slurp(dir / "c" / "summary.json"))["seed"] == 99);
    CHECK(fs::exists(dir / "a" / "plotdata.csv"));
}

TEST_CASE("nested output directories are created") {
    const fs::path dir = fresh_dir("nested");
    const fs::path cfg = write_config(dir, small_config());
    const fs::path deep = dir / "x" / "y" / "z";
    const int code = run("simulate --config \"" + cfg.string() + "\" --out \"" +
                             deep.string() + "\"",
                         dir / "stdout.txt");
    CHECK(code == 0);
    CHECK(fs::exists(deep / "summary.json"));
}

TEST_CASE("incompatible regime exits with code 2") {
    const fs::path dir = fresh_dir("regime");
    Json doc = small_config();
    doc["motifs"] = Json::array({"triangle"});
    doc["alpha"] = "1";
    const fs::path cfg = write_config(dir, doc);
    const int code = run("analyze --config \"" + cfg.string() + "\" --out \"" +
                             (dir / "out").string() + "\"",
                         dir / "stdout.txt");
    CHECK(code == 2);
}

TEST_CASE("bad invocations fail") {
    const fs::path dir = fresh_dir("bad");
    CHECK(run("analyze --out \"" + dir.string() + "\"", dir / "a.txt") != 0);  // no config
    CHECK(run("analyze --config \"" + (dir / "missing.json").string() + "\" --out \"" +
                  dir.string() + "\"",
              dir / "b.txt") != 0);
    CHECK(run("", dir / "c.txt") != 0);  // a subcommand is required
}

TEST_CASE("oracle prints exact pair constants in both modes") {
    const fs::path dir = fresh_dir("oracle");
    const int code = run("oracle triangle triangle edge", dir / "stdout.txt");
    CHECK(code == 0);
    const std::string text = slurp(dir / "stdout.txt");
    CHECK(text.find("enumerate mode:   1/2") != std::string::npos);
    CHECK(text.find("closed-form mode: 1/2") != std::string::npos);
}

TEST_CASE("oracle refuses the closed form off the equioptimal set") {
    const fs::path dir = fresh_dir("oracle_refuse");
    const int code = run("oracle wedge triangle --alpha 7/10", dir / "stdout.txt");
    CHECK(code == 0);
    CHECK(slurp(dir / "stdout.txt").find("refused") != std::string::npos);
}

TEST_CASE("verify detects an injected oracle mismatch") {
    const fs::path dir = fresh_dir("verify");
    const int code = run("verify --inject-failure --out \"" + (dir / "out").string() + "\"",
                         dir / "stdout.txt");
    CHECK(code != 0);
    const Json report = Json::parse(slurp(dir / "out" / "report.json"));
    REQUIRE(report["criteria"].size() == 7);
    for (int i = 0; i < 7; ++i) {
        CHECK(report["criteria"][i]["id"] == i + 1);
        CHECK(report["criteria"][i].contains("name"));
        CHECK(report["criteria"][i].contains("seconds"));
        CHECK(report["criteria"][i].contains("details"));
    }
    CHECK(report["criteria"][0]["pass"] == false);
    CHECK(report["all_pass"] == false);
    const std::string text = slurp(dir / "stdout.txt");
    CHECK(text.find("FAIL") != std::string::npos);
}
