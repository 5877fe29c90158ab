#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

namespace fs = std::filesystem;

namespace {

fs::path scratch() {
    static fs::path dir = [] {
        fs::path p = fs::temp_directory_path() /
                     ("nlgrad-cli-" + std::to_string(::getpid()));
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

int run(const std::string& args, const fs::path& stdout_to = {}) {
    std::string cmd = std::string(NLGRAD_CLI_PATH) + " " + args;
    if (!stdout_to.empty())
        cmd += " > " + stdout_to.string() + " 2>&1";
    else
        cmd += " > /dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : 128;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) out.push_back(line);
    return out;
}

} // namespace

TEST_CASE("kernel dump") {
    fs::path csv = scratch() / "kernel.csv";
    fs::path log = scratch() / "kernel.log";
    CHECK(run("kernel --s 0.5 --out " + csv.string(), log) == 0);
    auto ls = lines(slurp(csv));
    REQUIRE(!ls.empty());
    CHECK(ls[0] == "x,Q,wbar,d");
    CHECK(ls.size() > 10);
    CHECK(slurp(log).find("normalization c") != std::string::npos);
}

TEST_CASE("interior solve dump") {
    fs::path csv = scratch() / "solve.csv";
    CHECK(run("solve-c --s 0.5 --g const:-1 --n-cells 400 --out " + csv.string()) == 0);
    auto ls = lines(slurp(csv));
    REQUIRE(!ls.empty());
    CHECK(ls[0] == "x,value");
    CHECK(ls.size() == 401);   // one row per grid cell
}

TEST_CASE("invalid geometry fails fast without artifacts") {
    fs::path csv = scratch() / "never.csv";
    CHECK(run("solve-c --s 0.5 --delta 5 --out " + csv.string()) == 1);
    CHECK(!fs::exists(csv));
}

TEST_CASE("argument errors exit with one") {
    CHECK(run("solve-c --no-such-flag") == 1);
    CHECK(run("solve-c --s 0.5 --g bogus --n-cells 400 --out " +
              (scratch() / "x.csv").string()) == 1);
    CHECK(run("definitely-not-a-subcommand") == 1);
}

TEST_CASE("runs are deterministic") {
    fs::path a = scratch() / "a.csv";
    fs::path b = scratch() / "b.csv";
    CHECK(run("solve-c --s 0.7 --g linear --n-cells 400 --out " + a.string()) == 0);
    CHECK(run("solve-c --s 0.7 --g linear --n-cells 400 --out " + b.string()) == 0);
    CHECK(slurp(a) == slurp(b));
}

TEST_CASE("concentration sweep dump") {
    fs::path csv = scratch() / "sweep.csv";
    CHECK(run("localize --s-list 0.5,0.9 --n-cells 400 --out " + csv.string()) == 0);
    auto ls = lines(slurp(csv));
    REQUIRE(ls.size() == 3);
    CHECK(ls[0] == "s,l2_error,energy_gap,el_residual");
    CHECK(ls[1].rfind("0.5,", 0) == 0);
    CHECK(ls[2].rfind("0.9", 0) == 0);
}
