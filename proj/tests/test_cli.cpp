// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "cli.hpp"

namespace fs = std::filesystem;
using namespace famec::cli;

namespace {

int call(std::vector<std::string> args)
{
    args.insert(args.begin(), "famec");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return cli_main(static_cast<int>(argv.size()), argv.data());
}

fs::path scratch(const std::string& name)
{
    const auto dir = fs::temp_directory_path() / ("famec_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> lines(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

double summary_latency(const fs::path& dir)
{
    const auto rows = lines(slurp(dir / "summary.csv"));
    REQUIRE(rows.size() == 2);
    // scheme,seed,M,N,total_latency,...
    std::istringstream row(rows[1]);
    std::string cell;
    for (int i = 0; i < 5; ++i) std::getline(row, cell, ',');
    return std::stod(cell);
}

} // namespace

TEST_CASE("usage errors exit 2")
{
    CHECK(call({}) == kExitUsage);
    CHECK(call({"fly"}) == kExitUsage);
    CHECK(call({"baseline"}) == kExitUsage);
    CHECK(call({"baseline", "--scheme", "remote"}) == kExitUsage);
    CHECK(call({"run", "--seed", "minus-one"}) == kExitUsage);
    CHECK(call({"run", "--outer", "0"}) == kExitUsage);
    CHECK(call({"sweep", "--antennas", "4,x", "--out", scratch("usage").string()}) == kExitUsage);
}

TEST_CASE("validation failures exit 1")
{
    const auto dir = scratch("invalid");
    std::ofstream(dir / "bad.cfg") << "user_count = 5\nantenna_count = 4\n";
    std::ofstream(dir / "typo.cfg") << "antena_count = 5\n";
    CHECK(call({"run", "--config", (dir / "bad.cfg").string(), "--out", dir.string()}) == kExitValidation);
    CHECK(call({"run", "--config", (dir / "typo.cfg").string(), "--out", dir.string()}) == kExitValidation);
    CHECK(call({"run", "--config", (dir / "none.cfg").string(), "--out", dir.string()}) == kExitValidation);
    CHECK_FALSE(fs::exists(dir / "summary.csv"));
    fs::remove_all(dir);
}

TEST_CASE("run is deterministic and beats the local baseline")
{
    const auto a = scratch("run_a");
    const auto b = scratch("run_b");
    const auto local = scratch("run_local");
    CHECK(call({"run", "--config", "default", "--seed", "7", "--inner", "10", "--outer", "2", "--out", a.string()}) == kExitOk);
    CHECK(call({"run", "--seed", "7", "--inner", "10", "--outer", "2", "--threads", "3", "--out", b.string()}) == kExitOk);
    CHECK(slurp(a / "trace.csv") == slurp(b / "trace.csv"));
    CHECK(slurp(a / "summary.csv") == slurp(b / "summary.csv"));
    // header + 2 outer x (1 + 10)
    CHECK(lines(slurp(a / "trace.csv")).size() == 1 + 22);

    CHECK(call({"baseline", "--scheme", "local", "--seed", "7", "--out", local.string()}) == kExitOk);
    CHECK(summary_latency(local) > summary_latency(a));
    CHECK(call({"baseline", "--scheme", "fixed", "--seed", "7", "--out", local.string()}) == kExitOk);
    CHECK(lines(slurp(local / "trace.csv")).size() == 2);

    for (const auto& d : {a, b, local}) fs::remove_all(d);
}

TEST_CASE("sweep enumerates schemes x seeds x antenna counts")
{
    const auto dir = scratch("sweep");
    CHECK(call({"sweep", "--antennas", "4,6,8", "--seeds", "20", "--inner", "2", "--outer", "1", "--out",
                dir.string()}) == kExitOk);
    const auto rows = lines(slurp(dir / "summary.csv"));
    CHECK(rows.size() == 1 + 3 * 20 * 3);
    std::size_t ippso = 0;
    for (const auto& r : rows) ippso += r.rfind("ippso,", 0) == 0 ? 1 : 0;
    CHECK(ippso == 60);
    fs::remove_all(dir);
}

TEST_CASE("installed tool reports exit codes")
{
    const std::string tool = FAMEC_TOOL_PATH;
    const auto dir = scratch("tool");
    const auto quiet = " 2>" + (dir / "stderr.txt").string() + " >" + (dir / "stdout.txt").string();
    auto status = [&](const std::string& args) {
        const int raw = std::system((tool + " " + args + quiet).c_str());
        return WEXITSTATUS(raw);
    };
    CHECK(status("run --inner 3 --outer 1 --out " + dir.string()) == 0);
    CHECK(slurp(dir / "stdout.txt").empty());
    CHECK(slurp(dir / "stderr.txt").find("total_latency=") != std::string::npos);
    CHECK(status("baseline") == 2);
    std::ofstream(dir / "bad.cfg") << "user_count = 9\n";
    CHECK(status("run --config " + (dir / "bad.cfg").string() + " --out " + dir.string()) == 1);
    fs::remove_all(dir);
}
