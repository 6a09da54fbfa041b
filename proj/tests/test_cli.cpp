#include <cstdlib>
#include <sys/wait.h>

#include "doctest.h"

#include "scratch.hpp"
#include "tetra/io.hpp"
#include "tetra/report.hpp"

using namespace tetra;

namespace {

int run(const std::string& args, const ScratchDir& dir) {
    const std::string cmd = std::string(TETRA_CLI_PATH) + " " + args + " >" +
                            (dir.path / "stdout.txt").string() + " 2>" + (dir.path / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string q(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

} // namespace

TEST_CASE("cli synth, detect, eval and plot round trip") {
    ScratchDir dir;
    const auto spec = dir.write("spec.cfg", "segments = 40:0:1, 40:4:1, 40:0:1, 40:4:1\nseed = 3\n");
    REQUIRE(run("synth -c " + q(spec) + " -o " + q(dir.path / "s.csv") + " --truth " +
                    q(dir.path / "truth.csv") + " --start-date 2012-01-01",
                dir) == 0);
    CHECK(read_changepoint_indices(dir.path / "truth.csv") == std::vector<std::size_t>{41, 81, 121});

    REQUIRE(run("detect -i " + q(dir.path / "s.csv") + " --format dated -o " + q(dir.path / "out"), dir) ==
            0);
    const auto report = Json::parse(read_file(dir.path / "out" / "report.json"));
    CHECK(report["m_star"] == 3);
    CHECK(std::filesystem::exists(dir.path / "out" / "plot.svg"));

    REQUIRE(run("eval --detected " + q(dir.path / "out" / "changepoints.csv") + " --truth " +
                    q(dir.path / "truth.csv"),
                dir) == 0);
    const auto ev = Json::parse(read_file(dir.path / "stdout.txt"));
    CHECK(ev["f1"] == 1.0);

    REQUIRE(run("plot -i " + q(dir.path / "s.csv") + " --format dated --changepoints " +
                    q(dir.path / "truth.csv") + " -o " + q(dir.path / "p.svg"),
                dir) == 0);
    CHECK(read_file(dir.path / "p.svg").find("class=\"changepoint\"") != std::string::npos);
}

TEST_CASE("cli flags override the config file") {
    ScratchDir dir;
    const auto spec = dir.write("spec.cfg", "segments = 30:0:1, 30:4:1\nseed = 1\n");
    REQUIRE(run("synth -c " + q(spec) + " -o " + q(dir.path / "s.csv"), dir) == 0);
    const auto cfg = dir.write("d.cfg", "d = 10\nmodel = gaussian\n");
    REQUIRE(run("detect -i " + q(dir.path / "s.csv") + " --format indexed -c " + q(cfg) +
                    " --d 12 -o " + q(dir.path / "out"),
                dir) == 0);
    const auto report = Json::parse(read_file(dir.path / "out" / "report.json"));
    CHECK(report["config"]["d"] == 12);
    CHECK(report["config"]["model"] == "gaussian_plugin");
}

TEST_CASE("cli aggregate") {
    ScratchDir dir;
    const auto ev = dir.write("ev.csv", "pct,datestop\n1,10282012\n2,10282012\n3,10302012\n");
    REQUIRE(run("aggregate -i " + q(ev) + " -o " + q(dir.path / "daily.csv"), dir) == 0);
    CHECK(read_file(dir.path / "daily.csv") == "date,value\n2012-10-28,2\n2012-10-29,0\n2012-10-30,1\n");
}

TEST_CASE("cli exit codes") {
    ScratchDir dir;
    CHECK(run("", dir) == 1);
    CHECK(run("detect", dir) == 1);
    CHECK(run("frobnicate", dir) == 1);
    const auto bad = dir.write("bad.csv", "t,value\n1,1\n2,2\n3,abc\n");
    CHECK(run("detect -i " + q(bad) + " --format indexed -o " + q(dir.path / "o"), dir) == 2);
    CHECK(read_file(dir.path / "stderr.txt").find("ParseError(4)") != std::string::npos);
    const auto gap = dir.write("gap.csv", "date,value\n2013-01-01,1\n2013-01-03,2\n");
    CHECK(run("detect -i " + q(gap) + " --format dated -o " + q(dir.path / "o"), dir) == 2);
    std::string shortcsv = "t,value\n";
    for (int i = 1; i <= 12; ++i)
        shortcsv += std::to_string(i) + "," + std::to_string(i % 3) + "\n";
    const auto sh = dir.write("short.csv", shortcsv);
    CHECK(run("detect -i " + q(sh) + " --format indexed --d 15 -o " + q(dir.path / "o"), dir) == 3);
    CHECK(run("detect -i " + q(sh) + " --format indexed --alpha 2 -o " + q(dir.path / "o"), dir) == 1);
    CHECK_FALSE(std::filesystem::exists(dir.path / "o" / "report.json"));
}
