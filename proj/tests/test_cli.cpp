#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "test_support.hpp"

#include "treespec/cli_app.hpp"

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = ts::run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path write_temp(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream f(path);
    f << content;
    return path;
}

const std::string kStar3 = "graph n=3\nedge 1 1 4\nedge 2 2 4\nedge 3 3 4\n";
const std::string kStar4 = "graph n=4\nedge 1 1 5\nedge 2 2 5\nedge 3 3 5\nedge 4 4 5\n";
const std::string kPath3 = "graph n=3\nedge 1 1 2\nedge 2 2 3\nedge 3 3 4\n";
const std::string kInterval = "graph n=1\nedge 1 1 2\n";

} // namespace

TEST_CASE("cmd secular prints canonical polynomials") {
    const auto i1 = write_temp("cli_i1.graph", kInterval);
    CHECK(run({"secular", i1.string()}).out == "1 z1^2 - 1\n");

    const auto p2 = write_temp("cli_p2.graph", "graph n=2\nedge 1 1 2\nedge 2 2 3\n");
    CHECK(run({"secular", p2.string()}).out == "1 z1^2 z2^2 - 1\n");

    const auto s3 = write_temp("cli_s3.graph", kStar3);
    const auto res = run({"secular", s3.string()});
    CHECK(res.code == 0);
    REQUIRE(!res.out.empty());
    const auto parsed = ts::MultiPoly::parse(res.out.substr(0, res.out.size() - 1), 3);
    CHECK(parsed == ts::secular_polynomial(star_graph(3)));
}

TEST_CASE("cmd strata") {
    const auto s3 = write_temp("cli_s3.graph", kStar3);
    const auto res = run({"strata", s3.string(), "--m", "2"});
    CHECK(res.code == 0);
    CHECK(res.out.find("stratum 1") != std::string::npos);

    const auto p3 = write_temp("cli_p3.graph", kPath3);
    CHECK(run({"strata", p3.string(), "--m", "2"}).out == "none\n");

    const auto machine = run({"strata", s3.string(), "--m", "2", "--format", "machine"});
    const auto records = ts::parse_strata_machine(machine.out, 3);
    REQUIRE(records.size() == 1);
    CHECK(ts::strata_machine(records) == machine.out);

    // without --m: every singular stratum, sorted by codim
    const auto s4 = write_temp("cli_s4.graph", kStar4);
    const auto all = run({"strata", s4.string(), "--format", "machine"});
    const auto all_records = ts::parse_strata_machine(all.out, 4);
    REQUIRE(all_records.size() == 5);
    CHECK(all_records.back().codim == 4);
}

TEST_CASE("cmd obstruction") {
    const auto s4 = write_temp("cli_s4.graph", kStar4);
    const auto rel = write_temp("cli_s4.relations", "0 0 0 1\n");
    const auto res = run({"obstruction", s4.string(), "--relations", rel.string()});
    CHECK(res.code == 0);
    CHECK(res.out.find("verdict: OBSTRUCTED") != std::string::npos);

    const auto p3 = write_temp("cli_p3.graph", kPath3);
    const auto rel3 = write_temp("cli_p3.relations", "1 -1 0\n");
    const auto res2 = run({"obstruction", p3.string(), "--relations", rel3.string()});
    CHECK(res2.out.find("verdict: INCONCLUSIVE") != std::string::npos);

    const auto machine = run({"obstruction", s4.string(), "--relations", rel.string(), "--format", "machine"});
    const auto rec = ts::parse_obstruction_machine(machine.out, 4);
    CHECK(ts::obstruction_machine(rec) == machine.out);
}

TEST_CASE("cmd spectrum and mingap") {
    const auto i1 = write_temp("cli_i1.graph", kInterval);
    const auto res = run({"spectrum", i1.string(), "--lengths", "1.0", "--kmax", "7"});
    CHECK(res.code == 0);
    CHECK(res.out.find("mult=1") != std::string::npos);
    CHECK(res.out.find("mingap_estimate=") != std::string::npos);

    const auto machine = run({"spectrum", i1.string(), "--lengths", "1.0", "--kmax", "7", "--format", "machine"});
    const auto rep = ts::parse_spectrum_machine(machine.out);
    CHECK(ts::spectrum_machine(rep) == machine.out);
    REQUIRE(rep.eigenvalues.size() == 2);

    const auto mg = run({"mingap", i1.string(), "--lengths", "1.0", "--window", "0,20"});
    CHECK(mg.code == 0);
    const double v = std::stod(mg.out.substr(mg.out.find('=') + 1));
    CHECK(std::abs(v - std::numbers::pi) < 1e-8);
}

TEST_CASE("cmd verify") {
    const auto s3 = write_temp("cli_s3.graph", kStar3);
    const auto res = run({"verify", s3.string(), "--seed", "7", "--samples", "10"});
    CHECK(res.code == 0);
    CHECK(res.out.find("multiplicity-formula:") != std::string::npos);
    CHECK(res.out.find("reconstruction: max rel err") != std::string::npos);

    const auto machine = run({"verify", s3.string(), "--seed", "7", "--samples", "6", "--format", "machine"});
    const auto parsed = ts::parse_verify_machine(machine.out);
    CHECK(ts::verify_machine(parsed) == machine.out);
}

TEST_CASE("exit codes distinguish failure classes") {
    // usage error
    CHECK(run({"secular"}).code == 2);
    CHECK(run({"bogus"}).code == 2);
    // missing file
    CHECK(run({"secular", "/nonexistent/file.graph"}).code == 2);
    // malformed graph
    const auto bad = write_temp("cli_bad.graph", "graph n=1\nedge 1 1\n");
    CHECK(run({"secular", bad.string()}).code == 2);
    // semantically invalid graph (cycle) is a precondition failure
    const auto cyc = write_temp("cli_cyc.graph", "graph n=3\nedge 1 1 2\nedge 2 2 3\nedge 3 3 1\n");
    CHECK(run({"secular", cyc.string()}).code == 3);
    // precondition failure: nonpositive lengths
    const auto i1 = write_temp("cli_i1.graph", kInterval);
    CHECK(run({"spectrum", i1.string(), "--lengths", "-1", "--kmax", "5"}).code == 3);
    // mingap over an empty window
    CHECK(run({"mingap", i1.string(), "--lengths", "1", "--window", "0,1"}).code == 3);
}

TEST_CASE("help exits zero") {
    CHECK(run({"--help"}).code == 0);
}
