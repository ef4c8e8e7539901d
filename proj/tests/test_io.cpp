#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

TEST_CASE("graph files round-trip bit-exactly") {
    const std::string canonical =
        "graph n=3\n"
        "edge 1 1 4\n"
        "edge 2 2 4\n"
        "edge 3 3 4\n"
        "dirichlet 2\n";
    const auto g = ts::parse_graph(canonical);
    CHECK(ts::write_graph(g) == canonical);
    CHECK(g.is_dirichlet(2));
    CHECK(ts::parse_graph(ts::write_graph(g)) == g);
}

TEST_CASE("graph parser accepts comments and reorder, writer canonicalizes") {
    const std::string messy =
        "# a star\n"
        "graph n=2\n"
        "edge 2 2 3   # second\n"
        "\n"
        "edge 1 1 3\n";
    const auto g = ts::parse_graph(messy);
    CHECK(ts::write_graph(g) == "graph n=2\nedge 1 1 3\nedge 2 2 3\n");
}

TEST_CASE("graph parser reports line numbers") {
    try {
        ts::parse_graph("graph n=1\nedge 1 1\n");
        FAIL("expected ParseError");
    } catch (const ts::Error& e) {
        CHECK(e.code() == ts::Errc::ParseError);
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    CHECK_THROWS_AS(ts::parse_graph("edge 1 1 2\n"), ts::Error);
    CHECK_THROWS_AS(ts::parse_graph("graph n=2\nedge 1 1 2\n"), ts::Error);
    CHECK_THROWS_AS(ts::parse_graph("graph n=1\nbogus\n"), ts::Error);
}

TEST_CASE("random graphs round-trip") {
    ts::Rng rng(4711);
    for (int trial = 0; trial < 15; ++trial) {
        const auto g = random_tree(rng, 1 + int(rng() % 6), trial % 2 == 1, true);
        const std::string text = ts::write_graph(g);
        CHECK(ts::parse_graph(text) == g);
        CHECK(ts::write_graph(ts::parse_graph(text)) == text);
    }
}

TEST_CASE("relations files round-trip") {
    const std::string text = "1 1 -2\n0 3 -3\n";
    const auto rel = ts::parse_relations(text, 3);
    CHECK(ts::write_relations(rel) == text);
    CHECK_THROWS_AS(ts::parse_relations("1 2\n", 3), ts::Error);
    CHECK_THROWS_AS(ts::parse_relations("0 0 0\n", 3), ts::Error);
    const auto empty = ts::parse_relations("# nothing\n", 3);
    CHECK(empty.rows().empty());
}

TEST_CASE("strata reports") {
    const auto g = star_graph(3);
    const auto strata = ts::singular_components(g);
    const std::string human = ts::strata_human(strata);
    CHECK(human.find("stratum 1") != std::string::npos);
    CHECK(human.find("codim: 3") != std::string::npos);
    CHECK(ts::strata_human({}) == "none\n");

    const std::string machine = ts::strata_machine(strata);
    const auto records = ts::parse_strata_machine(machine, 3);
    REQUIRE(records.size() == 1);
    CHECK(records[0].deleted == std::vector<int>{4});
    CHECK(records[0].m == 2);
    CHECK(records[0].codim == 3);
    REQUIRE(records[0].systems.size() == 3);
    CHECK(ts::strata_machine(records) == machine);
}

TEST_CASE("spectrum machine format round-trips byte-for-byte") {
    const auto g = star_graph(3);
    const auto rep = ts::compute_spectrum(g, {1.0, 1.0, 1.0}, 8.0);
    const std::string machine = ts::spectrum_machine(rep);
    const auto parsed = ts::parse_spectrum_machine(machine);
    CHECK(ts::spectrum_machine(parsed) == machine);
    REQUIRE(parsed.eigenvalues.size() == rep.eigenvalues.size());
    for (std::size_t i = 0; i < parsed.eigenvalues.size(); ++i) {
        CHECK(parsed.eigenvalues[i].k == rep.eigenvalues[i].k);
        CHECK(parsed.eigenvalues[i].multiplicity == rep.eigenvalues[i].multiplicity);
    }
    const std::string human = ts::spectrum_human(rep);
    CHECK(human.find("k=") != std::string::npos);
    CHECK(human.find("mingap_estimate=") != std::string::npos);
}

TEST_CASE("obstruction machine format round-trips byte-for-byte") {
    const auto g = star_graph(4);
    const auto rep = ts::discreteness_obstruction(g, ts::RelationLattice(4, {{0, 0, 0, 1}}));
    const std::string machine = ts::obstruction_machine(rep);
    const auto rec = ts::parse_obstruction_machine(machine, 4);
    CHECK(ts::obstruction_machine(rec) == machine);
    CHECK(rec.verdict == "OBSTRUCTED");
    const std::string human = ts::obstruction_human(rep);
    CHECK(human.find("verdict: OBSTRUCTED") != std::string::npos);
}

TEST_CASE("verify machine format round-trips") {
    ts::VerificationOutcome v;
    v.mult_total = 100;
    v.mult_agree = 99;
    v.rec_total = 50;
    v.rec_max_err = 3.25e-11;
    v.notes.push_back("disagreement numeric=2 predicted=3 at z=...");
    const std::string machine = ts::verify_machine(v);
    const auto parsed = ts::parse_verify_machine(machine);
    CHECK(ts::verify_machine(parsed) == machine);
    CHECK(parsed.mult_agree == 99);
    CHECK(parsed.notes.size() == 1);
}

TEST_CASE("polynomial round-trip through the CLI-facing string") {
    for (const auto& g : {star_graph(3), path_graph(3), caterpillar7()}) {
        const auto p = ts::secular_polynomial(g);
        CHECK(ts::MultiPoly::parse(p.str(), p.nvars()) == p);
    }
}
