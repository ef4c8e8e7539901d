#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using ts::SpectrumOptions;
using ts::SpectrumReport;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("interval spectrum is k = m pi") {
    const auto g = interval();
    const auto rep = ts::compute_spectrum(g, {1.0}, 10.0);
    REQUIRE(rep.eigenvalues.size() == 3);
    for (std::size_t m = 0; m < rep.eigenvalues.size(); ++m) {
        CHECK(std::abs(rep.eigenvalues[m].k - double(m + 1) * pi) < 1e-8);
        CHECK(rep.eigenvalues[m].multiplicity == 1);
        CHECK(rep.eigenvalues[m].residual < 1e-6);
    }
}

TEST_CASE("mixed interval spectrum is k = (m + 1/2) pi") {
    const auto g = interval(false, true);
    const auto rep = ts::compute_spectrum(g, {1.0}, 10.0);
    REQUIRE(rep.eigenvalues.size() == 3);
    for (std::size_t m = 0; m < rep.eigenvalues.size(); ++m) {
        CHECK(std::abs(rep.eigenvalues[m].k - (double(m) + 0.5) * pi) < 1e-8);
        CHECK(rep.eigenvalues[m].multiplicity == 1);
    }
}

TEST_CASE("equilateral star_3 spectrum with multiplicities") {
    const auto g = star_graph(3);
    const auto rep = ts::compute_spectrum(g, {1.0, 1.0, 1.0}, 10.0);
    const std::vector<std::pair<double, int>> expect{
        {0.5 * pi, 2}, {pi, 1}, {1.5 * pi, 2}, {2.0 * pi, 1}, {2.5 * pi, 2}, {3.0 * pi, 1}};
    REQUIRE(rep.eigenvalues.size() == expect.size());
    for (std::size_t i = 0; i < expect.size(); ++i) {
        CHECK(std::abs(rep.eigenvalues[i].k - expect[i].first) < 1e-6);
        CHECK(rep.eigenvalues[i].multiplicity == expect[i].second);
        CHECK(rep.eigenvalues[i].residual < 1e-6);
    }
}

TEST_CASE("lengths must be positive and matching") {
    const auto g = interval();
    CHECK_THROWS_AS(ts::compute_spectrum(g, {-1.0}, 5.0), ts::Error);
    CHECK_THROWS_AS(ts::compute_spectrum(g, {1.0, 1.0}, 5.0), ts::Error);
}

TEST_CASE("weyl count within the stated slack") {
    ts::Rng rng(911);
    for (int trial = 0; trial < 4; ++trial) {
        const int n = 2 + int(rng() % 3);
        const auto g = random_tree(rng, n, false);
        std::uniform_real_distribution<double> len(0.6, 1.7);
        std::vector<double> lengths;
        double total = 0.0;
        for (int j = 0; j < n; ++j) {
            lengths.push_back(len(rng));
            total += lengths.back();
        }
        const double k_max = 110.0 / total; // K L >= 100
        const auto rep = ts::compute_spectrum(g, lengths, k_max);
        int count = 0;
        for (const auto& e : rep.eigenvalues) count += e.multiplicity;
        const double predicted = k_max * total / pi;
        CHECK(std::abs(double(count) - predicted) <= double(n + 2));
    }
}

TEST_CASE("secular residual vanishes at reported eigenvalues") {
    ts::Rng rng(912);
    const auto g = star_graph(3);
    const std::vector<double> lengths{1.0, 1.3, 0.7};
    const auto rep = ts::compute_spectrum(g, lengths, 20.0);
    REQUIRE(!rep.eigenvalues.empty());
    for (const auto& e : rep.eigenvalues) CHECK(e.residual < 1e-6);
}

TEST_CASE("mingap on closed forms") {
    const auto g = interval();
    const auto rep = ts::compute_spectrum(g, {1.0}, 20.0);
    CHECK(std::abs(ts::mingap_estimate(rep, 0.0, 20.0) - pi) < 1e-8);

    const auto star = star_graph(3);
    CHECK(std::abs(ts::mingap_estimate(star, {1.0, 1.0, 1.0}, 0.0, 20.0) - 0.5 * pi) < 1e-8);
}

TEST_CASE("mingap estimate is nonincreasing in the window") {
    const auto star = star_graph(3);
    const std::vector<double> lengths{1.0, 1.0, std::sqrt(2.0)};
    const auto rep = ts::compute_spectrum(star, lengths, 60.0);
    const double mg_small = ts::mingap_estimate(rep, 0.0, 25.0);
    const double mg_large = ts::mingap_estimate(rep, 0.0, 60.0);
    CHECK(mg_large <= mg_small + 1e-12);
}

TEST_CASE("empty windows error") {
    const auto g = interval();
    const auto rep = ts::compute_spectrum(g, {1.0}, 10.0);
    CHECK_THROWS_AS(ts::mingap_estimate(rep, 5.0, 5.0), ts::Error);
    CHECK_THROWS_AS(ts::mingap_estimate(rep, 0.0, 1.0), ts::Error); // no two eigenvalues below 1
}

TEST_CASE("multiplicity at stratum crossings matches the support prediction") {
    const auto g = star_graph(3);
    const auto rep = ts::compute_spectrum(g, {1.0, 1.0, 1.0}, 5.0);
    REQUIRE(!rep.eigenvalues.empty());
    const auto& first = rep.eigenvalues.front(); // k = pi/2, z = (i,i,i)
    const ts::TorusPoint z = ts::TorusPoint::from_angles({first.k, first.k, first.k});
    CHECK(ts::predicted_multiplicity(g, z) == first.multiplicity);
}

TEST_CASE("close pairs under the grid step refuse with StepTooCoarse") {
    const auto g = star_graph(3);
    SpectrumOptions coarse;
    coarse.dk = 0.2; // the near-equilateral pair splits by less than this
    try {
        ts::compute_spectrum(g, {1.0, 1.0, 1.1}, 8.0, coarse);
        FAIL("expected StepTooCoarse");
    } catch (const ts::Error& e) {
        CHECK(e.code() == ts::Errc::StepTooCoarse);
    }
    // halving the step resolves the pair
    SpectrumOptions fine;
    fine.dk = 0.05;
    const auto rep = ts::compute_spectrum(g, {1.0, 1.0, 1.1}, 8.0, fine);
    double min_gap = 1e9;
    for (std::size_t i = 1; i < rep.eigenvalues.size(); ++i)
        min_gap = std::min(min_gap, rep.eigenvalues[i].k - rep.eigenvalues[i - 1].k);
    CHECK(min_gap >= fine.dk);
}

TEST_CASE("genericity trial on the interval is trivially simple") {
    ts::Rng rng(31415);
    const auto g = interval();
    const auto trial = ts::genericity_trial(g, ts::RelationLattice(1, {}), 5, 30.0, rng);
    CHECK(trial.samples == 5);
    CHECK(trial.fully_simple == 5);
    CHECK(trial.fraction_fully_simple == 1.0);
}

TEST_CASE("equilateral star family always hits the stratum") {
    ts::Rng rng(27182);
    const auto g = star_graph(3);
    const ts::RelationLattice rel(3, {{1, -1, 0}, {0, 1, -1}});
    const auto trial = ts::genericity_trial(g, rel, 4, 30.0, rng);
    CHECK(trial.fully_simple == 0);
    CHECK(trial.worst_gap_to_double == 0.0);
}

TEST_CASE("infeasible positive cone is reported") {
    ts::Rng rng(1);
    const auto g = star_graph(3);
    const ts::RelationLattice rel(3, {{1, 1, 1}});
    CHECK_THROWS_AS(ts::genericity_trial(g, rel, 1, 10.0, rng), ts::Error);
}

TEST_CASE("generic rationally dependent lengths stay simple") {
    ts::Rng rng(16180);
    const auto g = star_graph(3);
    const ts::RelationLattice rel(3, {{1, 1, -2}});
    const auto trial = ts::genericity_trial(g, rel, 6, 30.0, rng);
    CHECK(trial.fully_simple >= 5);
}
