#include "accesswalk/oracle.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace accesswalk;
using namespace accesswalk::testing;

TEST_CASE("exact transitions on the small fixtures")
{
    auto p3 = exact_transitions(path_graph(3), 0, 2);
    CHECK(p3.walks == 0);
    CHECK(p3.step(1) == StepDistribution{{1, 1.0}});
    CHECK(p3.step(2) == StepDistribution{{2, 1.0}});

    auto c4 = exact_transitions(cycle_graph(4), 0, 4);
    CHECK(c4.step(1) == StepDistribution{{1, 0.5}, {3, 0.5}});
    CHECK(c4.step(2) == StepDistribution{{2, 1.0}});
    CHECK(c4.step(3) == StepDistribution{{1, 0.5}, {3, 0.5}});
    CHECK(c4.step(4).empty());

    auto star = exact_transitions(star_graph(3), 1, 3);
    CHECK(star.step(1) == StepDistribution{{0, 1.0}});
    CHECK(star.step(2) == StepDistribution{{2, 0.5}, {3, 0.5}});
    CHECK(star.step(3).empty());
}

TEST_CASE("exact accessibility on the star")
{
    auto field = exact_accessibility(star_graph(3), 2);
    CHECK(field.oa(0)[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(field.oa(0)[1] == 0.0);
    for (NodeId leaf = 1; leaf <= 3; ++leaf) {
        CHECK(field.oa(leaf)[0] == doctest::Approx(1.0 / 3).epsilon(1e-15));
        CHECK(field.oa(leaf)[1] == doctest::Approx(2.0 / 3).epsilon(1e-15));
    }
}

TEST_CASE("rational enumeration is exact and agrees with floats")
{
    auto c4 = exact_transitions_rational(cycle_graph(4), 0, 4);
    REQUIRE(c4[0].size() == 2);
    CHECK(c4[0][0].probability == Rational(1, 2));
    CHECK(c4[1][0].probability == Rational(1));

    auto grid = make_grid(3, 3);
    auto rational = exact_transitions_rational(grid, 4, 8);
    // The center has four open neighbors, each then three.
    CHECK(rational[0].size() == 4);
    CHECK(rational[0][0].probability == Rational(1, 4));

    std::mt19937 gen(5);
    std::vector<StreetNetwork> graphs;
    graphs.push_back(make_grid(4, 4));
    graphs.push_back(cycle_graph(7));
    graphs.push_back(star_graph(5));
    for (int i = 0; i < 5; ++i) graphs.push_back(random_graph(10 + i, 18 + 2 * i, gen));
    for (const auto& g : graphs) {
        REQUIRE(g.node_count() <= kRationalCheckMaxNodes);
        CHECK(rational_discrepancy(g, 9) <= 1e-12);
    }
}

TEST_CASE("exact survival is non-increasing and equals the step mass")
{
    std::mt19937 gen(8);
    for (int trial = 0; trial < 10; ++trial) {
        auto net = random_graph(12, 20, gen);
        for (NodeId s = 0; s < net.node_count(); ++s) {
            auto table = exact_transitions(net, s, 10);
            auto rational = exact_transitions_rational(net, s, 10);
            Rational previous = 1;
            for (int h = 1; h <= 10; ++h) {
                Rational mass = 0;
                for (const auto& e : rational[static_cast<std::size_t>(h - 1)]) mass += e.probability;
                CHECK(mass <= previous);
                CHECK(table.survival(h) == doctest::Approx(mass.convert_to<double>()).epsilon(1e-12));
                previous = mass;
            }
            if (net.degree(s) > 0) CHECK(previous <= 1);
        }
    }
}

TEST_CASE("vertex-transitive graphs give identical exact rows")
{
    for (std::size_t n : {5u, 8u}) {
        auto field = exact_accessibility(cycle_graph(n), static_cast<int>(n));
        for (NodeId u = 1; u < n; ++u)
            for (std::size_t h = 0; h < n; ++h) CHECK(field.oa(u)[h] == field.oa(0)[h]);
    }
}

TEST_CASE("budget guard")
{
    CHECK_THROWS_AS(exact_transitions(make_grid(53, 53), 0, 60), BudgetExceeded);
    CHECK_THROWS_AS(exact_transitions(make_grid(4, 4), 0, 10, 100), BudgetExceeded);
    CHECK_NOTHROW(exact_transitions(make_grid(4, 4), 0, 10));
    CHECK_THROWS_AS(exact_accessibility(make_grid(53, 53), 60), BudgetExceeded);
    CHECK_THROWS_AS(exact_transitions(path_graph(3), 5, 2), std::out_of_range);
}

TEST_CASE("golden 4x4 table matches a fresh enumeration")
{
    auto grid = make_grid(4, 4);
    auto golden = read_transition_dump(ACCESSWALK_TEST_DATA "/grid4_s10_exact.csv", grid, 10);
    CHECK(golden.header.at("graph_hash") == grid.topology_hash());
    CHECK(golden.header.at("max_steps") == "10");
    REQUIRE(golden.tables.size() == 16);
    for (NodeId s = 0; s < 16; ++s) {
        const auto& g = golden.tables[s];
        CHECK(g.walks == 0);
        CHECK(g.per_step == exact_transitions(grid, s, 10).per_step);

        auto dist = bfs_distances(grid, NodeSet{s});
        double previous = 1.0;
        for (int h = 1; h <= 10; ++h) {
            CHECK(g.survival(h) <= previous + 1e-12);
            previous = g.survival(h);
            for (const auto& e : g.step(h)) {
                CHECK(e.probability > 0.0);
                CHECK(dist[e.target] <= h);
                // Grid is bipartite: step parity fixes the color class.
                CHECK((dist[e.target] - h) % 2 == 0);
            }
        }
        CHECK(g.survival(1) == 1.0);
    }
}
