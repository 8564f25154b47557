#include "accesswalk/network.hpp"

#include "support.hpp"

#include <doctest.h>

#include <sstream>

using namespace accesswalk;
using namespace accesswalk::testing;

namespace {

StreetNetwork load(const std::string& nodes, const std::string& edges)
{
    std::istringstream n(nodes), e(edges);
    return load_network(n, e);
}

std::string load_error(const std::string& nodes, const std::string& edges)
{
    try {
        load(nodes, edges);
    } catch (const NetworkError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("load_network builds the path and cycle fixtures")
{
    auto p3 = load("id\n0\n1\n2\n", "source,target\n0,1\n1,2\n");
    CHECK(p3.node_count() == 3);
    CHECK(p3.edge_count() == 2);
    CHECK_FALSE(p3.has_coordinates());

    auto c4 = load("id,x,y\n0,0,0\n1,1,0\n2,1,1\n3,0,1\n",
                   "source,target\n0,1\n1,2\n2,3\n3,0\n");
    CHECK(c4.node_count() == 4);
    CHECK(c4.edge_count() == 4);
    REQUIRE(c4.has_coordinates());
    CHECK(c4.position(2) == Point{1, 1});
}

TEST_CASE("load_network rejects bad records with line context")
{
    const std::string nodes = "id\n0\n1\n2\n3\n";
    auto msg = load_error(nodes, "source,target\n0,5\n");
    CHECK(msg.find("unknown node id") != std::string::npos);
    CHECK(msg.find("edges:2") != std::string::npos);

    CHECK(load_error("id\n0\n1\n0\n", "source,target\n").find("duplicate node id") !=
          std::string::npos);
    CHECK(load_error(nodes, "source,target\n2,2\n").find("self-loop") != std::string::npos);
    msg = load_error(nodes, "source,target\n0,1\n1,0\n");
    CHECK(msg.find("duplicate edge") != std::string::npos);
    CHECK(msg.find("edges:3") != std::string::npos);
    CHECK(load_error("name\n0\n", "source,target\n").find("'id'") != std::string::npos);
    CHECK(load_error("id,x,y\n0,1\n", "source,target\n").find("nodes:2") != std::string::npos);
    CHECK(load_error("id,x,y\n0,a,1\n", "source,target\n").find("not a number") !=
          std::string::npos);
}

TEST_CASE("arbitrary string labels get dense indices")
{
    auto net = load("id\nelm st\n\"oak, north\"\n17\n", "source,target\nelm st,17\n17,\"oak, north\"\n");
    CHECK(net.node_count() == 3);
    REQUIRE(net.find("oak, north").has_value());
    CHECK(*net.find("oak, north") == 1);
    CHECK(net.label(2) == "17");
    CHECK(net.has_edge(0, 2));
    CHECK_FALSE(net.find("missing").has_value());
}

TEST_CASE("degree")
{
    auto c4 = cycle_graph(4);
    for (NodeId u = 0; u < 4; ++u) CHECK(c4.degree(u) == 2);

    auto star = star_graph(3);
    CHECK(star.degree(0) == 3);
    CHECK(star.degree(1) == 1);
    CHECK_THROWS_AS(star.degree(4), std::out_of_range);
}

TEST_CASE("bfs_distance")
{
    auto p3 = path_graph(3);
    CHECK(bfs_distance(p3, 0, 2) == 2);
    for (NodeId u = 0; u < 3; ++u) CHECK(bfs_distance(p3, u, u) == 0);

    std::vector<std::pair<NodeId, NodeId>> two = {{0, 1}, {2, 3}};
    auto split = make_network(4, two);
    CHECK_FALSE(bfs_distance(split, 0, 3).has_value());
    CHECK(split.component_count() == 2);
    CHECK_THROWS_AS(bfs_distance(split, 0, 9), std::out_of_range);
}

TEST_CASE("neighborhood")
{
    auto p5 = path_graph(5);
    CHECK(neighborhood(p5, NodeSet{2}, 1) == NodeSet{1, 2, 3});
    CHECK(neighborhood(p5, NodeSet{0, 4}, 0) == NodeSet{0, 4});
    CHECK_THROWS_AS(neighborhood(p5, NodeSet{}, 1), std::invalid_argument);
    CHECK_THROWS_AS(neighborhood(p5, NodeSet{0}, -1), std::invalid_argument);
}

TEST_CASE("radius-7 ball on a 15x15 grid is the 113-node diamond")
{
    auto grid = make_grid(15, 15);
    const NodeId center = 7 * 15 + 7;
    auto ball = neighborhood(grid, NodeSet{center}, 7);
    auto expected = manhattan_ball(15, 15, {center}, 7);
    CHECK(expected.size() == 113);
    CHECK(ball == NodeSet(expected));
}

TEST_CASE("topology invariants on random graphs")
{
    std::mt19937 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        auto net = random_graph(5 + trial % 20, 3 + trial, rng);
        std::size_t degree_sum = 0;
        for (NodeId u = 0; u < net.node_count(); ++u) {
            degree_sum += net.degree(u);
            CHECK_FALSE(net.has_edge(u, u));
            auto row = net.neighbors(u);
            CHECK(std::is_sorted(row.begin(), row.end()));
            for (NodeId v : row) CHECK(net.has_edge(v, u));
        }
        CHECK(degree_sum == 2 * net.edge_count());

        // Monotone neighborhoods and the triangle inequality.
        NodeSet centers{static_cast<NodeId>(trial % net.node_count())};
        NodeSet previous = neighborhood(net, centers, 0);
        for (int r = 1; r < 6; ++r) {
            NodeSet next = neighborhood(net, centers, r);
            CHECK(previous.is_subset_of(next));
            previous = std::move(next);
        }
        for (NodeId a = 0; a < net.node_count(); a += 3) {
            auto da = bfs_distances(net, NodeSet{a});
            for (NodeId b = 0; b < net.node_count(); b += 2) {
                if (da[b] == kUnreachable) continue;
                auto db = bfs_distances(net, NodeSet{b});
                for (NodeId c = 0; c < net.node_count(); ++c)
                    if (db[c] != kUnreachable) CHECK(da[c] <= da[b] + db[c]);
            }
        }
    }
}

TEST_CASE("serialization round-trips node set, edges and coordinates")
{
    std::mt19937 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        auto base = random_graph(12, 18, rng);
        NetworkBuilder b;
        std::uniform_real_distribution<double> coord(-1e4, 1e4);
        for (NodeId u = 0; u < base.node_count(); ++u)
            b.add_node("n" + std::to_string(u * 7), Point{coord(rng), coord(rng)});
        for (auto [u, v] : base.edges()) b.add_edge(u, v);
        auto net = std::move(b).build();

        std::ostringstream nodes, edges, json;
        write_nodes_csv(net, nodes);
        write_edges_csv(net, edges);
        write_network_json(net, json);

        auto from_csv = load(nodes.str(), edges.str());
        std::istringstream json_in(json.str());
        auto from_json = load_network_json(json_in);
        for (const auto* copy : {&from_csv, &from_json}) {
            REQUIRE(copy->node_count() == net.node_count());
            CHECK(copy->edges() == net.edges());
            for (NodeId u = 0; u < net.node_count(); ++u) {
                CHECK(copy->label(u) == net.label(u));
                CHECK(copy->position(u) == net.position(u));
            }
            CHECK(copy->topology_hash() == net.topology_hash());
        }
    }
}

TEST_CASE("JSON network accepts integer ids and rejects partial coordinates")
{
    std::istringstream ok(R"({"nodes":[{"id":1},{"id":2},{"id":"x"}],"edges":[[1,2],[2,"x"]]})");
    auto net = load_network_json(ok);
    CHECK(net.node_count() == 3);
    CHECK(net.edge_count() == 2);
    CHECK(net.degree(*net.find("2")) == 2);

    std::istringstream partial(R"({"nodes":[{"id":1,"x":0,"y":0},{"id":2}],"edges":[]})");
    CHECK_THROWS_AS(load_network_json(partial), NetworkError);
    std::istringstream broken(R"({"nodes":[{"id":1}],"edges":[[1,3]]})");
    CHECK_THROWS_WITH_AS(load_network_json(broken), doctest::Contains("unknown node id"),
                         NetworkError);
}

TEST_CASE("degree-zero nodes are permitted")
{
    auto net = load("id\na\nb\nlonely\n", "source,target\na,b\n");
    CHECK(net.degree(2) == 0);
    CHECK(net.component_count() == 2);
}

TEST_CASE("GeoJSON export")
{
    auto grid = make_grid(2, 3);
    std::ostringstream out;
    std::vector<double> values(grid.node_count(), 0.25);
    values[1] = std::nan("");
    write_geojson(grid, out, values);
    auto text = out.str();
    CHECK(text.find("\"FeatureCollection\"") != std::string::npos);
    // 6 points + 7 edges
    std::size_t points = 0, lines = 0;
    for (std::size_t pos = 0; (pos = text.find("\"Point\"", pos)) != std::string::npos; ++pos) ++points;
    for (std::size_t pos = 0; (pos = text.find("\"LineString\"", pos)) != std::string::npos; ++pos) ++lines;
    CHECK(points == 6);
    CHECK(lines == 7);
    CHECK(text.find("\"mean_oa\":null") != std::string::npos);

    std::ostringstream sink;
    CHECK_THROWS_AS(write_geojson(path_graph(3), sink), NetworkError);
}
