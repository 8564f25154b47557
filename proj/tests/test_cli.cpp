#include "cli.hpp"

#include "accesswalk/manifest.hpp"
#include "accesswalk/oracle.hpp"
#include "accesswalk/text.hpp"

#include "support.hpp"

#include <doctest.h>
#include <httplib.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace accesswalk;
using namespace accesswalk::testing;
namespace fs = std::filesystem;

namespace {

/// Fresh scratch directory, removed on scope exit.
struct Scratch {
    fs::path dir;
    explicit Scratch(const std::string& name) : dir(fs::temp_directory_path() / ("accesswalk_cli_" + name))
    {
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }
    std::string operator/(const std::string& leaf) const { return (dir / leaf).string(); }
};

struct Result {
    int code;
    std::string err;
};

Result run(std::vector<std::string> args)
{
    std::ostringstream captured;
    auto* old = std::cerr.rdbuf(captured.rdbuf());
    int code = cli::run(args);
    std::cerr.rdbuf(old);
    return {code, captured.str()};
}

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream(path) << text;
}

void write_network(const Scratch& s, const StreetNetwork& net)
{
    std::ofstream nodes(s / "nodes.csv"), edges(s / "edges.csv");
    write_nodes_csv(net, nodes);
    write_edges_csv(net, edges);
}

}  // namespace

TEST_CASE("compute on P3")
{
    Scratch s("p3");
    write_network(s, path_graph(3));
    auto r = run({"compute", "--nodes", s / "nodes.csv", "--edges", s / "edges.csv", "--steps", "2",
                  "--walks", "100", "--seed", "1", "--out", s / "out", "--quiet"});
    REQUIRE(r.code == cli::kOk);
    // Leaves are forced; the center's first step is a sampled coin flip.
    auto csv = slurp(s / "out/accessibility.csv");
    CHECK(csv.rfind("node_id,mean_oa,oa_1,oa_2\n0,0.5,0.5,0.5\n1,", 0) == 0);
    CHECK(csv.find("\n2,0.5,0.5,0.5\n") != std::string::npos);
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    std::getline(lines, line);
    std::getline(lines, line);
    auto center = split_csv(line);
    CHECK(parse_double(center[2]) == doctest::Approx(1.0).epsilon(0.01));
    CHECK(parse_double(center[3]) == 0.0);
    CHECK_FALSE(verify_manifest(s.dir / "out").has_value());
    auto manifest = nlohmann::json::parse(slurp(s / "out/manifest.json"));
    CHECK(manifest["parameters"]["walk"]["walks_per_source"] == 100);
    CHECK(manifest["parameters"]["walk"]["master_seed"] == 1);
}

TEST_CASE("compute is reproducible across reruns and thread counts")
{
    Scratch s("repro");
    write_network(s, make_grid(8, 8));
    std::vector<std::string> base = {"compute", "--nodes", s / "nodes.csv", "--edges", s / "edges.csv",
                                     "--steps", "12", "--walks", "300", "--seed", "42", "--quiet"};
    std::string first;
    for (std::string threads : {"1", "4", "1", "3"}) {
        auto args = base;
        args.insert(args.end(), {"--threads", threads, "--out", s / ("t" + threads)});
        REQUIRE(run(args).code == cli::kOk);
        auto csv = slurp(s / ("t" + threads + "/accessibility.csv"));
        if (first.empty()) first = csv;
        CHECK(csv == first);
    }

    // Environment fallback when --threads is absent.
    setenv("ACCESSWALK_THREADS", "2", 1);
    auto args = base;
    args.insert(args.end(), {"--out", s / "env"});
    REQUIRE(run(args).code == cli::kOk);
    unsetenv("ACCESSWALK_THREADS");
    CHECK(slurp(s / "env/accessibility.csv") == first);
    auto manifest = nlohmann::json::parse(slurp(s / "env/manifest.json"));
    CHECK(manifest["parameters"]["walk"]["threads"] == 2);

    // A tampered output is caught by the manifest.
    CHECK_FALSE(verify_manifest(s.dir / "t1").has_value());
    write_file(s / "t1/accessibility.csv", first + "x");
    CHECK(verify_manifest(s.dir / "t1").has_value());
}

TEST_CASE("compute optional outputs")
{
    Scratch s("extras");
    write_file(s / "c4.json", slurp(ACCESSWALK_TEST_DATA "/c4.json"));
    auto r = run({"compute", "--network", s / "c4.json", "--steps", "4", "--walks", "200", "--seed", "3",
                  "--geojson", "--dump-transitions", "--out", s / "out", "--quiet"});
    REQUIRE(r.code == cli::kOk);
    auto geo = nlohmann::json::parse(slurp(s / "out/accessibility.geojson"));
    CHECK(geo["type"] == "FeatureCollection");
    auto net = load_network_json_file(s / "c4.json");
    auto dump = read_transition_dump(s / "out/transitions.csv.gz", net, 4);
    CHECK(dump.tables.size() == 4);
    CHECK(dump.tables[0].step(2) == StepDistribution{{2, 1.0}});
    CHECK_FALSE(verify_manifest(s.dir / "out").has_value());
}

TEST_CASE("compute input errors")
{
    Scratch s("errors");
    write_network(s, path_graph(3));
    auto missing_seed = run({"compute", "--nodes", s / "nodes.csv", "--edges", s / "edges.csv", "--out",
                             s / "out"});
    CHECK(missing_seed.code == cli::kInvalidInput);
    CHECK(missing_seed.err.find("--seed") != std::string::npos);

    write_file(s / "bad_edges.csv", "source,target\n0,1\n1,7\n");
    auto bad = run({"compute", "--nodes", s / "nodes.csv", "--edges", s / "bad_edges.csv", "--seed",
                    "1", "--out", s / "out", "--quiet"});
    CHECK(bad.code == cli::kInvalidInput);
    CHECK(bad.err.find("unknown") != std::string::npos);

    auto no_net = run({"compute", "--seed", "1", "--out", s / "out", "--quiet"});
    CHECK(no_net.code == cli::kInvalidInput);
    CHECK(run({"compute", "--network", s / "none.json", "--seed", "1", "--out", s / "out", "--quiet"})
              .code == cli::kInvalidInput);
    CHECK(run({"bogus"}).code == cli::kInvalidInput);
    CHECK(run({"--help"}).code == cli::kOk);
}

TEST_CASE("oracle writes exact tables")
{
    Scratch s("oracle");
    write_network(s, cycle_graph(4));
    auto r = run({"oracle", "--nodes", s / "nodes.csv", "--edges", s / "edges.csv", "--max-steps", "4",
                  "--out", s / "out", "--quiet"});
    REQUIRE(r.code == cli::kOk);
    auto csv = slurp(s / "out/accessibility_exact.csv");
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "node_id,mean_oa,oa_1,oa_2,oa_3,oa_4");
    for (int u = 0; u < 4; ++u) {
        std::getline(lines, line);
        auto f = split_csv(line);
        REQUIRE(f.size() == 6);
        CHECK(parse_double(f[1]) == doctest::Approx(5.0 / 12).epsilon(1e-12));
        CHECK(parse_double(f[2]) == doctest::Approx(2.0 / 3).epsilon(1e-12));
        CHECK(parse_double(f[3]) == doctest::Approx(1.0 / 3).epsilon(1e-12));
        CHECK(parse_double(f[5]) == 0.0);
    }
    auto golden = slurp(s / "out/transitions_exact.csv");
    CHECK(golden.rfind("# " + golden_header(cycle_graph(4), 4) + "\n", 0) == 0);
    CHECK_FALSE(verify_manifest(s.dir / "out").has_value());
}

TEST_CASE("oracle refuses oversized enumerations")
{
    Scratch s("budget");
    write_network(s, make_grid(53, 53));
    auto r = run({"oracle", "--nodes", s / "nodes.csv", "--edges", s / "edges.csv", "--out", s / "out",
                  "--quiet"});
    CHECK(r.code == cli::kBudgetExceeded);
    CHECK(r.err.find("budget") != std::string::npos);
}

TEST_CASE("scenario command")
{
    Scratch s("scenario");
    write_network(s, make_grid(9, 9));
    write_file(s / "empty.json", R"({"add_edges": []})");
    auto empty = run({"scenario", "--nodes", s / "nodes.csv", "--edges", s / "edges.csv", "--scenario",
                      s / "empty.json", "--seed", "1", "--out", s / "out", "--quiet"});
    CHECK(empty.code == cli::kInvalidInput);
    CHECK(empty.err.find("scenario adds no edges") != std::string::npos);

    write_file(s / "dup.json", R"({"add_edges": [["0", "1"]]})");
    auto dup = run({"scenario", "--nodes", s / "nodes.csv", "--edges", s / "edges.csv", "--scenario",
                    s / "dup.json", "--seed", "1", "--out", s / "out", "--quiet"});
    CHECK(dup.code == cli::kInvalidInput);
    CHECK(dup.err.find("already exists") != std::string::npos);

    write_file(s / "ok.json", R"({"add_edges": [["0", "10"]], "radius": 5})");
    auto ok = run({"scenario", "--nodes", s / "nodes.csv", "--edges", s / "edges.csv", "--scenario",
                   s / "ok.json", "--radius", "2", "--steps", "8", "--walks", "200", "--seed", "1",
                   "--out", s / "out", "--quiet"});
    REQUIRE(ok.code == cli::kOk);
    auto report = nlohmann::json::parse(slurp(s / "out/report.json"));
    CHECK(report["scenario"]["radius"] == 2);
    CHECK(report["steps"] == 8);
    CHECK(report["baseline"].size() == 8);
    auto csv = slurp(s / "out/report.csv");
    CHECK(csv.rfind("h,baseline,enhanced,relative_change\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 9);
    CHECK_FALSE(verify_manifest(s.dir / "out").has_value());
}

TEST_CASE("serve reports a port that cannot be bound")
{
    Scratch s("serve");
    write_network(s, path_graph(3));
    httplib::Server blocker;
    int port = blocker.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    auto r = run({"serve", "--nodes", s / "nodes.csv", "--edges", s / "edges.csv", "--seed", "1",
                  "--steps", "2", "--walks", "10", "--port", std::to_string(port), "--quiet"});
    CHECK(r.code == cli::kInvalidInput);
    CHECK(r.err.find("cannot bind") != std::string::npos);
}
