#include "cli.hpp"

#include "accesswalk/accessibility.hpp"
#include "accesswalk/manifest.hpp"
#include "accesswalk/network.hpp"
#include "accesswalk/oracle.hpp"
#include "accesswalk/scenario.hpp"
#include "accesswalk/service.hpp"
#include "accesswalk/walk.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace accesswalk::cli {

namespace fs = std::filesystem;

namespace {

struct NetworkArgs {
    std::string nodes;
    std::string edges;
    std::string network;

    void add_to(CLI::App& cmd)
    {
        auto* n = cmd.add_option("--nodes", nodes, "node CSV (id[,x,y])");
        auto* e = cmd.add_option("--edges", edges, "edge CSV (source,target)");
        auto* j = cmd.add_option("--network", network, "single-file JSON network");
        n->needs(e);
        e->needs(n);
        j->excludes(n)->excludes(e);
    }

    std::vector<std::string> paths() const
    {
        if (!network.empty()) return {network};
        return {nodes, edges};
    }

    StreetNetwork load(bool quiet) const
    {
        if (network.empty() && nodes.empty())
            throw NetworkError("no network given (use --nodes/--edges or --network)");
        StreetNetwork net = network.empty() ? load_network_files(nodes, edges)
                                            : load_network_json_file(network);
        if (!quiet) {
            std::cerr << "loaded network: N=" << net.node_count() << " E=" << net.edge_count()
                      << '\n';
            if (auto c = net.component_count(); c > 1)
                std::cerr << "warning: network has " << c
                          << " connected components; walks never cross between them\n";
        }
        return net;
    }
};

struct WalkArgs {
    int steps = 60;
    std::uint32_t walks = 10000;
    std::optional<std::uint64_t> seed;
    unsigned threads = 0;
    bool threads_given = false;
    bool literal_eq2 = false;
    int mean_from = 1;
    int mean_to = 0;

    void add_to(CLI::App& cmd)
    {
        cmd.add_option("--steps", steps, "maximum walk length S")->capture_default_str()
            ->check(CLI::PositiveNumber);
        cmd.add_option("--walks", walks, "walks per source M")->capture_default_str()
            ->check(CLI::PositiveNumber);
        cmd.add_option("--seed", seed, "master seed (required)")->required();
        cmd.add_option_function<unsigned>(
            "--threads", [this](unsigned t) { threads = t, threads_given = true; },
            "worker threads (0 = all cores; env ACCESSWALK_THREADS)");
        cmd.add_flag("--literal-eq2", literal_eq2,
                     "score zero-survival steps as exp(0)/(N-1) instead of 0");
        cmd.add_option("--mean-from", mean_from, "first step in the mean_oa average")
            ->capture_default_str();
        cmd.add_option("--mean-to", mean_to, "last step in the mean_oa average (0 = S)")
            ->capture_default_str();
    }

    WalkConfig config() const
    {
        WalkConfig c;
        c.max_steps = steps;
        c.walks_per_source = walks;
        c.master_seed = *seed;
        return c;
    }

    AccessibilityOptions options() const { return {literal_eq2, mean_from, mean_to}; }

    unsigned resolved_threads() const
    {
        if (threads_given) return threads;
        if (const char* env = std::getenv("ACCESSWALK_THREADS"); env && *env) {
            try {
                return static_cast<unsigned>(std::stoul(env));
            } catch (const std::exception&) {
                throw std::invalid_argument(std::string("ACCESSWALK_THREADS is not a number: ") + env);
            }
        }
        return 0;
    }

    nlohmann::json json() const
    {
        auto j = walk_config_json(config());
        j["literal_eq2"] = literal_eq2;
        j["mean_steps"] = {mean_from, mean_to == 0 ? steps : mean_to};
        j["threads"] = resolved_threads();
        return j;
    }
};

/// Progress line on stderr, redrawn at most once per percent.
ExecutionOptions execution(unsigned threads, bool quiet, std::string label)
{
    ExecutionOptions exec;
    exec.threads = threads;
    if (!quiet) {
        exec.progress = [label = std::move(label), last = -1](std::size_t done,
                                                              std::size_t total) mutable {
            int pct = total == 0 ? 100 : static_cast<int>(100 * done / total);
            if (pct == last && done != total) return;
            last = pct;
            std::cerr << '\r' << label << ": " << done << '/' << total << " sources" << std::flush;
            if (done == total) std::cerr << '\n';
        };
    }
    return exec;
}

void prepare_out_dir(const std::string& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
        throw std::runtime_error("cannot create output directory " + dir);
}

std::ofstream open_out(const std::string& dir, const std::string& name)
{
    std::ofstream out(fs::path(dir) / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (fs::path(dir) / name).string());
    return out;
}

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// compute ------------------------------------------------------------------

struct ComputeArgs {
    NetworkArgs net;
    WalkArgs walk;
    std::string out;
    bool geojson = false;
    bool dump = false;
    bool quiet = false;
};

int cmd_compute(const ComputeArgs& a)
{
    auto start = std::chrono::steady_clock::now();
    StreetNetwork net = a.net.load(a.quiet);
    WalkConfig config = a.walk.config();
    prepare_out_dir(a.out);

    RunManifest manifest;
    manifest.command = "compute";
    manifest.inputs = a.net.paths();
    manifest.parameters = {{"walk", a.walk.json()}};

    std::optional<TransitionDumpWriter> dump;
    if (a.dump) {
        dump.emplace((fs::path(a.out) / "transitions.csv.gz").string(), net);
        manifest.outputs.push_back("transitions.csv.gz");
    }
    AccessibilityField field =
        compute_accessibility(net, config, a.walk.options(),
                              execution(a.walk.resolved_threads(), a.quiet, "compute"),
                              dump ? &*dump : nullptr);
    if (dump) dump->close();

    {
        auto out = open_out(a.out, "accessibility.csv");
        write_accessibility_csv(field, net, out);
    }
    manifest.outputs.push_back("accessibility.csv");
    if (a.geojson) {
        auto out = open_out(a.out, "accessibility.geojson");
        write_geojson(net, out, field.mean_values());
        manifest.outputs.push_back("accessibility.geojson");
    }
    manifest.wall_seconds = seconds_since(start);
    write_manifest(a.out, manifest);
    return kOk;
}

// oracle -------------------------------------------------------------------

struct OracleArgs {
    NetworkArgs net;
    int max_steps = 60;
    std::uint64_t budget = kDefaultPathBudget;
    std::string out;
    bool literal_eq2 = false;
    unsigned threads = 1;
    bool quiet = false;
};

int cmd_oracle(const OracleArgs& a)
{
    auto start = std::chrono::steady_clock::now();
    StreetNetwork net = a.net.load(a.quiet);
    prepare_out_dir(a.out);

    AccessibilityOptions options;
    options.literal_eq2 = a.literal_eq2;
    const std::string golden = (fs::path(a.out) / "transitions_exact.csv").string();
    AccessibilityField field(net.node_count(), a.max_steps);
    {
        TransitionDumpWriter dump(golden, net, golden_header(net, a.max_steps));
        field = exact_accessibility(net, a.max_steps, options, a.budget,
                                    execution(a.threads, a.quiet, "oracle"), &dump);
        dump.close();
    }

    nlohmann::json params = {{"max_steps", a.max_steps},
                             {"budget", a.budget},
                             {"literal_eq2", a.literal_eq2}};
    if (net.node_count() <= kRationalCheckMaxNodes) {
        double gap = rational_discrepancy(net, a.max_steps, a.budget);
        params["rational_check_max_error"] = gap;
        if (gap > 1e-12) {
            std::cerr << "error: float and rational enumeration disagree by " << gap << '\n';
            return kInternalFailure;
        }
    }

    {
        auto out = open_out(a.out, "accessibility_exact.csv");
        write_accessibility_csv(field, net, out);
    }
    RunManifest manifest;
    manifest.command = "oracle";
    manifest.inputs = a.net.paths();
    manifest.outputs = {"transitions_exact.csv", "accessibility_exact.csv"};
    manifest.parameters = std::move(params);
    manifest.wall_seconds = seconds_since(start);
    write_manifest(a.out, manifest);
    return kOk;
}

// scenario -----------------------------------------------------------------

struct ScenarioArgs {
    NetworkArgs net;
    WalkArgs walk;
    std::string scenario;
    std::optional<int> radius;
    std::string out;
    bool full_recompute = false;
    bool quiet = false;
};

int cmd_scenario(const ScenarioArgs& a)
{
    auto start = std::chrono::steady_clock::now();
    StreetNetwork net = a.net.load(a.quiet);
    Scenario scenario = load_scenario_file(a.scenario, net);
    if (a.radius) {
        scenario.radius = *a.radius;
        validate_scenario(net, scenario);
    }
    prepare_out_dir(a.out);

    ScenarioOutcome outcome =
        evaluate_scenario(net, scenario, a.walk.config(), a.walk.options(),
                          execution(a.walk.resolved_threads(), a.quiet, "scenario"),
                          a.full_recompute);
    {
        auto out = open_out(a.out, "report.json");
        out << report_to_json(outcome.report, scenario, net).dump(2) << '\n';
    }
    {
        auto out = open_out(a.out, "report.csv");
        write_report_csv(outcome.report, out);
    }
    RunManifest manifest;
    manifest.command = "scenario";
    manifest.inputs = a.net.paths();
    manifest.inputs.push_back(a.scenario);
    manifest.outputs = {"report.json", "report.csv"};
    manifest.parameters = {{"walk", a.walk.json()},
                           {"radius", scenario.radius},
                           {"full_recompute", a.full_recompute}};
    manifest.wall_seconds = seconds_since(start);
    write_manifest(a.out, manifest);
    return kOk;
}

// serve --------------------------------------------------------------------

struct ServeArgs {
    NetworkArgs net;
    WalkArgs walk;
    std::string host = "127.0.0.1";
    int port = 8080;
    bool precompute = false;
    bool full_recompute = false;
    bool quiet = false;
};

int cmd_serve(const ServeArgs& a)
{
    StreetNetwork net = a.net.load(a.quiet);
    ServiceConfig config;
    config.walk = a.walk.config();
    config.options = a.walk.options();
    config.threads = a.walk.resolved_threads();
    config.full_recompute = a.full_recompute;

    Service service(config);
    service.publish_network(std::move(net));
    if (a.precompute) {
        if (!a.quiet) std::cerr << "computing baseline accessibility...\n";
        service.compute_baseline();
    } else {
        service.queue_baseline();
    }
    if (!service.bind(a.host, a.port)) {
        std::cerr << "error: cannot bind " << a.host << ':' << a.port << '\n';
        return kInvalidInput;
    }
    if (!a.quiet) std::cerr << "serving on http://" << a.host << ':' << a.port << '\n';
    return service.listen() ? kOk : kInternalFailure;
}

}  // namespace

int run(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args);
}

int run(const std::vector<std::string>& args)
{
    CLI::App app{"Self-avoiding walk accessibility for street networks", "accesswalk"};
    app.set_version_flag("--version", ACCESSWALK_VERSION);
    app.require_subcommand(1);

    ComputeArgs compute;
    auto* c = app.add_subcommand("compute", "estimate outward accessibility for every node");
    compute.net.add_to(*c);
    compute.walk.add_to(*c);
    c->add_option("--out", compute.out, "output directory")->required();
    c->add_flag("--geojson", compute.geojson, "also write accessibility.geojson");
    c->add_flag("--dump-transitions", compute.dump, "also write transitions.csv.gz");
    c->add_flag("--quiet", compute.quiet, "no progress output");

    OracleArgs oracle;
    auto* o = app.add_subcommand("oracle", "exact accessibility by exhaustive path enumeration");
    oracle.net.add_to(*o);
    o->add_option("--max-steps", oracle.max_steps, "maximum walk length S")
        ->capture_default_str()->check(CLI::PositiveNumber);
    o->add_option("--budget", oracle.budget, "partial-path budget per source")
        ->capture_default_str();
    o->add_option("--out", oracle.out, "output directory")->required();
    o->add_option("--threads", oracle.threads, "worker threads")->capture_default_str();
    o->add_flag("--literal-eq2", oracle.literal_eq2, "literal zero-survival scoring");
    o->add_flag("--quiet", oracle.quiet, "no progress output");

    ScenarioArgs scen;
    auto* s = app.add_subcommand("scenario", "compare accessibility before and after new edges");
    scen.net.add_to(*s);
    scen.walk.add_to(*s);
    s->add_option("--scenario", scen.scenario, "scenario JSON")->required();
    s->add_option("--radius", scen.radius, "affected-region radius in blocks (default: file, else 7)");
    s->add_option("--out", scen.out, "output directory")->required();
    s->add_flag("--full-recompute", scen.full_recompute, "estimate every source, not just the region");
    s->add_flag("--quiet", scen.quiet, "no progress output");

    ServeArgs serve;
    auto* v = app.add_subcommand("serve", "HTTP API for the planner UI");
    serve.net.add_to(*v);
    serve.walk.add_to(*v);
    v->add_option("--host", serve.host, "listen address")->capture_default_str();
    v->add_option("--port", serve.port, "listen port")->capture_default_str();
    v->add_flag("--precompute", serve.precompute, "compute the baseline before serving");
    v->add_flag("--full-recompute", serve.full_recompute, "scenario jobs estimate every source");
    v->add_flag("--quiet", serve.quiet, "no progress output");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kInvalidInput;
    }

    try {
        if (*c) return cmd_compute(compute);
        if (*o) return cmd_oracle(oracle);
        if (*s) return cmd_scenario(scen);
        if (*v) return cmd_serve(serve);
    } catch (const BudgetExceeded& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBudgetExceeded;
    } catch (const NetworkError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const ScenarioError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kInternalFailure;
    }
    return kInternalFailure;
}

}  // namespace accesswalk::cli
