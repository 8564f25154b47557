#include "accesswalk/scenario.hpp"

#include "accesswalk/text.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

namespace accesswalk {

using nlohmann::json;

namespace {

std::string pair_text(const StreetNetwork& net, NodeId u, NodeId v)
{
    return "('" + net.label(u) + "', '" + net.label(v) + "')";
}

NodeId resolve(const json& id, const StreetNetwork& net, const std::string& where)
{
    std::string label;
    if (id.is_string())
        label = id.get<std::string>();
    else if (id.is_number_integer())
        label = std::to_string(id.get<long long>());
    else
        throw ScenarioError(where + ": node id must be a string or integer");
    auto found = net.find(label);
    if (!found) throw ScenarioError(where + ": unknown node id '" + label + "'");
    return *found;
}

}  // namespace

Scenario parse_scenario(std::string_view text, const StreetNetwork& net)
{
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw ScenarioError("scenario is not valid JSON");
    if (!doc.is_object()) throw ScenarioError("scenario must be a JSON object");
    if (!doc.contains("add_edges") || !doc["add_edges"].is_array())
        throw ScenarioError("scenario needs an 'add_edges' array");

    Scenario scenario;
    const auto& edges = doc["add_edges"];
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const std::string where = "add_edges[" + std::to_string(i) + "]";
        if (!edges[i].is_array() || edges[i].size() != 2)
            throw ScenarioError(where + ": expected [u, v]");
        scenario.added_edges.emplace_back(resolve(edges[i][0], net, where),
                                          resolve(edges[i][1], net, where));
    }
    if (doc.contains("radius")) {
        if (!doc["radius"].is_number_integer()) throw ScenarioError("radius must be an integer");
        scenario.radius = doc["radius"].get<int>();
    }
    validate_scenario(net, scenario);
    return scenario;
}

Scenario load_scenario_file(const std::string& path, const StreetNetwork& net)
{
    std::ifstream in(path);
    if (!in) throw ScenarioError("cannot open scenario file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), net);
}

void validate_scenario(const StreetNetwork& net, const Scenario& scenario)
{
    if (scenario.added_edges.empty()) throw ScenarioError("scenario adds no edges");
    if (scenario.radius < 0) throw ScenarioError("radius must be non-negative");
    std::set<std::pair<NodeId, NodeId>> seen;
    for (auto [u, v] : scenario.added_edges) {
        if (u >= net.node_count() || v >= net.node_count())
            throw ScenarioError("unknown node id " + std::to_string(std::max(u, v)));
        if (u == v) throw ScenarioError("self-loop on node '" + net.label(u) + "'");
        if (net.has_edge(u, v))
            throw ScenarioError("edge " + pair_text(net, u, v) + " already exists");
        if (!seen.emplace(std::min(u, v), std::max(u, v)).second)
            throw ScenarioError("edge " + pair_text(net, u, v) + " listed twice");
    }
}

json scenario_to_json(const Scenario& scenario, const StreetNetwork& net)
{
    json edges = json::array();
    for (auto [u, v] : scenario.added_edges) edges.push_back({net.label(u), net.label(v)});
    return {{"add_edges", std::move(edges)}, {"radius", scenario.radius}};
}

StreetNetwork apply_scenario(const StreetNetwork& net, const Scenario& scenario)
{
    validate_scenario(net, scenario);
    NetworkBuilder builder;
    for (NodeId u = 0; u < net.node_count(); ++u)
        builder.add_node(net.label(u), net.has_coordinates()
                                           ? std::optional<Point>(net.position(u))
                                           : std::nullopt);
    for (auto [u, v] : net.edges()) builder.add_edge(u, v);
    for (auto [u, v] : scenario.added_edges) builder.add_edge(u, v, "scenario");
    return std::move(builder).build();
}

NodeSet affected_region(const StreetNetwork& net, const Scenario& scenario)
{
    validate_scenario(net, scenario);
    NodeSet endpoints;
    for (auto [u, v] : scenario.added_edges) {
        endpoints.insert(u);
        endpoints.insert(v);
    }
    return neighborhood(net, endpoints, scenario.radius);
}

ComparisonReport compare(const AccessibilityField& baseline, const AccessibilityField& enhanced,
                         const NodeSet& region)
{
    if (baseline.max_steps() != enhanced.max_steps())
        throw std::invalid_argument("compare: fields have different step counts");
    if (baseline.node_count() != enhanced.node_count())
        throw std::invalid_argument("compare: fields have different node counts");
    if (region.empty()) throw std::invalid_argument("compare: empty region");

    ComparisonReport report;
    report.region = region;
    report.baseline = region_mean_curve(baseline, region);
    report.enhanced = region_mean_curve(enhanced, region);
    report.relative_change.resize(report.baseline.size());
    for (std::size_t h = 0; h < report.baseline.size(); ++h) {
        const double b = report.baseline[h];
        report.relative_change[h] = b > 0.0 ? (report.enhanced[h] - b) / b : std::nan("");
    }
    return report;
}

ScenarioOutcome evaluate_scenario(const StreetNetwork& net, const Scenario& scenario,
                                  const WalkConfig& config, const AccessibilityOptions& options,
                                  const ExecutionOptions& exec, bool full_recompute)
{
    config.validate();
    NodeSet region = affected_region(net, scenario);
    StreetNetwork enhanced_net = apply_scenario(net, scenario);

    WalkConfig run = config;
    run.sources = full_recompute ? NodeSet::all(net.node_count()) : region;

    // Progress spans both runs.
    const std::size_t per_run = run.sources->size();
    ExecutionOptions first = exec;
    ExecutionOptions second = exec;
    if (exec.progress) {
        first.progress = [&](std::size_t done, std::size_t) { exec.progress(done, 2 * per_run); };
        second.progress = [&](std::size_t done, std::size_t) {
            exec.progress(per_run + done, 2 * per_run);
        };
    }

    AccessibilityField base = compute_accessibility(net, run, options, first);
    AccessibilityField enh = compute_accessibility(enhanced_net, run, options, second);
    ComparisonReport report = compare(base, enh, region);
    return {std::move(region), std::move(base), std::move(enh), std::move(report)};
}

json report_to_json(const ComparisonReport& report, const Scenario& scenario,
                    const StreetNetwork& net)
{
    json region = json::array();
    for (NodeId u : report.region) region.push_back(net.label(u));
    json relative = json::array();
    for (double v : report.relative_change)
        relative.push_back(std::isnan(v) ? json(nullptr) : json(v));
    return {{"steps", report.baseline.size()},
            {"scenario", scenario_to_json(scenario, net)},
            {"region", std::move(region)},
            {"baseline", report.baseline},
            {"enhanced", report.enhanced},
            {"relative_change", std::move(relative)}};
}

void write_report_csv(const ComparisonReport& report, std::ostream& out)
{
    out << "h,baseline,enhanced,relative_change\n";
    for (std::size_t h = 0; h < report.baseline.size(); ++h) {
        out << (h + 1) << ',' << format_double(report.baseline[h]) << ','
            << format_double(report.enhanced[h]) << ',';
        if (!std::isnan(report.relative_change[h])) out << format_double(report.relative_change[h]);
        out << '\n';
    }
}

}  // namespace accesswalk
