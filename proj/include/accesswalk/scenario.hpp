#pragma once

#include "accesswalk/accessibility.hpp"
#include "accesswalk/network.hpp"
#include "accesswalk/walk.hpp"

#include <json.hpp>

#include <iosfwd>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

namespace accesswalk {

class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kDefaultRadius = 7;

/// Hypothetical new streets plus the block radius of the affected region.
struct Scenario {
    std::vector<std::pair<NodeId, NodeId>> added_edges;
    int radius = kDefaultRadius;
};

/// Parses `{"add_edges": [["u","v"], ...], "radius": 7}` against the node
/// labels of `net` and validates it.
Scenario parse_scenario(std::string_view text, const StreetNetwork& net);
Scenario load_scenario_file(const std::string& path, const StreetNetwork& net);

/// Throws ScenarioError for an empty edge list, unknown nodes, self-loops,
/// edges already in the network, repeated edges, or a negative radius.
void validate_scenario(const StreetNetwork& net, const Scenario& scenario);

nlohmann::json scenario_to_json(const Scenario& scenario, const StreetNetwork& net);

/// Baseline plus the scenario's edges; the baseline is not modified.
StreetNetwork apply_scenario(const StreetNetwork& net, const Scenario& scenario);

/// Nodes within `radius` blocks of any added-edge endpoint, on the baseline.
NodeSet affected_region(const StreetNetwork& net, const Scenario& scenario);

struct ComparisonReport {
    NodeSet region;
    std::vector<double> baseline;
    std::vector<double> enhanced;
    std::vector<double> relative_change;  ///< NaN where baseline is 0
};

ComparisonReport compare(const AccessibilityField& baseline, const AccessibilityField& enhanced,
                         const NodeSet& region);

struct ScenarioOutcome {
    NodeSet region;
    AccessibilityField baseline;
    AccessibilityField enhanced;
    ComparisonReport report;
};

/// Runs the paired baseline/enhanced estimation. Both runs share the master
/// seed and per-source streams. Only region sources are estimated unless
/// `full_recompute` is set. `config.sources` is ignored.
ScenarioOutcome evaluate_scenario(const StreetNetwork& net, const Scenario& scenario,
                                  const WalkConfig& config, const AccessibilityOptions& options,
                                  const ExecutionOptions& exec = {}, bool full_recompute = false);

nlohmann::json report_to_json(const ComparisonReport& report, const Scenario& scenario,
                              const StreetNetwork& net);

/// `h,baseline,enhanced,relative_change`; relative_change is empty where
/// undefined.
void write_report_csv(const ComparisonReport& report, std::ostream& out);

}  // namespace accesswalk
