#pragma once

#include "accesswalk/network.hpp"
#include "accesswalk/walk.hpp"

#include <iosfwd>
#include <span>
#include <vector>

namespace accesswalk {

/// Shannon entropy in nats of a sparse step distribution; zero entries and
/// the empty distribution contribute nothing. Throws std::domain_error when a
/// probability lies outside [0, 1] or the mass exceeds 1 by more than 1e-9.
double diversity_entropy(std::span<const StepEntry> distribution);

/// exp(entropy) / (N - 1). A step with no surviving mass scores 0 unless
/// `literal` is set, in which case the bare formula is applied.
double outward_accessibility(double entropy, std::size_t node_count, double survival,
                             bool literal = false);

struct AccessibilityOptions {
    bool literal_eq2 = false;
    int mean_from = 1;  ///< first step included in mean_oa
    int mean_to = 0;    ///< last step included in mean_oa; 0 means max_steps
};

/// Entropy E_h for h = 1..S of one source.
std::vector<double> entropy_signature(const TransitionTable& table);

/// OA_h for h = 1..S of one source.
std::vector<double> accessibility_row(const TransitionTable& table, std::size_t node_count,
                                      const AccessibilityOptions& options = {});

/// Per-node, per-step entropy and outward accessibility.
///
/// A field may be partial: only nodes whose row was set are present, and
/// lookups for absent nodes throw. The step average over [mean_from, mean_to]
/// is recomputed whenever a row is set.
class AccessibilityField {
public:
    AccessibilityField(std::size_t node_count, int max_steps, int mean_from = 1, int mean_to = 0);

    std::size_t node_count() const { return present_.size(); }
    int max_steps() const { return steps_; }
    int mean_from() const { return mean_from_; }
    int mean_to() const { return mean_to_; }

    void set_row(NodeId node, std::vector<double> entropy, std::vector<double> oa);

    bool has(NodeId node) const;
    std::span<const double> oa(NodeId node) const;
    std::span<const double> entropy(NodeId node) const;
    double mean_oa(NodeId node) const;

    /// mean_oa per node, NaN where absent.
    std::vector<double> mean_values() const;
    NodeSet nodes() const;
    bool complete() const;

private:
    void require(NodeId node) const;

    int steps_;
    int mean_from_;
    int mean_to_;
    std::vector<char> present_;
    std::vector<double> oa_;
    std::vector<double> entropy_;
    std::vector<double> mean_;
};

AccessibilityField accessibility_field(std::span<const TransitionTable> tables,
                                       std::size_t node_count,
                                       const AccessibilityOptions& options = {});

/// Per-step mean OA over the region's members.
std::vector<double> region_mean_curve(const AccessibilityField& field, const NodeSet& region);

/// Streams Monte Carlo estimates straight into a field without keeping the
/// transition tables. If `dump` is set every table is also written to it.
AccessibilityField compute_accessibility(const StreetNetwork& net, const WalkConfig& config,
                                         const AccessibilityOptions& options,
                                         const ExecutionOptions& exec = {},
                                         TransitionDumpWriter* dump = nullptr);

/// `node_id,mean_oa,oa_1,...,oa_S`, one row per present node.
void write_accessibility_csv(const AccessibilityField& field, const StreetNetwork& net,
                             std::ostream& out);

}  // namespace accesswalk
