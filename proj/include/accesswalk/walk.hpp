#pragma once

#include "accesswalk/network.hpp"
#include "accesswalk/parallel.hpp"
#include "accesswalk/rng.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace accesswalk {

/// Monte Carlo parameters for self-avoiding walk estimation.
struct WalkConfig {
    int max_steps = 60;
    std::uint32_t walks_per_source = 10000;
    std::uint64_t master_seed = 0;
    std::optional<NodeSet> sources;  ///< nullopt means every node

    void validate() const;
    NodeSet source_set(std::size_t node_count) const;
};

enum class Termination { max_steps, extremity, trapped };

const char* to_string(Termination t);

struct WalkPath {
    std::vector<NodeId> nodes;  ///< nodes[0] is the source
    Termination termination = Termination::trapped;

    int steps() const { return static_cast<int>(nodes.size()) - 1; }
};

struct StepEntry {
    NodeId target = 0;
    double probability = 0.0;

    friend bool operator==(const StepEntry&, const StepEntry&) = default;
};

/// Sparse distribution over targets, sorted by target id.
using StepDistribution = std::vector<StepEntry>;

/// Per-step transition distributions out of one source, for h = 1..max_steps.
///
/// Shared by the Monte Carlo estimator (walks = M) and the exact oracle
/// (walks = 0). Steps a walk never reached carry an empty distribution.
struct TransitionTable {
    NodeId source = 0;
    std::uint32_t walks = 0;
    std::vector<StepDistribution> per_step;

    int max_steps() const { return static_cast<int>(per_step.size()); }
    const StepDistribution& step(int h) const;
    double survival(int h) const;
    double probability(int h, NodeId target) const;

    friend bool operator==(const TransitionTable&, const TransitionTable&) = default;
};

using TransitionEstimate = TransitionTable;

/// Draws self-avoiding walks on one network. Holds reusable scratch, so keep
/// one per thread.
class WalkSampler {
public:
    explicit WalkSampler(const StreetNetwork& net);

    WalkPath sample(NodeId source, int max_steps, RandomStream& rng);

    /// Calls on_step(h, node) for every step taken; returns the stop reason.
    template <class OnStep>
    Termination walk(NodeId source, int max_steps, RandomStream& rng, OnStep&& on_step);

private:
    void next_stamp();

    const StreetNetwork* net_;
    std::vector<std::uint32_t> stamp_;
    std::uint32_t current_ = 0;
    std::vector<NodeId> choices_;
};

template <class OnStep>
Termination WalkSampler::walk(NodeId source, int max_steps, RandomStream& rng, OnStep&& on_step)
{
    next_stamp();
    stamp_[source] = current_;
    NodeId here = source;
    for (int h = 1; h <= max_steps; ++h) {
        std::size_t open = 0;
        for (NodeId v : net_->neighbors(here))
            if (stamp_[v] != current_) choices_[open++] = v;
        if (open == 0) return Termination::trapped;
        here = open == 1 ? choices_[0] : choices_[rng.below(static_cast<std::uint32_t>(open))];
        stamp_[here] = current_;
        on_step(h, here);
        if (net_->degree(here) == 1) return Termination::extremity;
    }
    return Termination::max_steps;
}

WalkPath sample_walk(const StreetNetwork& net, NodeId source, int max_steps, RandomStream& rng);

/// Random stream used for every walk out of `source`.
RandomStream source_stream(std::uint64_t master_seed, NodeId source);

TransitionEstimate estimate_transitions(const StreetNetwork& net, NodeId source,
                                        const WalkConfig& config);

struct ExecutionOptions {
    unsigned threads = 1;  ///< 0 selects the hardware concurrency
    /// Called on the calling thread after each source completes.
    std::function<void(std::size_t done, std::size_t total)> progress;
};

/// Estimates every requested source, handing results to `consume` in
/// ascending source order on the calling thread. Output is independent of the
/// thread count.
void for_each_estimate(const StreetNetwork& net, const WalkConfig& config,
                       const ExecutionOptions& exec,
                       const std::function<void(TransitionEstimate&&)>& consume);

std::vector<TransitionEstimate> estimate_all(const StreetNetwork& net, const WalkConfig& config,
                                             const ExecutionOptions& exec = {});

// Transition dump ---------------------------------------------------------

/// Writes `source,h,target,probability` rows; gzip-compressed when the path
/// ends in ".gz". An optional header line is written as "# <text>".
class TransitionDumpWriter {
public:
    TransitionDumpWriter(const std::string& path, const StreetNetwork& net,
                         std::optional<std::string> header = std::nullopt);
    ~TransitionDumpWriter();
    TransitionDumpWriter(const TransitionDumpWriter&) = delete;
    TransitionDumpWriter& operator=(const TransitionDumpWriter&) = delete;

    void write(const TransitionTable& table);
    void close();

private:
    void put(const std::string& text);

    const StreetNetwork* net_;
    void* file_ = nullptr;
};

struct TransitionDump {
    std::map<std::string, std::string> header;  ///< key=value pairs of the "#" line
    std::vector<TransitionTable> tables;        ///< sorted by source
};

/// Reads a dump written by TransitionDumpWriter (plain or gzip).
TransitionDump read_transition_dump(const std::string& path, const StreetNetwork& net,
                                    int max_steps);

}  // namespace accesswalk
