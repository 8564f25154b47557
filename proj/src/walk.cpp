#include "accesswalk/walk.hpp"

#include <algorithm>
#include <limits>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace accesswalk {

RandomStream::RandomStream(std::uint64_t master_seed, std::uint64_t stream_id)
{
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                      static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(stream_id),
                      static_cast<std::uint32_t>(stream_id >> 32), 0x5341u /* "SA" */};
    engine_.seed(seq);
}

void WalkConfig::validate() const
{
    if (max_steps < 1) throw std::invalid_argument("max_steps must be at least 1");
    if (walks_per_source < 1) throw std::invalid_argument("walks_per_source must be at least 1");
}

NodeSet WalkConfig::source_set(std::size_t node_count) const
{
    if (!sources) return NodeSet::all(node_count);
    for (NodeId s : *sources)
        if (s >= node_count)
            throw std::out_of_range("source " + std::to_string(s) + " out of range");
    return *sources;
}

const char* to_string(Termination t)
{
    switch (t) {
    case Termination::max_steps: return "max_steps";
    case Termination::extremity: return "extremity";
    case Termination::trapped: return "trapped";
    }
    return "?";
}

const StepDistribution& TransitionTable::step(int h) const
{
    if (h < 1 || h > max_steps())
        throw std::out_of_range("step " + std::to_string(h) + " outside [1, " +
                                std::to_string(max_steps()) + "]");
    return per_step[static_cast<std::size_t>(h - 1)];
}

double TransitionTable::survival(int h) const
{
    double mass = 0.0;
    for (const auto& e : step(h)) mass += e.probability;
    return mass;
}

double TransitionTable::probability(int h, NodeId target) const
{
    const auto& dist = step(h);
    auto it = std::lower_bound(dist.begin(), dist.end(), target,
                               [](const StepEntry& e, NodeId t) { return e.target < t; });
    return it != dist.end() && it->target == target ? it->probability : 0.0;
}

WalkSampler::WalkSampler(const StreetNetwork& net)
    : net_(&net), stamp_(net.node_count(), 0)
{
    std::size_t max_degree = 0;
    for (NodeId u = 0; u < net.node_count(); ++u) max_degree = std::max(max_degree, net.degree(u));
    choices_.resize(max_degree);
}

void WalkSampler::next_stamp()
{
    if (current_ == std::numeric_limits<std::uint32_t>::max()) {
        std::fill(stamp_.begin(), stamp_.end(), 0);
        current_ = 0;
    }
    ++current_;
}

WalkPath WalkSampler::sample(NodeId source, int max_steps, RandomStream& rng)
{
    if (source >= net_->node_count())
        throw std::out_of_range("source " + std::to_string(source) + " out of range");
    WalkPath path;
    path.nodes.push_back(source);
    path.termination =
        walk(source, max_steps, rng, [&](int, NodeId v) { path.nodes.push_back(v); });
    return path;
}

WalkPath sample_walk(const StreetNetwork& net, NodeId source, int max_steps, RandomStream& rng)
{
    WalkSampler sampler(net);
    return sampler.sample(source, max_steps, rng);
}

RandomStream source_stream(std::uint64_t master_seed, NodeId source)
{
    return RandomStream(master_seed, source);
}

namespace {

/// Per-thread counting scratch: dense counters per (step, target) plus the
/// list of targets touched at each step, so reset and sparsification only
/// visit nonzero cells.
class Estimator {
public:
    Estimator(const StreetNetwork& net, int max_steps)
        : net_(net), sampler_(net), steps_(max_steps),
          counts_(static_cast<std::size_t>(max_steps) * net.node_count(), 0),
          touched_(static_cast<std::size_t>(max_steps))
    {
    }

    TransitionEstimate run(NodeId source, std::uint32_t walks, std::uint64_t seed)
    {
        if (source >= net_.node_count())
            throw std::out_of_range("source " + std::to_string(source) + " out of range");
        RandomStream rng = source_stream(seed, source);
        const std::size_t n = net_.node_count();
        for (std::uint32_t w = 0; w < walks; ++w) {
            sampler_.walk(source, steps_, rng, [&](int h, NodeId v) {
                auto row = static_cast<std::size_t>(h - 1);
                if (counts_[row * n + v]++ == 0) touched_[row].push_back(v);
            });
        }

        TransitionEstimate est;
        est.source = source;
        est.walks = walks;
        est.per_step.resize(static_cast<std::size_t>(steps_));
        const double inv = 1.0 / static_cast<double>(walks);
        for (std::size_t row = 0; row < touched_.size(); ++row) {
            auto& targets = touched_[row];
            std::sort(targets.begin(), targets.end());
            auto& dist = est.per_step[row];
            dist.reserve(targets.size());
            for (NodeId v : targets) {
                auto& c = counts_[row * n + v];
                dist.push_back({v, static_cast<double>(c) * inv});
                c = 0;
            }
            targets.clear();
        }
        return est;
    }

private:
    const StreetNetwork& net_;
    WalkSampler sampler_;
    int steps_;
    std::vector<std::uint32_t> counts_;
    std::vector<std::vector<NodeId>> touched_;
};

}  // namespace

TransitionEstimate estimate_transitions(const StreetNetwork& net, NodeId source,
                                        const WalkConfig& config)
{
    config.validate();
    Estimator estimator(net, config.max_steps);
    return estimator.run(source, config.walks_per_source, config.master_seed);
}

void for_each_estimate(const StreetNetwork& net, const WalkConfig& config,
                       const ExecutionOptions& exec,
                       const std::function<void(TransitionEstimate&&)>& consume)
{
    config.validate();
    const NodeSet sources = config.source_set(net.node_count());
    const auto ids = sources.ids();
    const unsigned threads = std::min<std::size_t>(resolve_threads(exec.threads),
                                                   std::max<std::size_t>(ids.size(), 1));

    // One estimator per worker thread, created lazily on first use.
    std::mutex pool_mutex;
    std::vector<std::unique_ptr<Estimator>> pool;
    auto task = [&](std::size_t i) {
        std::unique_ptr<Estimator> mine;
        {
            std::lock_guard lock(pool_mutex);
            if (!pool.empty()) {
                mine = std::move(pool.back());
                pool.pop_back();
            }
        }
        if (!mine) mine = std::make_unique<Estimator>(net, config.max_steps);
        TransitionEstimate est = mine->run(ids[i], config.walks_per_source, config.master_seed);
        std::lock_guard lock(pool_mutex);
        pool.push_back(std::move(mine));
        return est;
    };
    auto deliver = [&](std::size_t i, TransitionEstimate&& est) {
        consume(std::move(est));
        if (exec.progress) exec.progress(i + 1, ids.size());
    };
    ordered_parallel(ids.size(), threads, task, deliver);
}

std::vector<TransitionEstimate> estimate_all(const StreetNetwork& net, const WalkConfig& config,
                                             const ExecutionOptions& exec)
{
    std::vector<TransitionEstimate> out;
    for_each_estimate(net, config, exec,
                      [&](TransitionEstimate&& est) { out.push_back(std::move(est)); });
    return out;
}

}  // namespace accesswalk
