#include "accesswalk/oracle.hpp"

#include <cmath>

namespace accesswalk {

namespace {

/// Depth-first enumeration with an explicit stack. `emit(h, node, prob)` is
/// called for every step-h position of every path; prob is the path's
/// probability up to that step.
template <class Prob, class Emit>
void enumerate_paths(const StreetNetwork& net, NodeId source, int max_steps,
                     std::uint64_t budget, Emit&& emit)
{
    if (source >= net.node_count())
        throw std::out_of_range("source " + std::to_string(source) + " out of range");
    if (max_steps < 1) throw std::invalid_argument("max_steps must be at least 1");

    struct Frame {
        NodeId node;
        Prob prob;
        std::size_t next = 0;   // next neighbor index to try
        std::uint32_t open = 0; // unvisited neighbors at this node
    };

    std::vector<char> visited(net.node_count(), 0);
    std::vector<Frame> stack;
    std::uint64_t expanded = 0;

    auto count_open = [&](NodeId u) {
        std::uint32_t open = 0;
        for (NodeId v : net.neighbors(u))
            if (!visited[v]) ++open;
        return open;
    };

    visited[source] = 1;
    stack.push_back({source, Prob(1), 0, count_open(source)});
    while (!stack.empty()) {
        Frame& top = stack.back();
        const int step = static_cast<int>(stack.size()) - 1;
        auto row = net.neighbors(top.node);
        const bool stopped = step == max_steps || top.open == 0 ||
                             (step > 0 && net.degree(top.node) == 1);
        while (!stopped && top.next < row.size() && visited[row[top.next]]) ++top.next;
        if (stopped || top.next >= row.size()) {
            visited[top.node] = 0;
            stack.pop_back();
            continue;
        }
        NodeId child = row[top.next++];
        if (++expanded > budget)
            throw BudgetExceeded("exact enumeration exceeded the path budget of " +
                                 std::to_string(budget) + " partial paths from source " + net.label(source));
        Prob p = top.prob / Prob(top.open);
        emit(step + 1, child, p);
        visited[child] = 1;
        stack.push_back({child, std::move(p), 0, 0});
        stack.back().open = count_open(child);
    }
    visited[source] = 0;
}

}  // namespace

ExactTransition exact_transitions(const StreetNetwork& net, NodeId source, int max_steps,
                                  std::uint64_t budget)
{
    const std::size_t n = net.node_count();
    std::vector<double> mass(static_cast<std::size_t>(std::max(max_steps, 0)) * n, 0.0);
    enumerate_paths<double>(net, source, max_steps, budget, [&](int h, NodeId v, double p) {
        mass[static_cast<std::size_t>(h - 1) * n + v] += p;
    });

    ExactTransition table;
    table.source = source;
    table.walks = 0;
    table.per_step.resize(static_cast<std::size_t>(max_steps));
    for (std::size_t row = 0; row < table.per_step.size(); ++row)
        for (NodeId v = 0; v < n; ++v)
            if (double p = mass[row * n + v]; p > 0.0) table.per_step[row].push_back({v, p});
    return table;
}

std::vector<std::vector<RationalEntry>> exact_transitions_rational(const StreetNetwork& net,
                                                                   NodeId source, int max_steps,
                                                                   std::uint64_t budget)
{
    const std::size_t n = net.node_count();
    std::vector<Rational> mass(static_cast<std::size_t>(std::max(max_steps, 0)) * n);
    enumerate_paths<Rational>(net, source, max_steps, budget,
                              [&](int h, NodeId v, const Rational& p) {
                                  mass[static_cast<std::size_t>(h - 1) * n + v] += p;
                              });

    std::vector<std::vector<RationalEntry>> out(static_cast<std::size_t>(max_steps));
    for (std::size_t row = 0; row < out.size(); ++row)
        for (NodeId v = 0; v < n; ++v)
            if (const auto& p = mass[row * n + v]; p != 0) out[row].push_back({v, p});
    return out;
}

double rational_discrepancy(const StreetNetwork& net, int max_steps, std::uint64_t budget)
{
    double worst = 0.0;
    for (NodeId s = 0; s < net.node_count(); ++s) {
        auto floats = exact_transitions(net, s, max_steps, budget);
        auto exact = exact_transitions_rational(net, s, max_steps, budget);
        for (int h = 1; h <= max_steps; ++h) {
            const auto& row = exact[static_cast<std::size_t>(h - 1)];
            if (row.size() != floats.step(h).size()) return 1.0;
            for (const auto& e : row)
                worst = std::max(worst, std::abs(floats.probability(h, e.target) -
                                                 e.probability.convert_to<double>()));
        }
    }
    return worst;
}

AccessibilityField exact_accessibility(const StreetNetwork& net, int max_steps,
                                       const AccessibilityOptions& options, std::uint64_t budget,
                                       const ExecutionOptions& exec, TransitionDumpWriter* dump)
{
    AccessibilityField field(net.node_count(), max_steps, options.mean_from, options.mean_to);
    const std::size_t n = net.node_count();
    ordered_parallel(
        n, exec.threads,
        [&](std::size_t i) {
            return exact_transitions(net, static_cast<NodeId>(i), max_steps, budget);
        },
        [&](std::size_t i, ExactTransition&& t) {
            if (dump) dump->write(t);
            field.set_row(t.source, entropy_signature(t), accessibility_row(t, n, options));
            if (exec.progress) exec.progress(i + 1, n);
        });
    return field;
}

std::string golden_header(const StreetNetwork& net, int max_steps)
{
    return "graph_hash=" + net.topology_hash() + " max_steps=" + std::to_string(max_steps) +
           " walks=0";
}

}  // namespace accesswalk
