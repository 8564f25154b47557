#include "accesswalk/accessibility.hpp"

#include "accesswalk/text.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace accesswalk {

namespace {

constexpr double kMassTolerance = 1e-9;

void check_step_range(int steps, int from, int to)
{
    if (steps < 1) throw std::invalid_argument("accessibility field needs at least one step");
    if (from < 1 || to < from || to > steps)
        throw std::invalid_argument("mean step range [" + std::to_string(from) + ", " +
                                    std::to_string(to) + "] outside [1, " +
                                    std::to_string(steps) + "]");
}

}  // namespace

double diversity_entropy(std::span<const StepEntry> distribution)
{
    double mass = 0.0;
    double entropy = 0.0;
    for (const auto& e : distribution) {
        const double p = e.probability;
        if (!(p >= 0.0 && p <= 1.0))
            throw std::domain_error("probability " + format_double(p) + " outside [0, 1]");
        mass += p;
        if (p > 0.0) entropy -= p * std::log(p);
    }
    if (mass > 1.0 + kMassTolerance)
        throw std::domain_error("distribution mass " + format_double(mass) + " exceeds 1");
    // -p ln p sums to a tiny negative only through rounding when p == 1.
    return entropy < 0.0 ? 0.0 : entropy;
}

double outward_accessibility(double entropy, std::size_t node_count, double survival,
                             bool literal)
{
    if (node_count < 2) throw std::invalid_argument("outward accessibility needs N >= 2");
    if (entropy < 0.0) throw std::domain_error("negative entropy");
    if (survival <= 0.0 && !literal) return 0.0;
    return std::exp(entropy) / static_cast<double>(node_count - 1);
}

std::vector<double> entropy_signature(const TransitionTable& table)
{
    std::vector<double> out;
    out.reserve(table.per_step.size());
    for (const auto& dist : table.per_step) out.push_back(diversity_entropy(dist));
    return out;
}

std::vector<double> accessibility_row(const TransitionTable& table, std::size_t node_count,
                                      const AccessibilityOptions& options)
{
    std::vector<double> out;
    out.reserve(table.per_step.size());
    for (int h = 1; h <= table.max_steps(); ++h) {
        const auto& dist = table.step(h);
        out.push_back(outward_accessibility(diversity_entropy(dist), node_count,
                                            table.survival(h), options.literal_eq2));
    }
    return out;
}

// AccessibilityField -------------------------------------------------------

AccessibilityField::AccessibilityField(std::size_t node_count, int max_steps, int mean_from,
                                       int mean_to)
    : steps_(max_steps), mean_from_(mean_from), mean_to_(mean_to == 0 ? max_steps : mean_to),
      present_(node_count, 0),
      oa_(node_count * static_cast<std::size_t>(std::max(max_steps, 0)), 0.0),
      entropy_(oa_.size(), 0.0), mean_(node_count, std::nan(""))
{
    check_step_range(steps_, mean_from_, mean_to_);
}

void AccessibilityField::require(NodeId node) const
{
    if (node >= node_count())
        throw std::out_of_range("node " + std::to_string(node) + " out of range");
    if (!present_[node])
        throw std::out_of_range("node " + std::to_string(node) + " not in accessibility field");
}

void AccessibilityField::set_row(NodeId node, std::vector<double> entropy, std::vector<double> oa)
{
    if (node >= node_count())
        throw std::out_of_range("node " + std::to_string(node) + " out of range");
    const auto s = static_cast<std::size_t>(steps_);
    if (oa.size() != s || entropy.size() != s)
        throw std::invalid_argument("row has " + std::to_string(oa.size()) + " steps, field has " +
                                    std::to_string(steps_));
    std::copy(oa.begin(), oa.end(), oa_.begin() + static_cast<std::ptrdiff_t>(node * s));
    std::copy(entropy.begin(), entropy.end(),
              entropy_.begin() + static_cast<std::ptrdiff_t>(node * s));
    double sum = 0.0;
    for (int h = mean_from_; h <= mean_to_; ++h) sum += oa[static_cast<std::size_t>(h - 1)];
    mean_[node] = sum / static_cast<double>(mean_to_ - mean_from_ + 1);
    present_[node] = 1;
}

bool AccessibilityField::has(NodeId node) const
{
    return node < node_count() && present_[node];
}

std::span<const double> AccessibilityField::oa(NodeId node) const
{
    require(node);
    const auto s = static_cast<std::size_t>(steps_);
    return {oa_.data() + node * s, s};
}

std::span<const double> AccessibilityField::entropy(NodeId node) const
{
    require(node);
    const auto s = static_cast<std::size_t>(steps_);
    return {entropy_.data() + node * s, s};
}

double AccessibilityField::mean_oa(NodeId node) const
{
    require(node);
    return mean_[node];
}

std::vector<double> AccessibilityField::mean_values() const
{
    return mean_;
}

NodeSet AccessibilityField::nodes() const
{
    std::vector<NodeId> ids;
    for (NodeId u = 0; u < node_count(); ++u)
        if (present_[u]) ids.push_back(u);
    return NodeSet(std::move(ids));
}

bool AccessibilityField::complete() const
{
    return std::all_of(present_.begin(), present_.end(), [](char c) { return c != 0; });
}

AccessibilityField accessibility_field(std::span<const TransitionTable> tables,
                                       std::size_t node_count,
                                       const AccessibilityOptions& options)
{
    if (tables.empty()) throw std::invalid_argument("accessibility_field: no transition tables");
    const int steps = tables.front().max_steps();
    AccessibilityField field(node_count, steps, options.mean_from, options.mean_to);
    for (const auto& t : tables) {
        if (t.max_steps() != steps)
            throw std::invalid_argument("accessibility_field: inconsistent step counts (" +
                                        std::to_string(steps) + " vs " +
                                        std::to_string(t.max_steps()) + ")");
        field.set_row(t.source, entropy_signature(t), accessibility_row(t, node_count, options));
    }
    return field;
}

std::vector<double> region_mean_curve(const AccessibilityField& field, const NodeSet& region)
{
    if (region.empty()) throw std::invalid_argument("region_mean_curve: empty region");
    std::vector<double> curve(static_cast<std::size_t>(field.max_steps()), 0.0);
    for (NodeId u : region) {
        auto row = field.oa(u);
        for (std::size_t h = 0; h < curve.size(); ++h) curve[h] += row[h];
    }
    for (auto& v : curve) v /= static_cast<double>(region.size());
    return curve;
}

AccessibilityField compute_accessibility(const StreetNetwork& net, const WalkConfig& config,
                                         const AccessibilityOptions& options,
                                         const ExecutionOptions& exec, TransitionDumpWriter* dump)
{
    config.validate();
    AccessibilityField field(net.node_count(), config.max_steps, options.mean_from,
                             options.mean_to);
    for_each_estimate(net, config, exec, [&](TransitionEstimate&& est) {
        if (dump) dump->write(est);
        field.set_row(est.source, entropy_signature(est),
                      accessibility_row(est, net.node_count(), options));
    });
    return field;
}

void write_accessibility_csv(const AccessibilityField& field, const StreetNetwork& net,
                             std::ostream& out)
{
    if (field.node_count() != net.node_count())
        throw std::invalid_argument("field and network disagree on node count");
    out << "node_id,mean_oa";
    for (int h = 1; h <= field.max_steps(); ++h) out << ",oa_" << h;
    out << '\n';
    for (NodeId u = 0; u < field.node_count(); ++u) {
        if (!field.has(u)) continue;
        std::string line = csv_field(net.label(u));
        line += ',';
        line += format_double(field.mean_oa(u));
        for (double v : field.oa(u)) {
            line += ',';
            line += format_double(v);
        }
        line += '\n';
        out << line;
    }
}

}  // namespace accesswalk
