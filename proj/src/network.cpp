#include "accesswalk/network.hpp"

#include "accesswalk/text.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace accesswalk {

namespace {

std::string with_context(std::string_view context, const std::string& message)
{
    if (context.empty()) return message;
    return std::string(context) + ": " + message;
}

}  // namespace

// NodeSet -----------------------------------------------------------------

NodeSet::NodeSet(std::initializer_list<NodeId> ids) : NodeSet(std::vector<NodeId>(ids)) {}

NodeSet::NodeSet(std::vector<NodeId> ids) : ids_(std::move(ids))
{
    std::sort(ids_.begin(), ids_.end());
    ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
}

NodeSet NodeSet::all(std::size_t node_count)
{
    std::vector<NodeId> ids(node_count);
    std::iota(ids.begin(), ids.end(), NodeId{0});
    NodeSet set;
    set.ids_ = std::move(ids);
    return set;
}

bool NodeSet::contains(NodeId id) const
{
    return std::binary_search(ids_.begin(), ids_.end(), id);
}

void NodeSet::insert(NodeId id)
{
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id) ids_.insert(it, id);
}

bool NodeSet::is_subset_of(const NodeSet& other) const
{
    return std::includes(other.ids_.begin(), other.ids_.end(), ids_.begin(), ids_.end());
}

// StreetNetwork -----------------------------------------------------------

void StreetNetwork::check(NodeId u) const
{
    if (u >= node_count())
        throw std::out_of_range("node id " + std::to_string(u) + " out of range (N=" +
                                std::to_string(node_count()) + ")");
}

std::span<const NodeId> StreetNetwork::neighbors(NodeId u) const
{
    check(u);
    return {targets_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
}

std::size_t StreetNetwork::degree(NodeId u) const
{
    check(u);
    return offsets_[u + 1] - offsets_[u];
}

bool StreetNetwork::has_edge(NodeId u, NodeId v) const
{
    auto row = neighbors(u);
    check(v);
    return std::binary_search(row.begin(), row.end(), v);
}

std::vector<std::pair<NodeId, NodeId>> StreetNetwork::edges() const
{
    std::vector<std::pair<NodeId, NodeId>> out;
    out.reserve(edge_count());
    for (NodeId u = 0; u < node_count(); ++u)
        for (NodeId v : neighbors(u))
            if (u < v) out.emplace_back(u, v);
    return out;
}

const std::string& StreetNetwork::label(NodeId u) const
{
    check(u);
    return labels_[u];
}

std::optional<NodeId> StreetNetwork::find(std::string_view label) const
{
    auto it = index_.find(std::string(label));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

const Point& StreetNetwork::position(NodeId u) const
{
    check(u);
    if (!has_coordinates()) throw std::logic_error("network has no coordinates");
    return coordinates_[u];
}

std::size_t StreetNetwork::component_count() const
{
    std::vector<char> seen(node_count(), 0);
    std::vector<NodeId> stack;
    std::size_t components = 0;
    for (NodeId s = 0; s < node_count(); ++s) {
        if (seen[s]) continue;
        ++components;
        seen[s] = 1;
        stack.push_back(s);
        while (!stack.empty()) {
            NodeId u = stack.back();
            stack.pop_back();
            for (NodeId v : neighbors(u))
                if (!seen[v]) {
                    seen[v] = 1;
                    stack.push_back(v);
                }
        }
    }
    return components;
}

std::string StreetNetwork::topology_hash() const
{
    std::string canonical = std::to_string(node_count()) + "\n";
    for (const auto& l : labels_) canonical += l + "\n";
    for (auto [u, v] : edges()) canonical += std::to_string(u) + "," + std::to_string(v) + "\n";
    return sha256_hex(canonical);
}

// NetworkBuilder ----------------------------------------------------------

NodeId NetworkBuilder::add_node(std::string label, std::optional<Point> position,
                                std::string_view context)
{
    if (label.empty()) throw NetworkError(with_context(context, "empty node id"));
    if (index_.contains(label))
        throw NetworkError(with_context(context, "duplicate node id '" + label + "'"));
    auto id = static_cast<NodeId>(labels_.size());
    index_.emplace(label, id);
    labels_.push_back(std::move(label));
    positions_.push_back(position);
    adjacency_.emplace_back();
    return id;
}

std::optional<NodeId> NetworkBuilder::find(std::string_view label) const
{
    auto it = index_.find(std::string(label));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

void NetworkBuilder::add_edge(std::string_view u, std::string_view v, std::string_view context)
{
    auto a = find(u);
    if (!a) throw NetworkError(with_context(context, "unknown node id '" + std::string(u) + "'"));
    auto b = find(v);
    if (!b) throw NetworkError(with_context(context, "unknown node id '" + std::string(v) + "'"));
    add_edge(*a, *b, context);
}

void NetworkBuilder::add_edge(NodeId u, NodeId v, std::string_view context)
{
    if (u >= labels_.size() || v >= labels_.size())
        throw NetworkError(with_context(context, "unknown node id " +
                                                     std::to_string(std::max(u, v))));
    if (u == v) throw NetworkError(with_context(context, "self-loop on node '" + labels_[u] + "'"));
    auto& row = adjacency_[u];
    if (std::find(row.begin(), row.end(), v) != row.end())
        throw NetworkError(with_context(context, "duplicate edge ('" + labels_[u] + "', '" +
                                                     labels_[v] + "')"));
    row.push_back(v);
    adjacency_[v].push_back(u);
}

StreetNetwork NetworkBuilder::build() &&
{
    StreetNetwork net;
    std::size_t with_position = std::count_if(positions_.begin(), positions_.end(),
                                              [](const auto& p) { return p.has_value(); });
    if (with_position != 0 && with_position != positions_.size())
        throw NetworkError("coordinates given for some nodes but not all");
    if (with_position != 0) {
        net.coordinates_.reserve(positions_.size());
        for (const auto& p : positions_) net.coordinates_.push_back(*p);
    }
    net.offsets_.assign(1, 0);
    net.offsets_.reserve(labels_.size() + 1);
    for (auto& row : adjacency_) {
        std::sort(row.begin(), row.end());
        net.targets_.insert(net.targets_.end(), row.begin(), row.end());
        net.offsets_.push_back(net.targets_.size());
    }
    net.labels_ = std::move(labels_);
    net.index_ = std::move(index_);
    return net;
}

StreetNetwork make_network(std::size_t node_count,
                           std::span<const std::pair<NodeId, NodeId>> edges)
{
    NetworkBuilder builder;
    for (std::size_t i = 0; i < node_count; ++i) builder.add_node(std::to_string(i));
    for (auto [u, v] : edges) builder.add_edge(u, v);
    return std::move(builder).build();
}

StreetNetwork make_grid(std::size_t rows, std::size_t cols)
{
    NetworkBuilder builder;
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            builder.add_node(std::to_string(r * cols + c),
                             Point{static_cast<double>(c), static_cast<double>(r)});
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            auto id = static_cast<NodeId>(r * cols + c);
            if (c + 1 < cols) builder.add_edge(id, id + 1);
            if (r + 1 < rows) builder.add_edge(id, static_cast<NodeId>(id + cols));
        }
    return std::move(builder).build();
}

// Topology queries --------------------------------------------------------

std::vector<int> bfs_distances(const StreetNetwork& net, const NodeSet& sources)
{
    std::vector<int> dist(net.node_count(), kUnreachable);
    std::deque<NodeId> queue;
    for (NodeId s : sources) {
        if (s >= net.node_count())
            throw std::out_of_range("bfs source " + std::to_string(s) + " out of range");
        dist[s] = 0;
        queue.push_back(s);
    }
    while (!queue.empty()) {
        NodeId u = queue.front();
        queue.pop_front();
        for (NodeId v : net.neighbors(u))
            if (dist[v] == kUnreachable) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
    }
    return dist;
}

std::optional<int> bfs_distance(const StreetNetwork& net, NodeId u, NodeId v)
{
    if (v >= net.node_count())
        throw std::out_of_range("node id " + std::to_string(v) + " out of range");
    int d = bfs_distances(net, NodeSet{u})[v];
    if (d == kUnreachable) return std::nullopt;
    return d;
}

NodeSet neighborhood(const StreetNetwork& net, const NodeSet& centers, int radius)
{
    if (centers.empty()) throw std::invalid_argument("neighborhood: empty center set");
    if (radius < 0) throw std::invalid_argument("neighborhood: negative radius");
    auto dist = bfs_distances(net, centers);
    std::vector<NodeId> members;
    for (NodeId v = 0; v < net.node_count(); ++v)
        if (dist[v] != kUnreachable && dist[v] <= radius) members.push_back(v);
    return NodeSet(std::move(members));
}

}  // namespace accesswalk
