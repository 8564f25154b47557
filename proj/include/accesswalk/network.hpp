#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace accesswalk {

/// Dense node index in [0, N).
using NodeId = std::uint32_t;

/// Thrown for malformed or inconsistent network input. The message carries
/// the record context (file, line) where the problem was found.
class NetworkError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

/// Sorted, duplicate-free set of node ids.
class NodeSet {
public:
    NodeSet() = default;
    NodeSet(std::initializer_list<NodeId> ids);
    explicit NodeSet(std::vector<NodeId> ids);

    static NodeSet all(std::size_t node_count);

    bool contains(NodeId id) const;
    bool empty() const { return ids_.empty(); }
    std::size_t size() const { return ids_.size(); }

    void insert(NodeId id);
    bool is_subset_of(const NodeSet& other) const;

    std::span<const NodeId> ids() const { return ids_; }
    auto begin() const { return ids_.begin(); }
    auto end() const { return ids_.end(); }

    friend bool operator==(const NodeSet&, const NodeSet&) = default;

private:
    std::vector<NodeId> ids_;
};

/// Immutable undirected simple graph with optional planar coordinates.
///
/// Adjacency is stored in compressed rows, each row sorted ascending. Every
/// node keeps the label it had in the input so results can be written back
/// with the original ids.
class StreetNetwork {
public:
    StreetNetwork() = default;

    std::size_t node_count() const { return labels_.size(); }
    std::size_t edge_count() const { return targets_.size() / 2; }

    std::span<const NodeId> neighbors(NodeId u) const;
    std::size_t degree(NodeId u) const;
    bool has_edge(NodeId u, NodeId v) const;

    /// Edges as (u, v) pairs with u < v, sorted.
    std::vector<std::pair<NodeId, NodeId>> edges() const;

    const std::string& label(NodeId u) const;
    std::span<const std::string> labels() const { return labels_; }
    std::optional<NodeId> find(std::string_view label) const;

    bool has_coordinates() const { return !coordinates_.empty(); }
    const Point& position(NodeId u) const;

    std::size_t component_count() const;

    /// Stable content hash over labels and edge list (hex SHA-256).
    std::string topology_hash() const;

private:
    friend class NetworkBuilder;

    void check(NodeId u) const;

    std::vector<std::string> labels_;
    std::unordered_map<std::string, NodeId> index_;
    std::vector<Point> coordinates_;
    std::vector<std::size_t> offsets_{0};
    std::vector<NodeId> targets_;
};

/// Incrementally assembles a StreetNetwork, rejecting duplicates and
/// self-loops. `context` strings are prefixed to error messages.
class NetworkBuilder {
public:
    NodeId add_node(std::string label, std::optional<Point> position = std::nullopt,
                    std::string_view context = {});
    void add_edge(std::string_view u, std::string_view v, std::string_view context = {});
    void add_edge(NodeId u, NodeId v, std::string_view context = {});

    std::size_t node_count() const { return labels_.size(); }
    std::optional<NodeId> find(std::string_view label) const;

    StreetNetwork build() &&;

private:
    std::vector<std::string> labels_;
    std::unordered_map<std::string, NodeId> index_;
    std::vector<std::optional<Point>> positions_;
    std::vector<std::vector<NodeId>> adjacency_;
};

/// Network with nodes labelled "0".."n-1" and no coordinates.
StreetNetwork make_network(std::size_t node_count,
                           std::span<const std::pair<NodeId, NodeId>> edges);

/// rows x cols lattice; node (r, c) has id r * cols + c and position (c, r).
StreetNetwork make_grid(std::size_t rows, std::size_t cols);

// Loading and export ------------------------------------------------------

/// Node CSV (`id[,x,y]`) plus edge CSV (`source,target`).
StreetNetwork load_network(std::istream& nodes, std::istream& edges,
                           std::string_view nodes_name = "nodes",
                           std::string_view edges_name = "edges");
StreetNetwork load_network_files(const std::string& nodes_path, const std::string& edges_path);

/// Single-file JSON: {"nodes": [{"id","x","y"}], "edges": [["u","v"]]}.
StreetNetwork load_network_json(std::istream& in, std::string_view name = "network");
StreetNetwork load_network_json_file(const std::string& path);

void write_nodes_csv(const StreetNetwork& net, std::ostream& out);
void write_edges_csv(const StreetNetwork& net, std::ostream& out);
void write_network_json(const StreetNetwork& net, std::ostream& out);

/// GeoJSON FeatureCollection: Point per node, LineString per edge.
/// `node_values`, when given, adds a `mean_oa` property per node (null where
/// the value is NaN). Throws if the network has no coordinates.
void write_geojson(const StreetNetwork& net, std::ostream& out,
                   std::span<const double> node_values = {});

// Topology queries --------------------------------------------------------

inline constexpr int kUnreachable = -1;

/// Hop distance from the nearest of `sources` to every node; kUnreachable
/// for nodes in other components.
std::vector<int> bfs_distances(const StreetNetwork& net, const NodeSet& sources);

std::optional<int> bfs_distance(const StreetNetwork& net, NodeId u, NodeId v);

/// All nodes within `radius` hops of some center (centers included).
NodeSet neighborhood(const StreetNetwork& net, const NodeSet& centers, int radius);

}  // namespace accesswalk
