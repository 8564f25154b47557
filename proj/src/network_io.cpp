#include "accesswalk/network.hpp"

#include "accesswalk/text.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

namespace accesswalk {

using nlohmann::json;

namespace {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;  // (line, fields)
};

CsvTable read_csv(std::istream& in, std::string_view name)
{
    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<std::string> fields;
        try {
            fields = split_csv(line);
        } catch (const std::invalid_argument& e) {
            throw NetworkError(std::string(name) + ":" + std::to_string(line_no) + ": " + e.what());
        }
        if (table.header.empty()) {
            if (line_no == 1 && fields.front().size() >= 3 &&
                fields.front().compare(0, 3, "\xEF\xBB\xBF") == 0)
                fields.front().erase(0, 3);
            table.header = std::move(fields);
        } else {
            table.rows.emplace_back(line_no, std::move(fields));
        }
    }
    if (table.header.empty()) throw NetworkError(std::string(name) + ": missing header line");
    return table;
}

std::optional<std::size_t> column(const CsvTable& t, std::string_view col)
{
    for (std::size_t i = 0; i < t.header.size(); ++i)
        if (t.header[i] == col) return i;
    return std::nullopt;
}

std::string context(std::string_view name, std::size_t line)
{
    return std::string(name) + ":" + std::to_string(line);
}

const std::string& field(const std::vector<std::string>& row, std::size_t index,
                         std::string_view name, std::size_t line)
{
    if (index >= row.size())
        throw NetworkError(context(name, line) + ": expected at least " +
                           std::to_string(index + 1) + " fields");
    return row[index];
}

std::string json_id(const json& value, const std::string& where)
{
    if (value.is_string()) return value.get<std::string>();
    if (value.is_number_integer()) return std::to_string(value.get<long long>());
    throw NetworkError(where + ": node id must be a string or integer");
}

}  // namespace

StreetNetwork load_network(std::istream& nodes, std::istream& edges,
                           std::string_view nodes_name, std::string_view edges_name)
{
    NetworkBuilder builder;

    CsvTable node_table = read_csv(nodes, nodes_name);
    auto id_col = column(node_table, "id");
    if (!id_col) throw NetworkError(std::string(nodes_name) + ": header lacks an 'id' column");
    auto x_col = column(node_table, "x");
    auto y_col = column(node_table, "y");
    if (x_col.has_value() != y_col.has_value())
        throw NetworkError(std::string(nodes_name) + ": header must carry both 'x' and 'y' or neither");

    for (const auto& [line, row] : node_table.rows) {
        std::optional<Point> position;
        if (x_col) {
            try {
                position = Point{parse_double(field(row, *x_col, nodes_name, line)),
                                 parse_double(field(row, *y_col, nodes_name, line))};
            } catch (const std::invalid_argument& e) {
                throw NetworkError(context(nodes_name, line) + ": " + e.what());
            }
        }
        builder.add_node(field(row, *id_col, nodes_name, line), position,
                         context(nodes_name, line));
    }

    CsvTable edge_table = read_csv(edges, edges_name);
    auto src_col = column(edge_table, "source");
    auto dst_col = column(edge_table, "target");
    if (!src_col || !dst_col)
        throw NetworkError(std::string(edges_name) + ": header must carry 'source' and 'target'");
    for (const auto& [line, row] : edge_table.rows)
        builder.add_edge(field(row, *src_col, edges_name, line),
                         field(row, *dst_col, edges_name, line), context(edges_name, line));

    return std::move(builder).build();
}

StreetNetwork load_network_files(const std::string& nodes_path, const std::string& edges_path)
{
    std::ifstream nodes(nodes_path);
    if (!nodes) throw NetworkError("cannot open node file " + nodes_path);
    std::ifstream edges(edges_path);
    if (!edges) throw NetworkError("cannot open edge file " + edges_path);
    return load_network(nodes, edges, nodes_path, edges_path);
}

StreetNetwork load_network_json(std::istream& in, std::string_view name)
{
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw NetworkError(std::string(name) + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("nodes") || !doc["nodes"].is_array())
        throw NetworkError(std::string(name) + ": expected an object with a 'nodes' array");

    NetworkBuilder builder;
    const auto& nodes = doc["nodes"];
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        std::string where = std::string(name) + ": nodes[" + std::to_string(i) + "]";
        const auto& rec = nodes[i];
        if (!rec.is_object() || !rec.contains("id")) throw NetworkError(where + ": missing 'id'");
        std::optional<Point> position;
        bool has_x = rec.contains("x") && !rec["x"].is_null();
        bool has_y = rec.contains("y") && !rec["y"].is_null();
        if (has_x != has_y) throw NetworkError(where + ": 'x' and 'y' must appear together");
        if (has_x) {
            if (!rec["x"].is_number() || !rec["y"].is_number())
                throw NetworkError(where + ": coordinates must be numbers");
            position = Point{rec["x"].get<double>(), rec["y"].get<double>()};
        }
        builder.add_node(json_id(rec["id"], where), position, where);
    }

    if (doc.contains("edges")) {
        const auto& edges = doc["edges"];
        if (!edges.is_array()) throw NetworkError(std::string(name) + ": 'edges' must be an array");
        for (std::size_t i = 0; i < edges.size(); ++i) {
            std::string where = std::string(name) + ": edges[" + std::to_string(i) + "]";
            const auto& e = edges[i];
            if (!e.is_array() || e.size() != 2) throw NetworkError(where + ": expected [u, v]");
            builder.add_edge(json_id(e[0], where), json_id(e[1], where), where);
        }
    }
    return std::move(builder).build();
}

StreetNetwork load_network_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw NetworkError("cannot open network file " + path);
    return load_network_json(in, path);
}

void write_nodes_csv(const StreetNetwork& net, std::ostream& out)
{
    out << (net.has_coordinates() ? "id,x,y\n" : "id\n");
    for (NodeId u = 0; u < net.node_count(); ++u) {
        out << csv_field(net.label(u));
        if (net.has_coordinates())
            out << ',' << format_double(net.position(u).x) << ','
                << format_double(net.position(u).y);
        out << '\n';
    }
}

void write_edges_csv(const StreetNetwork& net, std::ostream& out)
{
    out << "source,target\n";
    for (auto [u, v] : net.edges())
        out << csv_field(net.label(u)) << ',' << csv_field(net.label(v)) << '\n';
}

void write_network_json(const StreetNetwork& net, std::ostream& out)
{
    json nodes = json::array();
    for (NodeId u = 0; u < net.node_count(); ++u) {
        json rec = {{"id", net.label(u)}};
        if (net.has_coordinates()) {
            rec["x"] = net.position(u).x;
            rec["y"] = net.position(u).y;
        }
        nodes.push_back(std::move(rec));
    }
    json edges = json::array();
    for (auto [u, v] : net.edges()) edges.push_back({net.label(u), net.label(v)});
    out << json{{"nodes", std::move(nodes)}, {"edges", std::move(edges)}}.dump() << '\n';
}

void write_geojson(const StreetNetwork& net, std::ostream& out, std::span<const double> node_values)
{
    if (!net.has_coordinates()) throw NetworkError("GeoJSON export needs node coordinates");
    if (!node_values.empty() && node_values.size() != net.node_count())
        throw std::invalid_argument("write_geojson: one value per node required");

    json features = json::array();
    for (NodeId u = 0; u < net.node_count(); ++u) {
        const auto& p = net.position(u);
        json props = {{"id", net.label(u)}};
        if (!node_values.empty())
            props["mean_oa"] = std::isnan(node_values[u]) ? json(nullptr) : json(node_values[u]);
        features.push_back({{"type", "Feature"},
                            {"geometry", {{"type", "Point"}, {"coordinates", {p.x, p.y}}}},
                            {"properties", std::move(props)}});
    }
    for (auto [u, v] : net.edges()) {
        const auto& a = net.position(u);
        const auto& b = net.position(v);
        features.push_back(
            {{"type", "Feature"},
             {"geometry",
              {{"type", "LineString"}, {"coordinates", {{a.x, a.y}, {b.x, b.y}}}}},
             {"properties", {{"source", net.label(u)}, {"target", net.label(v)}}}});
    }
    out << json{{"type", "FeatureCollection"}, {"features", std::move(features)}}.dump() << '\n';
}

}  // namespace accesswalk
