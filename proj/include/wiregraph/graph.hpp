#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wiregraph/diagnostics.hpp"
#include "wiregraph/geometry.hpp"

namespace wiregraph {

enum class NodeKind {
    Symbol,
    Junction,
    ImplicitJunction,
    /// Wire bend; removed by collapse_corners.
    Corner,
    /// Wire hop; removed by resolve_hops.
    Crossover,
    /// Loose wire end left behind by a corner with a single wire.
    OpenEnd,
};

std::string_view to_string(NodeKind k);
std::optional<NodeKind> parse_node_kind(std::string_view s);

struct Port {
    std::optional<std::string> name;
    Point position;
    /// Incident edge; empty for open (unconnected) library ports.
    std::optional<int> edge;

    friend bool operator==(const Port&, const Port&) = default;
};

struct Node {
    int id = 0;
    NodeKind kind = NodeKind::Symbol;
    std::string cls;
    std::optional<double> rotation;
    BoundingBox bbox;
    std::vector<Port> ports;
    /// Ids of text annotations attached to this node.
    std::vector<int> texts;

    friend bool operator==(const Node&, const Node&) = default;

    int degree() const;
};

struct EdgeEnd {
    int node = 0;
    int port = 0;

    friend bool operator==(const EdgeEnd&, const EdgeEnd&) = default;
};

struct Edge {
    int id = 0;
    std::array<EdgeEnd, 2> ends;
    /// Runs from ends[0] to ends[1].
    Polyline geometry;

    friend bool operator==(const Edge&, const Edge&) = default;
};

struct TextAnnotation {
    int id = 0;
    BoundingBox bbox;
    std::string text;
    std::optional<double> rotation;
    std::optional<int> attached_to;

    friend bool operator==(const TextAnnotation&, const TextAnnotation&) = default;
};

struct NetMember {
    int node = 0;
    int port = 0;
    std::optional<std::string> name;

    friend bool operator==(const NetMember&, const NetMember&) = default;
};

struct Net {
    int id = 0;
    std::vector<NetMember> members;
    std::vector<int> edges;

    friend bool operator==(const Net&, const Net&) = default;
};

/// Nodes and edges are kept sorted by id.
struct CircuitGraph {
    std::string image;
    ImageSize size;
    std::vector<Node> nodes;
    std::vector<Edge> edges;
    std::vector<TextAnnotation> texts;
    Diagnostics diagnostics;

    friend bool operator==(const CircuitGraph&, const CircuitGraph&) = default;

    Node* find_node(int id);
    const Node* find_node(int id) const;
    Edge* find_edge(int id);
    const Edge* find_edge(int id) const;

    Node& node(int id);
    const Node& node(int id) const;
    Edge& edge(int id);
    const Edge& edge(int id) const;

    /// Throws ContractError on dangling node/port/edge references.
    void check_integrity() const;
};

/// Port index and net id lookup over derived nets.
std::optional<int> net_of(const std::vector<Net>& nets, int node, int port);

}  // namespace wiregraph
