#include "wiregraph/graph.hpp"

#include <algorithm>

#include "wiregraph/error.hpp"

namespace wiregraph {

namespace {

constexpr std::pair<NodeKind, std::string_view> kKindNames[] = {
    {NodeKind::Symbol, "symbol"},       {NodeKind::Junction, "junction"},
    {NodeKind::ImplicitJunction, "implicit-junction"}, {NodeKind::Corner, "corner"},
    {NodeKind::Crossover, "crossover"}, {NodeKind::OpenEnd, "open-end"},
};

template <typename Vec>
auto* find_by_id(Vec& v, int id)
{
    auto it = std::lower_bound(v.begin(), v.end(), id, [](const auto& x, int i) { return x.id < i; });
    return (it != v.end() && it->id == id) ? &*it : nullptr;
}

}  // namespace

std::string_view to_string(NodeKind k)
{
    for (const auto& [kind, name] : kKindNames)
        if (kind == k)
            return name;
    return "symbol";
}

std::optional<NodeKind> parse_node_kind(std::string_view s)
{
    for (const auto& [kind, name] : kKindNames)
        if (name == s)
            return kind;
    return std::nullopt;
}

int Node::degree() const
{
    return int(std::count_if(ports.begin(), ports.end(), [](const Port& p) { return p.edge.has_value(); }));
}

Node* CircuitGraph::find_node(int id) { return find_by_id(nodes, id); }
const Node* CircuitGraph::find_node(int id) const { return find_by_id(nodes, id); }
Edge* CircuitGraph::find_edge(int id) { return find_by_id(edges, id); }
const Edge* CircuitGraph::find_edge(int id) const { return find_by_id(edges, id); }

Node& CircuitGraph::node(int id)
{
    if (auto* n = find_node(id))
        return *n;
    throw ContractError("no node with id " + std::to_string(id));
}

const Node& CircuitGraph::node(int id) const
{
    if (const auto* n = find_node(id))
        return *n;
    throw ContractError("no node with id " + std::to_string(id));
}

Edge& CircuitGraph::edge(int id)
{
    if (auto* e = find_edge(id))
        return *e;
    throw ContractError("no edge with id " + std::to_string(id));
}

const Edge& CircuitGraph::edge(int id) const
{
    if (const auto* e = find_edge(id))
        return *e;
    throw ContractError("no edge with id " + std::to_string(id));
}

void CircuitGraph::check_integrity() const
{
    for (std::size_t i = 1; i < nodes.size(); ++i)
        if (nodes[i - 1].id >= nodes[i].id)
            throw ContractError("nodes not sorted by unique id");
    for (std::size_t i = 1; i < edges.size(); ++i)
        if (edges[i - 1].id >= edges[i].id)
            throw ContractError("edges not sorted by unique id");
    for (const auto& e : edges) {
        for (const auto& end : e.ends) {
            const Node* n = find_node(end.node);
            if (!n)
                throw ContractError("edge " + std::to_string(e.id) + " references missing node " +
                                    std::to_string(end.node));
            if (end.port < 0 || end.port >= int(n->ports.size()) || n->ports[std::size_t(end.port)].edge != e.id)
                throw ContractError("edge " + std::to_string(e.id) + " references a port of node " +
                                    std::to_string(end.node) + " that does not point back");
        }
    }
    for (const auto& n : nodes)
        for (const auto& p : n.ports)
            if (p.edge && !find_edge(*p.edge))
                throw ContractError("node " + std::to_string(n.id) + " has a port on missing edge " +
                                    std::to_string(*p.edge));
}

std::optional<int> net_of(const std::vector<Net>& nets, int node, int port)
{
    for (const auto& net : nets)
        for (const auto& m : net.members)
            if (m.node == node && m.port == port)
                return net.id;
    return std::nullopt;
}

}  // namespace wiregraph
