#include "wiregraph/graph_builder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <set>

#include "wiregraph/disjoint_set.hpp"
#include "wiregraph/error.hpp"

namespace wiregraph {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

NodeKind node_kind_for(Category c)
{
    switch (c) {
    case Category::Junction: return NodeKind::Junction;
    case Category::Corner: return NodeKind::Corner;
    case Category::Crossover: return NodeKind::Crossover;
    default: return NodeKind::Symbol;
    }
}

struct Incidence {
    int edge = 0;
    int end = 0;  // index into Edge::ends
};

std::vector<Incidence> incidences(const CircuitGraph& g, const Node& n)
{
    std::vector<Incidence> out;
    for (std::size_t p = 0; p < n.ports.size(); ++p) {
        if (!n.ports[p].edge)
            continue;
        const Edge& e = g.edge(*n.ports[p].edge);
        for (int k = 0; k < 2; ++k)
            if (e.ends[k].node == n.id && e.ends[k].port == int(p))
                out.push_back({e.id, k});
    }
    return out;
}

void erase_node(CircuitGraph& g, int id)
{
    g.nodes.erase(std::remove_if(g.nodes.begin(), g.nodes.end(), [id](const Node& n) { return n.id == id; }),
                  g.nodes.end());
}

// Joins two wires that meet at a node being removed into one wire between
// their far ends. The merged wire keeps the smaller edge id.
void merge_through(CircuitGraph& g, Incidence in1, Incidence in2)
{
    const Edge e1 = g.edge(in1.edge);
    const Edge e2 = g.edge(in2.edge);
    const Polyline g1 = in1.end == 1 ? e1.geometry : e1.geometry.reversed();
    const Polyline g2 = in2.end == 0 ? e2.geometry : e2.geometry.reversed();
    const EdgeEnd far1 = e1.ends[1 - in1.end];
    const EdgeEnd far2 = e2.ends[1 - in2.end];

    const int keep = std::min(e1.id, e2.id);
    const int drop = std::max(e1.id, e2.id);
    Edge& merged = g.edge(keep);
    merged.ends = {far1, far2};
    merged.geometry = concatenate(g1, g2);
    g.edges.erase(std::remove_if(g.edges.begin(), g.edges.end(), [drop](const Edge& e) { return e.id == drop; }),
                  g.edges.end());
    g.node(far1.node).ports[std::size_t(far1.port)].edge = keep;
    g.node(far2.node).ports[std::size_t(far2.port)].edge = keep;
}

double deviation_from_opposite(Point a, Point b)
{
    const double dot = std::clamp(a.x * b.x + a.y * b.y, -1.0, 1.0);
    return 180.0 - std::acos(dot) * kRadToDeg;
}

}  // namespace

CircuitGraph assemble(std::span<const AnnotatedObject> objects, const EdgeExtraction& extraction, ImageSize size,
                      std::string image)
{
    CircuitGraph g;
    g.image = std::move(image);
    g.size = size;
    g.diagnostics = extraction.diagnostics;

    int max_id = -1;
    for (const auto& o : objects) {
        max_id = std::max(max_id, o.id);
        if (o.cls.category == Category::Text) {
            g.texts.push_back({o.id, o.bbox, o.text.value_or(""), o.rotation, std::nullopt});
            continue;
        }
        Node n;
        n.id = o.id;
        n.kind = node_kind_for(o.cls.category);
        n.cls = o.cls.name;
        if (n.kind == NodeKind::Symbol)
            n.rotation = o.rotation;
        n.bbox = o.bbox;
        g.nodes.push_back(std::move(n));
    }
    const int implicit_base = max_id + 1;
    for (std::size_t j = 0; j < extraction.junctions.size(); ++j) {
        const auto& site = extraction.junctions[j];
        Node n;
        n.id = implicit_base + int(j);
        n.kind = NodeKind::ImplicitJunction;
        n.cls = "implicit-junction";
        n.bbox = site.bbox;
        n.bbox.xmin = std::max(n.bbox.xmin, 0);
        n.bbox.ymin = std::max(n.bbox.ymin, 0);
        g.nodes.push_back(std::move(n));
    }
    std::sort(g.nodes.begin(), g.nodes.end(), [](const Node& a, const Node& b) { return a.id < b.id; });
    std::sort(g.texts.begin(), g.texts.end(), [](const auto& a, const auto& b) { return a.id < b.id; });

    for (std::size_t i = 0; i < extraction.segments.size(); ++i) {
        const auto& seg = extraction.segments[i];
        Edge e;
        e.id = int(i);
        e.geometry = seg.polyline;
        for (int k = 0; k < 2; ++k) {
            const auto& end = seg.ends[k];
            const int node_id =
                end.kind == SegmentEnd::Kind::Object ? end.id : implicit_base + end.id;
            if (end.kind == SegmentEnd::Kind::ImplicitJunction &&
                (end.id < 0 || end.id >= int(extraction.junctions.size())))
                throw ContractError("segment " + std::to_string(i) + " references unknown implicit junction " +
                                    std::to_string(end.id));
            Node* n = g.find_node(node_id);
            if (!n)
                throw ContractError("segment " + std::to_string(i) + " references unknown object " +
                                    std::to_string(end.id));
            n->ports.push_back({std::nullopt, end.point, e.id});
            e.ends[k] = {node_id, int(n->ports.size()) - 1};
        }
        g.edges.push_back(std::move(e));
    }

    for (const auto& n : g.nodes)
        if (n.kind == NodeKind::Junction && n.degree() < 3)
            g.diagnostics.push_back({"junction-degree", std::nullopt, {n.id},
                                     "junction with " + std::to_string(n.degree()) + " wire(s)"});
    return g;
}

Point incidence_direction(const Edge& edge, int node_id, double radius)
{
    const bool forward = edge.ends[0].node == node_id;
    const auto& pts = edge.geometry.points;
    const std::size_t n = pts.size();
    auto at = [&](std::size_t i) { return forward ? pts[i] : pts[n - 1 - i]; };
    const Point origin = at(0);
    Point target = at(n - 1);
    for (std::size_t i = 1; i < n; ++i) {
        if (distance(at(i), origin) >= radius) {
            target = at(i);
            break;
        }
    }
    const Point d = target - origin;
    const double len = std::hypot(d.x, d.y);
    return len > 0.0 ? d * (1.0 / len) : Point{1.0, 0.0};
}

CircuitGraph resolve_hops(CircuitGraph g, const HopParams& params)
{
    std::vector<int> hops;
    for (const auto& n : g.nodes)
        if (n.kind == NodeKind::Crossover)
            hops.push_back(n.id);

    for (int id : hops) {
        const auto inc = incidences(g, g.node(id));
        std::set<int> distinct;
        for (const auto& i : inc)
            distinct.insert(i.edge);
        if (inc.size() != 4 || distinct.size() != 4) {
            g.diagnostics.push_back({"hop-degree", std::nullopt, {id},
                                     "crossover with " + std::to_string(inc.size()) + " wire(s)"});
            continue;
        }
        std::array<Point, 4> dir;
        for (int i = 0; i < 4; ++i)
            dir[i] = incidence_direction(g.edge(inc[i].edge), id, params.direction_radius);

        constexpr int kPairings[3][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}};
        std::array<double, 3> cost{};
        for (int p = 0; p < 3; ++p) {
            const auto& q = kPairings[p];
            cost[p] = 0.5 * (deviation_from_opposite(dir[q[0]], dir[q[1]]) +
                             deviation_from_opposite(dir[q[2]], dir[q[3]]));
        }
        const int best = int(std::min_element(cost.begin(), cost.end()) - cost.begin());
        double runner_up = std::numeric_limits<double>::infinity();
        for (int p = 0; p < 3; ++p)
            if (p != best)
                runner_up = std::min(runner_up, cost[p]);
        if (runner_up - cost[best] < params.ambiguity_degrees)
            g.diagnostics.push_back({"ambiguous-hop", std::nullopt, {id}, "wire pairing nearly tied"});

        const auto& q = kPairings[best];
        merge_through(g, inc[q[0]], inc[q[1]]);
        merge_through(g, inc[q[2]], inc[q[3]]);
        erase_node(g, id);
    }
    return g;
}

CircuitGraph collapse_corners(CircuitGraph g)
{
    std::vector<int> targets;
    for (const auto& n : g.nodes)
        if (n.kind == NodeKind::Corner || n.kind == NodeKind::Crossover)
            targets.push_back(n.id);

    for (int id : targets) {
        Node& n = g.node(id);
        const auto inc = incidences(g, n);
        const std::string what = std::string(to_string(n.kind));
        if (inc.size() == 2 && inc[0].edge != inc[1].edge) {
            merge_through(g, inc[0], inc[1]);
            erase_node(g, id);
        } else if (inc.size() >= 3) {
            n.kind = NodeKind::ImplicitJunction;
            g.diagnostics.push_back({what + "-junction", std::nullopt, {id},
                                     what + " with " + std::to_string(inc.size()) + " wires treated as junction"});
        } else if (inc.size() == 1) {
            n.kind = NodeKind::OpenEnd;
            g.diagnostics.push_back({"dangling-" + what, std::nullopt, {id}, what + " with a single wire"});
        } else {
            erase_node(g, id);
            g.diagnostics.push_back({"isolated-" + what, std::nullopt, {id}, what + " without wires dropped"});
        }
    }
    return g;
}

Polyline simplify(const Polyline& line, double epsilon)
{
    const auto& pts = line.points;
    if (pts.size() < 3)
        return line;
    std::vector<bool> keep(pts.size(), false);
    keep.front() = keep.back() = true;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{0, pts.size() - 1}};
    while (!stack.empty()) {
        const auto [first, last] = stack.back();
        stack.pop_back();
        if (last <= first + 1)
            continue;
        const Point a = pts[first], b = pts[last];
        const Point ab = b - a;
        const double len = std::hypot(ab.x, ab.y);
        double max_d = -1.0;
        std::size_t index = first;
        for (std::size_t i = first + 1; i < last; ++i) {
            const Point ap = pts[i] - a;
            const double d = len > 0.0 ? std::abs(ab.x * ap.y - ab.y * ap.x) / len : std::hypot(ap.x, ap.y);
            if (d > max_d) {
                max_d = d;
                index = i;
            }
        }
        if (max_d > epsilon) {
            keep[index] = true;
            stack.push_back({first, index});
            stack.push_back({index, last});
        }
    }
    std::vector<Point> out;
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (keep[i])
            out.push_back(pts[i]);
    return dedupe(std::move(out));
}

namespace {

enum class Axis { None, Horizontal, Vertical };

Axis classify(Point a, Point b, double snap)
{
    const double angle = std::atan2(std::abs(b.y - a.y), std::abs(b.x - a.x)) * kRadToDeg;
    if (angle <= snap)
        return Axis::Horizontal;
    if (angle >= 90.0 - snap)
        return Axis::Vertical;
    return Axis::None;
}

// Vertex i sits on a straight axis-aligned run between its neighbours.
bool redundant(Point a, Point b, Point c)
{
    if (a.y == b.y && b.y == c.y)
        return (b.x - a.x) * (c.x - b.x) >= 0;
    if (a.x == b.x && b.x == c.x)
        return (b.y - a.y) * (c.y - b.y) >= 0;
    return false;
}

// Makes every run of same-axis segments share one coordinate. A run holding
// an end vertex adopts that vertex's coordinate; a run holding both ends with
// different coordinates gets short stubs at each end.
void align(std::vector<Point>& pts, const std::vector<Axis>& axis, Axis which)
{
    const std::size_t n = pts.size();
    auto coord = [which](Point& p) -> double& { return which == Axis::Horizontal ? p.y : p.x; };
    std::size_t i = 0;
    while (i + 1 < n) {
        if (axis[i] != which) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < n && axis[j] == which)
            ++j;
        // vertices i..j form one run
        const bool has_first = i == 0;
        const bool has_last = j == n - 1;
        if (has_first && has_last) {
            const double a = coord(pts.front()), b = coord(pts.back());
            if (a == b) {
                for (std::size_t k = i; k <= j; ++k)
                    coord(pts[k]) = a;
            } else {
                const double mid = 0.5 * (a + b);
                for (std::size_t k = 1; k + 1 < n; ++k)
                    coord(pts[k]) = mid;
                Point s1 = pts.front(), s2 = pts.back();
                coord(s1) = mid;
                coord(s2) = mid;
                pts.insert(pts.begin() + 1, s1);
                pts.insert(pts.end() - 1, s2);
                return;
            }
        } else {
            double value = 0.0;
            if (has_first)
                value = coord(pts[i]);
            else if (has_last)
                value = coord(pts[j]);
            else {
                for (std::size_t k = i; k <= j; ++k)
                    value += coord(pts[k]);
                value /= double(j - i + 1);
            }
            for (std::size_t k = i; k <= j; ++k)
                coord(pts[k]) = value;
        }
        i = j;
    }
}

}  // namespace

Polyline rectify(const Polyline& line, double epsilon, double snap_degrees)
{
    if (epsilon <= 0.0)
        throw ContractError("rectify: epsilon must be positive");
    if (snap_degrees < 0.0 || snap_degrees >= 45.0)
        throw ContractError("rectify: snap must lie in [0,45)");
    if (line.points.size() < 2)
        return line;

    std::vector<Point> pts = simplify(line, epsilon).points;
    if (pts.size() < 2)
        return line;
    std::vector<Axis> axis;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        axis.push_back(classify(pts[i], pts[i + 1], snap_degrees));

    const Point first = pts.front(), last = pts.back();
    align(pts, axis, Axis::Horizontal);
    // Stubs added for the horizontal pass are vertical by construction.
    if (pts.size() != axis.size() + 1) {
        axis.clear();
        for (std::size_t i = 0; i + 1 < pts.size(); ++i)
            axis.push_back(classify(pts[i], pts[i + 1], snap_degrees));
    }
    align(pts, axis, Axis::Vertical);
    pts.front() = first;
    pts.back() = last;

    Polyline out = dedupe(std::move(pts));
    std::vector<Point> pruned;
    for (std::size_t i = 0; i < out.points.size(); ++i) {
        if (i > 0 && i + 1 < out.points.size() && redundant(pruned.back(), out.points[i], out.points[i + 1]))
            continue;
        pruned.push_back(out.points[i]);
    }
    return Polyline{std::move(pruned)};
}

CircuitGraph rectify_edges(CircuitGraph g, double epsilon, double snap_degrees)
{
    for (auto& e : g.edges)
        if (e.geometry.points.size() >= 2)
            e.geometry = rectify(e.geometry, epsilon, snap_degrees);
    return g;
}

Point library_port_position(const PortTemplate& port, const BoundingBox& box, double rotation_degrees)
{
    const double t = rotation_degrees / kRadToDeg;
    const double dx = port.position.x - 0.5;
    const double dy = port.position.y - 0.5;
    // Counter-clockwise on screen with y pointing down.
    double rx = dx * std::cos(t) + dy * std::sin(t);
    double ry = -dx * std::sin(t) + dy * std::cos(t);
    // Snap rounding noise from multiples of 90 degrees.
    if (std::abs(rx) < 1e-12)
        rx = 0.0;
    if (std::abs(ry) < 1e-12)
        ry = 0.0;
    const double x = box.xmin + (0.5 + rx) * box.width();
    const double y = box.ymin + (0.5 + ry) * box.height();
    return {std::clamp(x, double(box.xmin), double(box.xmax)), std::clamp(y, double(box.ymin), double(box.ymax))};
}

namespace {

// Minimum-total-distance injective matching. Returns, for each observed
// port, the library index it takes or -1.
std::vector<int> match_ports(const std::vector<Point>& observed, const std::vector<Point>& library)
{
    const std::size_t d = observed.size(), l = library.size();
    std::vector<int> result(d, -1);
    if (d == 0 || l == 0)
        return result;

    if (d <= 8 && l <= 8) {
        double best = std::numeric_limits<double>::infinity();
        std::vector<int> current(d, -1);
        std::vector<bool> used(l, false);
        const std::size_t target = std::min(d, l);
        // Observed port i either takes a free library port or, when there are
        // more observed than library ports, stays unmatched.
        auto search = [&](auto&& self, std::size_t i, std::size_t matched, double cost) -> void {
            if (cost >= best - 1e-9)
                return;
            if (i == d) {
                if (matched == target) {
                    best = cost;
                    result = current;
                }
                return;
            }
            if (matched + (d - i) < target)
                return;
            for (std::size_t k = 0; k < l; ++k) {
                if (used[k])
                    continue;
                used[k] = true;
                current[i] = int(k);
                self(self, i + 1, matched + 1, cost + distance(observed[i], library[k]));
                used[k] = false;
                current[i] = -1;
            }
            if (d > l)
                self(self, i + 1, matched, cost);
        };
        search(search, 0, 0, 0.0);
        return result;
    }

    struct Pair {
        double dist;
        std::size_t i, k;
    };
    std::vector<Pair> pairs;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t k = 0; k < l; ++k)
            pairs.push_back({distance(observed[i], library[k]), i, k});
    std::sort(pairs.begin(), pairs.end(),
              [](const Pair& a, const Pair& b) { return std::tie(a.dist, a.i, a.k) < std::tie(b.dist, b.i, b.k); });
    std::vector<bool> used(l, false);
    for (const auto& p : pairs)
        if (result[p.i] < 0 && !used[p.k]) {
            result[p.i] = int(p.k);
            used[p.k] = true;
        }
    return result;
}

}  // namespace

Node assign_ports(Node node, const SymbolLibrary& lib, Diagnostics& diagnostics)
{
    if (node.kind != NodeKind::Symbol)
        return node;
    const SymbolEntry* entry = lib.find(node.cls);
    if (!entry) {
        diagnostics.push_back({"no-library-entry", std::nullopt, {node.id}, node.cls});
        return node;
    }
    if (entry->ports.empty())
        return node;

    double rotation = 0.0;
    if (node.rotation)
        rotation = *node.rotation;
    else
        diagnostics.push_back({"missing-rotation", std::nullopt, {node.id}, "rotation 0 assumed"});

    // Open ports from an earlier pass are rebuilt.
    std::erase_if(node.ports, [](const Port& p) { return !p.edge; });

    std::vector<Point> observed, expected;
    for (const auto& p : node.ports)
        observed.push_back(p.position);
    for (const auto& t : entry->ports)
        expected.push_back(library_port_position(t, node.bbox, rotation));

    const auto match = match_ports(observed, expected);
    std::vector<bool> taken(expected.size(), false);
    for (std::size_t i = 0; i < node.ports.size(); ++i) {
        if (match[i] >= 0) {
            node.ports[i].name = entry->ports[std::size_t(match[i])].name;
            node.ports[i].position = expected[std::size_t(match[i])];
            taken[std::size_t(match[i])] = true;
        } else {
            node.ports[i].name.reset();
            diagnostics.push_back({"unmatched-port", std::nullopt, {node.id},
                                   "wire " + std::to_string(node.ports[i].edge.value_or(-1)) +
                                       " has no library port left"});
        }
    }
    for (std::size_t k = 0; k < expected.size(); ++k)
        if (!taken[k])
            node.ports.push_back({entry->ports[k].name, expected[k], std::nullopt});
    return node;
}

CircuitGraph assign_all_ports(CircuitGraph g, const SymbolLibrary& lib)
{
    for (auto& n : g.nodes)
        if (n.kind == NodeKind::Symbol)
            n = assign_ports(std::move(n), lib, g.diagnostics);
    for (auto& e : g.edges) {
        auto& pts = e.geometry.points;
        if (pts.size() < 2)
            continue;
        pts.front() = g.node(e.ends[0].node).ports[std::size_t(e.ends[0].port)].position;
        pts.back() = g.node(e.ends[1].node).ports[std::size_t(e.ends[1].port)].position;
        Polyline clean = dedupe(pts);
        if (clean.points.size() >= 2)
            e.geometry = std::move(clean);
    }
    return g;
}

std::vector<Net> derive_nets(const CircuitGraph& g)
{
    std::map<int, int> index;
    for (std::size_t i = 0; i < g.edges.size(); ++i)
        index[g.edges[i].id] = int(i);
    DisjointSet sets(g.edges.size());
    for (const auto& n : g.nodes) {
        if (n.kind == NodeKind::Symbol || n.kind == NodeKind::OpenEnd || n.kind == NodeKind::Crossover)
            continue;
        std::optional<int> first;
        for (const auto& p : n.ports) {
            if (!p.edge)
                continue;
            const int e = index.at(*p.edge);
            if (first)
                sets.unite(*first, e);
            else
                first = e;
        }
    }

    std::map<int, Net> by_root;
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        const Edge& e = g.edges[i];
        Net& net = by_root[sets.find(int(i))];
        net.edges.push_back(e.id);
        for (const auto& end : e.ends) {
            const Node& n = g.node(end.node);
            if (n.kind != NodeKind::Symbol)
                continue;
            net.members.push_back({end.node, end.port, n.ports[std::size_t(end.port)].name});
        }
    }

    std::vector<Net> nets;
    for (auto& [root, net] : by_root) {
        if (net.members.empty())
            continue;
        auto key = [](const NetMember& m) { return std::make_pair(m.node, m.port); };
        std::sort(net.members.begin(), net.members.end(),
                  [&](const NetMember& a, const NetMember& b) { return key(a) < key(b); });
        net.members.erase(std::unique(net.members.begin(), net.members.end(),
                                      [&](const NetMember& a, const NetMember& b) { return key(a) == key(b); }),
                          net.members.end());
        std::sort(net.edges.begin(), net.edges.end());
        nets.push_back(std::move(net));
    }
    std::sort(nets.begin(), nets.end(), [](const Net& a, const Net& b) {
        const auto ka = std::make_pair(a.members.front().node, a.members.front().port);
        const auto kb = std::make_pair(b.members.front().node, b.members.front().port);
        return ka < kb;
    });
    for (std::size_t i = 0; i < nets.size(); ++i)
        nets[i].id = int(i) + 1;
    return nets;
}

CircuitGraph associate_texts(CircuitGraph g, std::optional<double> max_distance)
{
    for (auto& n : g.nodes)
        n.texts.clear();
    for (auto& t : g.texts) {
        t.attached_to.reset();
        const Point c = t.bbox.center();
        const Node* best = nullptr;
        double best_d = std::numeric_limits<double>::infinity();
        for (const auto& n : g.nodes) {
            if (n.kind != NodeKind::Symbol)
                continue;
            const double d = distance(c, n.bbox.center());
            const double limit = max_distance.value_or(1.5 * n.bbox.diagonal());
            if (d <= limit && d < best_d - 1e-9) {
                best_d = d;
                best = &n;
            }
        }
        if (best)
            t.attached_to = best->id;
    }
    for (const auto& t : g.texts)
        if (t.attached_to)
            g.node(*t.attached_to).texts.push_back(t.id);
    return g;
}

}  // namespace wiregraph
