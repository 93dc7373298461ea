#include "fixtures.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include <unistd.h>

#include "wiregraph/pipeline.hpp"

namespace fixtures {

const Taxonomy& taxonomy()
{
    static const Taxonomy t = Taxonomy::load(default_data_dir() / "taxonomy.json");
    return t;
}

const SymbolLibrary& library()
{
    static const SymbolLibrary l = SymbolLibrary::load(default_data_dir() / "symbol_library.json");
    return l;
}

void Canvas::dot(int x, int y)
{
    if (map.in_bounds(x, y))
        map.at(x, y) = 1;
}

void Canvas::line(Point a, Point b, int thickness)
{
    const double len = distance(a, b);
    const int steps = std::max(1, int(std::ceil(len * 2)));
    const int lo = -(thickness - 1) / 2;
    const int hi = thickness / 2;
    for (int s = 0; s <= steps; ++s) {
        const double t = double(s) / steps;
        const int cx = int(std::lround(a.x + (b.x - a.x) * t));
        const int cy = int(std::lround(a.y + (b.y - a.y) * t));
        for (int dy = lo; dy <= hi; ++dy)
            for (int dx = lo; dx <= hi; ++dx)
                dot(cx + dx, cy + dy);
    }
}

void Canvas::polyline(const std::vector<Point>& pts, int thickness)
{
    for (std::size_t i = 1; i < pts.size(); ++i)
        line(pts[i - 1], pts[i], thickness);
}

void Canvas::rect(const BoundingBox& b, int thickness)
{
    const Point tl{double(b.xmin), double(b.ymin)}, tr{double(b.xmax), double(b.ymin)};
    const Point bl{double(b.xmin), double(b.ymax)}, br{double(b.xmax), double(b.ymax)};
    polyline({tl, tr, br, bl, tl}, thickness);
}

void Canvas::disc(Point c, double r)
{
    for (int y = int(c.y - r) - 1; y <= int(c.y + r) + 1; ++y)
        for (int x = int(c.x - r) - 1; x <= int(c.x + r) + 1; ++x)
            if ((x - c.x) * (x - c.x) + (y - c.y) * (y - c.y) <= r * r)
                dot(x, y);
}

GrayImage render_gray(const BitMap& strokes, int paper_left, int paper_right, int ink)
{
    GrayImage g(strokes.width, strokes.height);
    for (int y = 0; y < g.height; ++y)
        for (int x = 0; x < g.width; ++x) {
            const double t = g.width > 1 ? double(x) / (g.width - 1) : 0.0;
            const double paper = paper_left + (paper_right - paper_left) * t;
            g.at(x, y) = std::uint8_t(std::lround(strokes.at(x, y) ? ink * paper / 255.0 : paper));
        }
    return g;
}

namespace {

struct Builder {
    Circuit c;
    Canvas canvas;

    Builder(std::string name, int w, int h) : canvas(w, h)
    {
        c.name = std::move(name);
        c.record.image_path = c.name + ".png";
        c.record.width = w;
        c.record.height = h;
    }

    void object(int id, const std::string& cls, BoundingBox box, std::optional<double> rot = std::nullopt,
                std::optional<std::string> text = std::nullopt)
    {
        c.record.objects.push_back({id, box, taxonomy().classify(cls), rot, std::move(text), std::nullopt});
    }

    /// Symbol body drawn as an inset rectangle.
    void symbol(int id, const std::string& cls, BoundingBox box, double rot)
    {
        object(id, cls, box, rot);
        canvas.rect({box.xmin + 3, box.ymin + 3, box.xmax - 3, box.ymax - 3});
        c.expected.nodes[id] = "symbol:" + cls;
    }

    void corner(int id, Point at)
    {
        object(id, "corner", around(at, 6));
    }

    void junction(int id, Point at)
    {
        object(id, "junction", around(at, 6));
        canvas.disc(at, 5);
        c.expected.nodes[id] = "junction:junction";
    }

    void wire(const std::vector<Point>& pts) { canvas.polyline(pts); }

    void edge(const std::string& a, const std::string& b) { c.expected.edges.insert(std::min(a, b) + "--" + std::max(a, b)); }

    static BoundingBox around(Point p, int r)
    {
        const int x = int(std::lround(p.x)), y = int(std::lround(p.y));
        return {x - r, y - r, x + r, y + r};
    }

    Circuit done()
    {
        c.strokes = canvas.map;
        return std::move(c);
    }
};

}  // namespace

// Battery, R1 across the top, R2 down the right side, four corners.
Circuit series()
{
    Builder b("series", 400, 300);
    b.symbol(0, "voltage.dc", {40, 120, 80, 180}, 0);
    b.symbol(1, "resistor", {170, 40, 230, 60}, 0);
    b.symbol(2, "resistor", {310, 120, 330, 180}, 90);
    b.corner(3, {60, 50});
    b.corner(4, {320, 50});
    b.corner(5, {320, 250});
    b.corner(6, {60, 250});
    b.object(7, "text", {180, 10, 220, 30}, 0, "10k");
    b.canvas.rect({182, 12, 218, 28}, 1);
    b.wire({{60, 120}, {60, 50}, {170, 50}});
    b.wire({{230, 50}, {320, 50}, {320, 120}});
    b.wire({{320, 180}, {320, 250}, {60, 250}, {60, 180}});
    b.edge("0.plus", "1.1");
    b.edge("1.2", "2.2");
    b.edge("0.minus", "2.1");
    b.c.expected.nets = 3;
    return b.done();
}

// Battery feeding R1 and R2 in parallel through two junction dots.
Circuit parallel()
{
    Builder b("parallel", 400, 300);
    b.symbol(0, "voltage.dc", {40, 120, 80, 180}, 0);
    b.symbol(1, "resistor", {190, 120, 210, 180}, 90);
    b.symbol(2, "resistor", {310, 120, 330, 180}, 90);
    b.junction(3, {200, 50});
    b.junction(4, {200, 250});
    b.corner(5, {60, 50});
    b.corner(6, {320, 50});
    b.corner(7, {320, 250});
    b.corner(8, {60, 250});
    b.wire({{60, 120}, {60, 50}, {320, 50}, {320, 120}});
    b.wire({{200, 50}, {200, 120}});
    b.wire({{60, 180}, {60, 250}, {320, 250}, {320, 180}});
    b.wire({{200, 250}, {200, 180}});
    b.edge("0.plus", "3.");
    b.edge("1.2", "3.");
    b.edge("2.2", "3.");
    b.edge("0.minus", "4.");
    b.edge("1.1", "4.");
    b.edge("2.1", "4.");
    b.c.expected.nets = 2;
    return b.done();
}

// A horizontal wire R1-R2 hopping over a vertical wire R3-R4.
Circuit hop_crossing()
{
    Builder b("hop", 400, 300);
    b.symbol(0, "resistor", {40, 140, 100, 160}, 0);
    b.symbol(1, "resistor", {300, 140, 360, 160}, 0);
    b.symbol(2, "resistor", {190, 20, 210, 80}, 90);
    b.symbol(3, "resistor", {190, 220, 210, 280}, 90);
    b.object(4, "crossover", {188, 138, 212, 162});
    b.wire({{100, 150}, {300, 150}});
    b.wire({{200, 80}, {200, 220}});
    b.edge("0.2", "1.1");
    b.edge("2.1", "3.2");
    b.c.expected.nets = 2;
    return b.done();
}

// R1 to R2 down a three-corner staircase.
Circuit corner_chain()
{
    Builder b("corners", 400, 300);
    b.symbol(0, "resistor", {40, 40, 100, 60}, 0);
    b.symbol(1, "resistor", {250, 200, 270, 260}, 90);
    b.corner(2, {160, 50});
    b.corner(3, {160, 150});
    b.corner(4, {260, 150});
    b.wire({{100, 50}, {160, 50}, {160, 150}, {260, 150}, {260, 200}});
    b.edge("0.2", "1.2");
    b.c.expected.nets = 1;
    return b.done();
}

// R1-R2 wired, plus a loose wire hanging off R2.
Circuit dangling_wire()
{
    Builder b("dangling", 400, 200);
    b.symbol(0, "resistor", {40, 90, 100, 110}, 0);
    b.symbol(1, "resistor", {200, 90, 260, 110}, 0);
    b.wire({{100, 100}, {200, 100}});
    b.wire({{260, 100}, {340, 100}, {340, 160}});
    b.edge("0.2", "1.1");
    b.c.expected.nets = 1;
    b.c.expected.diagnostics.insert("dangling-blob");
    return b.done();
}

// Three resistors meeting at an undotted T.
Circuit t_junction()
{
    Builder b("tjunction", 400, 300);
    b.symbol(0, "resistor", {40, 90, 100, 110}, 0);
    b.symbol(1, "resistor", {300, 90, 360, 110}, 0);
    b.symbol(2, "resistor", {190, 200, 210, 260}, 90);
    b.wire({{100, 100}, {300, 100}});
    b.wire({{200, 100}, {200, 200}});
    b.c.expected.nodes[3] = "implicit-junction:implicit-junction";
    b.edge("0.2", "3.");
    b.edge("1.1", "3.");
    b.edge("2.2", "3.");
    b.c.expected.nets = 1;
    b.c.expected.diagnostics.insert("implicit-junction");
    return b.done();
}

std::vector<Circuit> all_circuits()
{
    return {series(), parallel(), hop_crossing(), corner_chain(), dangling_wire(), t_junction()};
}

std::map<int, std::string> node_set(const CircuitGraph& g)
{
    std::map<int, std::string> out;
    for (const auto& n : g.nodes)
        out[n.id] = std::string(to_string(n.kind)) + ":" + n.cls;
    return out;
}

std::multiset<EdgeKey> edge_set(const CircuitGraph& g)
{
    std::multiset<EdgeKey> out;
    for (const auto& e : g.edges) {
        std::string ends[2];
        for (int k = 0; k < 2; ++k) {
            const Node& n = g.node(e.ends[k].node);
            ends[k] = std::to_string(n.id) + "." + n.ports[std::size_t(e.ends[k].port)].name.value_or("");
        }
        out.insert(std::min(ends[0], ends[1]) + "--" + std::max(ends[0], ends[1]));
    }
    return out;
}

std::multiset<std::string> diagnostic_kinds(const CircuitGraph& g)
{
    std::multiset<std::string> out;
    for (const auto& d : g.diagnostics)
        out.insert(d.kind);
    return out;
}

std::filesystem::path temp_dir(const std::string& tag)
{
    static std::atomic<int> counter{0};
    const auto dir = std::filesystem::temp_directory_path() /
                     ("wiregraph-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace fixtures
