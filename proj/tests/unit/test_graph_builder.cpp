#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "wiregraph/graph_builder.hpp"
#include "wiregraph/pipeline.hpp"

using namespace wiregraph;

namespace {

AnnotatedObject object(int id, const std::string& cls, BoundingBox box, std::optional<double> rot = std::nullopt,
                       std::optional<std::string> text = std::nullopt)
{
    return {id, box, fixtures::taxonomy().classify(cls), rot, std::move(text), std::nullopt};
}

WireSegment wire(int a, int b, std::vector<Point> pts)
{
    WireSegment s;
    s.polyline = Polyline{pts};
    s.ends = {SegmentEnd{SegmentEnd::Kind::Object, a, pts.front()}, SegmentEnd{SegmentEnd::Kind::Object, b, pts.back()}};
    return s;
}

double total_length(const CircuitGraph& g)
{
    double sum = 0.0;
    for (const auto& e : g.edges)
        sum += e.geometry.length();
    return sum;
}

std::set<int> far_ends(const Edge& e, const CircuitGraph& g)
{
    return {g.node(e.ends[0].node).id, g.node(e.ends[1].node).id};
}

Point polar(Point c, double deg, double r)
{
    const double t = deg * std::numbers::pi / 180.0;
    return {c.x + r * std::cos(t), c.y - r * std::sin(t)};
}

// Crossover 4 at (100,100) with four resistors out along the given angles.
CircuitGraph cross(const std::array<double, 4>& angles, int arms = 4)
{
    const Point c{100, 100};
    std::vector<AnnotatedObject> objs;
    EdgeExtraction ex;
    for (int i = 0; i < arms; ++i) {
        const Point far = polar(c, angles[std::size_t(i)], 80);
        const Point mid = polar(c, angles[std::size_t(i)], 40);
        objs.push_back(object(i, "resistor", {int(far.x) - 10, int(far.y) - 10, int(far.x) + 10, int(far.y) + 10}, 0));
        ex.segments.push_back(wire(i, 4, {far, mid, c}));
    }
    objs.push_back(object(4, "crossover", {90, 90, 110, 110}));
    return assemble(objs, ex, {200, 200});
}

std::multiset<std::string> kinds(const Diagnostics& d)
{
    std::multiset<std::string> out;
    for (const auto& x : d)
        out.insert(x.kind);
    return out;
}

}  // namespace

TEST_CASE("assemble")
{
    const std::vector<AnnotatedObject> two{object(0, "resistor", {0, 0, 20, 10}, 0), object(1, "resistor", {60, 0, 80, 10}, 0),
                                           object(2, "text", {30, 20, 50, 30}, 0, "1k")};
    EdgeExtraction ex;
    ex.segments.push_back(wire(0, 1, {{20, 5}, {60, 5}}));
    const auto g = assemble(two, ex, {100, 40}, "a.png");
    CHECK(g.nodes.size() == 2);
    CHECK(g.edges.size() == 1);
    CHECK(g.node(0).ports.size() == 1);
    CHECK(g.node(1).ports.size() == 1);
    CHECK(g.edges[0].id == 0);
    CHECK(g.edges[0].ends[0] == EdgeEnd{0, 0});
    CHECK(g.texts.size() == 1);
    CHECK(g.texts[0].text == "1k");
    CHECK_NOTHROW(g.check_integrity());

    const auto bare = assemble(two, EdgeExtraction{});
    CHECK(bare.edges.empty());
    CHECK(bare.nodes.size() == 2);

    EdgeExtraction bad;
    bad.segments.push_back(wire(0, 9, {{20, 5}, {60, 5}}));
    CHECK_THROWS_AS(assemble(two, bad), ContractError);

    SUBCASE("series fixture counts")
    {
        const auto s = fixtures::series();
        const auto ex = extract_edges(s.strokes, s.record.objects);
        const auto sg = assemble(s.record.objects, ex);
        // battery, two resistors, four corners; seven wire pieces between them
        CHECK(sg.nodes.size() == 7);
        CHECK(sg.edges.size() == 7);
        CHECK(sg.texts.size() == 1);
        for (const auto& n : sg.nodes)
            CHECK(n.degree() == 2);
    }
    SUBCASE("implicit junction ids follow the object ids")
    {
        const auto t = fixtures::t_junction();
        const auto tg = assemble(t.record.objects, extract_edges(t.strokes, t.record.objects));
        REQUIRE(tg.find_node(3) != nullptr);
        CHECK(tg.node(3).kind == NodeKind::ImplicitJunction);
        CHECK(tg.node(3).degree() == 3);
    }
    SUBCASE("under-connected junction is reported")
    {
        std::vector<AnnotatedObject> objs = two;
        objs.push_back(object(3, "junction", {36, 0, 44, 10}));
        EdgeExtraction one;
        one.segments.push_back(wire(0, 3, {{20, 5}, {36, 5}}));
        CHECK(kinds(assemble(objs, one).diagnostics) == std::multiset<std::string>{"junction-degree"});
    }
}

TEST_CASE("resolve_hops pairs opposite wires")
{
    for (const auto& angles : {std::array<double, 4>{0, 90, 180, 270}, std::array<double, 4>{5, 85, 184, 276},
                               std::array<double, 4>{355, 95, 175, 265}, std::array<double, 4>{90, 180, 0, 270}}) {
        CAPTURE(angles[0]);
        CAPTURE(angles[1]);
        const auto g = cross(angles);
        const double before = total_length(g);
        const auto r = resolve_hops(g);
        CHECK(r.find_node(4) == nullptr);
        REQUIRE(r.edges.size() == 2);
        std::set<std::set<int>> pairs{far_ends(r.edges[0], r), far_ends(r.edges[1], r)};
        // arm i points along angles[i]; opposite arms are those 180 apart
        std::set<std::set<int>> expected;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) {
                const double gap = std::abs(std::remainder(angles[std::size_t(i)] - angles[std::size_t(j)], 360.0));
                if (gap > 150)
                    expected.insert({i, j});
            }
        CHECK(pairs == expected);
        CHECK(std::abs(total_length(r) - before) <= 1e-6);
        CHECK(r.diagnostics.empty());
        CHECK_NOTHROW(r.check_integrity());
        for (const auto& e : r.edges)
            CHECK(e.geometry.well_formed());
    }
}

TEST_CASE("resolve_hops on random perturbed crosses")
{
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> jitter(-5.0, 5.0), base(0.0, 90.0);
    for (int i = 0; i < 200; ++i) {
        const double b = base(rng);
        const auto g = cross({b + jitter(rng), b + 90 + jitter(rng), b + 180 + jitter(rng), b + 270 + jitter(rng)});
        const auto r = resolve_hops(g);
        REQUIRE(r.edges.size() == 2);
        std::set<std::set<int>> pairs{far_ends(r.edges[0], r), far_ends(r.edges[1], r)};
        CHECK(pairs == std::set<std::set<int>>{{0, 2}, {1, 3}});
        CHECK(std::abs(total_length(r) - total_length(g)) <= 1e-6);
    }
}

TEST_CASE("resolve_hops leaves malformed crossovers alone")
{
    const auto g = cross({0, 90, 180, 0}, 3);
    const auto r = resolve_hops(g);
    CHECK(r.nodes == g.nodes);
    CHECK(r.edges == g.edges);
    CHECK(kinds(r.diagnostics) == std::multiset<std::string>{"hop-degree"});

    // collapse_corners then treats it as a junction
    const auto c = collapse_corners(r);
    CHECK(c.node(4).kind == NodeKind::ImplicitJunction);
    CHECK(kinds(c.diagnostics).count("crossover-junction") == 1);

    const auto tied = resolve_hops(cross({0, 2, 180, 182}));
    CHECK(kinds(tied.diagnostics) == std::multiset<std::string>{"ambiguous-hop"});
}

TEST_CASE("incidence_direction")
{
    Edge e;
    e.ends = {EdgeEnd{1, 0}, EdgeEnd{2, 0}};
    e.geometry = Polyline{{{0, 0}, {3, 0}, {20, 0}, {20, 40}}};
    const auto d1 = incidence_direction(e, 1);
    CHECK(d1.x == doctest::Approx(1.0));
    CHECK(d1.y == doctest::Approx(0.0));
    const auto d2 = incidence_direction(e, 2);
    CHECK(d2.x == doctest::Approx(0.0));
    CHECK(d2.y == doctest::Approx(-1.0));
}

TEST_CASE("collapse_corners")
{
    // R0 -> corners 2, 3, 4 -> R1
    const std::vector<AnnotatedObject> objs{
        object(0, "resistor", {0, 0, 40, 20}, 0),   object(1, "resistor", {190, 180, 210, 220}, 90),
        object(2, "corner", {94, 4, 106, 16}),      object(3, "corner", {94, 94, 106, 106}),
        object(4, "corner", {194, 94, 206, 106})};
    EdgeExtraction ex;
    ex.segments.push_back(wire(0, 2, {{40, 10}, {100, 10}}));
    ex.segments.push_back(wire(2, 3, {{100, 10}, {100, 100}}));
    ex.segments.push_back(wire(3, 4, {{100, 100}, {200, 100}}));
    ex.segments.push_back(wire(4, 1, {{200, 100}, {200, 180}}));
    const auto g = assemble(objs, ex);
    const auto c = collapse_corners(g);
    REQUIRE(c.edges.size() == 1);
    CHECK(c.nodes.size() == 2);
    CHECK(far_ends(c.edges[0], c) == std::set<int>{0, 1});
    CHECK(c.edges[0].id == 0);
    CHECK(c.edges[0].geometry.length() == doctest::Approx(60.0 + 90 + 100 + 80).epsilon(1e-12));
    CHECK(c.edges[0].geometry.points.size() == 5);
    CHECK(c.diagnostics.empty());
    CHECK_NOTHROW(c.check_integrity());

    SUBCASE("three wires make a junction")
    {
        std::vector<AnnotatedObject> more = objs;
        more.push_back(object(5, "resistor", {80, 150, 120, 170}, 0));
        EdgeExtraction ex3 = ex;
        ex3.segments.push_back(wire(3, 5, {{100, 100}, {100, 150}}));
        const auto j = collapse_corners(assemble(more, ex3));
        CHECK(j.node(3).kind == NodeKind::ImplicitJunction);
        CHECK(j.node(3).degree() == 3);
        CHECK(kinds(j.diagnostics) == std::multiset<std::string>{"corner-junction"});
    }
    SUBCASE("one wire leaves an open end, none drops the corner")
    {
        EdgeExtraction ex1;
        ex1.segments.push_back(wire(0, 2, {{40, 10}, {100, 10}}));
        const auto o = collapse_corners(assemble(objs, ex1));
        CHECK(o.node(2).kind == NodeKind::OpenEnd);
        CHECK(o.find_node(3) == nullptr);
        CHECK(kinds(o.diagnostics) ==
              std::multiset<std::string>{"dangling-corner", "isolated-corner", "isolated-corner"});
    }
}

TEST_CASE("rectify")
{
    const Polyline l{{{0, 0}, {50, 0}, {50, 50}}};
    CHECK(rectify(l) == l);
    CHECK(rectify(Polyline{{{0, 0}, {25, 0}, {50, 0}, {50, 50}}}) == l);

    const Polyline diag{{{0, 0}, {100, 100}}};
    CHECK(rectify(diag, 3.0, 10.0) == diag);

    SUBCASE("jittered horizontal line")
    {
        std::mt19937 rng(8);
        std::uniform_real_distribution<double> j(-2.0, 2.0);
        std::vector<Point> pts{{0, 50}};
        for (int x = 1; x < 200; ++x)
            pts.push_back({double(x), 50 + j(rng)});
        pts.push_back({200, 50});
        CHECK(rectify(Polyline{pts}) == Polyline{{{0, 50}, {200, 50}}});
    }
    SUBCASE("jittered line with uneven ends keeps its ends")
    {
        std::mt19937 rng(9);
        std::uniform_real_distribution<double> j(-1.0, 1.0);
        std::vector<Point> pts{{0, 49}};
        for (int x = 1; x < 200; ++x)
            pts.push_back({double(x), 50 + j(rng)});
        pts.push_back({200, 51});
        const auto r = rectify(Polyline{pts});
        CHECK(r.front() == Point{0, 49});
        CHECK(r.back() == Point{200, 51});
        // interior geometry is one horizontal run at the mean height
        CHECK(r == Polyline{{{0, 49}, {0, 50}, {200, 50}, {200, 51}}});
    }
    SUBCASE("near-axis staircase snaps")
    {
        const auto r = rectify(Polyline{{{0, 0}, {60, 3.5}, {64, 80}, {140, 84}}}, 1.0, 10.0);
        CHECK(r.front() == Point{0, 0});
        CHECK(r.back() == Point{140, 84});
        for (std::size_t i = 0; i + 1 < r.points.size(); ++i) {
            const auto a = r.points[i], b = r.points[i + 1];
            CHECK((a.x == b.x || a.y == b.y));
        }
    }
    CHECK_THROWS_AS(rectify(l, 0.0), ContractError);
    CHECK_THROWS_AS(rectify(l, 3.0, 45.0), ContractError);
}

TEST_CASE("rectify pins the end vertices")
{
    std::mt19937 rng(10);
    std::uniform_real_distribution<double> c(0.0, 300.0);
    std::uniform_int_distribution<int> n(2, 12);
    for (int i = 0; i < 1000; ++i) {
        std::vector<Point> pts;
        const int k = n(rng);
        for (int j = 0; j < k; ++j)
            pts.push_back({c(rng), c(rng)});
        const Polyline line = dedupe(pts);
        if (!line.well_formed())
            continue;
        const auto r = rectify(line);
        CHECK(r.front() == line.front());
        CHECK(r.back() == line.back());
        CHECK(r.well_formed());
    }
}

TEST_CASE("simplify")
{
    CHECK(simplify(Polyline{{{0, 0}, {5, 1}, {10, 0}}}, 2.0) == Polyline{{{0, 0}, {10, 0}}});
    CHECK(simplify(Polyline{{{0, 0}, {5, 3}, {10, 0}}}, 2.0).points.size() == 3);
}

TEST_CASE("library port positions")
{
    const auto& r = fixtures::library().at("resistor");
    const BoundingBox box{310, 120, 330, 180};
    CHECK(library_port_position(r.ports[0], box, 90) == Point{320, 180});
    CHECK(library_port_position(r.ports[1], box, 90) == Point{320, 120});
    const BoundingBox flat{170, 40, 230, 60};
    CHECK(library_port_position(r.ports[0], flat, 0) == Point{170, 50});
    CHECK(library_port_position(r.ports[0], flat, 180) == Point{230, 50});
    const auto& v = fixtures::library().at("voltage.dc");
    CHECK(library_port_position(v.ports[0], {40, 120, 80, 180}, 0) == Point{60, 120});
}

TEST_CASE("assign_ports")
{
    auto diode_node = [](double rot) {
        Node n;
        n.id = 7;
        n.cls = "diode";
        n.rotation = rot;
        n.bbox = {100, 100, 160, 120};
        n.ports = {{std::nullopt, {101, 111}, 0}, {std::nullopt, {158, 109}, 1}};
        return n;
    };
    Diagnostics d;
    const auto up = assign_ports(diode_node(0), fixtures::library(), d);
    CHECK(up.ports[0].name == "anode");
    CHECK(up.ports[0].position == Point{100, 110});
    CHECK(up.ports[1].name == "cathode");
    CHECK(up.ports[1].position == Point{160, 110});
    const auto flipped = assign_ports(diode_node(180), fixtures::library(), d);
    CHECK(flipped.ports[0].name == "cathode");
    CHECK(flipped.ports[1].name == "anode");
    CHECK(d.empty());

    SUBCASE("one contact leaves an open port")
    {
        Node r = diode_node(0);
        r.cls = "resistor";
        r.ports.pop_back();
        const auto out = assign_ports(r, fixtures::library(), d);
        REQUIRE(out.ports.size() == 2);
        CHECK(out.ports[0].name == "1");
        CHECK(out.ports[0].edge == 0);
        CHECK(out.ports[1].name == "2");
        CHECK_FALSE(out.ports[1].edge.has_value());
        CHECK(d.empty());
        // a second pass is stable
        CHECK(assign_ports(out, fixtures::library(), d) == out);
    }
    SUBCASE("extra contacts stay unnamed")
    {
        Node r = diode_node(0);
        r.ports.push_back({std::nullopt, {130, 100}, 2});
        const auto out = assign_ports(r, fixtures::library(), d);
        CHECK_FALSE(out.ports[2].name.has_value());
        CHECK(out.ports[2].position == Point{130, 100});
        CHECK(kinds(d) == std::multiset<std::string>{"unmatched-port"});
    }
    SUBCASE("missing rotation and missing entry")
    {
        Node r = diode_node(0);
        r.rotation.reset();
        assign_ports(r, fixtures::library(), d);
        r.cls = "mystery";
        CHECK(assign_ports(r, fixtures::library(), d) == r);
        CHECK(kinds(d) == std::multiset<std::string>{"missing-rotation", "no-library-entry"});
    }
}

TEST_CASE("assign_ports is the identity at exact library positions")
{
    std::mt19937 rng(40);
    std::vector<std::string> classes;
    for (const auto& [name, entry] : fixtures::library().entries())
        if (!entry.ports.empty())
            classes.push_back(name);
    std::uniform_int_distribution<std::size_t> pick(0, classes.size() - 1);
    std::uniform_int_distribution<int> c(0, 400), side(20, 90), quarter(0, 3);
    for (int i = 0; i < 300; ++i) {
        Node n;
        n.cls = classes[pick(rng)];
        const auto& e = fixtures::library().at(n.cls);
        const int x = c(rng), y = c(rng);
        n.bbox = {x, y, x + side(rng), y + side(rng)};
        n.rotation = 90.0 * quarter(rng);
        for (std::size_t k = 0; k < e.ports.size(); ++k)
            n.ports.push_back({std::nullopt, library_port_position(e.ports[k], n.bbox, *n.rotation), int(k)});
        Diagnostics d;
        const auto out = assign_ports(n, fixtures::library(), d);
        REQUIRE(out.ports.size() == e.ports.size());
        for (std::size_t k = 0; k < e.ports.size(); ++k) {
            CHECK(out.ports[k].name == e.ports[k].name);
            CHECK(out.ports[k].position == n.ports[k].position);
        }
        CHECK(d.empty());
    }
}

TEST_CASE("derive_nets examples")
{
    const auto lib = fixtures::library();
    PipelineConfig cfg;
    const auto series = fixtures::series();
    const auto s = run_pipeline(series.record, series.strokes, lib, cfg);
    CHECK(derive_nets(s.graph).size() == 3);
    const auto parallel = fixtures::parallel();
    const auto p = run_pipeline(parallel.record, parallel.strokes, lib, cfg);
    const auto nets = derive_nets(p.graph);
    REQUIRE(nets.size() == 2);
    CHECK(nets[0].id == 1);
    CHECK(nets[0].members.size() == 3);
    CHECK(nets[0].edges.size() == 3);
    CHECK(derive_nets(CircuitGraph{}).empty());
}

TEST_CASE("derive_nets matches a traversal oracle on random graphs")
{
    std::mt19937 rng(50);
    for (int trial = 0; trial < 300; ++trial) {
        std::uniform_int_distribution<int> ns(1, 6), nj(0, 4), ne(0, 10);
        const int symbols = ns(rng), junctions = nj(rng), edges = ne(rng);
        std::vector<AnnotatedObject> objs;
        for (int i = 0; i < symbols; ++i)
            objs.push_back(object(i, "resistor", {i * 30, 0, i * 30 + 20, 10}, 0));
        for (int i = 0; i < junctions; ++i)
            objs.push_back(object(symbols + i, "junction", {i * 30, 100, i * 30 + 10, 110}));
        std::uniform_int_distribution<int> any(0, symbols + junctions - 1);
        EdgeExtraction ex;
        for (int e = 0; e < edges; ++e) {
            const int a = any(rng), b = any(rng);
            ex.segments.push_back(wire(a, b, {{double(e), 0}, {double(e), 50}}));
        }
        const auto g = assemble(objs, ex);
        const auto nets = derive_nets(g);

        // oracle: flood over edges, stepping through junction nodes only
        std::vector<int> comp(g.edges.size(), -1);
        int count = 0;
        for (std::size_t s = 0; s < g.edges.size(); ++s) {
            if (comp[s] >= 0)
                continue;
            std::vector<std::size_t> stack{s};
            comp[s] = int(s);
            bool has_symbol = false;
            while (!stack.empty()) {
                const auto cur = stack.back();
                stack.pop_back();
                for (const auto& end : g.edges[cur].ends) {
                    if (end.node < symbols) {
                        has_symbol = true;
                        continue;
                    }
                    for (std::size_t o = 0; o < g.edges.size(); ++o)
                        if (comp[o] < 0 && (g.edges[o].ends[0].node == end.node || g.edges[o].ends[1].node == end.node)) {
                            comp[o] = int(s);
                            stack.push_back(o);
                        }
                }
            }
            count += has_symbol;
        }
        CHECK(int(nets.size()) == count);

        std::map<std::pair<int, int>, int> seen;
        for (const auto& net : nets) {
            CHECK_FALSE(net.members.empty());
            for (const auto& m : net.members)
                CHECK(seen.emplace(std::pair(m.node, m.port), net.id).second);
            for (std::size_t k = 1; k < net.edges.size(); ++k)
                CHECK(comp[std::size_t(net.edges[k])] == comp[std::size_t(net.edges[0])]);
        }
        // every connected symbol port is in a net
        for (const auto& n : g.nodes)
            if (n.kind == NodeKind::Symbol)
                for (std::size_t p = 0; p < n.ports.size(); ++p)
                    CHECK(seen.count({n.id, int(p)}) == 1);
        for (std::size_t k = 1; k < nets.size(); ++k)
            CHECK(nets[k].id == nets[k - 1].id + 1);
    }
}

TEST_CASE("associate_texts")
{
    const std::vector<AnnotatedObject> objs{
        object(0, "resistor", {100, 100, 160, 120}, 0), object(1, "resistor", {200, 100, 260, 120}, 0),
        object(2, "text", {115, 80, 145, 90}, 0, "100k"), object(3, "text", {170, 105, 190, 115}, 0, "mid"),
        object(4, "text", {500, 500, 520, 510}, 0, "far"), object(5, "junction", {400, 400, 410, 410})};
    const auto g = associate_texts(assemble(objs, EdgeExtraction{}, {600, 600}));
    REQUIRE(g.texts.size() == 3);
    CHECK(g.texts[0].attached_to == 0);
    CHECK(g.texts[1].attached_to == 0);
    CHECK_FALSE(g.texts[2].attached_to.has_value());
    CHECK(g.node(0).texts == std::vector<int>{2, 3});
    CHECK(g.node(1).texts.empty());

    const auto tight = associate_texts(assemble(objs, EdgeExtraction{}), 5.0);
    for (const auto& t : tight.texts)
        CHECK_FALSE(t.attached_to.has_value());
}

TEST_CASE("pipeline output has no corners or crossovers")
{
    PipelineConfig cfg;
    for (const auto& c : fixtures::all_circuits()) {
        const auto r = run_pipeline(c.record, c.strokes, fixtures::library(), cfg);
        for (const auto& n : r.graph.nodes) {
            CHECK(n.kind != NodeKind::Corner);
            CHECK(n.kind != NodeKind::Crossover);
        }
    }
}
