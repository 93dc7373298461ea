#include "doctest.h"

#include <map>
#include <random>

#include "fixtures.hpp"
#include "wiregraph/disjoint_set.hpp"
#include "wiregraph/edge_extractor.hpp"
#include "wiregraph/thinning.hpp"

using namespace wiregraph;

namespace {

AnnotatedObject object(int id, const std::string& cls, BoundingBox box)
{
    return {id, box, fixtures::taxonomy().classify(cls), std::nullopt, std::nullopt, std::nullopt};
}

BitMap random_map(std::mt19937& rng, int w, int h, double density)
{
    std::bernoulli_distribution d(density);
    BitMap m(w, h);
    for (auto& v : m.pixels)
        v = d(rng) ? 1 : 0;
    return m;
}

// Component label per pixel by plain recursive-free flood fill; -1 for
// background and for components below min_size.
std::vector<int> flood_labels(const BitMap& m, int min_size)
{
    std::vector<int> label(m.pixels.size(), -1);
    std::vector<int> comp(m.pixels.size(), -1);
    int next = 0;
    for (int y = 0; y < m.height; ++y)
        for (int x = 0; x < m.width; ++x) {
            if (!m.at(x, y) || comp[m.index(x, y)] >= 0)
                continue;
            std::vector<PixelPos> stack{{x, y}}, members;
            comp[m.index(x, y)] = next;
            while (!stack.empty()) {
                const auto p = stack.back();
                stack.pop_back();
                members.push_back(p);
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = p.x + dx, ny = p.y + dy;
                        if (m.in_bounds(nx, ny) && m.at(nx, ny) && comp[m.index(nx, ny)] < 0) {
                            comp[m.index(nx, ny)] = next;
                            stack.push_back({nx, ny});
                        }
                    }
            }
            if (int(members.size()) >= min_size)
                for (const auto& p : members)
                    label[m.index(p.x, p.y)] = next;
            ++next;
        }
    return label;
}

// Same partition up to renaming of labels.
bool same_partition(const std::vector<int>& a, const std::vector<int>& b)
{
    std::map<int, int> ab, ba;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if ((a[i] < 0) != (b[i] < 0))
            return false;
        if (a[i] < 0)
            continue;
        if (ab.emplace(a[i], b[i]).first->second != b[i] || ba.emplace(b[i], a[i]).first->second != a[i])
            return false;
    }
    return true;
}

std::vector<int> blob_labels(const BitMap& m, const std::vector<Blob>& blobs)
{
    std::vector<int> label(m.pixels.size(), -1);
    for (const auto& b : blobs)
        for (const auto& p : b.pixels)
            label[m.index(p.x, p.y)] = b.id;
    return label;
}

Blob blob_of(const BitMap& m)
{
    const auto blobs = label_components(m, 1);
    REQUIRE(blobs.size() == 1);
    return blobs[0];
}

bool subset(const BitMap& a, const BitMap& b)
{
    for (std::size_t i = 0; i < a.pixels.size(); ++i)
        if (a.pixels[i] && !b.pixels[i])
            return false;
    return true;
}

}  // namespace

TEST_CASE("mask_objects")
{
    std::mt19937 rng(21);
    const auto m = random_map(rng, 40, 30, 0.4);
    CHECK(mask_objects(m, {}, 3) == m);

    const std::vector<AnnotatedObject> whole{object(0, "resistor", {0, 0, 40, 30})};
    CHECK(count_strokes(mask_objects(m, whole, 0)) == 0);

    fixtures::Canvas line(60, 20);
    line.line({0, 10}, {59, 10}, 1);
    const std::vector<AnnotatedObject> box{object(0, "resistor", {25, 5, 35, 15})};
    CHECK(label_components(line.map, 1).size() == 1);
    CHECK(label_components(mask_objects(line.map, box, 0), 1).size() == 2);

    // texts are masked too
    const std::vector<AnnotatedObject> text{object(0, "text", {25, 5, 35, 15})};
    CHECK(label_components(mask_objects(line.map, text, 0), 1).size() == 2);
}

TEST_CASE("mask_objects only removes strokes")
{
    std::mt19937 rng(22);
    std::uniform_int_distribution<int> c(0, 63), margin(0, 6);
    for (int i = 0; i < 200; ++i) {
        const auto m = random_map(rng, 64, 64, 0.3);
        std::vector<AnnotatedObject> objs;
        for (int k = 0; k < 4; ++k) {
            int x0 = c(rng), y0 = c(rng);
            objs.push_back(object(k, "diode", {x0, y0, std::min(64, x0 + 1 + c(rng) / 4), std::min(64, y0 + 1 + c(rng) / 4)}));
        }
        const int mg = margin(rng);
        const auto masked = mask_objects(m, objs, mg);
        CHECK(subset(masked, m));
        for (const auto& o : objs) {
            const auto g = inflate(o.bbox, mg, m.size());
            for (int y = g.ymin; y < g.ymax; ++y)
                for (int x = g.xmin; x < g.xmax; ++x)
                    CHECK(masked.at(x, y) == 0);
        }
    }
}

TEST_CASE("label_components examples")
{
    CHECK(label_components(BitMap(10, 10)).empty());
    BitMap dots(20, 5);
    for (int x : {1, 2, 3, 10, 11, 12})
        dots.at(x, 2) = 1;
    CHECK(label_components(dots).empty());
    CHECK(label_components(dots, 3).size() == 2);

    // diagonal pixels are connected
    BitMap diag(5, 5);
    for (int i = 0; i < 5; ++i)
        diag.at(i, i) = 1;
    const auto blobs = label_components(diag, 1);
    REQUIRE(blobs.size() == 1);
    CHECK(blobs[0].pixels.size() == 5);
    CHECK(blobs[0].bbox.xmin == 0);
    CHECK(blobs[0].bbox.xmax >= 4);
}

TEST_CASE("label_components matches a flood-fill oracle")
{
    std::mt19937 rng(23);
    for (int i = 0; i < 100; ++i) {
        const double density = 0.2 + 0.05 * (i % 8);
        const auto m = random_map(rng, 64, 64, density);
        for (int min_size : {1, 8}) {
            const auto blobs = label_components(m, min_size);
            CHECK(same_partition(blob_labels(m, blobs), flood_labels(m, min_size)));
            for (std::size_t k = 0; k < blobs.size(); ++k) {
                CHECK(blobs[k].id == int(k));
                CHECK(int(blobs[k].pixels.size()) >= min_size);
                if (k > 0) {
                    const auto a = blobs[k - 1].pixels.front(), b = blobs[k].pixels.front();
                    CHECK(std::pair(a.y, a.x) < std::pair(b.y, b.x));
                }
            }
        }
    }
}

TEST_CASE("find_contacts")
{
    fixtures::Canvas c(100, 100);
    c.line({20, 50}, {80, 50}, 1);
    const std::vector<AnnotatedObject> objs{object(0, "resistor", {0, 40, 16, 60}),
                                            object(1, "resistor", {84, 40, 100, 60}),
                                            object(2, "resistor", {40, 0, 60, 10})};
    const auto blob = blob_of(c.map);
    const auto contacts = find_contacts(blob, objs, 4);
    REQUIRE(contacts.size() == 2);
    CHECK(contacts[0].object_id == 0);
    CHECK(contacts[0].point == PixelPos{20, 50});
    CHECK(contacts[1].object_id == 1);
    CHECK(contacts[1].point == PixelPos{80, 50});
    CHECK(find_contacts(blob, objs, 2).empty());

    // texts never take contacts
    const std::vector<AnnotatedObject> text{object(0, "text", {0, 40, 16, 60})};
    CHECK(find_contacts(blob, text, 4).empty());

    SUBCASE("T-shape touching three boxes")
    {
        c.line({50, 50}, {50, 14}, 1);
        const auto t = find_contacts(blob_of(c.map), objs, 4);
        REQUIRE(t.size() == 3);
        CHECK(t[2].point == PixelPos{50, 14});
    }
}

TEST_CASE("trace_polyline")
{
    SUBCASE("thick bar follows its centreline")
    {
        fixtures::Canvas c(100, 100);
        c.line({10, 50}, {90, 50}, 3);
        const auto line = trace_polyline(blob_of(c.map), {9, 50}, {91, 50});
        CHECK(line.front() == Point{9, 50});
        CHECK(line.back() == Point{91, 50});
        for (const auto& p : line.points)
            CHECK(std::abs(p.y - 50) <= 1.5);
    }
    SUBCASE("L shape passes the corner")
    {
        fixtures::Canvas c(100, 100);
        c.polyline({{10, 10}, {60, 10}, {60, 60}}, 3);
        const auto line = trace_polyline(blob_of(c.map), {10, 10}, {60, 60});
        double closest = 1e9;
        for (const auto& p : line.points)
            closest = std::min(closest, distance(p, {60, 10}));
        CHECK(closest <= 3.0);
    }
    SUBCASE("1-px line")
    {
        fixtures::Canvas c(50, 20);
        c.line({5, 7}, {44, 7}, 1);
        const auto line = trace_polyline(blob_of(c.map), {5, 7}, {44, 7});
        REQUIRE(line.points.size() == 40);
        for (int i = 0; i < 40; ++i)
            CHECK(line.points[std::size_t(i)] == Point{double(5 + i), 7});
    }
    SUBCASE("endpoints land near the requested points")
    {
        std::mt19937 rng(5);
        std::uniform_int_distribution<int> d(5, 94);
        for (int i = 0; i < 200; ++i) {
            fixtures::Canvas c(100, 100);
            const Point a{double(d(rng)), double(d(rng))}, mid{double(d(rng)), double(d(rng))}, b{double(d(rng)), double(d(rng))};
            const int pen = 1 + i % 4;
            // skip folds where the two strokes overlap
            const double cosang = ((a.x - mid.x) * (b.x - mid.x) + (a.y - mid.y) * (b.y - mid.y)) /
                                  std::max(1e-9, distance(a, mid) * distance(b, mid));
            if (distance(a, mid) < 10 || distance(b, mid) < 10 || cosang > 0.5)
                continue;
            c.polyline({a, mid, b}, pen);
            const auto blob = blob_of(c.map);
            const auto line = trace_polyline(blob, a, b);
            CHECK(line.front() == a);
            CHECK(line.back() == b);
            // thinning eats into the stroke ends by up to about the pen width
            CHECK(distance(line.points[1], a) <= pen + 2.0);
            CHECK(distance(line.points[line.points.size() - 2], b) <= pen + 2.0);
        }
    }
    SUBCASE("disconnected skeleton")
    {
        Blob two;
        for (int x = 0; x < 5; ++x) {
            two.pixels.push_back({x, 0});
            two.pixels.push_back({x + 10, 0});
        }
        two.bbox = {0, 0, 15, 1};
        CHECK_THROWS_AS(trace_polyline(two, {0, 0}, {14, 0}), TraceError);
    }
}

TEST_CASE("extract_edges")
{
    SUBCASE("one line between two boxes")
    {
        fixtures::Canvas c(200, 100);
        c.rect({23, 43, 57, 57});
        c.rect({143, 43, 177, 57});
        c.line({60, 50}, {140, 50});
        const std::vector<AnnotatedObject> objs{object(0, "resistor", {20, 40, 60, 60}),
                                                object(1, "resistor", {140, 40, 180, 60})};
        const auto ex = extract_edges(c.map, objs);
        REQUIRE(ex.segments.size() == 1);
        CHECK(ex.segments[0].ends[0].id == 0);
        CHECK(ex.segments[0].ends[1].id == 1);
        CHECK(ex.junctions.empty());
        CHECK(ex.diagnostics.empty());
    }
    SUBCASE("dangling stroke")
    {
        fixtures::Canvas c(200, 100);
        c.line({60, 50}, {120, 50});
        const std::vector<AnnotatedObject> objs{object(0, "resistor", {20, 40, 60, 60})};
        const auto ex = extract_edges(c.map, objs);
        CHECK(ex.segments.empty());
        REQUIRE(ex.diagnostics.size() == 1);
        CHECK(ex.diagnostics[0].kind == "dangling-blob");
    }
    SUBCASE("undotted T splits at the branch point")
    {
        const auto t = fixtures::t_junction();
        const auto ex = extract_edges(t.strokes, t.record.objects);
        REQUIRE(ex.junctions.size() == 1);
        CHECK(distance(ex.junctions[0].point, {200, 100}) <= 3.0);
        REQUIRE(ex.segments.size() == 3);
        std::set<int> objects;
        for (const auto& s : ex.segments) {
            int implicit = 0;
            for (const auto& e : s.ends) {
                if (e.kind == SegmentEnd::Kind::ImplicitJunction)
                    ++implicit;
                else
                    objects.insert(e.id);
            }
            CHECK(implicit == 1);
        }
        CHECK(objects == std::set<int>{0, 1, 2});
        REQUIRE(ex.diagnostics.size() == 1);
        CHECK(ex.diagnostics[0].kind == "implicit-junction");
    }
    SUBCASE("one segment per drawn line")
    {
        const auto s = fixtures::series();
        // without corner objects every wire runs symbol to symbol
        std::vector<AnnotatedObject> symbols;
        for (const auto& o : s.record.objects)
            if (o.cls.category != Category::Corner)
                symbols.push_back(o);
        const auto ex = extract_edges(s.strokes, symbols);
        CHECK(ex.segments.size() == 3);
        CHECK(ex.diagnostics.empty());
    }
}

TEST_CASE("Zhang-Suen thinning")
{
    fixtures::Canvas c(60, 60);
    c.line({5, 30}, {55, 30}, 5);
    const auto thin = thin_zhang_suen(c.map);
    CHECK(subset(thin, c.map));
    CHECK(label_components(thin, 1).size() == 1);
    for (int x = 10; x <= 50; ++x) {
        int column = 0;
        for (int y = 0; y < 60; ++y)
            column += thin.at(x, y);
        CHECK(column == 1);
    }
    CHECK(thin_zhang_suen(thin) == thin);

    std::mt19937 rng(9);
    for (int i = 0; i < 30; ++i) {
        const auto m = random_map(rng, 32, 32, 0.55);
        const auto t = thin_zhang_suen(m);
        CHECK(subset(t, m));
        CHECK(label_components(t, 1).size() == label_components(m, 1).size());
    }
}

TEST_CASE("disjoint set")
{
    DisjointSet ds(6);
    ds.unite(0, 1);
    ds.unite(2, 3);
    CHECK(ds.find(0) == ds.find(1));
    CHECK(ds.find(1) != ds.find(2));
    ds.unite(1, 3);
    CHECK(ds.find(0) == ds.find(2));
    const int n = ds.add();
    CHECK(n == 6);
    CHECK(ds.find(n) == n);
    CHECK(ds.size() == 7);
}
