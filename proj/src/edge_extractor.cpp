#include "wiregraph/edge_extractor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <queue>
#include <set>

#include "wiregraph/disjoint_set.hpp"
#include "wiregraph/thinning.hpp"

namespace wiregraph {

BitMap mask_objects(const BitMap& map, std::span<const AnnotatedObject> objects, int margin)
{
    BitMap out = map;
    for (const auto& o : objects) {
        const BoundingBox b = inflate(o.bbox, margin, map.size());
        for (int y = std::max(b.ymin, 0); y <= std::min(b.ymax, map.height - 1); ++y)
            for (int x = std::max(b.xmin, 0); x <= std::min(b.xmax, map.width - 1); ++x)
                out.at(x, y) = 0;
    }
    return out;
}

std::vector<Blob> label_components(const BitMap& map, int min_size)
{
    const int w = map.width;
    const int h = map.height;
    std::vector<int> label(map.pixels.size(), -1);
    DisjointSet sets;

    // First pass: provisional labels from the already-visited neighbours.
    constexpr int kPrev[4][2] = {{-1, 0}, {-1, -1}, {0, -1}, {1, -1}};
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!map.at(x, y))
                continue;
            int current = -1;
            for (const auto& d : kPrev) {
                const int nx = x + d[0], ny = y + d[1];
                if (!map.in_bounds(nx, ny))
                    continue;
                const int l = label[map.index(nx, ny)];
                if (l < 0)
                    continue;
                current = current < 0 ? l : (sets.unite(current, l), current);
            }
            label[map.index(x, y)] = current < 0 ? sets.add() : current;
        }
    }

    // Second pass: gather pixels per root, components ordered by first pixel.
    std::map<int, int> root_to_slot;
    std::vector<std::vector<PixelPos>> groups;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const int l = label[map.index(x, y)];
            if (l < 0)
                continue;
            const int root = sets.find(l);
            auto [it, inserted] = root_to_slot.emplace(root, int(groups.size()));
            if (inserted)
                groups.emplace_back();
            groups[it->second].push_back({x, y});
        }
    }

    std::vector<Blob> blobs;
    for (auto& px : groups) {
        if (int(px.size()) < min_size)
            continue;
        Blob b;
        b.id = int(blobs.size());
        b.bbox = {px.front().x, px.front().y, px.front().x, px.front().y};
        for (const auto& p : px) {
            b.bbox.xmin = std::min(b.bbox.xmin, p.x);
            b.bbox.xmax = std::max(b.bbox.xmax, p.x);
            b.bbox.ymin = std::min(b.bbox.ymin, p.y);
            b.bbox.ymax = std::max(b.bbox.ymax, p.y);
        }
        b.pixels = std::move(px);
        blobs.push_back(std::move(b));
    }
    return blobs;
}

std::vector<Contact> find_contacts(const Blob& blob, std::span<const AnnotatedObject> objects, int margin)
{
    std::vector<Contact> contacts;
    for (const auto& o : objects) {
        if (o.cls.category == Category::Text)
            continue;
        const BoundingBox zone = inflate(o.bbox, margin);
        const BoundingBox& bb = blob.bbox;
        if (bb.xmax < zone.xmin || bb.xmin > zone.xmax || bb.ymax < zone.ymin || bb.ymin > zone.ymax)
            continue;
        const Point c = o.bbox.center();
        std::optional<PixelPos> best;
        double best_d = std::numeric_limits<double>::infinity();
        for (const auto& p : blob.pixels) {
            if (!zone.contains(p))
                continue;
            const double d = distance(to_point(p), c);
            if (d < best_d) {
                best_d = d;
                best = p;
            }
        }
        if (best)
            contacts.push_back({blob.id, o.id, *best});
    }
    std::sort(contacts.begin(), contacts.end(),
              [](const Contact& a, const Contact& b) { return a.object_id < b.object_id; });
    return contacts;
}

namespace {

constexpr int kNeighbours[8][2] = {{-1, -1}, {0, -1}, {1, -1}, {-1, 0}, {1, 0}, {-1, 1}, {0, 1}, {1, 1}};

/// Skeleton of one blob in a padded local window.
class Skeleton {
public:
    explicit Skeleton(const Blob& blob)
        : ox_(blob.bbox.xmin - 1), oy_(blob.bbox.ymin - 1),
          grid_(blob.bbox.width() + 3, blob.bbox.height() + 3)
    {
        for (const auto& p : blob.pixels)
            grid_.at(p.x - ox_, p.y - oy_) = 1;
        const BitMap thin = thin_zhang_suen(grid_);
        id_.assign(thin.pixels.size(), -1);
        for (int y = 0; y < thin.height; ++y)
            for (int x = 0; x < thin.width; ++x)
                if (thin.at(x, y))
                    add(x, y);
        if (pixels_.empty()) {
            // Tiny blobs can vanish entirely; keep the pixel nearest the centroid.
            double cx = 0, cy = 0;
            for (const auto& p : blob.pixels) {
                cx += p.x;
                cy += p.y;
            }
            const Point c{cx / blob.pixels.size(), cy / blob.pixels.size()};
            PixelPos best = blob.pixels.front();
            for (const auto& p : blob.pixels)
                if (distance(to_point(p), c) < distance(to_point(best), c))
                    best = p;
            add(best.x - ox_, best.y - oy_);
        }
    }

    int size() const { return int(pixels_.size()); }
    Point global(int v) const { return {double(pixels_[v].x + ox_), double(pixels_[v].y + oy_)}; }
    PixelPos local(int v) const { return pixels_[v]; }

    int nearest(Point p) const
    {
        int best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (int v = 0; v < size(); ++v) {
            const double d = distance(global(v), p);
            if (d < best_d) {
                best_d = d;
                best = v;
            }
        }
        return best;
    }

    template <typename F>
    void for_each_neighbour(int v, F&& f) const
    {
        const auto p = pixels_[v];
        for (const auto& d : kNeighbours) {
            const int nx = p.x + d[0], ny = p.y + d[1];
            if (!grid_.in_bounds(nx, ny))
                continue;
            const int u = id_[grid_.index(nx, ny)];
            if (u >= 0)
                f(u, (d[0] != 0 && d[1] != 0) ? std::numbers::sqrt2 : 1.0);
        }
    }

    /// Dijkstra parents from `source`; -2 marks unreachable, -1 the source.
    std::vector<int> shortest_path_tree(int source) const
    {
        std::vector<double> dist(size(), std::numeric_limits<double>::infinity());
        std::vector<int> parent(size(), -2);
        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
        dist[source] = 0.0;
        parent[source] = -1;
        queue.push({0.0, source});
        while (!queue.empty()) {
            auto [d, v] = queue.top();
            queue.pop();
            if (d > dist[v])
                continue;
            for_each_neighbour(v, [&](int u, double w) {
                if (d + w < dist[u] - 1e-12) {
                    dist[u] = d + w;
                    parent[u] = v;
                    queue.push({dist[u], u});
                }
            });
        }
        return parent;
    }

private:
    void add(int x, int y)
    {
        id_[grid_.index(x, y)] = int(pixels_.size());
        pixels_.push_back({x, y});
    }

    int ox_;
    int oy_;
    BitMap grid_;
    std::vector<int> id_;
    std::vector<PixelPos> pixels_;
};

Polyline path_polyline(const Skeleton& sk, const std::vector<int>& path, Point from, Point to)
{
    std::vector<Point> pts;
    pts.reserve(path.size() + 2);
    pts.push_back(from);
    for (int v : path)
        pts.push_back(sk.global(v));
    pts.push_back(to);
    return dedupe(std::move(pts));
}

struct Arc {
    int a = 0;  // key node ids
    int b = 0;
    std::vector<int> pixels;  // skeleton vertices from a to b
};

}  // namespace

Polyline trace_polyline(const Blob& blob, Point from, Point to)
{
    if (blob.pixels.empty())
        throw TraceError("cannot trace an empty blob");
    const Skeleton sk(blob);
    const int s = sk.nearest(from);
    const int t = sk.nearest(to);
    const auto parent = sk.shortest_path_tree(s);
    if (parent[t] == -2)
        throw TraceError("endpoints are not connected within the skeleton of blob " + std::to_string(blob.id));
    std::vector<int> path;
    for (int v = t; v >= 0; v = parent[v])
        path.push_back(v);
    std::reverse(path.begin(), path.end());
    Polyline line = path_polyline(sk, path, from, to);
    if (!line.well_formed())
        throw TraceError("degenerate trace in blob " + std::to_string(blob.id));
    return line;
}

namespace {

void split_blob(const Blob& blob, const std::vector<Contact>& contacts, EdgeExtraction& out)
{
    std::vector<int> contact_objects;
    for (const auto& c : contacts)
        contact_objects.push_back(c.object_id);

    const Skeleton sk(blob);
    const int n = sk.size();

    // Key node ids: [0, contacts) are anchors, clusters follow.
    std::vector<int> key(n, -1);
    std::vector<int> anchor(contacts.size(), -1);
    for (std::size_t k = 0; k < contacts.size(); ++k) {
        const int v = sk.nearest(to_point(contacts[k].point));
        if (key[v] >= 0) {
            // Two contacts share a skeleton point: join them directly.
            const auto& other = contacts[std::size_t(key[v])];
            out.segments.push_back({blob.id,
                                    dedupe({to_point(other.point), to_point(contacts[k].point)}),
                                    {SegmentEnd{SegmentEnd::Kind::Object, other.object_id, to_point(other.point)},
                                     SegmentEnd{SegmentEnd::Kind::Object, contacts[k].object_id,
                                                to_point(contacts[k].point)}}});
            out.diagnostics.push_back({"trace-fallback", blob.id, {other.object_id, contacts[k].object_id},
                                       "contacts share a skeleton point"});
            continue;
        }
        key[v] = int(k);
        anchor[k] = v;
    }

    const int root = anchor[0];
    const auto parent = sk.shortest_path_tree(root);

    // Union of root paths to every anchor: a tree over skeleton vertices.
    std::vector<std::set<int>> tree(n);
    for (std::size_t k = 1; k < contacts.size(); ++k) {
        if (anchor[k] < 0)
            continue;
        if (parent[anchor[k]] == -2) {
            out.segments.push_back(
                {blob.id, dedupe({to_point(contacts[0].point), to_point(contacts[k].point)}),
                 {SegmentEnd{SegmentEnd::Kind::Object, contacts[0].object_id, to_point(contacts[0].point)},
                  SegmentEnd{SegmentEnd::Kind::Object, contacts[k].object_id, to_point(contacts[k].point)}}});
            out.diagnostics.push_back({"trace-fallback", blob.id, {contacts[0].object_id, contacts[k].object_id},
                                       "skeleton disconnected"});
            continue;
        }
        for (int v = anchor[k]; parent[v] >= 0; v = parent[v]) {
            const int p = parent[v];
            const bool known = !tree[v].empty() && tree[v].count(p);
            tree[v].insert(p);
            tree[p].insert(v);
            if (known)
                break;
        }
    }

    // Branch pixels (tree degree >= 3) grouped when within two pixels.
    std::vector<int> branch;
    for (int v = 0; v < n; ++v)
        if (key[v] < 0 && tree[v].size() >= 3)
            branch.push_back(v);
    DisjointSet groups(branch.size());
    for (std::size_t i = 0; i < branch.size(); ++i)
        for (std::size_t j = i + 1; j < branch.size(); ++j) {
            const auto a = sk.local(branch[i]), b = sk.local(branch[j]);
            if (std::abs(a.x - b.x) <= 2 && std::abs(a.y - b.y) <= 2)
                groups.unite(int(i), int(j));
        }
    const int num_anchors = int(contacts.size());
    std::map<int, int> group_key;
    std::vector<std::vector<int>> cluster_pixels;
    for (std::size_t i = 0; i < branch.size(); ++i) {
        auto [it, inserted] = group_key.emplace(groups.find(int(i)), num_anchors + int(cluster_pixels.size()));
        if (inserted)
            cluster_pixels.emplace_back();
        key[branch[i]] = it->second;
        cluster_pixels[std::size_t(it->second - num_anchors)].push_back(branch[i]);
    }

    // Walk tree edges between key vertices.
    std::vector<Arc> arcs;
    std::set<std::pair<int, int>> used;
    auto edge_id = [](int a, int b) { return std::make_pair(std::min(a, b), std::max(a, b)); };
    for (int v = 0; v < n; ++v) {
        if (key[v] < 0)
            continue;
        for (int q : tree[v]) {
            if (key[q] == key[v] || used.count(edge_id(v, q)))
                continue;
            Arc arc{key[v], -1, {v}};
            int prev = v, cur = q;
            used.insert(edge_id(prev, cur));
            while (key[cur] < 0) {
                arc.pixels.push_back(cur);
                int next = -1;
                for (int u : tree[cur])
                    if (u != prev) {
                        next = u;
                        break;
                    }
                if (next < 0)
                    break;
                used.insert(edge_id(cur, next));
                prev = cur;
                cur = next;
            }
            if (key[cur] < 0)
                continue;
            arc.pixels.push_back(cur);
            arc.b = key[cur];
            if (arc.a != arc.b)
                arcs.push_back(std::move(arc));
        }
    }

    // Clusters joining exactly two arcs are pass-through points.
    for (int c = num_anchors; c < num_anchors + int(cluster_pixels.size()); ++c) {
        std::vector<std::size_t> inc;
        for (std::size_t i = 0; i < arcs.size(); ++i)
            if (arcs[i].a == c || arcs[i].b == c)
                inc.push_back(i);
        if (inc.size() != 2)
            continue;
        Arc x = arcs[inc[0]], y = arcs[inc[1]];
        if (x.a == c) {
            std::swap(x.a, x.b);
            std::reverse(x.pixels.begin(), x.pixels.end());
        }
        if (y.b == c) {
            std::swap(y.a, y.b);
            std::reverse(y.pixels.begin(), y.pixels.end());
        }
        Arc merged{x.a, y.b, x.pixels};
        merged.pixels.insert(merged.pixels.end(), y.pixels.begin(), y.pixels.end());
        arcs.erase(arcs.begin() + std::ptrdiff_t(inc[1]));
        arcs.erase(arcs.begin() + std::ptrdiff_t(inc[0]));
        if (merged.a != merged.b)
            arcs.push_back(std::move(merged));
    }

    // Remaining clusters become implicit junctions.
    std::map<int, int> junction_of;
    for (const auto& arc : arcs)
        for (int k : {arc.a, arc.b})
            if (k >= num_anchors && !junction_of.count(k)) {
                const auto& px = cluster_pixels[std::size_t(k - num_anchors)];
                Point c{0, 0};
                BoundingBox box{std::numeric_limits<int>::max(), std::numeric_limits<int>::max(),
                                std::numeric_limits<int>::min(), std::numeric_limits<int>::min()};
                for (int v : px) {
                    const Point g = sk.global(v);
                    c = c + g;
                    box.xmin = std::min(box.xmin, int(g.x));
                    box.ymin = std::min(box.ymin, int(g.y));
                    box.xmax = std::max(box.xmax, int(g.x));
                    box.ymax = std::max(box.ymax, int(g.y));
                }
                c = c * (1.0 / double(px.size()));
                junction_of[k] = int(out.junctions.size());
                out.junctions.push_back({c, inflate(box, 2), blob.id});
                out.diagnostics.push_back({"implicit-junction", blob.id, contact_objects,
                                           "branch point at (" + std::to_string(int(std::lround(c.x))) + "," +
                                               std::to_string(int(std::lround(c.y))) + ")"});
            }

    auto end_of = [&](int k) {
        if (k < num_anchors) {
            const auto& ct = contacts[std::size_t(k)];
            return SegmentEnd{SegmentEnd::Kind::Object, ct.object_id, to_point(ct.point)};
        }
        const int j = junction_of.at(k);
        return SegmentEnd{SegmentEnd::Kind::ImplicitJunction, j, out.junctions[std::size_t(j)].point};
    };

    std::sort(arcs.begin(), arcs.end(), [](const Arc& l, const Arc& r) {
        return std::tie(l.a, l.b, l.pixels) < std::tie(r.a, r.b, r.pixels);
    });
    for (const auto& arc : arcs) {
        const SegmentEnd ea = end_of(arc.a), eb = end_of(arc.b);
        Polyline line = path_polyline(sk, arc.pixels, ea.point, eb.point);
        if (!line.well_formed())
            continue;
        out.segments.push_back({blob.id, std::move(line), {ea, eb}});
    }
}

}  // namespace

EdgeExtraction extract_edges(const BitMap& map, std::span<const AnnotatedObject> objects, const EdgeParams& params)
{
    EdgeExtraction out;
    const BitMap masked = mask_objects(map, objects, params.mask_margin);
    const auto blobs = label_components(masked, params.min_blob_size);
    for (const auto& blob : blobs) {
        const auto contacts = find_contacts(blob, objects, params.contact_margin);
        if (contacts.size() < 2) {
            std::vector<int> ids;
            for (const auto& c : contacts)
                ids.push_back(c.object_id);
            out.diagnostics.push_back({"dangling-blob", blob.id, ids,
                                       std::to_string(contacts.size()) + " contact(s)"});
            continue;
        }
        if (contacts.size() == 2) {
            const Point a = to_point(contacts[0].point), b = to_point(contacts[1].point);
            Polyline line;
            try {
                line = trace_polyline(blob, a, b);
            } catch (const TraceError& e) {
                line = dedupe({a, b});
                out.diagnostics.push_back(
                    {"trace-fallback", blob.id, {contacts[0].object_id, contacts[1].object_id}, e.what()});
                if (!line.well_formed())
                    continue;
            }
            out.segments.push_back({blob.id, std::move(line),
                                    {SegmentEnd{SegmentEnd::Kind::Object, contacts[0].object_id, a},
                                     SegmentEnd{SegmentEnd::Kind::Object, contacts[1].object_id, b}}});
            continue;
        }
        split_blob(blob, contacts, out);
    }
    return out;
}

}  // namespace wiregraph
