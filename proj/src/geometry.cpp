#include "wiregraph/geometry.hpp"

#include <algorithm>

namespace wiregraph {

double iou(const BoundingBox& a, const BoundingBox& b)
{
    const int ix = std::min(a.xmax, b.xmax) - std::max(a.xmin, b.xmin);
    const int iy = std::min(a.ymax, b.ymax) - std::max(a.ymin, b.ymin);
    if (ix <= 0 || iy <= 0)
        return 0.0;
    const double inter = double(ix) * double(iy);
    const double uni = a.area() + b.area() - inter;
    return uni > 0.0 ? inter / uni : 0.0;
}

BoundingBox inflate(const BoundingBox& b, int margin, std::optional<ImageSize> bounds)
{
    BoundingBox r{b.xmin - margin, b.ymin - margin, b.xmax + margin, b.ymax + margin};
    if (bounds) {
        r.xmin = std::max(r.xmin, 0);
        r.ymin = std::max(r.ymin, 0);
        r.xmax = std::min(r.xmax, bounds->width);
        r.ymax = std::min(r.ymax, bounds->height);
    }
    return r;
}

bool Polyline::well_formed() const
{
    if (points.size() < 2)
        return false;
    for (std::size_t i = 1; i < points.size(); ++i)
        if (points[i] == points[i - 1])
            return false;
    return true;
}

double Polyline::length() const
{
    double len = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i)
        len += distance(points[i - 1], points[i]);
    return len;
}

Polyline Polyline::reversed() const
{
    Polyline r{points};
    std::reverse(r.points.begin(), r.points.end());
    return r;
}

Polyline dedupe(std::vector<Point> points)
{
    points.erase(std::unique(points.begin(), points.end()), points.end());
    return Polyline{std::move(points)};
}

Polyline concatenate(const Polyline& a, const Polyline& b)
{
    std::vector<Point> pts = a.points;
    pts.insert(pts.end(), b.points.begin(), b.points.end());
    return dedupe(std::move(pts));
}

}  // namespace wiregraph
