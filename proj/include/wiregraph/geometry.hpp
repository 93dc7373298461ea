#pragma once

#include <cmath>
#include <optional>
#include <vector>

namespace wiregraph {

/// Raster convention: origin top-left, y grows downward.
struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(Point a, double s) { return {a.x * s, a.y * s}; }

inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

struct PixelPos {
    int x = 0;
    int y = 0;

    friend bool operator==(const PixelPos&, const PixelPos&) = default;
    friend auto operator<=>(const PixelPos& a, const PixelPos& b) {
        // scanline order
        if (auto c = a.y <=> b.y; c != 0) return c;
        return a.x <=> b.x;
    }
};

inline Point to_point(PixelPos p) { return {double(p.x), double(p.y)}; }

struct ImageSize {
    int width = 0;
    int height = 0;

    friend bool operator==(const ImageSize&, const ImageSize&) = default;
};

/// Axis-aligned box in pixel coordinates. Area arithmetic treats the box as
/// the continuous rectangle [xmin,xmax]x[ymin,ymax]; pixel membership is
/// inclusive on all four sides.
struct BoundingBox {
    int xmin = 0;
    int ymin = 0;
    int xmax = 1;
    int ymax = 1;

    friend bool operator==(const BoundingBox&, const BoundingBox&) = default;

    int width() const { return xmax - xmin; }
    int height() const { return ymax - ymin; }
    double area() const { return double(width()) * double(height()); }
    Point center() const { return {0.5 * (xmin + xmax), 0.5 * (ymin + ymax)}; }
    double diagonal() const { return std::hypot(double(width()), double(height())); }

    bool valid() const { return xmin >= 0 && ymin >= 0 && xmin < xmax && ymin < ymax; }

    bool contains(int x, int y) const { return x >= xmin && x <= xmax && y >= ymin && y <= ymax; }
    bool contains(PixelPos p) const { return contains(p.x, p.y); }
    bool contains(Point p) const { return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax; }
    bool contains(const BoundingBox& o) const {
        return o.xmin >= xmin && o.ymin >= ymin && o.xmax <= xmax && o.ymax <= ymax;
    }
};

double iou(const BoundingBox& a, const BoundingBox& b);

/// Grows every side by `margin`; with `bounds`, the result is clamped to
/// [0,width]x[0,height].
BoundingBox inflate(const BoundingBox& b, int margin, std::optional<ImageSize> bounds = std::nullopt);

/// Ordered wire geometry. Well-formed polylines have at least two points and
/// no two consecutive points equal.
struct Polyline {
    std::vector<Point> points;

    friend bool operator==(const Polyline&, const Polyline&) = default;

    bool well_formed() const;
    double length() const;
    Polyline reversed() const;
    const Point& front() const { return points.front(); }
    const Point& back() const { return points.back(); }
};

/// Drops consecutive duplicates.
Polyline dedupe(std::vector<Point> points);

/// Joins `a` then `b`; a bridging segment is implied when a.back() != b.front().
Polyline concatenate(const Polyline& a, const Polyline& b);

}  // namespace wiregraph
