#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "wiregraph/error.hpp"
#include "wiregraph/geometry.hpp"

namespace wiregraph {

/// Row-major pixel grid. The tag keeps gray images, stroke maps and
/// probability maps from being mixed up.
template <typename T, typename Tag>
struct Raster {
    using value_type = T;

    int width = 0;
    int height = 0;
    std::vector<T> pixels;

    Raster() = default;
    Raster(int w, int h, T fill = T{})
        : width(w), height(h), pixels(std::size_t(w) * std::size_t(h), fill)
    {
        if (w < 0 || h < 0)
            throw ContractError("raster dimensions must be non-negative");
    }

    friend bool operator==(const Raster&, const Raster&) = default;

    ImageSize size() const { return {width, height}; }
    bool in_bounds(int x, int y) const { return x >= 0 && y >= 0 && x < width && y < height; }
    std::size_t index(int x, int y) const { return std::size_t(y) * std::size_t(width) + std::size_t(x); }

    T& at(int x, int y) { return pixels[index(x, y)]; }
    const T& at(int x, int y) const { return pixels[index(x, y)]; }
    T& at(PixelPos p) { return at(p.x, p.y); }
    const T& at(PixelPos p) const { return at(p.x, p.y); }
};

struct GrayTag;
struct StrokeTag;
struct ProbabilityTag;

/// 8-bit luminance, 0 = black.
using GrayImage = Raster<std::uint8_t, GrayTag>;
/// Binary stroke map: 1 = drafter stroke, 0 = background.
using BitMap = Raster<std::uint8_t, StrokeTag>;
/// Per-pixel stroke probability in [0,1].
using ProbabilityMap = Raster<float, ProbabilityTag>;

inline std::size_t count_strokes(const BitMap& map)
{
    std::size_t n = 0;
    for (auto v : map.pixels)
        n += v != 0;
    return n;
}

}  // namespace wiregraph
