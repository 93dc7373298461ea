#include "wiregraph/orientation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wiregraph/annotation_io.hpp"
#include "wiregraph/error.hpp"

namespace wiregraph {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

double wrap_period(double deg, double period)
{
    double r = std::fmod(deg, period);
    if (r < 0.0)
        r += period;
    if (r >= period)
        r = 0.0;
    return r;
}

}  // namespace

AngleCode encode(double degrees)
{
    const double rad = wrap_degrees(degrees) * kDegToRad;
    return {std::sin(rad), std::cos(rad)};
}

double decode(AngleCode code)
{
    if (std::abs(code.sin) < 1e-9 && std::abs(code.cos) < 1e-9)
        throw ContractError("degenerate angle code: (sin, cos) is the zero vector");
    return wrap_degrees(std::atan2(code.sin, code.cos) / kDegToRad);
}

double canonicalize(const ObjectClass& cls, double degrees, const SymbolLibrary& lib)
{
    return wrap_period(degrees, period_of(lib.at(cls.name).symmetry));
}

double angular_error(double pred, double truth, double period)
{
    const double d = wrap_period(pred - truth, period);
    return std::min(d, period - d);
}

double angular_error(double pred, double truth, const ObjectClass& cls, const SymbolLibrary& lib)
{
    return angular_error(pred, truth, period_of(lib.at(cls.name).symmetry));
}

GrayImage extract_snippet(const GrayImage& image, const BoundingBox& box, int size)
{
    if (size <= 0)
        throw ContractError("snippet size must be positive");
    if (image.width == 0 || image.height == 0)
        throw ContractError("cannot crop from an empty image");

    const double side = std::max(box.width(), box.height());
    const Point c = box.center();
    const double x0 = c.x - side / 2.0;
    const double y0 = c.y - side / 2.0;
    const double scale = side / size;

    auto sample = [&](int x, int y) {
        return double(image.at(std::clamp(x, 0, image.width - 1), std::clamp(y, 0, image.height - 1)));
    };

    GrayImage out(size, size);
    for (int v = 0; v < size; ++v) {
        for (int u = 0; u < size; ++u) {
            // pixel-centre alignment
            const double sx = x0 + (u + 0.5) * scale - 0.5;
            const double sy = y0 + (v + 0.5) * scale - 0.5;
            const int ix = int(std::floor(sx));
            const int iy = int(std::floor(sy));
            const double fx = sx - ix;
            const double fy = sy - iy;
            const double top = sample(ix, iy) * (1 - fx) + sample(ix + 1, iy) * fx;
            const double bottom = sample(ix, iy + 1) * (1 - fx) + sample(ix + 1, iy + 1) * fx;
            out.at(u, v) = std::uint8_t(std::clamp(std::lround(top * (1 - fy) + bottom * fy), 0L, 255L));
        }
    }
    return out;
}

}  // namespace wiregraph
