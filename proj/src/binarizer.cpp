#include "wiregraph/binarizer.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

namespace wiregraph {

std::string_view to_string(TilePass p)
{
    switch (p) {
    case TilePass::LeftTop: return "left-top";
    case TilePass::RightTop: return "right-top";
    case TilePass::BottomLeft: return "bottom-left";
    case TilePass::BottomRight: return "bottom-right";
    }
    return "?";
}

TilePlan plan_tiles(int width, int height, int patch)
{
    if (patch <= 0)
        throw ContractError("patch size must be positive");
    if (width < patch || height < patch)
        throw ContractError("image " + std::to_string(width) + "x" + std::to_string(height) +
                            " is smaller than the patch " + std::to_string(patch) +
                            "; pad it first (segment_tiled does this)");

    TilePlan plan{patch, width, height, {}};
    const int nx = width / patch;
    const int ny = height / patch;
    std::set<std::pair<int, int>> seen;
    for (TilePass pass : {TilePass::LeftTop, TilePass::RightTop, TilePass::BottomLeft, TilePass::BottomRight}) {
        const bool from_right = pass == TilePass::RightTop || pass == TilePass::BottomRight;
        const bool from_bottom = pass == TilePass::BottomLeft || pass == TilePass::BottomRight;
        for (int j = 0; j < ny; ++j) {
            for (int i = 0; i < nx; ++i) {
                const int x = from_right ? width - (i + 1) * patch : i * patch;
                const int y = from_bottom ? height - (j + 1) * patch : j * patch;
                if (seen.emplace(x, y).second)
                    plan.tiles.push_back({x, y, pass});
            }
        }
    }
    return plan;
}

ProbabilityMap run_tiled(const GrayImage& image, const PixelClassifier& classifier, const TilePlan& plan)
{
    if (plan.width != image.width || plan.height != image.height)
        throw ContractError("tile plan does not match the image dimensions");

    const int p = plan.patch;
    std::vector<double> sum(image.pixels.size(), 0.0);
    std::vector<int> count(image.pixels.size(), 0);
    GrayImage tile(p, p);
    for (const auto& t : plan.tiles) {
        for (int y = 0; y < p; ++y)
            std::copy_n(&image.at(t.x, t.y + y), p, &tile.at(0, y));
        const ProbabilityMap pred = classifier(tile);
        if (pred.width != p || pred.height != p || pred.pixels.size() != tile.pixels.size())
            throw ContractError("pixel classifier returned " + std::to_string(pred.width) + "x" +
                                std::to_string(pred.height) + " for a " + std::to_string(p) + "x" +
                                std::to_string(p) + " patch");
        for (int y = 0; y < p; ++y) {
            for (int x = 0; x < p; ++x) {
                const auto idx = image.index(t.x + x, t.y + y);
                sum[idx] += pred.at(x, y);
                count[idx] += 1;
            }
        }
    }

    ProbabilityMap out(image.width, image.height, 0.0f);
    for (std::size_t i = 0; i < sum.size(); ++i)
        out.pixels[i] = count[i] > 0 ? float(sum[i] / count[i]) : 0.0f;
    return out;
}

ProbabilityMap segment_tiled(const GrayImage& image, const PixelClassifier& classifier, int patch)
{
    if (image.width >= patch && image.height >= patch)
        return run_tiled(image, classifier, plan_tiles(image.width, image.height, patch));

    const int w = std::max(image.width, patch);
    const int h = std::max(image.height, patch);
    GrayImage padded(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            padded.at(x, y) = image.at(std::min(x, image.width - 1), std::min(y, image.height - 1));
    const ProbabilityMap full = run_tiled(padded, classifier, plan_tiles(w, h, patch));
    ProbabilityMap out(image.width, image.height);
    for (int y = 0; y < image.height; ++y)
        for (int x = 0; x < image.width; ++x)
            out.at(x, y) = full.at(x, y);
    return out;
}

BitMap threshold_map(const ProbabilityMap& prob, double cutoff)
{
    if (cutoff < 0.0 || cutoff > 1.0)
        throw ContractError("cutoff must lie in [0,1]");
    BitMap map(prob.width, prob.height);
    for (std::size_t i = 0; i < prob.pixels.size(); ++i)
        map.pixels[i] = double(prob.pixels[i]) >= cutoff ? 1 : 0;
    return map;
}

namespace {

// 3x3 erosion (want = 1) or dilation (want = 0) with replicated borders.
BitMap morph3(const BitMap& in, std::uint8_t want)
{
    BitMap out(in.width, in.height);
    for (int y = 0; y < in.height; ++y) {
        for (int x = 0; x < in.width; ++x) {
            std::uint8_t v = want;
            for (int dy = -1; dy <= 1 && v == want; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    const int sx = std::clamp(x + dx, 0, in.width - 1);
                    const int sy = std::clamp(y + dy, 0, in.height - 1);
                    if (in.at(sx, sy) != want) {
                        v = std::uint8_t(1 - want);
                        break;
                    }
                }
            }
            out.at(x, y) = v;
        }
    }
    return out;
}

}  // namespace

ProbabilityMap binarize_classical(const GrayImage& image, const SauvolaParams& params)
{
    if (params.window < 3 || params.window % 2 == 0)
        throw ContractError("Sauvola window must be odd and >= 3");

    const int w = image.width;
    const int h = image.height;
    const auto stride = std::size_t(w) + 1;
    std::vector<double> sum(stride * (std::size_t(h) + 1), 0.0);
    std::vector<double> sq(sum.size(), 0.0);
    auto lum = [&](int x, int y) {
        const double v = image.at(x, y);
        return params.dark_strokes ? v : 255.0 - v;
    };
    for (int y = 0; y < h; ++y) {
        double row = 0.0, row_sq = 0.0;
        for (int x = 0; x < w; ++x) {
            const double v = lum(x, y);
            row += v;
            row_sq += v * v;
            sum[(y + 1) * stride + x + 1] = sum[y * stride + x + 1] + row;
            sq[(y + 1) * stride + x + 1] = sq[y * stride + x + 1] + row_sq;
        }
    }

    const int half = params.window / 2;
    BitMap raw(w, h);
    for (int y = 0; y < h; ++y) {
        const int y0 = std::max(0, y - half), y1 = std::min(h, y + half + 1);
        for (int x = 0; x < w; ++x) {
            const int x0 = std::max(0, x - half), x1 = std::min(w, x + half + 1);
            const double n = double(x1 - x0) * double(y1 - y0);
            auto box = [&](const std::vector<double>& t) {
                return t[y1 * stride + x1] - t[y0 * stride + x1] - t[y1 * stride + x0] + t[y0 * stride + x0];
            };
            const double mean = box(sum) / n;
            const double var = std::max(0.0, box(sq) / n - mean * mean);
            const double threshold = mean * (1.0 + params.k * (std::sqrt(var) / params.dynamic_range - 1.0));
            raw.at(x, y) = lum(x, y) < threshold ? 1 : 0;
        }
    }

    const BitMap opened = morph3(morph3(raw, 1), 0);
    ProbabilityMap out(w, h);
    for (std::size_t i = 0; i < out.pixels.size(); ++i)
        out.pixels[i] = opened.pixels[i] ? 1.0f : 0.0f;
    return out;
}

PixelClassifier classical_classifier(SauvolaParams params)
{
    return [params](const GrayImage& patch) { return binarize_classical(patch, params); };
}

}  // namespace wiregraph
