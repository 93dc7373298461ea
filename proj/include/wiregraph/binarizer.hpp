#pragma once

#include <functional>
#include <string_view>
#include <vector>

#include "wiregraph/raster.hpp"

namespace wiregraph {

/// Anchor a tiling pass grows its tiles from.
enum class TilePass { LeftTop, RightTop, BottomLeft, BottomRight };

std::string_view to_string(TilePass p);

struct TileOrigin {
    int x = 0;
    int y = 0;
    TilePass pass = TilePass::LeftTop;
};

struct TilePlan {
    int patch = 256;
    int width = 0;
    int height = 0;
    std::vector<TileOrigin> tiles;
};

/// Four passes of floor(w/patch) x floor(h/patch) adjacent tiles, anchored
/// left-top, right-top, bottom-left and bottom-right. Origins shared by
/// several passes appear once, tagged with the first pass that produced them.
/// Throws ContractError when the image is smaller than the patch.
TilePlan plan_tiles(int width, int height, int patch = 256);

/// patch x patch gray patch -> per-pixel stroke probability of the same size.
using PixelClassifier = std::function<ProbabilityMap(const GrayImage&)>;

/// Averages the predictions of every tile covering each pixel.
ProbabilityMap run_tiled(const GrayImage& image, const PixelClassifier& classifier, const TilePlan& plan);

/// run_tiled with edge-replicated padding for images smaller than the patch.
ProbabilityMap segment_tiled(const GrayImage& image, const PixelClassifier& classifier, int patch = 256);

/// Stroke iff probability >= cutoff.
BitMap threshold_map(const ProbabilityMap& prob, double cutoff = 0.5);

struct SauvolaParams {
    int window = 31;
    double k = 0.2;
    double dynamic_range = 128.0;
    /// False for light strokes on a dark background.
    bool dark_strokes = true;
};

/// Sauvola local threshold (mean * (1 + k * (stddev / R - 1))) followed by a
/// 3x3 morphological opening. Output is 1.0 on stroke pixels, 0.0 elsewhere.
ProbabilityMap binarize_classical(const GrayImage& image, const SauvolaParams& params = {});

/// Patch-local classifier wrapper around binarize_classical.
PixelClassifier classical_classifier(SauvolaParams params = {});

}  // namespace wiregraph
