#pragma once

// Programmatically drawn schematics with known structure.

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "wiregraph/annotation_io.hpp"
#include "wiregraph/graph.hpp"
#include "wiregraph/raster.hpp"
#include "wiregraph/symbol_library.hpp"
#include "wiregraph/taxonomy.hpp"

namespace fixtures {

using namespace wiregraph;

const Taxonomy& taxonomy();
const SymbolLibrary& library();

/// Stroke canvas with simple drawing primitives.
struct Canvas {
    BitMap map;

    Canvas(int w, int h) : map(w, h, 0) {}

    void dot(int x, int y);
    /// Square pen of side `thickness` dragged along the segment.
    void line(Point a, Point b, int thickness = 3);
    void polyline(const std::vector<Point>& pts, int thickness = 3);
    void rect(const BoundingBox& box, int thickness = 2);
    void disc(Point c, double radius);
};

/// Light paper with a left-to-right illumination gradient, strokes dark.
GrayImage render_gray(const BitMap& strokes, int paper_left = 235, int paper_right = 150, int ink = 40);

/// "<node id>.<port name>" for each end, sorted, joined with "--".
using EdgeKey = std::string;

struct Expected {
    /// node id -> "kind:class"
    std::map<int, std::string> nodes;
    std::multiset<EdgeKey> edges;
    std::size_t nets = 0;
    /// Diagnostic kinds that must appear (and nothing else).
    std::multiset<std::string> diagnostics;
};

struct Circuit {
    std::string name;
    ImageRecord record;
    BitMap strokes;
    Expected expected;
};

/// series, parallel, hop, corner-chain, dangling, t-junction.
std::vector<Circuit> all_circuits();
Circuit series();
Circuit parallel();
Circuit hop_crossing();
Circuit corner_chain();
Circuit dangling_wire();
Circuit t_junction();

std::map<int, std::string> node_set(const CircuitGraph& g);
std::multiset<EdgeKey> edge_set(const CircuitGraph& g);
std::multiset<std::string> diagnostic_kinds(const CircuitGraph& g);

/// Fresh empty directory under the system temp dir.
std::filesystem::path temp_dir(const std::string& tag);

}  // namespace fixtures
