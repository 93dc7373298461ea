#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "wiregraph/graph.hpp"
#include "wiregraph/symbol_library.hpp"

namespace wiregraph {

/// Canonical graph JSON: sorted keys, nodes/edges in id order.
std::string to_graph_json(const CircuitGraph& graph, const std::vector<Net>& nets);

struct GraphDocument {
    CircuitGraph graph;
    std::vector<Net> nets;
};

/// Inverse of to_graph_json. Throws ParseError on malformed input.
GraphDocument read_graph_json(std::string_view json_text);

struct NetlistOptions {
    /// Class name or class family (text before the first '.') -> designator letter.
    std::map<std::string, std::string> designators{
        {"resistor", "R"}, {"capacitor", "C"}, {"diode", "D"}, {"inductor", "L"}, {"transistor", "Q"}};
    std::string fallback = "U";
};

std::string designator_prefix(std::string_view cls, const NetlistOptions& options);

/// SPICE-like flat netlist, one line per symbol:
///   <designator> <net per library port> ; <class> [value] [rot=<deg>]
/// Open library ports print NC; classes without library ports are marked
/// "unported".
std::string to_netlist(const CircuitGraph& graph, const std::vector<Net>& nets, const SymbolLibrary& lib,
                       const NetlistOptions& options = {});

std::string to_graphml(const CircuitGraph& graph, const std::vector<Net>& nets);

/// Pipeline stage drawn by render_overlay.
enum class Stage { Raw, Detection, OrientationText, Edges, Segments, Rectified };

std::string_view to_string(Stage s);

/// SVG sized to the image: class-coloured boxes with labels, port dots, wire
/// polylines. The Rectified stage colours wires by net.
std::string render_overlay(ImageSize size, const CircuitGraph& graph, Stage stage,
                           const std::vector<Net>& nets = {}, std::string_view image_href = {});

/// Deterministic "#rrggbb" colour for a class name.
std::string class_color(std::string_view cls);
std::string net_color(int net_id);

}  // namespace wiregraph
