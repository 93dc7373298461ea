#pragma once

#include <optional>
#include <span>
#include <vector>

#include "wiregraph/edge_extractor.hpp"
#include "wiregraph/graph.hpp"
#include "wiregraph/objects.hpp"
#include "wiregraph/symbol_library.hpp"

namespace wiregraph {

/// One node per non-text object (node id = object id), one node per implicit
/// junction (ids after the largest object id), one edge per segment with a
/// port at each contact. Texts are kept aside, unattached. Extraction
/// diagnostics are carried over. Throws ContractError when a segment names
/// an unknown object.
CircuitGraph assemble(std::span<const AnnotatedObject> objects, const EdgeExtraction& extraction,
                      ImageSize size = {}, std::string image = {});

struct HopParams {
    /// Incidence direction is measured from the node-side end of a wire to
    /// where the wire first leaves this radius.
    double direction_radius = 8.0;
    /// Pairings whose mean deviations differ by less than this are reported.
    double ambiguity_degrees = 5.0;
};

/// Direction (unit vector) in which `edge` leaves `node_id`.
Point incidence_direction(const Edge& edge, int node_id, double radius = 8.0);

/// Replaces every four-wire crossover with two straight-through wires, pairing
/// the wires whose incidence directions are most nearly opposite. Other
/// crossovers are kept and reported.
CircuitGraph resolve_hops(CircuitGraph graph, const HopParams& params = {});

/// Joins the two wires of every two-wire corner. Corners (and leftover
/// crossovers) with three or more wires become implicit junctions; with one
/// wire an open end; with none they are dropped.
CircuitGraph collapse_corners(CircuitGraph graph);

/// Douglas-Peucker simplification with tolerance `epsilon`, then
/// axis-alignment of segments within `snap_degrees` of horizontal/vertical.
/// The first and last vertex never move.
Polyline rectify(const Polyline& line, double epsilon = 3.0, double snap_degrees = 10.0);

/// Douglas-Peucker alone.
Polyline simplify(const Polyline& line, double epsilon);

CircuitGraph rectify_edges(CircuitGraph graph, double epsilon = 3.0, double snap_degrees = 10.0);

/// Library port position for a node of the given box and rotation.
Point library_port_position(const PortTemplate& port, const BoundingBox& box, double rotation_degrees);

/// Names the ports of a Symbol node from the library: optimal assignment of
/// observed ports to rotated library ports, positions corrected, unmatched
/// library ports appended as open ports.
Node assign_ports(Node node, const SymbolLibrary& lib, Diagnostics& diagnostics);

/// assign_ports on every Symbol node, then moves each edge end onto its
/// (corrected) port position.
CircuitGraph assign_all_ports(CircuitGraph graph, const SymbolLibrary& lib);

/// Wires meeting at junctions form one net; each net lists the symbol ports it
/// touches. Nets without symbol ports are omitted. Numbered from 1 by lowest
/// member node id.
std::vector<Net> derive_nets(const CircuitGraph& graph);

/// Attaches each text to the nearest Symbol node (centre distance, ties to
/// the lower id) within `max_distance`, or within 1.5x that symbol's box
/// diagonal when unset.
CircuitGraph associate_texts(CircuitGraph graph, std::optional<double> max_distance = std::nullopt);

}  // namespace wiregraph
