#pragma once

#include "wiregraph/geometry.hpp"
#include "wiregraph/raster.hpp"
#include "wiregraph/symbol_library.hpp"
#include "wiregraph/taxonomy.hpp"

namespace wiregraph {

/// Unit-circle encoding of an angle, counter-clockwise in the frame of the
/// upright template.
struct AngleCode {
    double sin = 0.0;
    double cos = 1.0;
};

/// Any finite angle; wrapped into [0,360) before encoding.
AngleCode encode(double degrees);

/// Direction of (sin, cos) in [0,360). Magnitude is ignored; throws
/// ContractError when both components are within 1e-9 of zero.
double decode(AngleCode code);

/// Reduces `degrees` modulo the class's symmetry period. Throws
/// ValidationError when the library has no entry for the class.
double canonicalize(const ObjectClass& cls, double degrees, const SymbolLibrary& lib);

/// Shortest distance on the class's period circle, in [0, period/2].
double angular_error(double pred, double truth, const ObjectClass& cls, const SymbolLibrary& lib);

/// Same, for an explicit period (360 or 180).
double angular_error(double pred, double truth, double period);

/// Square crop centred on `box` (side = longer box side, edge-replicated
/// outside the image), bilinearly resized to size x size. This is the input
/// layout expected by external orientation models.
GrayImage extract_snippet(const GrayImage& image, const BoundingBox& box, int size = 50);

}  // namespace wiregraph
