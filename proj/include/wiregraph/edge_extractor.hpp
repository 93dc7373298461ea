#pragma once

#include <array>
#include <span>
#include <vector>

#include "wiregraph/diagnostics.hpp"
#include "wiregraph/error.hpp"
#include "wiregraph/geometry.hpp"
#include "wiregraph/objects.hpp"
#include "wiregraph/raster.hpp"

namespace wiregraph {

/// 8-connected set of stroke pixels left after object removal.
struct Blob {
    int id = 0;
    /// Scanline order.
    std::vector<PixelPos> pixels;
    /// Tight, inclusive of the extreme pixels.
    BoundingBox bbox;
};

struct Contact {
    int blob_id = 0;
    int object_id = 0;
    PixelPos point;
};

/// One end of a wire: either a detected object or a branch point found
/// inside a blob (an implicit junction, indexed into EdgeExtraction::junctions).
struct SegmentEnd {
    enum class Kind { Object, ImplicitJunction };
    Kind kind = Kind::Object;
    int id = 0;
    Point point;

    friend bool operator==(const SegmentEnd&, const SegmentEnd&) = default;
};

struct WireSegment {
    int blob_id = 0;
    Polyline polyline;
    std::array<SegmentEnd, 2> ends;
};

struct ImplicitJunctionSite {
    Point point;
    BoundingBox bbox;
    int blob_id = 0;
};

struct EdgeParams {
    /// Extra pixels removed around every object box.
    int mask_margin = 0;
    /// A blob touches an object when a pixel lies in the box grown by this much.
    int contact_margin = 4;
    int min_blob_size = 8;
};

struct EdgeExtraction {
    std::vector<WireSegment> segments;
    std::vector<ImplicitJunctionSite> junctions;
    Diagnostics diagnostics;
};

class TraceError : public Error {
public:
    using Error::Error;
};

/// Clears every pixel inside any object box grown by `margin`, texts included.
BitMap mask_objects(const BitMap& map, std::span<const AnnotatedObject> objects, int margin);

/// 8-connected components with at least `min_size` pixels, numbered in
/// scanline order of their first pixel.
std::vector<Blob> label_components(const BitMap& map, int min_size = 8);

/// One contact per non-text object whose box grown by `margin` holds a blob
/// pixel; the contact is the pixel nearest the box centre. Sorted by object id.
std::vector<Contact> find_contacts(const Blob& blob, std::span<const AnnotatedObject> objects, int margin);

/// Thins the blob and follows the skeleton between the skeleton pixels
/// nearest `from` and `to`. The path starts at `from` and ends at `to`.
/// Throws TraceError when the two skeleton points are not connected.
Polyline trace_polyline(const Blob& blob, Point from, Point to);

/// mask -> label -> contacts -> trace. Blobs with more than two contacts are
/// split at skeleton branch points; branch points where three or more arcs
/// meet become implicit junctions.
EdgeExtraction extract_edges(const BitMap& map, std::span<const AnnotatedObject> objects,
                             const EdgeParams& params = {});

}  // namespace wiregraph
