#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wiregraph/objects.hpp"
#include "wiregraph/raster.hpp"
#include "wiregraph/taxonomy.hpp"

namespace wiregraph {

struct ImageRecord {
    std::string image_path;
    /// Drafter number (>= 1) when it could be determined.
    std::optional<int> drafter;
    int width = 0;
    int height = 0;
    std::vector<AnnotatedObject> objects;
    std::optional<BitMap> segmap;

    ImageSize size() const { return {width, height}; }
};

/// Throws ValidationError listing every object whose box is degenerate or
/// leaves the image.
void validate(const ImageRecord& record);

/// Tag names probed, in order, for the optional per-object fields.
struct XmlTagAliases {
    std::vector<std::string> rotation{"rotation", "orientation", "angle"};
    std::vector<std::string> text{"text", "content", "transcription"};
};

struct AnnotationOptions {
    XmlTagAliases aliases;
    /// Overrides the drafter id derived from `source_path`.
    std::optional<int> drafter;
    /// Where the document came from; used for drafter detection only.
    std::filesystem::path source_path;
};

/// VOC-style annotation XML: size/{width,height}, object/{name, bndbox/{xmin,ymin,xmax,ymax}}
/// with optional rotation and text children. Object ids follow document order.
ImageRecord parse_annotation(std::string_view xml, const Taxonomy& taxonomy,
                             const AnnotationOptions& options = {});

std::string write_annotation(const ImageRecord& record);

/// Perception interchange JSON:
/// {"image", "width", "height", "objects": [{"id", "class", "bbox", "rotation", "text", "confidence"}]}
ImageRecord read_perception(std::string_view json_text, const Taxonomy& taxonomy);

/// Canonical form: sorted keys, objects in id order, absent optionals as null.
std::string write_perception(const ImageRecord& record);

/// Wraps any finite angle into [0,360).
double wrap_degrees(double deg);

}  // namespace wiregraph
