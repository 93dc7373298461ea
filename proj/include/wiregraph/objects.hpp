#pragma once

#include <optional>
#include <string>

#include "wiregraph/geometry.hpp"
#include "wiregraph/taxonomy.hpp"

namespace wiregraph {

/// A detected or annotated region of interest.
struct AnnotatedObject {
    int id = 0;
    BoundingBox bbox;
    ObjectClass cls;
    /// Degrees in [0,360); only Symbol/Terminal/Text objects carry one.
    std::optional<double> rotation;
    /// Only Text objects carry one.
    std::optional<std::string> text;
    /// Detector score, absent for ground truth.
    std::optional<double> confidence;

    friend bool operator==(const AnnotatedObject&, const AnnotatedObject&) = default;
};

inline bool is_symbol_like(Category c) { return c == Category::Symbol || c == Category::Terminal; }

}  // namespace wiregraph
