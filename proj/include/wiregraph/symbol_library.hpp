#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "wiregraph/geometry.hpp"
#include "wiregraph/taxonomy.hpp"

namespace wiregraph {

/// Rotational equivalence of a symbol template.
enum class Symmetry { None, Mirror180 };

std::string_view to_string(Symmetry s);

/// Period in degrees after which the symbol looks identical (360 or 180).
double period_of(Symmetry s);

struct PortTemplate {
    std::string name;
    /// Unit-square coordinates relative to the upright template, y down.
    Point position;
};

struct SymbolEntry {
    Symmetry symmetry = Symmetry::None;
    std::vector<PortTemplate> ports;
};

/// Per-class symbol metadata. JSON form:
/// {"resistor": {"symmetry": "mirror180", "ports": [{"name": "1", "x": 0, "y": 0.5}, ...]}}
class SymbolLibrary {
public:
    SymbolLibrary() = default;
    explicit SymbolLibrary(std::map<std::string, SymbolEntry> entries);

    static SymbolLibrary from_json(std::string_view json_text);
    static SymbolLibrary load(const std::filesystem::path& path);

    const SymbolEntry* find(std::string_view cls) const;
    /// Throws ValidationError naming the class when absent.
    const SymbolEntry& at(std::string_view cls) const;

    /// Symbol/Terminal classes of the taxonomy that lack an entry.
    std::vector<std::string> missing_entries(const Taxonomy& taxonomy) const;

    const std::map<std::string, SymbolEntry>& entries() const { return entries_; }

private:
    std::map<std::string, SymbolEntry> entries_;
};

}  // namespace wiregraph
