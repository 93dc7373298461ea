#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "wiregraph/diagnostics.hpp"

namespace wiregraph {

enum class Category { Symbol, Text, Junction, Corner, Crossover, Terminal };

std::string_view to_string(Category c);
std::optional<Category> parse_category(std::string_view s);

struct ObjectClass {
    std::string name;
    Category category = Category::Symbol;

    friend bool operator==(const ObjectClass&, const ObjectClass&) = default;
};

/// Class name -> category table. Loaded from a JSON object
/// {"resistor": "symbol", "junction": "junction", ...}.
class Taxonomy {
public:
    Taxonomy() = default;
    explicit Taxonomy(std::map<std::string, Category> entries) : entries_(std::move(entries)) {}

    static Taxonomy from_json(std::string_view json_text);
    static Taxonomy load(const std::filesystem::path& path);

    /// Unknown names fall back to Symbol and, when `diag` is given, record
    /// an "unknown-class" diagnostic.
    Category category_of(std::string_view name, Diagnostics* diag = nullptr) const;
    ObjectClass classify(std::string_view name, Diagnostics* diag = nullptr) const;

    bool contains(std::string_view name) const { return entries_.find(std::string(name)) != entries_.end(); }
    std::size_t size() const { return entries_.size(); }
    const std::map<std::string, Category>& entries() const { return entries_; }

private:
    std::map<std::string, Category> entries_;
};

}  // namespace wiregraph
