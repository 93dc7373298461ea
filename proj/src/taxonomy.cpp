#include "wiregraph/taxonomy.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "wiregraph/error.hpp"

namespace wiregraph {

namespace {

constexpr std::pair<Category, std::string_view> kCategoryNames[] = {
    {Category::Symbol, "symbol"},     {Category::Text, "text"},
    {Category::Junction, "junction"}, {Category::Corner, "corner"},
    {Category::Crossover, "crossover"}, {Category::Terminal, "terminal"},
};

}  // namespace

std::string_view to_string(Category c)
{
    for (const auto& [cat, name] : kCategoryNames)
        if (cat == c)
            return name;
    return "symbol";
}

std::optional<Category> parse_category(std::string_view s)
{
    for (const auto& [cat, name] : kCategoryNames)
        if (name == s)
            return cat;
    return std::nullopt;
}

Taxonomy Taxonomy::from_json(std::string_view json_text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("taxonomy: ") + e.what());
    }
    if (!j.is_object())
        throw ParseError("taxonomy: top level must be an object of class-name -> category");

    std::map<std::string, Category> entries;
    for (const auto& [name, value] : j.items()) {
        if (name.empty())
            throw ParseError("taxonomy: empty class name");
        if (!value.is_string())
            throw ParseError("taxonomy: category of '" + name + "' must be a string");
        auto cat = parse_category(value.get<std::string>());
        if (!cat)
            throw ParseError("taxonomy: unknown category '" + value.get<std::string>() + "' for '" + name + "'");
        entries.emplace(name, *cat);
    }
    return Taxonomy(std::move(entries));
}

Taxonomy Taxonomy::load(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open taxonomy file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

Category Taxonomy::category_of(std::string_view name, Diagnostics* diag) const
{
    auto it = entries_.find(std::string(name));
    if (it != entries_.end())
        return it->second;
    if (diag)
        diag->push_back({"unknown-class", std::nullopt, {}, std::string(name)});
    return Category::Symbol;
}

ObjectClass Taxonomy::classify(std::string_view name, Diagnostics* diag) const
{
    return {std::string(name), category_of(name, diag)};
}

}  // namespace wiregraph
