#include "wiregraph/symbol_library.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "wiregraph/error.hpp"

namespace wiregraph {

std::string_view to_string(Symmetry s)
{
    return s == Symmetry::Mirror180 ? "mirror180" : "none";
}

double period_of(Symmetry s)
{
    return s == Symmetry::Mirror180 ? 180.0 : 360.0;
}

SymbolLibrary::SymbolLibrary(std::map<std::string, SymbolEntry> entries) : entries_(std::move(entries))
{
    for (const auto& [cls, entry] : entries_) {
        std::set<std::string> names;
        for (const auto& port : entry.ports) {
            if (port.position.x < 0.0 || port.position.x > 1.0 || port.position.y < 0.0 || port.position.y > 1.0)
                throw ValidationError("symbol library: port '" + port.name + "' of '" + cls +
                                      "' lies outside the unit square");
            if (!names.insert(port.name).second)
                throw ValidationError("symbol library: duplicate port '" + port.name + "' in '" + cls + "'");
        }
    }
}

SymbolLibrary SymbolLibrary::from_json(std::string_view json_text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("symbol library: ") + e.what());
    }
    if (!j.is_object())
        throw ParseError("symbol library: top level must be an object keyed by class name");

    std::map<std::string, SymbolEntry> entries;
    for (const auto& [cls, value] : j.items()) {
        const std::string where = "symbol library: /" + cls;
        if (!value.is_object())
            throw ParseError(where + " must be an object");
        SymbolEntry entry;
        const std::string sym = value.value("symmetry", std::string("none"));
        if (sym == "none")
            entry.symmetry = Symmetry::None;
        else if (sym == "mirror180")
            entry.symmetry = Symmetry::Mirror180;
        else
            throw ParseError(where + "/symmetry: expected \"none\" or \"mirror180\", got \"" + sym + "\"");

        if (value.contains("ports")) {
            const auto& ports = value["ports"];
            if (!ports.is_array())
                throw ParseError(where + "/ports must be an array");
            for (std::size_t i = 0; i < ports.size(); ++i) {
                const auto& p = ports[i];
                const std::string pw = where + "/ports/" + std::to_string(i);
                if (!p.is_object() || !p.contains("name") || !p["name"].is_string() || !p.contains("x") ||
                    !p["x"].is_number() || !p.contains("y") || !p["y"].is_number())
                    throw ParseError(pw + ": expected {\"name\": string, \"x\": number, \"y\": number}");
                entry.ports.push_back({p["name"].get<std::string>(), {p["x"].get<double>(), p["y"].get<double>()}});
            }
        }
        entries.emplace(cls, std::move(entry));
    }
    return SymbolLibrary(std::move(entries));
}

SymbolLibrary SymbolLibrary::load(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open symbol library " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

const SymbolEntry* SymbolLibrary::find(std::string_view cls) const
{
    auto it = entries_.find(std::string(cls));
    return it == entries_.end() ? nullptr : &it->second;
}

const SymbolEntry& SymbolLibrary::at(std::string_view cls) const
{
    if (const auto* e = find(cls))
        return *e;
    throw ValidationError("symbol library has no entry for class '" + std::string(cls) + "'");
}

std::vector<std::string> SymbolLibrary::missing_entries(const Taxonomy& taxonomy) const
{
    std::vector<std::string> missing;
    for (const auto& [name, cat] : taxonomy.entries())
        if ((cat == Category::Symbol || cat == Category::Terminal) && !find(name))
            missing.push_back(name);
    return missing;
}

}  // namespace wiregraph
