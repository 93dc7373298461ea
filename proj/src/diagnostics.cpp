#include "wiregraph/diagnostics.hpp"

#include "json.hpp"

namespace wiregraph {

std::string to_json_line(const Diagnostic& d)
{
    nlohmann::json j;
    j["kind"] = d.kind;
    j["blob"] = d.blob ? nlohmann::json(*d.blob) : nlohmann::json(nullptr);
    j["objects"] = d.objects;
    if (!d.detail.empty())
        j["detail"] = d.detail;
    return j.dump();
}

std::string to_json_lines(const Diagnostics& ds)
{
    std::string out;
    for (const auto& d : ds) {
        out += to_json_line(d);
        out += '\n';
    }
    return out;
}

}  // namespace wiregraph
