#include "wiregraph/exporter.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "json.hpp"
#include "wiregraph/error.hpp"

namespace wiregraph {

using nlohmann::json;

namespace {

json number_json(double v)
{
    if (v == std::floor(v) && std::abs(v) < 1e15)
        return json(static_cast<long long>(v));
    return json(v);
}

std::string short_number(double v)
{
    if (v == std::floor(v) && std::abs(v) < 1e15)
        return std::to_string(static_cast<long long>(v));
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    std::string s = buf;
    while (s.back() == '0')
        s.pop_back();
    if (s.back() == '.')
        s.pop_back();
    return s;
}

std::string xml_escape(std::string_view s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

json bbox_json(const BoundingBox& b) { return json::array({b.xmin, b.ymin, b.xmax, b.ymax}); }

BoundingBox bbox_from(const json& j, const std::string& path)
{
    if (!j.is_array() || j.size() != 4)
        throw ParseError("graph JSON " + path + ": expected [xmin, ymin, xmax, ymax]");
    return {j[0].get<int>(), j[1].get<int>(), j[2].get<int>(), j[3].get<int>()};
}

template <typename T>
std::optional<T> optional_from(const json& j, const char* key)
{
    if (!j.contains(key) || j[key].is_null())
        return std::nullopt;
    return j[key].get<T>();
}

json nullable(const std::optional<std::string>& v) { return v ? json(*v) : json(nullptr); }
json nullable(const std::optional<int>& v) { return v ? json(*v) : json(nullptr); }
json nullable(const std::optional<double>& v) { return v ? number_json(*v) : json(nullptr); }

}  // namespace

std::string to_graph_json(const CircuitGraph& graph, const std::vector<Net>& nets)
{
    json nodes = json::array();
    for (const auto& n : graph.nodes) {
        json ports = json::array();
        for (std::size_t p = 0; p < n.ports.size(); ++p) {
            const auto& port = n.ports[p];
            ports.push_back({{"name", nullable(port.name)},
                             {"x", number_json(port.position.x)},
                             {"y", number_json(port.position.y)},
                             {"edge", nullable(port.edge)},
                             {"net", nullable(net_of(nets, n.id, int(p)))}});
        }
        nodes.push_back({{"id", n.id},
                         {"kind", std::string(to_string(n.kind))},
                         {"class", n.cls},
                         {"rotation", nullable(n.rotation)},
                         {"bbox", bbox_json(n.bbox)},
                         {"ports", std::move(ports)},
                         {"texts", n.texts}});
    }

    json edges = json::array();
    for (const auto& e : graph.edges) {
        json pts = json::array();
        for (const auto& p : e.geometry.points)
            pts.push_back({number_json(p.x), number_json(p.y)});
        edges.push_back({{"id", e.id},
                         {"ends", json::array({{{"node", e.ends[0].node}, {"port", e.ends[0].port}},
                                               {{"node", e.ends[1].node}, {"port", e.ends[1].port}}})},
                         {"polyline", std::move(pts)}});
    }

    json net_arr = json::array();
    for (const auto& net : nets) {
        json members = json::array();
        for (const auto& m : net.members)
            members.push_back({{"node", m.node}, {"port", m.port}, {"name", nullable(m.name)}});
        net_arr.push_back({{"id", net.id}, {"members", std::move(members)}, {"edges", net.edges}});
    }

    json diags = json::array();
    for (const auto& d : graph.diagnostics) {
        json dj = {{"kind", d.kind}, {"blob", nullable(d.blob)}, {"objects", d.objects}};
        if (!d.detail.empty())
            dj["detail"] = d.detail;
        diags.push_back(std::move(dj));
    }

    json root = {{"nodes", std::move(nodes)},
                 {"edges", std::move(edges)},
                 {"nets", std::move(net_arr)},
                 {"diagnostics", std::move(diags)}};
    if (!graph.texts.empty()) {
        json texts = json::array();
        for (const auto& t : graph.texts)
            texts.push_back({{"id", t.id},
                             {"bbox", bbox_json(t.bbox)},
                             {"text", t.text},
                             {"rotation", nullable(t.rotation)},
                             {"attached_to", nullable(t.attached_to)}});
        root["texts"] = std::move(texts);
    }
    if (!graph.image.empty() || graph.size.width != 0 || graph.size.height != 0) {
        root["image"] = graph.image;
        root["width"] = graph.size.width;
        root["height"] = graph.size.height;
    }
    return root.dump(2) + "\n";
}

GraphDocument read_graph_json(std::string_view json_text)
{
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("graph JSON: ") + e.what());
    }
    GraphDocument doc;
    try {
        auto& g = doc.graph;
        g.image = j.value("image", std::string());
        g.size = {j.value("width", 0), j.value("height", 0)};
        for (const auto& nj : j.at("nodes")) {
            Node n;
            n.id = nj.at("id").get<int>();
            const auto kind = parse_node_kind(nj.at("kind").get<std::string>());
            if (!kind)
                throw ParseError("graph JSON: unknown node kind '" + nj.at("kind").get<std::string>() + "'");
            n.kind = *kind;
            n.cls = nj.at("class").get<std::string>();
            n.rotation = optional_from<double>(nj, "rotation");
            n.bbox = bbox_from(nj.at("bbox"), "/nodes/" + std::to_string(n.id) + "/bbox");
            for (const auto& pj : nj.at("ports"))
                n.ports.push_back({optional_from<std::string>(pj, "name"),
                                   {pj.at("x").get<double>(), pj.at("y").get<double>()},
                                   optional_from<int>(pj, "edge")});
            n.texts = nj.value("texts", std::vector<int>{});
            g.nodes.push_back(std::move(n));
        }
        for (const auto& ej : j.at("edges")) {
            Edge e;
            e.id = ej.at("id").get<int>();
            const auto& ends = ej.at("ends");
            for (int k = 0; k < 2; ++k)
                e.ends[k] = {ends.at(k).at("node").get<int>(), ends.at(k).at("port").get<int>()};
            for (const auto& pj : ej.at("polyline"))
                e.geometry.points.push_back({pj.at(0).get<double>(), pj.at(1).get<double>()});
            g.edges.push_back(std::move(e));
        }
        for (const auto& dj : j.at("diagnostics"))
            g.diagnostics.push_back({dj.at("kind").get<std::string>(), optional_from<int>(dj, "blob"),
                                     dj.at("objects").get<std::vector<int>>(), dj.value("detail", std::string())});
        if (j.contains("texts"))
            for (const auto& tj : j["texts"])
                g.texts.push_back({tj.at("id").get<int>(), bbox_from(tj.at("bbox"), "/texts"),
                                   tj.at("text").get<std::string>(), optional_from<double>(tj, "rotation"),
                                   optional_from<int>(tj, "attached_to")});
        for (const auto& netj : j.at("nets")) {
            Net net;
            net.id = netj.at("id").get<int>();
            for (const auto& mj : netj.at("members"))
                net.members.push_back(
                    {mj.at("node").get<int>(), mj.at("port").get<int>(), optional_from<std::string>(mj, "name")});
            net.edges = netj.at("edges").get<std::vector<int>>();
            doc.nets.push_back(std::move(net));
        }
        std::sort(g.nodes.begin(), g.nodes.end(), [](const Node& a, const Node& b) { return a.id < b.id; });
        std::sort(g.edges.begin(), g.edges.end(), [](const Edge& a, const Edge& b) { return a.id < b.id; });
    } catch (const json::exception& e) {
        throw ParseError(std::string("graph JSON: ") + e.what());
    }
    doc.graph.check_integrity();
    return doc;
}

std::string designator_prefix(std::string_view cls, const NetlistOptions& options)
{
    if (auto it = options.designators.find(std::string(cls)); it != options.designators.end())
        return it->second;
    const std::string family(cls.substr(0, cls.find('.')));
    if (auto it = options.designators.find(family); it != options.designators.end())
        return it->second;
    return options.fallback;
}

std::string to_netlist(const CircuitGraph& graph, const std::vector<Net>& nets, const SymbolLibrary& lib,
                       const NetlistOptions& options)
{
    std::ostringstream out;
    out << "* netlist for " << (graph.image.empty() ? std::string("(unnamed image)") : graph.image) << "\n";
    std::map<std::string, int> ordinal;
    for (const auto& n : graph.nodes) {
        if (n.kind != NodeKind::Symbol)
            continue;
        const std::string prefix = designator_prefix(n.cls, options);
        out << prefix << ++ordinal[prefix];

        const SymbolEntry* entry = lib.find(n.cls);
        const bool ported = entry && !entry->ports.empty();
        if (ported) {
            for (const auto& t : entry->ports) {
                std::optional<int> net;
                for (std::size_t p = 0; p < n.ports.size(); ++p)
                    if (n.ports[p].name == t.name)
                        net = net_of(nets, n.id, int(p));
                out << ' ' << (net ? std::to_string(*net) : std::string("NC"));
            }
        }
        out << " ; " << n.cls;
        for (int tid : n.texts)
            for (const auto& t : graph.texts)
                if (t.id == tid && !t.text.empty())
                    out << ' ' << t.text;
        if (n.rotation)
            out << " rot=" << short_number(*n.rotation);
        if (!ported)
            out << " unported";
        out << "\n";
    }
    return out.str();
}

std::string to_graphml(const CircuitGraph& graph, const std::vector<Net>& nets)
{
    std::map<int, int> edge_net;
    for (const auto& net : nets)
        for (int e : net.edges)
            edge_net[e] = net.id;

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\" "
           "xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" "
           "xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns "
           "http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n"
        << "  <key id=\"class\" for=\"node\" attr.name=\"class\" attr.type=\"string\"/>\n"
        << "  <key id=\"kind\" for=\"node\" attr.name=\"kind\" attr.type=\"string\"/>\n"
        << "  <key id=\"rotation\" for=\"node\" attr.name=\"rotation\" attr.type=\"double\"/>\n"
        << "  <key id=\"bbox\" for=\"node\" attr.name=\"bbox\" attr.type=\"string\"/>\n"
        << "  <key id=\"net\" for=\"edge\" attr.name=\"net\" attr.type=\"int\"/>\n"
        << "  <key id=\"polyline\" for=\"edge\" attr.name=\"polyline\" attr.type=\"string\"/>\n"
        << "  <graph id=\"circuit\" edgedefault=\"undirected\">\n";
    for (const auto& n : graph.nodes) {
        out << "    <node id=\"n" << n.id << "\">\n"
            << "      <data key=\"class\">" << xml_escape(n.cls) << "</data>\n"
            << "      <data key=\"kind\">" << to_string(n.kind) << "</data>\n";
        if (n.rotation)
            out << "      <data key=\"rotation\">" << short_number(*n.rotation) << "</data>\n";
        out << "      <data key=\"bbox\">" << n.bbox.xmin << ' ' << n.bbox.ymin << ' ' << n.bbox.xmax << ' '
            << n.bbox.ymax << "</data>\n"
            << "    </node>\n";
    }
    for (const auto& e : graph.edges) {
        out << "    <edge id=\"e" << e.id << "\" source=\"n" << e.ends[0].node << "\" target=\"n" << e.ends[1].node
            << "\">\n";
        if (auto it = edge_net.find(e.id); it != edge_net.end())
            out << "      <data key=\"net\">" << it->second << "</data>\n";
        out << "      <data key=\"polyline\">";
        for (std::size_t i = 0; i < e.geometry.points.size(); ++i)
            out << (i ? " " : "") << short_number(e.geometry.points[i].x) << ','
                << short_number(e.geometry.points[i].y);
        out << "</data>\n    </edge>\n";
    }
    out << "  </graph>\n</graphml>\n";
    return out.str();
}

std::string_view to_string(Stage s)
{
    switch (s) {
    case Stage::Raw: return "raw";
    case Stage::Detection: return "detection";
    case Stage::OrientationText: return "orientation-text";
    case Stage::Edges: return "edges";
    case Stage::Segments: return "segments";
    case Stage::Rectified: return "rectified";
    }
    return "?";
}

namespace {

std::string hsl_hex(double hue, double sat, double light)
{
    const double c = (1 - std::abs(2 * light - 1)) * sat;
    const double hp = std::fmod(hue, 360.0) / 60.0;
    const double x = c * (1 - std::abs(std::fmod(hp, 2.0) - 1));
    double r = 0, g = 0, b = 0;
    if (hp < 1) { r = c; g = x; }
    else if (hp < 2) { r = x; g = c; }
    else if (hp < 3) { g = c; b = x; }
    else if (hp < 4) { g = x; b = c; }
    else if (hp < 5) { r = x; b = c; }
    else { r = c; b = x; }
    const double m = light - c / 2;
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", int(std::lround((r + m) * 255)), int(std::lround((g + m) * 255)),
                  int(std::lround((b + m) * 255)));
    return buf;
}

}  // namespace

std::string class_color(std::string_view cls)
{
    // FNV-1a
    std::uint32_t h = 2166136261u;
    for (unsigned char c : cls) {
        h ^= c;
        h *= 16777619u;
    }
    return hsl_hex(double(h % 360u), 0.65, 0.45);
}

std::string net_color(int net_id)
{
    return hsl_hex(std::fmod(net_id * 137.508, 360.0), 0.85, 0.40);
}

std::string render_overlay(ImageSize size, const CircuitGraph& graph, Stage stage, const std::vector<Net>& nets,
                           std::string_view image_href)
{
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" xmlns:xlink=\"http://www.w3.org/1999/xlink\" width=\""
        << size.width << "\" height=\"" << size.height << "\" viewBox=\"0 0 " << size.width << ' ' << size.height
        << "\">\n";
    out << "  <title>" << xml_escape(graph.image) << " - " << to_string(stage) << "</title>\n";
    if (!image_href.empty())
        out << "  <image xlink:href=\"" << xml_escape(image_href) << "\" x=\"0\" y=\"0\" width=\"" << size.width
            << "\" height=\"" << size.height << "\"/>\n";
    if (stage == Stage::Raw) {
        out << "</svg>\n";
        return out.str();
    }

    auto label = [&](double x, double y, const std::string& color, std::string_view text) {
        out << "  <text x=\"" << short_number(x) << "\" y=\"" << short_number(y) << "\" fill=\"" << color
            << "\" font-size=\"10\" font-family=\"sans-serif\">" << xml_escape(text) << "</text>\n";
    };

    for (const auto& n : graph.nodes) {
        const std::string color = class_color(n.cls);
        out << "  <rect x=\"" << n.bbox.xmin << "\" y=\"" << n.bbox.ymin << "\" width=\"" << n.bbox.width()
            << "\" height=\"" << n.bbox.height() << "\" fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
        std::string text = n.cls;
        if (stage == Stage::OrientationText && n.rotation)
            text += " " + short_number(*n.rotation) + "\xC2\xB0";
        label(n.bbox.xmin, n.bbox.ymin - 2, color, text);
    }
    if (stage == Stage::Detection || stage == Stage::OrientationText) {
        for (const auto& t : graph.texts) {
            const std::string color = class_color("text");
            out << "  <rect x=\"" << t.bbox.xmin << "\" y=\"" << t.bbox.ymin << "\" width=\"" << t.bbox.width()
                << "\" height=\"" << t.bbox.height() << "\" fill=\"none\" stroke=\"" << color
                << "\" stroke-width=\"1\" stroke-dasharray=\"3,2\"/>\n";
            label(t.bbox.xmin, t.bbox.ymin - 2, color, stage == Stage::OrientationText ? t.text : "text");
        }
        out << "</svg>\n";
        return out.str();
    }

    std::map<int, int> edge_net;
    for (const auto& net : nets)
        for (int e : net.edges)
            edge_net[e] = net.id;
    for (const auto& e : graph.edges) {
        std::string color = "#555555";
        if (stage == Stage::Rectified)
            if (auto it = edge_net.find(e.id); it != edge_net.end())
                color = net_color(it->second);
        out << "  <polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < e.geometry.points.size(); ++i)
            out << (i ? " " : "") << short_number(e.geometry.points[i].x) << ','
                << short_number(e.geometry.points[i].y);
        out << "\"/>\n";
    }
    for (const auto& n : graph.nodes)
        for (const auto& p : n.ports) {
            out << "  <circle cx=\"" << short_number(p.position.x) << "\" cy=\"" << short_number(p.position.y)
                << "\" r=\"3\" fill=\"" << (p.edge ? "#d62728" : "#ffffff") << "\" stroke=\"#d62728\"/>\n";
            if (stage == Stage::Rectified && p.name)
                label(p.position.x + 3, p.position.y - 3, "#d62728", *p.name);
        }
    out << "</svg>\n";
    return out.str();
}

}  // namespace wiregraph
