#include "wiregraph/annotation_io.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "json.hpp"
#include "wiregraph/dataset.hpp"
#include "wiregraph/error.hpp"

namespace wiregraph {

namespace pt = boost::property_tree;
using nlohmann::json;

double wrap_degrees(double deg)
{
    double r = std::fmod(deg, 360.0);
    if (r < 0.0)
        r += 360.0;
    if (r >= 360.0)
        r = 0.0;
    return r;
}

void validate(const ImageRecord& record)
{
    if (record.width <= 0 || record.height <= 0)
        throw ValidationError("image size must be positive, got " + std::to_string(record.width) + "x" +
                              std::to_string(record.height));
    std::vector<int> bad;
    std::set<int> ids;
    for (const auto& o : record.objects) {
        const auto& b = o.bbox;
        if (!b.valid() || b.xmax > record.width || b.ymax > record.height)
            bad.push_back(o.id);
        if (!ids.insert(o.id).second)
            throw ValidationError("duplicate object id " + std::to_string(o.id), {o.id});
    }
    if (!bad.empty()) {
        std::string msg = "bounding boxes outside the " + std::to_string(record.width) + "x" +
                          std::to_string(record.height) + " image or degenerate, object ids:";
        for (int id : bad)
            msg += " " + std::to_string(id);
        throw ValidationError(msg, bad);
    }
}

namespace {

std::string trim(std::string s)
{
    const auto ws = " \t\r\n";
    const auto first = s.find_first_not_of(ws);
    if (first == std::string::npos)
        return {};
    const auto last = s.find_last_not_of(ws);
    return s.substr(first, last - first + 1);
}

double parse_number(const std::string& raw, const std::string& what)
{
    const std::string s = trim(raw);
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size() || !std::isfinite(v))
            throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError("annotation: " + what + " is not a number: '" + s + "'");
    }
}

int parse_coord(const pt::ptree& node, const std::string& key, const std::string& what)
{
    auto v = node.get_optional<std::string>(key);
    if (!v)
        throw ParseError("annotation: " + what + " lacks <" + key + ">");
    return int(std::lround(parse_number(*v, what + "/" + key)));
}

std::optional<std::string> first_child(const pt::ptree& node, const std::vector<std::string>& names)
{
    for (const auto& n : names)
        if (auto v = node.get_optional<std::string>(n))
            return *v;
    return std::nullopt;
}

// Drops optional fields the object's category cannot carry.
void normalize(AnnotatedObject& o)
{
    const auto cat = o.cls.category;
    if (!(is_symbol_like(cat) || cat == Category::Text))
        o.rotation.reset();
    if (cat != Category::Text)
        o.text.reset();
    if (o.rotation)
        o.rotation = wrap_degrees(*o.rotation);
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

std::string format_number(double v)
{
    if (v == std::floor(v) && std::abs(v) < 1e15)
        return std::to_string(static_cast<long long>(v));
    std::ostringstream ss;
    ss.precision(17);
    ss << v;
    return ss.str();
}

}  // namespace

ImageRecord parse_annotation(std::string_view xml, const Taxonomy& taxonomy, const AnnotationOptions& options)
{
    pt::ptree tree;
    try {
        std::istringstream in{std::string(xml)};
        pt::read_xml(in, tree);
    } catch (const pt::xml_parser_error& e) {
        throw ParseError("annotation: malformed XML: " + e.message(), int(e.line()));
    }

    auto root_opt = tree.get_child_optional("annotation");
    if (!root_opt)
        throw ParseError("annotation: missing <annotation> root element");
    const pt::ptree& root = *root_opt;

    ImageRecord rec;
    rec.image_path = trim(root.get<std::string>("path", root.get<std::string>("filename", "")));
    auto size = root.get_child_optional("size");
    if (!size)
        throw ParseError("annotation: missing <size>");
    rec.width = parse_coord(*size, "width", "size");
    rec.height = parse_coord(*size, "height", "size");

    if (options.drafter)
        rec.drafter = options.drafter;
    else if (auto d = drafter_from_path(options.source_path))
        rec.drafter = d;
    else if (auto d2 = drafter_from_path(rec.image_path))
        rec.drafter = d2;
    else if (auto folder = root.get_optional<std::string>("folder"))
        rec.drafter = drafter_from_path(trim(*folder));

    int next_id = 0;
    for (const auto& [tag, node] : root) {
        if (tag != "object")
            continue;
        const std::string where = "object " + std::to_string(next_id);
        AnnotatedObject o;
        o.id = next_id++;
        auto name = node.get_optional<std::string>("name");
        if (!name || trim(*name).empty())
            throw ParseError("annotation: " + where + " lacks <name>");
        o.cls = taxonomy.classify(trim(*name));
        auto box = node.get_child_optional("bndbox");
        if (!box)
            throw ParseError("annotation: " + where + " lacks <bndbox>");
        o.bbox = {parse_coord(*box, "xmin", where), parse_coord(*box, "ymin", where),
                  parse_coord(*box, "xmax", where), parse_coord(*box, "ymax", where)};
        if (auto rot = first_child(node, options.aliases.rotation); rot && !trim(*rot).empty())
            o.rotation = parse_number(*rot, where + " rotation");
        if (auto text = first_child(node, options.aliases.text))
            o.text = trim(*text);
        normalize(o);
        rec.objects.push_back(std::move(o));
    }
    validate(rec);
    return rec;
}

std::string write_annotation(const ImageRecord& record)
{
    std::ostringstream out;
    const std::filesystem::path p(record.image_path);
    out << "<annotation>\n";
    out << "  <folder>" << xml_escape(p.parent_path().filename().string()) << "</folder>\n";
    out << "  <filename>" << xml_escape(p.filename().string()) << "</filename>\n";
    out << "  <path>" << xml_escape(record.image_path) << "</path>\n";
    out << "  <size>\n    <width>" << record.width << "</width>\n    <height>" << record.height
        << "</height>\n    <depth>3</depth>\n  </size>\n";
    auto objects = record.objects;
    std::sort(objects.begin(), objects.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    for (const auto& o : objects) {
        out << "  <object>\n    <name>" << xml_escape(o.cls.name) << "</name>\n";
        out << "    <bndbox>\n      <xmin>" << o.bbox.xmin << "</xmin>\n      <ymin>" << o.bbox.ymin
            << "</ymin>\n      <xmax>" << o.bbox.xmax << "</xmax>\n      <ymax>" << o.bbox.ymax
            << "</ymax>\n    </bndbox>\n";
        if (o.rotation)
            out << "    <rotation>" << format_number(*o.rotation) << "</rotation>\n";
        if (o.text)
            out << "    <text>" << xml_escape(*o.text) << "</text>\n";
        out << "  </object>\n";
    }
    out << "</annotation>\n";
    return out.str();
}

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& msg)
{
    throw ParseError("perception JSON " + path + ": " + msg);
}

int require_int(const json& j, const std::string& key, const std::string& path)
{
    if (!j.contains(key))
        schema_error(path + "/" + key, "missing");
    const auto& v = j[key];
    if (!v.is_number_integer())
        schema_error(path + "/" + key, "expected integer");
    return v.get<int>();
}

std::optional<double> optional_number(const json& j, const std::string& key, const std::string& path)
{
    if (!j.contains(key) || j[key].is_null())
        return std::nullopt;
    if (!j[key].is_number())
        schema_error(path + "/" + key, "expected number or null");
    return j[key].get<double>();
}

json number_json(double v)
{
    if (v == std::floor(v) && std::abs(v) < 1e15)
        return json(static_cast<long long>(v));
    return json(v);
}

}  // namespace

ImageRecord read_perception(std::string_view json_text, const Taxonomy& taxonomy)
{
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("perception JSON: ") + e.what());
    }
    if (!j.is_object())
        schema_error("/", "expected object");

    ImageRecord rec;
    if (!j.contains("image") || !j["image"].is_string())
        schema_error("/image", "expected string");
    rec.image_path = j["image"].get<std::string>();
    rec.drafter = drafter_from_path(rec.image_path);
    rec.width = require_int(j, "width", "");
    rec.height = require_int(j, "height", "");
    if (!j.contains("objects") || !j["objects"].is_array())
        schema_error("/objects", "expected array");

    const auto& objs = j["objects"];
    for (std::size_t i = 0; i < objs.size(); ++i) {
        const std::string path = "/objects/" + std::to_string(i);
        const auto& oj = objs[i];
        if (!oj.is_object())
            schema_error(path, "expected object");
        AnnotatedObject o;
        o.id = require_int(oj, "id", path);
        if (!oj.contains("class") || !oj["class"].is_string() || oj["class"].get<std::string>().empty())
            schema_error(path + "/class", "expected non-empty string");
        o.cls = taxonomy.classify(oj["class"].get<std::string>());
        if (!oj.contains("bbox") || !oj["bbox"].is_array() || oj["bbox"].size() != 4)
            schema_error(path + "/bbox", "expected [xmin, ymin, xmax, ymax]");
        int c[4];
        for (int k = 0; k < 4; ++k) {
            const auto& v = oj["bbox"][k];
            if (!v.is_number())
                schema_error(path + "/bbox/" + std::to_string(k), "expected number");
            c[k] = int(std::lround(v.get<double>()));
        }
        o.bbox = {c[0], c[1], c[2], c[3]};
        o.rotation = optional_number(oj, "rotation", path);
        if (oj.contains("text") && !oj["text"].is_null()) {
            if (!oj["text"].is_string())
                schema_error(path + "/text", "expected string or null");
            o.text = oj["text"].get<std::string>();
        }
        o.confidence = optional_number(oj, "confidence", path);
        normalize(o);
        rec.objects.push_back(std::move(o));
    }
    validate(rec);
    return rec;
}

std::string write_perception(const ImageRecord& record)
{
    auto objects = record.objects;
    std::sort(objects.begin(), objects.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    json arr = json::array();
    for (const auto& o : objects) {
        json oj;
        oj["id"] = o.id;
        oj["class"] = o.cls.name;
        oj["bbox"] = {o.bbox.xmin, o.bbox.ymin, o.bbox.xmax, o.bbox.ymax};
        oj["rotation"] = o.rotation ? number_json(*o.rotation) : json(nullptr);
        oj["text"] = o.text ? json(*o.text) : json(nullptr);
        oj["confidence"] = o.confidence ? number_json(*o.confidence) : json(nullptr);
        arr.push_back(std::move(oj));
    }
    json j;
    j["image"] = record.image_path;
    j["width"] = record.width;
    j["height"] = record.height;
    j["objects"] = std::move(arr);
    return j.dump(2) + "\n";
}

}  // namespace wiregraph
