// wiregraph: schematic image + detected objects -> circuit graph.
//
// Exit codes: 0 success, 1 more diagnostics than --max-warnings,
// 2 usage, contract or input error.

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wiregraph/annotation_io.hpp"
#include "wiregraph/evaluation.hpp"
#include "wiregraph/exporter.hpp"
#include "wiregraph/image_io.hpp"
#include "wiregraph/pipeline.hpp"

namespace fs = std::filesystem;
using namespace wiregraph;

namespace {

constexpr int kExitWarnings = 1;
constexpr int kExitUsage = 2;

struct UsageError : Error {
    using Error::Error;
};

struct Common {
    PipelineConfig config;
    std::string library;
    std::string taxonomy;
    long long seed = 0;
    bool debug_stages = false;
    int max_warnings = -1;
    std::string map_polarity = "bright";
    std::string ap_mode = "all-points";
    bool light_strokes = false;
    double text_distance = -1;
    std::vector<std::string> designators;
};

void add_common_options(CLI::App& app, Common& c)
{
    auto& cfg = c.config;
    app.set_config("--config", "", "Key = value file mirroring these flags; flags given on the command line win");
    app.add_option("--library", c.library, "Symbol library JSON")->capture_default_str();
    app.add_option("--taxonomy", c.taxonomy, "Class taxonomy JSON")->capture_default_str();
    app.add_option("--seed", c.seed, "Reserved; nothing is stochastic")->capture_default_str();
    app.add_flag("--debug-stages", c.debug_stages, "Write one SVG overlay per pipeline stage");
    app.add_option("--max-warnings", c.max_warnings, "Exit 1 above this many diagnostics (-1: no limit)")
        ->capture_default_str();

    app.add_option("--patch", cfg.patch, "Binarizer tile size")->capture_default_str();
    app.add_option("--cutoff", cfg.probability_cutoff, "Stroke probability cutoff")->capture_default_str();
    app.add_option("--sauvola-window", cfg.sauvola.window, "Sauvola window (odd)")->capture_default_str();
    app.add_option("--sauvola-k", cfg.sauvola.k, "Sauvola k")->capture_default_str();
    app.add_option("--sauvola-range", cfg.sauvola.dynamic_range, "Sauvola dynamic range R")->capture_default_str();
    app.add_flag("--light-strokes", c.light_strokes, "Strokes are lighter than the paper");
    app.add_option("--map-threshold", cfg.map_threshold, "Gray level splitting a supplied stroke map")
        ->capture_default_str();
    app.add_option("--map-polarity", c.map_polarity, "Stroke pixels in supplied maps: bright or dark")
        ->check(CLI::IsMember({"bright", "dark"}))
        ->capture_default_str();

    app.add_option("--mask-margin", cfg.edges.mask_margin, "Pixels cleared around each object box")
        ->capture_default_str();
    app.add_option("--contact-margin", cfg.edges.contact_margin, "Box growth when looking for wire contacts")
        ->capture_default_str();
    app.add_option("--min-blob", cfg.edges.min_blob_size, "Smallest wire blob kept (pixels)")->capture_default_str();
    app.add_option("--hop-radius", cfg.hops.direction_radius, "Wire direction look-ahead at hops (pixels)")
        ->capture_default_str();
    app.add_option("--hop-ambiguity", cfg.hops.ambiguity_degrees, "Report hop pairings closer than this (degrees)")
        ->capture_default_str();
    app.add_option("--rectify-epsilon", cfg.rectify_epsilon, "Douglas-Peucker tolerance (pixels)")
        ->capture_default_str();
    app.add_option("--snap-degrees", cfg.snap_degrees, "Axis snapping tolerance (degrees)")->capture_default_str();
    app.add_option("--text-distance", c.text_distance,
                   "Text attachment distance in pixels (-1: 1.5x the symbol diagonal)")
        ->capture_default_str();

    app.add_option("--iou", cfg.iou_threshold, "IoU matching threshold")->capture_default_str();
    app.add_option("--orientation-threshold", cfg.orientation_threshold, "Correct-orientation tolerance (degrees)")
        ->capture_default_str();
    app.add_option("--max-text-length", cfg.max_text_length, "Longest text scored (code points)")
        ->capture_default_str();
    app.add_option("--ap-mode", c.ap_mode, "AP interpolation: all-points or 11-point")
        ->check(CLI::IsMember({"all-points", "11-point"}))
        ->capture_default_str();
    app.add_option("--workers", cfg.workers, "Evaluation threads (0: one per core)")->capture_default_str();
    app.add_option("--designator", c.designators, "Netlist designator, class=LETTER (repeatable)");
    app.add_option("--designator-fallback", cfg.netlist.fallback, "Designator for unmapped classes")
        ->capture_default_str();
}

void finish_common(Common& c)
{
    auto& cfg = c.config;
    cfg.sauvola.dark_strokes = !c.light_strokes;
    cfg.map_polarity = c.map_polarity == "dark" ? Polarity::DarkIsStroke : Polarity::BrightIsStroke;
    cfg.ap_mode = *parse_ap_mode(c.ap_mode);
    if (c.text_distance >= 0)
        cfg.text_distance = c.text_distance;
    for (const auto& d : c.designators) {
        const auto eq = d.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == d.size())
            throw UsageError("--designator expects class=LETTER, got '" + d + "'");
        cfg.netlist.designators[d.substr(0, eq)] = d.substr(eq + 1);
    }
    cfg.library = c.library;
    cfg.taxonomy = c.taxonomy;
    cfg.validate();
}

bool is_xml(const fs::path& p)
{
    auto ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char ch) { return char(std::tolower(ch)); });
    return ext == ".xml";
}

ImageRecord load_perception(const fs::path& path, const Taxonomy& taxonomy)
{
    const std::string text = read_text_file(path);
    if (is_xml(path)) {
        AnnotationOptions opts;
        opts.source_path = path;
        return parse_annotation(text, taxonomy, opts);
    }
    return read_perception(text, taxonomy);
}

int check_warnings(const Diagnostics& diags, int max_warnings)
{
    std::cerr << to_json_lines(diags);
    if (max_warnings >= 0 && diags.size() > std::size_t(max_warnings)) {
        std::cerr << "wiregraph: " << diags.size() << " diagnostic(s), more than --max-warnings " << max_warnings
                  << "\n";
        return kExitWarnings;
    }
    return 0;
}

struct ExtractArgs {
    std::string image;
    std::string perception;
    std::string segmap;
    std::string out_dir = ".";
    std::string graph_json, netlist, graphml, overlay;
};

int run_extract(const Common& c, const ExtractArgs& a)
{
    if (a.perception.empty())
        throw UsageError(
            "no perception input. wiregraph has no built-in detector: pass --perception with an annotation XML "
            "or a perception JSON ({\"image\", \"width\", \"height\", \"objects\": [{\"id\", \"class\", \"bbox\": "
            "[xmin, ymin, xmax, ymax], \"rotation\", \"text\", \"confidence\"}]}) describing the detected objects");
    const auto taxonomy = Taxonomy::load(c.config.taxonomy);
    const auto lib = SymbolLibrary::load(c.config.library);
    ImageRecord record = load_perception(a.perception, taxonomy);
    if (record.image_path.empty())
        record.image_path = fs::path(a.image).filename().string();

    BitMap strokes;
    if (!a.segmap.empty()) {
        strokes = load_bitmap(read_file(a.segmap), c.config.map_threshold, c.config.map_polarity);
    } else {
        strokes = binarize(decode_gray(read_file(a.image)), c.config);
    }
    if (record.width == 0 && record.height == 0) {
        record.width = strokes.width;
        record.height = strokes.height;
    }

    const auto result = run_pipeline(record, strokes, lib, c.config, c.debug_stages);
    const auto bundle = export_bundle(result, lib, c.config, a.image);

    const fs::path out_dir = a.out_dir;
    const std::string stem = fs::path(a.image).stem().string();
    const bool explicit_outputs =
        !a.graph_json.empty() || !a.netlist.empty() || !a.graphml.empty() || !a.overlay.empty();
    auto target = [&](const std::string& flag, const std::string& suffix) -> std::optional<fs::path> {
        if (!flag.empty())
            return fs::path(flag);
        if (explicit_outputs)
            return std::nullopt;
        return out_dir / (stem + suffix);
    };
    if (!explicit_outputs || c.debug_stages)
        fs::create_directories(out_dir);
    if (auto p = target(a.graph_json, ".graph.json"))
        write_text_file(*p, bundle.graph_json);
    if (auto p = target(a.netlist, ".net"))
        write_text_file(*p, bundle.netlist);
    if (auto p = target(a.graphml, ".graphml"))
        write_text_file(*p, bundle.graphml);
    if (auto p = target(a.overlay, ".svg"))
        write_text_file(*p, bundle.overlay);
    int k = 1;
    for (const auto& [stage, svg] : bundle.stage_overlays)
        write_text_file(out_dir / (stem + ".stage" + std::to_string(k++) + "-" + std::string(to_string(stage)) +
                                   ".svg"),
                        svg);
    return check_warnings(result.graph.diagnostics, c.max_warnings);
}

struct BinarizeArgs {
    std::string image;
    std::string output;
};

int run_binarize(const Common& c, const BinarizeArgs& a)
{
    const auto map = binarize(decode_gray(read_file(a.image)), c.config);
    write_file(a.output, encode_png(map));
    return 0;
}

struct EvaluateArgs {
    std::string root;
    std::string split = "test";
    std::string predictions;
    std::string report;
    std::string format = "text";
};

int run_evaluate(const Common& c, const EvaluateArgs& a)
{
    const auto split = parse_split_name(a.split);
    if (!split)
        throw UsageError("unknown split '" + a.split + "'");
    const auto taxonomy = Taxonomy::load(c.config.taxonomy);
    const auto lib = SymbolLibrary::load(c.config.library);
    EvaluationRequest req;
    req.root = a.root;
    req.split = *split;
    if (!a.predictions.empty())
        req.predictions = fs::path(a.predictions);
    const auto report = evaluate_dataset(req, taxonomy, lib, c.config);
    const std::string json_text = report_json(report);
    if (!a.report.empty())
        write_text_file(a.report, json_text);
    std::cout << (a.format == "json" ? json_text : report_table(report));
    for (const auto& f : report.failures)
        std::cerr << "wiregraph: " << f.annotation << ": " << f.message << "\n";
    if (c.max_warnings >= 0 && report.failures.size() > std::size_t(c.max_warnings))
        return kExitWarnings;
    return 0;
}

struct ConvertArgs {
    std::string input;
    std::string to;
    std::string output;
};

constexpr const char* kSupportedPairs =
    "supported conversions: annotation XML -> json, perception JSON -> xml, graph JSON -> netlist | graphml | json";

int run_convert(const Common& c, const ConvertArgs& a)
{
    const std::string text = read_text_file(a.input);
    std::string out;
    if (is_xml(a.input)) {
        if (a.to != "json")
            throw UsageError("cannot convert annotation XML to '" + a.to + "'; " + kSupportedPairs);
        AnnotationOptions opts;
        opts.source_path = a.input;
        out = write_perception(parse_annotation(text, Taxonomy::load(c.config.taxonomy), opts));
    } else {
        nlohmann::json probe;
        try {
            probe = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(a.input + ": " + e.what());
        }
        if (probe.is_object() && probe.contains("nodes")) {
            const auto doc = read_graph_json(text);
            if (a.to == "netlist")
                out = to_netlist(doc.graph, doc.nets, SymbolLibrary::load(c.config.library), c.config.netlist);
            else if (a.to == "graphml")
                out = to_graphml(doc.graph, doc.nets);
            else if (a.to == "json")
                out = to_graph_json(doc.graph, doc.nets);
            else
                throw UsageError("cannot convert graph JSON to '" + a.to + "'; " + kSupportedPairs);
        } else {
            if (a.to != "xml")
                throw UsageError("cannot convert perception JSON to '" + a.to + "'; " + kSupportedPairs);
            out = write_annotation(read_perception(text, Taxonomy::load(c.config.taxonomy)));
        }
    }
    if (a.output.empty())
        std::cout << out;
    else
        write_text_file(a.output, out);
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Circuit graph extraction from handwritten schematic images"};
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();
    app.fallthrough();

    Common common;
    common.library = (default_data_dir() / "symbol_library.json").string();
    common.taxonomy = (default_data_dir() / "taxonomy.json").string();
    add_common_options(app, common);

    ExtractArgs ex;
    auto* extract = app.add_subcommand("extract", "Image + detected objects -> graph JSON, netlist, GraphML, SVG");
    extract->add_option("image", ex.image, "Schematic image (PNG/JPEG)")->required();
    extract->add_option("-p,--perception", ex.perception, "Annotation XML or perception JSON");
    extract->add_option("--segmap", ex.segmap, "Stroke map to use instead of binarizing the image");
    extract->add_option("--out-dir", ex.out_dir, "Directory for default-named outputs and stage overlays")
        ->capture_default_str();
    extract->add_option("--graph-json", ex.graph_json, "Graph JSON output");
    extract->add_option("--netlist", ex.netlist, "Netlist output");
    extract->add_option("--graphml", ex.graphml, "GraphML output");
    extract->add_option("--overlay", ex.overlay, "SVG overlay output");

    BinarizeArgs bin;
    auto* binarize_cmd = app.add_subcommand("binarize", "Classical stroke map of an image");
    binarize_cmd->add_option("image", bin.image, "Input image")->required();
    binarize_cmd->add_option("-o,--output", bin.output, "Stroke map PNG (strokes white)")->required();

    EvaluateArgs ev;
    auto* evaluate = app.add_subcommand("evaluate", "Score a dataset split");
    evaluate->add_option("root", ev.root, "Dataset root (drafter_<n>/annotations/*.xml)")->required();
    evaluate->add_option("--split", ev.split, "train, validation, test or all")
        ->check(CLI::IsMember({"train", "validation", "test", "all"}))
        ->capture_default_str();
    evaluate->add_option("--predictions", ev.predictions,
                         "Directory of <stem>.json/.xml predictions and optional <stem>.png maps; "
                         "absent: ground truth against itself");
    evaluate->add_option("--report", ev.report, "JSON report output");
    evaluate->add_option("--format", ev.format, "Standard output: text or json")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();

    ConvertArgs cv;
    auto* convert = app.add_subcommand("convert", "Convert between annotation, perception and graph formats");
    convert->alias("export");
    convert->add_option("input", cv.input, "Annotation XML, perception JSON or graph JSON")->required();
    convert->add_option("--to", cv.to, "json, xml, netlist or graphml")->required();
    convert->add_option("-o,--output", cv.output, "Output file (default: standard output)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        finish_common(common);
        if (extract->parsed())
            return run_extract(common, ex);
        if (binarize_cmd->parsed())
            return run_binarize(common, bin);
        if (evaluate->parsed())
            return run_evaluate(common, ev);
        return run_convert(common, cv);
    } catch (const std::exception& e) {
        std::cerr << "wiregraph: " << e.what() << "\n";
        return kExitUsage;
    }
}
