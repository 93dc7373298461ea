#include "wiregraph/pipeline.hpp"

#include <cstdlib>

#ifndef WIREGRAPH_DATA_DIR
#define WIREGRAPH_DATA_DIR "data"
#endif

namespace wiregraph {

std::filesystem::path default_data_dir()
{
    if (const char* env = std::getenv("WIREGRAPH_DATA_DIR"); env && *env)
        return env;
    return WIREGRAPH_DATA_DIR;
}

void PipelineConfig::validate() const
{
    auto require = [](bool ok, const std::string& what) {
        if (!ok)
            throw ContractError("config: " + what);
    };
    require(patch >= 1, "patch must be positive");
    require(probability_cutoff >= 0.0 && probability_cutoff <= 1.0, "probability cutoff must lie in [0,1]");
    require(sauvola.window >= 3 && sauvola.window % 2 == 1, "Sauvola window must be odd and at least 3");
    require(sauvola.dynamic_range > 0, "Sauvola dynamic range must be positive");
    require(map_threshold >= 0 && map_threshold <= 255, "map threshold must lie in [0,255]");
    require(edges.mask_margin >= 0, "mask margin must be non-negative");
    require(edges.contact_margin >= 0, "contact margin must be non-negative");
    require(edges.min_blob_size >= 1, "minimum blob size must be positive");
    require(hops.direction_radius > 0, "hop direction radius must be positive");
    require(hops.ambiguity_degrees >= 0, "hop ambiguity must be non-negative");
    require(rectify_epsilon > 0, "rectification epsilon must be positive");
    require(snap_degrees >= 0 && snap_degrees < 45, "snap angle must lie in [0,45)");
    require(!text_distance || *text_distance >= 0, "text distance must be non-negative");
    require(iou_threshold > 0 && iou_threshold <= 1, "IoU threshold must lie in (0,1]");
    require(orientation_threshold > 0, "orientation threshold must be positive");
    require(max_text_length >= 1, "maximum text length must be at least 1");
    require(workers >= 0, "worker count must be non-negative");
}

BitMap binarize(const GrayImage& image, const PipelineConfig& config)
{
    const auto prob = segment_tiled(image, classical_classifier(config.sauvola), config.patch);
    return threshold_map(prob, config.probability_cutoff);
}

PipelineResult run_pipeline(const ImageRecord& record, const BitMap& strokes, const SymbolLibrary& lib,
                            const PipelineConfig& config, bool keep_stages)
{
    config.validate();
    if (strokes.width != record.width || strokes.height != record.height)
        throw ValidationError("stroke map is " + std::to_string(strokes.width) + "x" +
                              std::to_string(strokes.height) + " but the annotation says " +
                              std::to_string(record.width) + "x" + std::to_string(record.height));
    validate(record);

    PipelineResult out;
    auto snapshot = [&](Stage s, const CircuitGraph& g, std::vector<Net> nets = {}) {
        if (keep_stages)
            out.stages.push_back({s, g, std::move(nets)});
    };

    if (keep_stages) {
        CircuitGraph raw;
        raw.image = record.image_path;
        raw.size = record.size();
        snapshot(Stage::Raw, raw);
        const CircuitGraph detected = assemble(record.objects, {}, record.size(), record.image_path);
        snapshot(Stage::Detection, detected);
        snapshot(Stage::OrientationText, detected);
    }

    const auto extraction = extract_edges(strokes, record.objects, config.edges);
    CircuitGraph g = assemble(record.objects, extraction, record.size(), record.image_path);
    snapshot(Stage::Edges, g);

    g = resolve_hops(std::move(g), config.hops);
    g = collapse_corners(std::move(g));
    g = assign_all_ports(std::move(g), lib);
    snapshot(Stage::Segments, g);

    g = rectify_edges(std::move(g), config.rectify_epsilon, config.snap_degrees);
    out.nets = derive_nets(g);
    g = associate_texts(std::move(g), config.text_distance);
    g.check_integrity();
    snapshot(Stage::Rectified, g, out.nets);
    out.graph = std::move(g);
    return out;
}

ExportBundle export_bundle(const PipelineResult& result, const SymbolLibrary& lib, const PipelineConfig& config,
                           std::string_view image_href)
{
    ExportBundle b;
    b.graph_json = to_graph_json(result.graph, result.nets);
    b.netlist = to_netlist(result.graph, result.nets, lib, config.netlist);
    b.graphml = to_graphml(result.graph, result.nets);
    b.overlay = render_overlay(result.graph.size, result.graph, Stage::Rectified, result.nets, image_href);
    for (const auto& s : result.stages)
        b.stage_overlays.emplace_back(s.stage, render_overlay(s.graph.size, s.graph, s.stage, s.nets, image_href));
    return b;
}

}  // namespace wiregraph
