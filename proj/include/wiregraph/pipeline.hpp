#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wiregraph/annotation_io.hpp"
#include "wiregraph/binarizer.hpp"
#include "wiregraph/edge_extractor.hpp"
#include "wiregraph/evaluator.hpp"
#include "wiregraph/exporter.hpp"
#include "wiregraph/graph_builder.hpp"
#include "wiregraph/image_io.hpp"
#include "wiregraph/symbol_library.hpp"

namespace wiregraph {

/// Directory holding the bundled taxonomy.json and symbol_library.json.
std::filesystem::path default_data_dir();

/// Every tunable of the extraction and evaluation pipeline.
struct PipelineConfig {
    int patch = 256;
    double probability_cutoff = 0.5;
    SauvolaParams sauvola;
    /// Reading a supplied stroke map.
    int map_threshold = 128;
    Polarity map_polarity = Polarity::BrightIsStroke;

    EdgeParams edges;
    HopParams hops;
    double rectify_epsilon = 3.0;
    double snap_degrees = 10.0;
    /// Unset: 1.5x the symbol diagonal.
    std::optional<double> text_distance;

    double iou_threshold = 0.5;
    double orientation_threshold = 5.0;
    int max_text_length = 6;
    ApMode ap_mode = ApMode::AllPoints;
    /// 0 = hardware concurrency.
    int workers = 0;

    std::filesystem::path library = default_data_dir() / "symbol_library.json";
    std::filesystem::path taxonomy = default_data_dir() / "taxonomy.json";
    NetlistOptions netlist;

    /// Throws ContractError naming the first out-of-range value.
    void validate() const;
};

/// Classical stroke map: tiled Sauvola, thresholded.
BitMap binarize(const GrayImage& image, const PipelineConfig& config);

struct StageSnapshot {
    Stage stage = Stage::Raw;
    CircuitGraph graph;
    std::vector<Net> nets;
};

struct PipelineResult {
    CircuitGraph graph;
    std::vector<Net> nets;
    /// One per Stage, in order, when requested.
    std::vector<StageSnapshot> stages;
};

/// Perception record + stroke map -> post-processed graph and nets.
/// Throws ValidationError when the map and record sizes differ.
PipelineResult run_pipeline(const ImageRecord& record, const BitMap& strokes, const SymbolLibrary& lib,
                            const PipelineConfig& config, bool keep_stages = false);

struct ExportBundle {
    std::string graph_json;
    std::string netlist;
    std::string graphml;
    /// Final overlay (the Rectified stage).
    std::string overlay;
    std::vector<std::pair<Stage, std::string>> stage_overlays;
};

ExportBundle export_bundle(const PipelineResult& result, const SymbolLibrary& lib, const PipelineConfig& config,
                           std::string_view image_href = {});

}  // namespace wiregraph
