#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "wiregraph/dataset.hpp"
#include "wiregraph/evaluator.hpp"
#include "wiregraph/pipeline.hpp"
#include "wiregraph/taxonomy.hpp"

namespace wiregraph {

struct EvaluationRequest {
    std::filesystem::path root;
    SplitName split = SplitName::Test;
    SplitSpec split_spec = default_split();
    /// Per-image predictions named after the annotation stem: <stem>.json
    /// (perception JSON) or <stem>.xml, plus an optional <stem>.png stroke
    /// map. Unset: the ground truth is scored against itself.
    std::optional<std::filesystem::path> predictions;
};

struct RatioSummary {
    /// Items the figure was computed over; 0 means not computed.
    std::size_t count = 0;
    double value = 0.0;
};

struct GraphTotals {
    std::size_t images = 0;
    std::size_t pred_nodes = 0, truth_nodes = 0, matched_nodes = 0;
    std::size_t pred_edges = 0, truth_edges = 0, correct_edges = 0;
    long long net_delta = 0;
    long long abs_net_delta = 0;
};

struct ImageFailure {
    std::string annotation;
    std::string message;
};

struct EvaluationReport {
    std::string split;
    std::vector<int> drafters;
    std::size_t images = 0;
    ApMode ap_mode = ApMode::AllPoints;
    double iou_threshold = 0.5;
    DetectionMatchResult detection;
    /// Symmetry-aware accuracy over matched symbols carrying rotations.
    RatioSummary orientation;
    double orientation_threshold = 5.0;
    /// Mean character error rate over matched texts (error rate, lower is better).
    RatioSummary text_cer;
    int max_text_length = 6;
    /// Mean per-image pixel accuracy.
    RatioSummary segmentation;
    GraphTotals graph;
    std::vector<ImageFailure> failures;
};

/// Scores one split of a CGHD-layout dataset with a bounded worker pool.
/// Throws ContractError when the split selects no images.
EvaluationReport evaluate_dataset(const EvaluationRequest& request, const Taxonomy& taxonomy,
                                  const SymbolLibrary& lib, const PipelineConfig& config);

std::string report_json(const EvaluationReport& report);
std::string report_table(const EvaluationReport& report);

}  // namespace wiregraph
