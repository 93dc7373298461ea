#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wiregraph/error.hpp"
#include "wiregraph/graph.hpp"
#include "wiregraph/objects.hpp"
#include "wiregraph/raster.hpp"
#include "wiregraph/symbol_library.hpp"

namespace wiregraph {

/// A metric was asked for over an empty population.
class UndefinedMetricError : public Error {
public:
    using Error::Error;
};

enum class ApMode { AllPoints, ElevenPoint };

std::string_view to_string(ApMode m);
std::optional<ApMode> parse_ap_mode(std::string_view s);

struct ClassDetection {
    int true_positives = 0;
    int false_positives = 0;
    int false_negatives = 0;
    double average_precision = 0.0;

    friend bool operator==(const ClassDetection&, const ClassDetection&) = default;
};

struct DetectionMatchResult {
    std::map<std::string, ClassDetection> per_class;
    /// Mean AP over the classes present in the ground truth.
    double map = 0.0;
};

/// Area under the precision envelope. `hits` are the ranked predictions
/// (true = matched); `positives` is the ground-truth count.
double average_precision(const std::vector<bool>& hits, int positives, ApMode mode = ApMode::AllPoints);

/// Collects ranked hits per class over many images so AP is computed over the
/// whole set rather than averaged per image.
class DetectionAccumulator {
public:
    explicit DetectionAccumulator(double iou_threshold = 0.5);

    /// Matches one image. Predictions without a confidence count as 1.0.
    /// Returns (prediction index, truth index) for every true positive.
    std::vector<std::pair<std::size_t, std::size_t>> add(std::span<const AnnotatedObject> pred,
                                                         std::span<const AnnotatedObject> truth);

    /// Appends another accumulator's images after this one's.
    void merge(const DetectionAccumulator& other);

    DetectionMatchResult result(ApMode mode = ApMode::AllPoints) const;

    double iou_threshold() const { return iou_threshold_; }

private:
    struct Scored {
        double confidence;
        std::size_t order;
        bool hit;
    };
    struct ClassState {
        std::vector<Scored> scored;
        int positives = 0;
    };
    double iou_threshold_;
    std::size_t next_order_ = 0;
    std::map<std::string, ClassState> classes_;
};

DetectionMatchResult match_detections(std::span<const AnnotatedObject> pred, std::span<const AnnotatedObject> truth,
                                      double iou_threshold = 0.5, ApMode mode = ApMode::AllPoints);

struct OrientationPair {
    double predicted = 0.0;
    double truth = 0.0;
    ObjectClass cls;
};

/// Share of pairs whose symmetry-aware angular error is at most `threshold`
/// degrees. Throws UndefinedMetricError on empty input.
double orientation_accuracy(std::span<const OrientationPair> pairs, const SymbolLibrary& lib,
                            double threshold = 5.0);

/// UTF-8 to code points. Malformed bytes decode to U+FFFD one at a time.
std::u32string decode_utf8(std::string_view s);
std::string encode_utf8(std::u32string_view s);

std::size_t edit_distance(std::u32string_view a, std::u32string_view b);

/// Character error rate: code-point edit distance / max(1, |truth|).
double cer(std::string_view pred, std::string_view truth);

/// Text objects whose transcription is present and at most `max_length`
/// code points long. Other objects are dropped.
std::vector<AnnotatedObject> filter_texts(std::span<const AnnotatedObject> objects, int max_length = 6);

/// Ordered character classes of the text recogniser.
class Vocabulary {
public:
    /// Printable ASCII, then µ and Ω: 97 classes.
    Vocabulary();
    /// Throws ValidationError on duplicates, or when `expected_size` is
    /// non-zero and differs from the character count.
    explicit Vocabulary(std::u32string chars, std::size_t expected_size = 0);

    std::size_t size() const { return chars_.size(); }
    bool contains(char32_t c) const;
    /// -1 when absent.
    int index_of(char32_t c) const;
    char32_t at(std::size_t i) const { return chars_.at(i); }
    const std::u32string& chars() const { return chars_; }

private:
    std::u32string chars_;
};

/// Share of equal pixels. Throws ContractError when the sizes differ and
/// UndefinedMetricError for empty maps.
double pixel_accuracy(const BitMap& pred, const BitMap& truth);

struct GraphScore {
    int matched_nodes = 0;
    int correct_edges = 0;
    double node_precision = 1.0;
    double node_recall = 1.0;
    double edge_precision = 1.0;
    double edge_recall = 1.0;
    /// |nets(pred)| - |nets(truth)|
    int net_delta = 0;
};

/// Greedy one-to-one node matching: same class, IoU >= threshold, highest
/// IoU first. Returns (pred node id, truth node id) pairs.
std::vector<std::pair<int, int>> match_nodes(const CircuitGraph& pred, const CircuitGraph& truth,
                                             double iou_threshold = 0.5);

/// Wires of `pred` whose end nodes map onto the ends of a distinct truth wire.
int count_correct_edges(const CircuitGraph& pred, const CircuitGraph& truth,
                        std::span<const std::pair<int, int>> node_matches);

/// Scores over an empty population are 1.
GraphScore compare_graphs(const CircuitGraph& pred, const std::vector<Net>& pred_nets, const CircuitGraph& truth,
                          const std::vector<Net>& truth_nets, double iou_threshold = 0.5);

}  // namespace wiregraph
