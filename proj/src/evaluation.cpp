#include "wiregraph/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace wiregraph {

using nlohmann::json;

namespace {

struct Partial {
    DetectionAccumulator detection;
    std::vector<OrientationPair> orientation;
    std::vector<double> cers;
    std::optional<double> pixel_accuracy;
    std::optional<GraphTotals> graph;
    std::vector<ImageFailure> failures;
};

BitMap load_map(const std::filesystem::path& path, const PipelineConfig& config)
{
    return load_bitmap(read_file(path), config.map_threshold, config.map_polarity);
}

std::optional<ImageRecord> load_prediction(const std::filesystem::path& dir, const std::string& stem,
                                           const Taxonomy& taxonomy)
{
    const auto json_path = dir / (stem + ".json");
    if (std::filesystem::exists(json_path))
        return read_perception(read_text_file(json_path), taxonomy);
    const auto xml_path = dir / (stem + ".xml");
    if (std::filesystem::exists(xml_path)) {
        AnnotationOptions opts;
        opts.source_path = xml_path;
        return parse_annotation(read_text_file(xml_path), taxonomy, opts);
    }
    return std::nullopt;
}

Partial evaluate_image(const DatasetEntry& entry, const EvaluationRequest& request, const Taxonomy& taxonomy,
                       const SymbolLibrary& lib, const PipelineConfig& config)
{
    Partial out{DetectionAccumulator(config.iou_threshold), {}, {}, {}, {}, {}};
    const std::string name = entry.annotation.string();
    const std::string stem = entry.annotation.stem().string();

    AnnotationOptions opts;
    opts.source_path = entry.annotation;
    opts.drafter = entry.drafter;
    const ImageRecord truth = parse_annotation(read_text_file(entry.annotation), taxonomy, opts);

    ImageRecord pred = truth;
    std::optional<std::filesystem::path> pred_map_path;
    if (request.predictions) {
        if (auto p = load_prediction(*request.predictions, stem, taxonomy)) {
            pred = std::move(*p);
        } else {
            pred.objects.clear();
            out.failures.push_back({name, "no prediction file; scored as empty"});
        }
        const auto png = *request.predictions / (stem + ".png");
        if (std::filesystem::exists(png))
            pred_map_path = png;
    }

    const auto matches = out.detection.add(pred.objects, truth.objects);
    const auto texts = filter_texts(truth.objects, config.max_text_length);
    for (const auto& [pi, ti] : matches) {
        const auto& p = pred.objects[pi];
        const auto& t = truth.objects[ti];
        if (is_symbol_like(t.cls.category) && p.rotation && t.rotation && lib.find(t.cls.name))
            out.orientation.push_back({*p.rotation, *t.rotation, t.cls});
        if (t.cls.category == Category::Text &&
            std::any_of(texts.begin(), texts.end(), [&](const AnnotatedObject& o) { return o.id == t.id; }))
            out.cers.push_back(cer(p.text.value_or(""), *t.text));
    }

    if (!entry.segmap)
        return out;
    try {
        const BitMap truth_map = load_map(*entry.segmap, config);
        const BitMap pred_map = pred_map_path ? load_map(*pred_map_path, config) : truth_map;
        if (pred_map_path || !request.predictions)
            out.pixel_accuracy = pixel_accuracy(pred_map, truth_map);

        const auto t = run_pipeline(truth, truth_map, lib, config);
        const auto p = run_pipeline(pred, pred_map, lib, config);
        const auto node_matches = match_nodes(p.graph, t.graph, config.iou_threshold);
        GraphTotals g;
        g.images = 1;
        g.pred_nodes = p.graph.nodes.size();
        g.truth_nodes = t.graph.nodes.size();
        g.matched_nodes = node_matches.size();
        g.pred_edges = p.graph.edges.size();
        g.truth_edges = t.graph.edges.size();
        g.correct_edges = std::size_t(count_correct_edges(p.graph, t.graph, node_matches));
        g.net_delta = (long long)p.nets.size() - (long long)t.nets.size();
        g.abs_net_delta = std::llabs(g.net_delta);
        out.graph = g;
    } catch (const Error& e) {
        out.failures.push_back({name, std::string("segmentation/graph: ") + e.what()});
    }
    return out;
}

// Null when no graph was scored; 0/0 counts as perfect.
std::optional<double> graph_ratio(const GraphTotals& g, std::size_t num, std::size_t den)
{
    if (g.images == 0)
        return std::nullopt;
    return den == 0 ? 1.0 : double(num) / double(den);
}

json to_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string percent(const std::optional<double>& v)
{
    if (!v)
        return "n/a";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f%%", *v * 100.0);
    return buf;
}

}  // namespace

EvaluationReport evaluate_dataset(const EvaluationRequest& request, const Taxonomy& taxonomy,
                                  const SymbolLibrary& lib, const PipelineConfig& config)
{
    config.validate();
    const auto drafters = drafters_of(request.split_spec, request.split);
    const auto entries = scan_dataset(request.root, drafters);
    if (entries.empty())
        throw ContractError("split selects no annotated images under " + request.root.string());

    std::vector<std::optional<Partial>> partials(entries.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < entries.size(); i = next++) {
            try {
                partials[i] = evaluate_image(entries[i], request, taxonomy, lib, config);
            } catch (const Error& e) {
                Partial failed{DetectionAccumulator(config.iou_threshold), {}, {}, {}, {}, {}};
                failed.failures.push_back({entries[i].annotation.string(), e.what()});
                partials[i] = std::move(failed);
            }
        }
    };
    std::size_t workers = config.workers > 0 ? std::size_t(config.workers)
                                             : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, entries.size());
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w)
        pool.emplace_back(work);
    work();
    for (auto& t : pool)
        t.join();

    EvaluationReport r;
    r.split = [&] {
        switch (request.split) {
        case SplitName::Train: return "train";
        case SplitName::Validation: return "validation";
        case SplitName::Test: return "test";
        case SplitName::All: return "all";
        }
        return "all";
    }();
    r.drafters.assign(drafters.begin(), drafters.end());
    r.images = entries.size();
    r.ap_mode = config.ap_mode;
    r.iou_threshold = config.iou_threshold;
    r.orientation_threshold = config.orientation_threshold;
    r.max_text_length = config.max_text_length;

    DetectionAccumulator detection(config.iou_threshold);
    std::vector<OrientationPair> orientation;
    double cer_sum = 0.0, pixel_sum = 0.0;
    for (auto& p : partials) {
        detection.merge(p->detection);
        orientation.insert(orientation.end(), p->orientation.begin(), p->orientation.end());
        for (double c : p->cers)
            cer_sum += c;
        r.text_cer.count += p->cers.size();
        if (p->pixel_accuracy) {
            pixel_sum += *p->pixel_accuracy;
            ++r.segmentation.count;
        }
        if (p->graph) {
            auto& g = r.graph;
            g.images += p->graph->images;
            g.pred_nodes += p->graph->pred_nodes;
            g.truth_nodes += p->graph->truth_nodes;
            g.matched_nodes += p->graph->matched_nodes;
            g.pred_edges += p->graph->pred_edges;
            g.truth_edges += p->graph->truth_edges;
            g.correct_edges += p->graph->correct_edges;
            g.net_delta += p->graph->net_delta;
            g.abs_net_delta += p->graph->abs_net_delta;
        }
        r.failures.insert(r.failures.end(), p->failures.begin(), p->failures.end());
    }
    r.detection = detection.result(config.ap_mode);
    if (!orientation.empty()) {
        r.orientation.count = orientation.size();
        r.orientation.value = orientation_accuracy(orientation, lib, config.orientation_threshold);
    }
    if (r.text_cer.count > 0)
        r.text_cer.value = cer_sum / double(r.text_cer.count);
    if (r.segmentation.count > 0)
        r.segmentation.value = pixel_sum / double(r.segmentation.count);
    return r;
}

std::string report_json(const EvaluationReport& r)
{
    json classes = json::object();
    for (const auto& [name, c] : r.detection.per_class)
        classes[name] = {{"true_positives", c.true_positives},
                         {"false_positives", c.false_positives},
                         {"false_negatives", c.false_negatives},
                         {"average_precision", c.average_precision}};
    auto summary = [](const RatioSummary& s) { return s.count == 0 ? json(nullptr) : json(s.value); };
    const auto& g = r.graph;
    json failures = json::array();
    for (const auto& f : r.failures)
        failures.push_back({{"annotation", f.annotation}, {"message", f.message}});

    json root = {
        {"split", r.split},
        {"drafters", r.drafters},
        {"images", r.images},
        {"failures", std::move(failures)},
        {"detection",
         {{"iou_threshold", r.iou_threshold},
          {"ap_mode", std::string(to_string(r.ap_mode))},
          {"mean_average_precision", r.detection.map},
          {"classes", std::move(classes)}}},
        {"orientation",
         {{"threshold_degrees", r.orientation_threshold},
          {"pairs", r.orientation.count},
          {"accuracy", summary(r.orientation)}}},
        {"text",
         {{"max_length", r.max_text_length},
          {"pairs", r.text_cer.count},
          {"character_error_rate", summary(r.text_cer)}}},
        {"segmentation", {{"images", r.segmentation.count}, {"pixel_accuracy", summary(r.segmentation)}}},
        {"graph",
         {{"images", g.images},
          {"node_precision", to_json(graph_ratio(g, g.matched_nodes, g.pred_nodes))},
          {"node_recall", to_json(graph_ratio(g, g.matched_nodes, g.truth_nodes))},
          {"edge_precision", to_json(graph_ratio(g, g.correct_edges, g.pred_edges))},
          {"edge_recall", to_json(graph_ratio(g, g.correct_edges, g.truth_edges))},
          {"net_count_delta", g.net_delta},
          {"mean_abs_net_count_delta",
           g.images ? json(double(g.abs_net_delta) / double(g.images)) : json(nullptr)}}},
    };
    return root.dump(2) + "\n";
}

std::string report_table(const EvaluationReport& r)
{
    auto opt = [](const RatioSummary& s) { return s.count ? std::optional<double>(s.value) : std::nullopt; };
    const auto& g = r.graph;
    std::ostringstream out;
    out << "split " << r.split << " (drafters";
    for (int d : r.drafters)
        out << ' ' << d;
    out << "), " << r.images << " image(s), " << r.failures.size() << " failure(s)\n";
    char line[160];
    auto row = [&](const char* metric, const std::string& value, const std::string& over) {
        std::snprintf(line, sizeof line, "  %-34s %10s   %s\n", metric, value.c_str(), over.c_str());
        out << line;
    };
    row("detection mAP", percent(r.detection.map),
        std::string(to_string(r.ap_mode)) + ", IoU >= " + std::to_string(r.iou_threshold).substr(0, 4));
    row("orientation accuracy", percent(opt(r.orientation)), std::to_string(r.orientation.count) + " symbols");
    row("text character error rate", percent(opt(r.text_cer)), std::to_string(r.text_cer.count) + " texts");
    row("segmentation pixel accuracy", percent(opt(r.segmentation)), std::to_string(r.segmentation.count) + " maps");
    row("graph node precision", percent(graph_ratio(g, g.matched_nodes, g.pred_nodes)),
        std::to_string(g.images) + " graphs");
    row("graph node recall", percent(graph_ratio(g, g.matched_nodes, g.truth_nodes)), "");
    row("graph edge precision", percent(graph_ratio(g, g.correct_edges, g.pred_edges)), "");
    row("graph edge recall", percent(graph_ratio(g, g.correct_edges, g.truth_edges)), "");
    row("net count delta", g.images ? std::to_string(g.net_delta) : "n/a", "");
    return out.str();
}

}  // namespace wiregraph
