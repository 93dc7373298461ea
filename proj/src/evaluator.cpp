#include "wiregraph/evaluator.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <tuple>

#include "wiregraph/orientation.hpp"

namespace wiregraph {

std::string_view to_string(ApMode m)
{
    return m == ApMode::AllPoints ? "all-points" : "11-point";
}

std::optional<ApMode> parse_ap_mode(std::string_view s)
{
    if (s == "all-points")
        return ApMode::AllPoints;
    if (s == "11-point")
        return ApMode::ElevenPoint;
    return std::nullopt;
}

double average_precision(const std::vector<bool>& hits, int positives, ApMode mode)
{
    if (positives <= 0)
        return 0.0;
    std::vector<double> precision, recall;
    int tp = 0;
    for (std::size_t i = 0; i < hits.size(); ++i) {
        tp += hits[i];
        precision.push_back(double(tp) / double(i + 1));
        recall.push_back(double(tp) / positives);
    }
    if (mode == ApMode::ElevenPoint) {
        double sum = 0.0;
        for (int step = 0; step <= 10; ++step) {
            const double r = step / 10.0;
            double best = 0.0;
            for (std::size_t i = 0; i < recall.size(); ++i)
                if (recall[i] >= r - 1e-12)
                    best = std::max(best, precision[i]);
            sum += best;
        }
        return sum / 11.0;
    }
    for (std::size_t i = precision.size(); i-- > 1;)
        precision[i - 1] = std::max(precision[i - 1], precision[i]);
    double area = 0.0, prev = 0.0;
    for (std::size_t i = 0; i < recall.size(); ++i) {
        area += (recall[i] - prev) * precision[i];
        prev = recall[i];
    }
    return area;
}

DetectionAccumulator::DetectionAccumulator(double iou_threshold) : iou_threshold_(iou_threshold) {}

std::vector<std::pair<std::size_t, std::size_t>> DetectionAccumulator::add(std::span<const AnnotatedObject> pred,
                                                                           std::span<const AnnotatedObject> truth)
{
    std::vector<std::pair<std::size_t, std::size_t>> matches;
    std::map<std::string, std::vector<std::size_t>> truth_by_class, pred_by_class;
    for (std::size_t i = 0; i < truth.size(); ++i)
        truth_by_class[truth[i].cls.name].push_back(i);
    for (std::size_t i = 0; i < pred.size(); ++i)
        pred_by_class[pred[i].cls.name].push_back(i);
    for (const auto& [name, idx] : truth_by_class)
        classes_[name].positives += int(idx.size());

    for (auto& [name, idx] : pred_by_class) {
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            return pred[a].confidence.value_or(1.0) > pred[b].confidence.value_or(1.0);
        });
        const auto& candidates = truth_by_class[name];
        std::vector<bool> used(candidates.size(), false);
        ClassState& state = classes_[name];
        for (std::size_t p : idx) {
            int best = -1;
            double best_iou = iou_threshold_;
            for (std::size_t c = 0; c < candidates.size(); ++c) {
                if (used[c])
                    continue;
                const double v = iou(pred[p].bbox, truth[candidates[c]].bbox);
                if (v >= best_iou && (best < 0 || v > best_iou)) {
                    best = int(c);
                    best_iou = v;
                }
            }
            if (best >= 0) {
                used[std::size_t(best)] = true;
                matches.emplace_back(p, candidates[std::size_t(best)]);
            }
            state.scored.push_back({pred[p].confidence.value_or(1.0), next_order_++, best >= 0});
        }
    }
    std::sort(matches.begin(), matches.end());
    return matches;
}

void DetectionAccumulator::merge(const DetectionAccumulator& other)
{
    const std::size_t offset = next_order_;
    for (const auto& [name, state] : other.classes_) {
        auto& mine = classes_[name];
        mine.positives += state.positives;
        for (auto s : state.scored) {
            s.order += offset;
            mine.scored.push_back(s);
        }
    }
    next_order_ += other.next_order_;
}

DetectionMatchResult DetectionAccumulator::result(ApMode mode) const
{
    DetectionMatchResult out;
    double sum = 0.0;
    int counted = 0;
    bool any_prediction = false;
    for (const auto& [name, state] : classes_) {
        auto ranked = state.scored;
        std::sort(ranked.begin(), ranked.end(), [](const Scored& a, const Scored& b) {
            return std::tie(b.confidence, a.order) < std::tie(a.confidence, b.order);
        });
        std::vector<bool> hits;
        ClassDetection cd;
        for (const auto& s : ranked) {
            hits.push_back(s.hit);
            (s.hit ? cd.true_positives : cd.false_positives)++;
        }
        any_prediction = any_prediction || !ranked.empty();
        cd.false_negatives = state.positives - cd.true_positives;
        cd.average_precision = average_precision(hits, state.positives, mode);
        if (state.positives > 0) {
            sum += cd.average_precision;
            ++counted;
        }
        out.per_class[name] = cd;
    }
    if (counted > 0)
        out.map = sum / counted;
    else
        out.map = any_prediction ? 0.0 : 1.0;
    return out;
}

DetectionMatchResult match_detections(std::span<const AnnotatedObject> pred, std::span<const AnnotatedObject> truth,
                                      double iou_threshold, ApMode mode)
{
    DetectionAccumulator acc(iou_threshold);
    acc.add(pred, truth);
    return acc.result(mode);
}

double orientation_accuracy(std::span<const OrientationPair> pairs, const SymbolLibrary& lib, double threshold)
{
    if (!(threshold > 0))
        throw ContractError("orientation threshold must be positive");
    if (pairs.empty())
        throw UndefinedMetricError("orientation accuracy of an empty set is undefined");
    std::size_t good = 0;
    for (const auto& p : pairs)
        good += angular_error(p.predicted, p.truth, p.cls, lib) <= threshold + 1e-9;
    return double(good) / double(pairs.size());
}

std::u32string decode_utf8(std::string_view s)
{
    std::u32string out;
    std::size_t i = 0;
    while (i < s.size()) {
        const auto b0 = static_cast<unsigned char>(s[i]);
        int len = 0;
        char32_t cp = 0;
        if (b0 < 0x80) {
            len = 1;
            cp = b0;
        } else if ((b0 & 0xE0) == 0xC0) {
            len = 2;
            cp = b0 & 0x1F;
        } else if ((b0 & 0xF0) == 0xE0) {
            len = 3;
            cp = b0 & 0x0F;
        } else if ((b0 & 0xF8) == 0xF0) {
            len = 4;
            cp = b0 & 0x07;
        }
        bool ok = len > 0 && i + std::size_t(len) <= s.size();
        for (int k = 1; ok && k < len; ++k) {
            const auto b = static_cast<unsigned char>(s[i + std::size_t(k)]);
            ok = (b & 0xC0) == 0x80;
            cp = (cp << 6) | (b & 0x3F);
        }
        static constexpr char32_t kMin[] = {0, 0, 0x80, 0x800, 0x10000};
        if (ok && (cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)))
            ok = false;
        if (ok) {
            out.push_back(cp);
            i += std::size_t(len);
        } else {
            out.push_back(U'\uFFFD');
            ++i;
        }
    }
    return out;
}

std::string encode_utf8(std::u32string_view s)
{
    std::string out;
    for (char32_t c : s) {
        if (c < 0x80) {
            out += char(c);
        } else if (c < 0x800) {
            out += char(0xC0 | (c >> 6));
            out += char(0x80 | (c & 0x3F));
        } else if (c < 0x10000) {
            out += char(0xE0 | (c >> 12));
            out += char(0x80 | ((c >> 6) & 0x3F));
            out += char(0x80 | (c & 0x3F));
        } else {
            out += char(0xF0 | (c >> 18));
            out += char(0x80 | ((c >> 12) & 0x3F));
            out += char(0x80 | ((c >> 6) & 0x3F));
            out += char(0x80 | (c & 0x3F));
        }
    }
    return out;
}

std::size_t edit_distance(std::u32string_view a, std::u32string_view b)
{
    std::vector<std::size_t> row(b.size() + 1);
    std::iota(row.begin(), row.end(), std::size_t{0});
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t up = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
            diag = up;
        }
    }
    return row[b.size()];
}

double cer(std::string_view pred, std::string_view truth)
{
    const auto p = decode_utf8(pred);
    const auto t = decode_utf8(truth);
    return double(edit_distance(p, t)) / double(std::max<std::size_t>(1, t.size()));
}

std::vector<AnnotatedObject> filter_texts(std::span<const AnnotatedObject> objects, int max_length)
{
    if (max_length < 1)
        throw ContractError("maximum text length must be at least 1");
    std::vector<AnnotatedObject> out;
    for (const auto& o : objects)
        if (o.cls.category == Category::Text && o.text && decode_utf8(*o.text).size() <= std::size_t(max_length))
            out.push_back(o);
    return out;
}

Vocabulary::Vocabulary()
{
    for (char32_t c = 0x20; c < 0x7F; ++c)
        chars_.push_back(c);
    chars_.push_back(U'\u00B5');
    chars_.push_back(U'\u03A9');
}

Vocabulary::Vocabulary(std::u32string chars, std::size_t expected_size) : chars_(std::move(chars))
{
    std::u32string sorted = chars_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw ValidationError("vocabulary has duplicate characters", {});
    if (expected_size != 0 && expected_size != chars_.size())
        throw ValidationError("vocabulary has " + std::to_string(chars_.size()) + " characters, expected " +
                                  std::to_string(expected_size),
                              {});
}

bool Vocabulary::contains(char32_t c) const { return index_of(c) >= 0; }

int Vocabulary::index_of(char32_t c) const
{
    const auto pos = chars_.find(c);
    return pos == std::u32string::npos ? -1 : int(pos);
}

double pixel_accuracy(const BitMap& pred, const BitMap& truth)
{
    if (pred.width != truth.width || pred.height != truth.height)
        throw ContractError("segmentation maps differ in size: " + std::to_string(pred.width) + "x" +
                            std::to_string(pred.height) + " vs " + std::to_string(truth.width) + "x" +
                            std::to_string(truth.height));
    if (pred.pixels.empty())
        throw UndefinedMetricError("pixel accuracy of an empty map is undefined");
    std::size_t same = 0;
    for (std::size_t i = 0; i < pred.pixels.size(); ++i)
        same += (pred.pixels[i] != 0) == (truth.pixels[i] != 0);
    return double(same) / double(pred.pixels.size());
}

std::vector<std::pair<int, int>> match_nodes(const CircuitGraph& pred, const CircuitGraph& truth, double iou_threshold)
{
    struct Candidate {
        double iou;
        int pred;
        int truth;
    };
    std::vector<Candidate> candidates;
    for (const auto& p : pred.nodes)
        for (const auto& t : truth.nodes)
            if (p.cls == t.cls) {
                const double v = iou(p.bbox, t.bbox);
                if (v >= iou_threshold)
                    candidates.push_back({v, p.id, t.id});
            }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        return std::tie(b.iou, a.pred, a.truth) < std::tie(a.iou, b.pred, b.truth);
    });
    std::set<int> used_pred, used_truth;
    std::vector<std::pair<int, int>> out;
    for (const auto& c : candidates)
        if (!used_pred.count(c.pred) && !used_truth.count(c.truth)) {
            used_pred.insert(c.pred);
            used_truth.insert(c.truth);
            out.emplace_back(c.pred, c.truth);
        }
    std::sort(out.begin(), out.end());
    return out;
}

int count_correct_edges(const CircuitGraph& pred, const CircuitGraph& truth,
                        std::span<const std::pair<int, int>> node_matches)
{
    std::map<int, int> to_truth(node_matches.begin(), node_matches.end());
    std::map<std::pair<int, int>, int> available;
    for (const auto& e : truth.edges)
        ++available[std::minmax(e.ends[0].node, e.ends[1].node)];
    int correct = 0;
    for (const auto& e : pred.edges) {
        const auto a = to_truth.find(e.ends[0].node);
        const auto b = to_truth.find(e.ends[1].node);
        if (a == to_truth.end() || b == to_truth.end())
            continue;
        auto it = available.find(std::minmax(a->second, b->second));
        if (it != available.end() && it->second > 0) {
            --it->second;
            ++correct;
        }
    }
    return correct;
}

namespace {

double ratio(int num, std::size_t den) { return den == 0 ? 1.0 : double(num) / double(den); }

}  // namespace

GraphScore compare_graphs(const CircuitGraph& pred, const std::vector<Net>& pred_nets, const CircuitGraph& truth,
                          const std::vector<Net>& truth_nets, double iou_threshold)
{
    const auto matches = match_nodes(pred, truth, iou_threshold);
    GraphScore s;
    s.matched_nodes = int(matches.size());
    s.correct_edges = count_correct_edges(pred, truth, matches);
    s.node_precision = ratio(s.matched_nodes, pred.nodes.size());
    s.node_recall = ratio(s.matched_nodes, truth.nodes.size());
    s.edge_precision = ratio(s.correct_edges, pred.edges.size());
    s.edge_recall = ratio(s.correct_edges, truth.edges.size());
    s.net_delta = int(pred_nets.size()) - int(truth_nets.size());
    return s;
}

}  // namespace wiregraph
