#include "actigate/eval.hpp"

#include <algorithm>
#include <numeric>

namespace actigate {

namespace {

std::vector<std::size_t> confidence_order(const std::vector<Detection>& dets) {
    std::vector<std::size_t> order(dets.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&dets](std::size_t a, std::size_t b) {
        return dets[a].confidence > dets[b].confidence;
    });
    return order;
}

} // namespace

MatchResult match_detections(const std::vector<Detection>& preds,
                             const std::vector<Detection>& gts, double iou_threshold) {
    MatchResult result;
    std::vector<bool> gt_used(gts.size(), false);

    for (const std::size_t pi : confidence_order(preds)) {
        const Detection& pred = preds[pi];
        double best_iou = 0.0;
        std::size_t best_gt = gts.size();
        for (std::size_t gi = 0; gi < gts.size(); ++gi) {
            if (gt_used[gi] || gts[gi].class_id != pred.class_id)
                continue;
            const double v = iou(pred.bbox, gts[gi].bbox);
            if (v >= iou_threshold && v > best_iou) {
                best_iou = v;
                best_gt = gi;
            }
        }
        const bool is_tp = best_gt < gts.size();
        if (is_tp)
            gt_used[best_gt] = true;
        result.labels.push_back({pi, pred.confidence, is_tp});
    }
    result.unmatched_gt =
        static_cast<std::int64_t>(std::count(gt_used.begin(), gt_used.end(), false));
    return result;
}

PrecisionRecall precision_recall(const MatchResult& matches, double confidence_threshold) {
    std::int64_t tp = 0, fp = 0, tp_all = 0;
    for (const MatchLabel& label : matches.labels) {
        tp_all += label.is_tp ? 1 : 0;
        if (label.confidence < confidence_threshold)
            continue;
        (label.is_tp ? tp : fp) += 1;
    }
    const std::int64_t total_gt = tp_all + matches.unmatched_gt;

    PrecisionRecall pr;
    if (tp + fp == 0)
        pr.precision = total_gt == 0 ? 1.0 : 0.0;
    else
        pr.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    pr.recall = total_gt == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(total_gt);
    return pr;
}

namespace {

struct PrCurve {
    std::vector<double> recall;    // per rank, nondecreasing
    std::vector<double> envelope;  // monotone (nonincreasing) precision
};

PrCurve pr_curve(const MatchResult& matches, std::int64_t total_gt) {
    PrCurve curve;
    std::int64_t tp = 0, fp = 0;
    for (const MatchLabel& label : matches.labels) {
        (label.is_tp ? tp : fp) += 1;
        curve.recall.push_back(static_cast<double>(tp) / static_cast<double>(total_gt));
        curve.envelope.push_back(static_cast<double>(tp) / static_cast<double>(tp + fp));
    }
    for (std::size_t i = curve.envelope.size(); i-- > 1;)
        curve.envelope[i - 1] = std::max(curve.envelope[i - 1], curve.envelope[i]);
    return curve;
}

double ap_from_matches(const MatchResult& matches, std::int64_t total_gt,
                       Interpolation interpolation) {
    if (total_gt == 0)
        return matches.labels.empty() ? 1.0 : 0.0;
    if (matches.labels.empty())
        return 0.0;
    const PrCurve curve = pr_curve(matches, total_gt);

    if (interpolation == Interpolation::AllPoint) {
        double ap = 0.0;
        double prev_recall = 0.0;
        for (std::size_t i = 0; i < curve.recall.size(); ++i) {
            ap += (curve.recall[i] - prev_recall) * curve.envelope[i];
            prev_recall = curve.recall[i];
        }
        return ap;
    }

    // Grid101: mean envelope precision at recall 0.00..1.00; the envelope at
    // recall r is the precision of the first rank reaching recall >= r.
    double sum = 0.0;
    std::size_t rank = 0;
    for (int g = 0; g <= 100; ++g) {
        const double r = static_cast<double>(g) / 100.0;
        while (rank < curve.recall.size() && curve.recall[rank] < r)
            ++rank;
        if (rank < curve.recall.size())
            sum += curve.envelope[rank];
    }
    return sum / 101.0;
}

} // namespace

double average_precision(const std::vector<Detection>& preds, const std::vector<Detection>& gts,
                         double iou_threshold, Interpolation interpolation) {
    const MatchResult matches = match_detections(preds, gts, iou_threshold);
    return ap_from_matches(matches, static_cast<std::int64_t>(gts.size()), interpolation);
}

namespace {

std::vector<Detection> dataset_slice(const DetectionsByImage& by_image, std::int64_t image,
                                     ObjectClass cls) {
    std::vector<Detection> out;
    const auto it = by_image.find(image);
    if (it == by_image.end())
        return out;
    for (const Detection& d : it->second)
        if (d.class_id == cls)
            out.push_back(d);
    return out;
}

std::vector<Detection> prepare_predictions(const std::vector<Detection>& preds,
                                           const EvalConfig& config) {
    std::vector<Detection> kept;
    for (const Detection& d : preds)
        if (d.confidence >= config.confidence_threshold)
            kept.push_back(d);
    if (static_cast<int>(kept.size()) > config.max_detections) {
        std::stable_sort(kept.begin(), kept.end(), [](const Detection& a, const Detection& b) {
            return a.confidence > b.confidence;
        });
        kept.resize(static_cast<std::size_t>(config.max_detections));
    }
    return kept;
}

// Matching must stay per-image: a prediction can only claim ground truth
// from its own frame. Labels are merged across images, then re-sorted.
MatchResult match_dataset(const DetectionsByImage& preds_by_image,
                          const DetectionsByImage& gts_by_image, ObjectClass cls,
                          double iou_threshold, const EvalConfig& config) {
    std::vector<std::int64_t> images;
    for (const auto& [image, _] : preds_by_image)
        images.push_back(image);
    for (const auto& [image, _] : gts_by_image)
        if (preds_by_image.find(image) == preds_by_image.end())
            images.push_back(image);

    MatchResult merged;
    for (const std::int64_t image : images) {
        const auto it = preds_by_image.find(image);
        std::vector<Detection> preds;
        if (it != preds_by_image.end()) {
            for (const Detection& d : prepare_predictions(it->second, config))
                if (d.class_id == cls)
                    preds.push_back(d);
        }
        const std::vector<Detection> gts = dataset_slice(gts_by_image, image, cls);
        MatchResult local = match_detections(preds, gts, iou_threshold);
        merged.unmatched_gt += local.unmatched_gt;
        for (const MatchLabel& label : local.labels)
            merged.labels.push_back(label);
    }
    std::stable_sort(merged.labels.begin(), merged.labels.end(),
                     [](const MatchLabel& a, const MatchLabel& b) {
                         return a.confidence > b.confidence;
                     });
    return merged;
}

} // namespace

MetricsReport map_report(const DetectionsByImage& preds_by_image,
                         const DetectionsByImage& gts_by_image, const EvalConfig& config) {
    MetricsReport report;
    int classes_with_gt = 0;

    for (const ObjectClass cls : kAllClasses) {
        std::int64_t gt_count = 0;
        for (const auto& [image, gts] : gts_by_image)
            for (const Detection& d : gts)
                gt_count += d.class_id == cls ? 1 : 0;
        std::int64_t pred_count = 0;
        for (const auto& [image, preds] : preds_by_image)
            for (const Detection& d : preds)
                pred_count += d.class_id == cls ? 1 : 0;
        if (gt_count == 0 && pred_count == 0)
            continue;

        ClassMetrics metrics;
        const MatchResult at_half =
            match_dataset(preds_by_image, gts_by_image, cls, config.iou_threshold, config);
        const PrecisionRecall pr = precision_recall(at_half, config.confidence_threshold);
        metrics.precision = pr.precision;
        metrics.recall = pr.recall;
        metrics.map50 = ap_from_matches(at_half, gt_count, config.interpolation);

        double ap_sum = 0.0;
        for (const double thr : config.iou_range) {
            const MatchResult m =
                match_dataset(preds_by_image, gts_by_image, cls, thr, config);
            ap_sum += ap_from_matches(m, gt_count, config.interpolation);
        }
        metrics.map50_95 =
            config.iou_range.empty() ? metrics.map50 : ap_sum / static_cast<double>(config.iou_range.size());

        report.per_class.emplace_back(cls, metrics);
        if (gt_count > 0) {
            ++classes_with_gt;
            report.overall.precision += metrics.precision;
            report.overall.recall += metrics.recall;
            report.overall.map50 += metrics.map50;
            report.overall.map50_95 += metrics.map50_95;
        }
    }

    if (classes_with_gt > 0) {
        report.overall.precision /= classes_with_gt;
        report.overall.recall /= classes_with_gt;
        report.overall.map50 /= classes_with_gt;
        report.overall.map50_95 /= classes_with_gt;
    }
    return report;
}

std::int64_t ConfusionMatrix::total() const {
    std::int64_t sum = 0;
    for (const auto& row : counts)
        for (const std::int64_t v : row)
            sum += v;
    return sum;
}

std::vector<std::vector<double>> ConfusionMatrix::row_normalized() const {
    std::vector<std::vector<double>> out(counts.size());
    for (std::size_t r = 0; r < counts.size(); ++r) {
        const double sum = static_cast<double>(
            std::accumulate(counts[r].begin(), counts[r].end(), std::int64_t{0}));
        out[r].resize(counts[r].size(), 0.0);
        if (sum > 0)
            for (std::size_t c = 0; c < counts[r].size(); ++c)
                out[r][c] = static_cast<double>(counts[r][c]) / sum;
    }
    return out;
}

std::vector<std::vector<double>> ConfusionMatrix::column_normalized() const {
    std::vector<std::vector<double>> out(counts.size(),
                                         std::vector<double>(counts.empty() ? 0 : counts[0].size(), 0.0));
    for (std::size_t c = 0; c < counts[0].size(); ++c) {
        std::int64_t sum = 0;
        for (std::size_t r = 0; r < counts.size(); ++r)
            sum += counts[r][c];
        if (sum > 0)
            for (std::size_t r = 0; r < counts.size(); ++r)
                out[r][c] = static_cast<double>(counts[r][c]) / static_cast<double>(sum);
    }
    return out;
}

ConfusionMatrix confusion_matrix(const DetectionsByImage& preds_by_image,
                                 const DetectionsByImage& gts_by_image, const EvalConfig& config,
                                 double display_confidence) {
    constexpr std::size_t kClassCount = std::size(kAllClasses);
    const std::size_t background = kClassCount;

    ConfusionMatrix matrix;
    for (const ObjectClass cls : kAllClasses)
        matrix.labels.emplace_back(to_string(cls));
    matrix.labels.emplace_back("background");
    matrix.counts.assign(kClassCount + 1, std::vector<std::int64_t>(kClassCount + 1, 0));

    std::vector<std::int64_t> images;
    for (const auto& [image, _] : preds_by_image)
        images.push_back(image);
    for (const auto& [image, _] : gts_by_image)
        if (preds_by_image.find(image) == preds_by_image.end())
            images.push_back(image);
    std::sort(images.begin(), images.end());

    for (const std::int64_t image : images) {
        std::vector<Detection> preds;
        if (const auto it = preds_by_image.find(image); it != preds_by_image.end())
            for (const Detection& d : it->second)
                if (d.confidence >= display_confidence)
                    preds.push_back(d);
        std::vector<Detection> gts;
        if (const auto it = gts_by_image.find(image); it != gts_by_image.end())
            gts = it->second;

        // Class-agnostic greedy matching; the class pair indexes the cell.
        std::vector<bool> gt_used(gts.size(), false);
        std::vector<bool> pred_matched(preds.size(), false);
        for (const std::size_t pi : confidence_order(preds)) {
            double best_iou = 0.0;
            std::size_t best_gt = gts.size();
            for (std::size_t gi = 0; gi < gts.size(); ++gi) {
                if (gt_used[gi])
                    continue;
                const double v = iou(preds[pi].bbox, gts[gi].bbox);
                if (v >= config.iou_threshold && v > best_iou) {
                    best_iou = v;
                    best_gt = gi;
                }
            }
            if (best_gt < gts.size()) {
                gt_used[best_gt] = true;
                pred_matched[pi] = true;
                matrix.counts[static_cast<std::size_t>(gts[best_gt].class_id)]
                             [static_cast<std::size_t>(preds[pi].class_id)] += 1;
            }
        }
        for (std::size_t gi = 0; gi < gts.size(); ++gi)
            if (!gt_used[gi])
                matrix.counts[static_cast<std::size_t>(gts[gi].class_id)][background] += 1;
        for (std::size_t pi = 0; pi < preds.size(); ++pi)
            if (!pred_matched[pi])
                matrix.counts[background][static_cast<std::size_t>(preds[pi].class_id)] += 1;
    }
    return matrix;
}

TimingReport timing_report(const StageSamples& samples) {
    const auto stat = [](const std::vector<double>& xs) {
        TimingStat s;
        s.count = xs.size();
        if (!xs.empty()) {
            for (const double x : xs)
                if (x < 0.0)
                    throw InvariantError("timing sample must be nonnegative");
            s.mean_ms = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
        }
        return s;
    };
    TimingReport report;
    report.preprocessing = stat(samples.preprocessing_ms);
    report.inference = stat(samples.inference_ms);
    report.nms = stat(samples.nms_ms);
    return report;
}

} // namespace actigate
