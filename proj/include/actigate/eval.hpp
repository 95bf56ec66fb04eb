#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "actigate/detect.hpp"
#include "actigate/recorder.hpp"

namespace actigate {

enum class Interpolation {
    AllPoint, // exact area under the monotone precision envelope
    Grid101,  // envelope sampled at recall 0.00, 0.01, ..., 1.00
};

struct EvalConfig {
    double confidence_threshold = 0.001;
    double iou_threshold = 0.5;
    std::vector<double> iou_range = {0.50, 0.55, 0.60, 0.65, 0.70,
                                     0.75, 0.80, 0.85, 0.90, 0.95};
    int max_detections = 300;
    Interpolation interpolation = Interpolation::Grid101;
};

// Per-prediction TP/FP labels in descending-confidence order, plus the
// count of ground-truth boxes left unmatched (FN).
struct MatchLabel {
    std::size_t pred_index = 0; // index into the caller's prediction list
    double confidence = 0.0;
    bool is_tp = false;
};

struct MatchResult {
    std::vector<MatchLabel> labels;
    std::int64_t unmatched_gt = 0;
};

// Greedy same-class matching: predictions are visited by descending
// confidence (ties: input order); each takes the unmatched ground-truth box
// of its class with the highest IoU >= threshold (ties: first in GT order).
MatchResult match_detections(const std::vector<Detection>& preds,
                             const std::vector<Detection>& gts, double iou_threshold);

struct PrecisionRecall {
    double precision = 0.0;
    double recall = 0.0;
};

// Counts only predictions at or above the confidence threshold. Degenerate
// cases: no predictions and no GT -> P = 1; no predictions but GT -> P = 0;
// no GT -> R = 1.
PrecisionRecall precision_recall(const MatchResult& matches, double confidence_threshold);

double average_precision(const std::vector<Detection>& preds, const std::vector<Detection>& gts,
                         double iou_threshold, Interpolation interpolation);

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double map50 = 0.0;
    double map50_95 = 0.0;
};

struct MetricsReport {
    std::vector<std::pair<ObjectClass, ClassMetrics>> per_class;
    ClassMetrics overall; // unweighted mean over classes with ground truth
};

using DetectionsByImage = std::map<std::int64_t, std::vector<Detection>>;

// Per-class precision/recall/AP50/AP50-95 across an image-keyed dataset.
// Predictions are truncated to max_detections per image by confidence and
// filtered by confidence_threshold before matching. Classes that never
// appear in the ground truth are excluded from the overall mean.
MetricsReport map_report(const DetectionsByImage& preds_by_image,
                         const DetectionsByImage& gts_by_image, const EvalConfig& config);

// Detection-level confusion counts over classes plus a synthetic background
// class: matched pairs land on [gt][pred] (cross-class matches allowed),
// unmatched ground truth on [gt][background], unmatched predictions on
// [background][pred].
struct ConfusionMatrix {
    std::vector<std::string> labels; // class names + "background" last
    std::vector<std::vector<std::int64_t>> counts; // counts[true][predicted]

    std::int64_t total() const;
    std::vector<std::vector<double>> row_normalized() const;
    std::vector<std::vector<double>> column_normalized() const;
};

// display_confidence keeps the matrix readable; the PR sweep threshold
// (0.001) would flood the background row.
ConfusionMatrix confusion_matrix(const DetectionsByImage& preds_by_image,
                                 const DetectionsByImage& gts_by_image, const EvalConfig& config,
                                 double display_confidence = 0.25);

struct TimingStat {
    std::size_t count = 0;
    std::optional<double> mean_ms; // absent when no samples
};

// Mirrors the three-stage speed table: pre-processing, inference, NMS.
struct TimingReport {
    TimingStat preprocessing;
    TimingStat inference;
    TimingStat nms;
};

TimingReport timing_report(const StageSamples& samples);

} // namespace actigate
