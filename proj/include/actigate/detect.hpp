#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "actigate/bbox.hpp"
#include "actigate/frame.hpp"

namespace actigate {

enum class ObjectClass : int {
    Car = 0,
    Person = 1,
};

inline constexpr ObjectClass kAllClasses[] = {ObjectClass::Car, ObjectClass::Person};

const char* to_string(ObjectClass c);
std::optional<ObjectClass> class_from_string(std::string_view name);

// One classified, scored box — the output unit of any detector.
struct Detection {
    ObjectClass class_id = ObjectClass::Car;
    double confidence = 0.0;
    BBox bbox;
};

struct DetectorConfig {
    // Gating threshold; evaluation runs use a much lower sweep threshold.
    double confidence_threshold = 0.25;
    double iou_threshold = 0.5;
    int max_detections = 300;
    std::set<ObjectClass> relevant_classes = {ObjectClass::Car, ObjectClass::Person};
};

// Keeps detections with confidence >= threshold and a relevant class,
// preserving input order.
std::vector<Detection> filter_detections(const std::vector<Detection>& dets,
                                         const DetectorConfig& config);

// Greedy per-class non-maximum suppression. Candidates are visited by
// descending confidence (ties: lower class_id, then input order); a box is
// kept iff its IoU with every kept same-class box is <= iou_threshold. The
// survivors are truncated to max_detections across classes by confidence.
std::vector<Detection> nms(const std::vector<Detection>& dets, double iou_threshold,
                           int max_detections);

// Detector contract: one instance serves one stream at a time; separate
// instances may run in parallel.
class Detector {
  public:
    virtual ~Detector() = default;
    virtual std::vector<Detection> detect(const Frame& frame, std::int64_t frame_index) = 0;
};

// Plug point for a neural backend loaded from a model file. Inputs are
// letterboxed to input_width x input_height by the adapter. No backend is
// compiled into this build; constructing one fails with a clear message.
struct ExternalBackendConfig {
    std::string model_path;
    int input_width = 640;
    int input_height = 640;
};

} // namespace actigate
