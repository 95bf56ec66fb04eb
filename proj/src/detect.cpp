#include "actigate/detect.hpp"

#include <algorithm>
#include <numeric>

namespace actigate {

const char* to_string(ObjectClass c) {
    switch (c) {
    case ObjectClass::Car:
        return "car";
    case ObjectClass::Person:
        return "person";
    }
    return "unknown";
}

std::optional<ObjectClass> class_from_string(std::string_view name) {
    if (name == "car" || name == "Car")
        return ObjectClass::Car;
    if (name == "person" || name == "Person")
        return ObjectClass::Person;
    return std::nullopt;
}

std::vector<Detection> filter_detections(const std::vector<Detection>& dets,
                                         const DetectorConfig& config) {
    std::vector<Detection> out;
    out.reserve(dets.size());
    for (const Detection& d : dets) {
        if (d.confidence >= config.confidence_threshold &&
            config.relevant_classes.count(d.class_id) > 0)
            out.push_back(d);
    }
    return out;
}

std::vector<Detection> nms(const std::vector<Detection>& dets, double iou_threshold,
                           int max_detections) {
    std::vector<std::size_t> order(dets.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&dets](std::size_t a, std::size_t b) {
        if (dets[a].confidence != dets[b].confidence)
            return dets[a].confidence > dets[b].confidence;
        if (dets[a].class_id != dets[b].class_id)
            return dets[a].class_id < dets[b].class_id;
        return a < b; // stable on full ties: input order
    });

    std::vector<Detection> kept;
    for (const std::size_t i : order) {
        const Detection& cand = dets[i];
        bool suppressed = false;
        for (const Detection& k : kept) {
            if (k.class_id == cand.class_id && iou(k.bbox, cand.bbox) > iou_threshold) {
                suppressed = true;
                break;
            }
        }
        if (!suppressed)
            kept.push_back(cand);
    }
    if (max_detections >= 0 && kept.size() > static_cast<std::size_t>(max_detections))
        kept.resize(static_cast<std::size_t>(max_detections));
    return kept;
}

} // namespace actigate
