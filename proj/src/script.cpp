#include "actigate/script.hpp"

#include <fstream>

#include <json.hpp>

#include "actigate/rng.hpp"

namespace actigate {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

Detection detection_from_json(const json& d, const std::string& context) {
    Detection det;
    const std::string name = d.at("class").get<std::string>();
    const auto cls = class_from_string(name);
    if (!cls)
        throw InputError(context + ": unknown class '" + name + "'");
    det.class_id = *cls;
    det.confidence = d.at("confidence").get<double>();
    if (det.confidence < 0.0 || det.confidence > 1.0)
        throw InputError(context + ": confidence out of [0, 1]");
    const auto& b = d.at("bbox");
    if (!b.is_array() || b.size() != 4)
        throw InputError(context + ": bbox must be [x, y, w, h]");
    det.bbox = BBox{b[0].get<double>(), b[1].get<double>(), b[2].get<double>(),
                    b[3].get<double>()};
    if (det.bbox.w < 0 || det.bbox.h < 0)
        throw InputError(context + ": negative bbox extents");
    return det;
}

ordered_json detection_to_json(const Detection& det) {
    ordered_json d;
    d["class"] = to_string(det.class_id);
    d["confidence"] = det.confidence;
    d["bbox"] = {det.bbox.x, det.bbox.y, det.bbox.w, det.bbox.h};
    return d;
}

} // namespace

DetectorScript load_detector_script(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw InputError(path + ": cannot open detector script");
    DetectorScript script;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#')
            continue;
        const std::string context = path + ":" + std::to_string(line_no);
        json record;
        try {
            record = json::parse(line);
        } catch (const json::parse_error& e) {
            throw InputError(context + ": " + e.what());
        }
        try {
            if (record.contains("noise")) {
                // Optional header record carrying noise spec and seed.
                const auto& n = record["noise"];
                script.noise.drop_probability = n.value("drop_probability", 0.0);
                script.noise.spurious_rate = n.value("spurious_rate", 0.0);
                script.noise.confidence_jitter = n.value("confidence_jitter", 0.0);
                script.seed = record.value("seed", std::uint64_t{0});
                continue;
            }
            const std::int64_t index = record.at("index").get<std::int64_t>();
            if (index < 0)
                throw InputError(context + ": negative frame index");
            std::vector<Detection> dets;
            for (const auto& d : record.value("detections", json::array()))
                dets.push_back(detection_from_json(d, context));
            script.frames[index] = std::move(dets);
        } catch (const json::exception& e) {
            throw InputError(context + ": " + e.what());
        }
    }
    return script;
}

void save_detector_script(const std::string& path, const DetectorScript& script) {
    std::ofstream out(path);
    if (!out)
        throw InputError(path + ": cannot open detector script for writing");
    if (script.noise.enabled() || script.seed != 0) {
        ordered_json header;
        header["noise"] = {{"drop_probability", script.noise.drop_probability},
                           {"spurious_rate", script.noise.spurious_rate},
                           {"confidence_jitter", script.noise.confidence_jitter}};
        header["seed"] = script.seed;
        out << header.dump() << "\n";
    }
    for (const auto& [index, dets] : script.frames) {
        ordered_json record;
        record["index"] = index;
        record["detections"] = ordered_json::array();
        for (const Detection& d : dets)
            record["detections"].push_back(detection_to_json(d));
        out << record.dump() << "\n";
    }
    if (!out)
        throw InputError(path + ": write failure");
}

std::vector<Detection> ScriptedDetector::detect(const Frame& frame, std::int64_t frame_index) {
    std::vector<Detection> out;
    if (const auto* dets = script_.at(frame_index))
        out = *dets;
    if (!script_.noise.enabled())
        return out;

    // Per-frame derived seed, so playback does not depend on query order.
    std::mt19937_64 rng(mix_seed(script_.seed, static_cast<std::uint64_t>(frame_index)));

    std::vector<Detection> noisy;
    for (Detection d : out) {
        if (bernoulli(rng, script_.noise.drop_probability))
            continue;
        if (script_.noise.confidence_jitter > 0.0) {
            const double jitter = (uniform_unit(rng) * 2.0 - 1.0) * script_.noise.confidence_jitter;
            d.confidence = std::clamp(d.confidence + jitter, 0.0, 1.0);
        }
        noisy.push_back(d);
    }

    const int canvas_w = frame.width > 0 ? frame.width : 640;
    const int canvas_h = frame.height > 0 ? frame.height : 640;
    double rate = script_.noise.spurious_rate;
    int spurious = static_cast<int>(rate);
    if (bernoulli(rng, rate - spurious))
        ++spurious;
    for (int i = 0; i < spurious; ++i) {
        Detection d;
        d.class_id = kAllClasses[uniform_int(rng, 0, 1)];
        d.confidence = 0.25 + uniform_unit(rng) * 0.75;
        const int w = static_cast<int>(uniform_int(rng, 4, std::max(4, canvas_w / 4)));
        const int h = static_cast<int>(uniform_int(rng, 4, std::max(4, canvas_h / 4)));
        const int x = static_cast<int>(uniform_int(rng, 0, std::max(0, canvas_w - w)));
        const int y = static_cast<int>(uniform_int(rng, 0, std::max(0, canvas_h - h)));
        d.bbox = BBox{static_cast<double>(x), static_cast<double>(y), static_cast<double>(w),
                      static_cast<double>(h)};
        noisy.push_back(d);
    }
    return noisy;
}

std::unique_ptr<Detector> make_scripted_detector(DetectorScript script) {
    return std::make_unique<ScriptedDetector>(std::move(script));
}

} // namespace actigate
