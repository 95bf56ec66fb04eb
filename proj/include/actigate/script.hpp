#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "actigate/detect.hpp"

namespace actigate {

// Optional perturbation of scripted playback, for noisy-detector runs.
struct ScriptNoise {
    double drop_probability = 0.0;  // chance each scripted detection is dropped
    double spurious_rate = 0.0;     // expected spurious detections per frame
    double confidence_jitter = 0.0; // +/- uniform jitter, clamped to [0, 1]

    bool enabled() const {
        return drop_probability > 0.0 || spurious_rate > 0.0 || confidence_jitter > 0.0;
    }
};

// Ground-truth playback detector script: per-frame-index detections.
struct DetectorScript {
    std::map<std::int64_t, std::vector<Detection>> frames;
    ScriptNoise noise;
    std::uint64_t seed = 0;

    const std::vector<Detection>* at(std::int64_t index) const {
        const auto it = frames.find(index);
        return it == frames.end() ? nullptr : &it->second;
    }
};

// Line-delimited records: {"index": N, "detections": [{"class": "car",
// "confidence": C, "bbox": [x, y, w, h]}, ...]}
DetectorScript load_detector_script(const std::string& path);
void save_detector_script(const std::string& path, const DetectorScript& script);

// Deterministic stand-in for a neural backend. With zero noise it is exact
// playback; with noise it is reproducible given the script seed.
class ScriptedDetector final : public Detector {
  public:
    explicit ScriptedDetector(DetectorScript script) : script_(std::move(script)) {}

    std::vector<Detection> detect(const Frame& frame, std::int64_t frame_index) override;

    const DetectorScript& script() const { return script_; }

  private:
    DetectorScript script_;
};

std::unique_ptr<Detector> make_scripted_detector(DetectorScript script);

} // namespace actigate
