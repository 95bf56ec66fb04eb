#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "actigate/frame.hpp"
#include "actigate/recorder.hpp"
#include "actigate/script.hpp"

namespace actigate {

// A labeled rectangle crossing the canvas on a linear trajectory.
struct ObjectEvent {
    ObjectClass class_id = ObjectClass::Car;
    double enter_time = 0.0;
    double exit_time = 0.0;
    double from_x = 0.0, from_y = 0.0;
    double to_x = 0.0, to_y = 0.0;
    int width = 0, height = 0;
    int intensity = 220; // solid fill level
};

// Wind-like global noise: bounded uniform per-pixel jitter on the given
// intervals. Models the false-trigger source (foliage motion without any
// relevant object in frame).
struct WindSpec {
    bool enabled = false;
    int intensity = 0; // jitter amplitude, +/- levels
    std::vector<std::pair<double, double>> active_intervals;
};

struct ScenarioSpec {
    double duration_seconds = 0.0;
    Rational fps{10, 1};
    int width = 0;
    int height = 0;
    int background = 96;
    std::vector<ObjectEvent> objects;
    WindSpec wind;
    std::uint64_t seed = 0;

    std::int64_t frame_count() const;
};

ScenarioSpec load_scenario(const std::string& path);
// Same grammar, parsed from an in-memory JSON document.
ScenarioSpec parse_scenario_text(const std::string& text, const std::string& context = "scenario");
void save_scenario(const std::string& path, const ScenarioSpec& spec);
void validate_scenario(const ScenarioSpec& spec);

struct GroundTruthEntry {
    bool motion_expected = false; // an object rectangle changed vs the previous frame
    bool wind_active = false;
    std::vector<std::pair<ObjectClass, BBox>> objects;
};

struct GroundTruthTimeline {
    std::vector<GroundTruthEntry> entries;

    std::vector<bool> object_flags() const;
    std::vector<bool> motion_flags() const;
};

// Exports ground truth in the detector-script line format plus motion flags.
void save_ground_truth(const std::string& path, const GroundTruthTimeline& truth);

struct Scenario {
    ScenarioSpec spec;
    GroundTruthTimeline truth;
    DetectorScript script; // ground-truth playback, confidence 1.0

    // Frames are rendered lazily and per-frame seeded, so multiple streams
    // over the same scenario are bit-identical.
    std::unique_ptr<FrameSource> make_stream() const;
    StreamInfo stream_info() const;
};

Scenario generate_scenario(const ScenarioSpec& spec);

// Brute-force reference for the recording state machine: replays the gating
// rules directly over boolean timelines and returns the exact written frame
// index set. Hybrid treats the object signal as present only on frames that
// also have motion, mirroring the pipeline's motion-gated detector.
std::vector<std::int64_t> timeline_oracle(const std::vector<bool>& motion,
                                          const std::vector<bool>& objects, const Rational& fps,
                                          const Rational& grace, RecordMode mode);

} // namespace actigate
