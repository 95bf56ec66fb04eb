#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "actigate/detect.hpp"
#include "actigate/frame.hpp"
#include "actigate/motion.hpp"

namespace actigate {

enum class RecordMode {
    Continuous, // baseline: write every frame
    MotionOnly, // baseline: gate on motion alone
    Hybrid,     // motion gate, then object gate
};

const char* to_string(RecordMode mode);
std::optional<RecordMode> mode_from_string(std::string_view name);

struct RecorderConfig {
    Rational grace{20, 1}; // seconds of hysteresis after the last detection
    RecordMode mode = RecordMode::Hybrid;
    Rational fps{30, 1};
};

enum class StepAction {
    None,          // frame not written, recording still off
    StartAndWrite, // recording opened on this frame; frame written
    Write,         // frame written to the open segment
    Stop,          // recording closed; this frame NOT written
};

const char* to_string(StepAction action);

// A maximal contiguous run of written frames.
struct Segment {
    std::int64_t start_index = 0;
    std::int64_t end_index = 0; // inclusive
    Rational start_time{0, 1};
    Rational end_time{0, 1};
    std::int64_t frame_count = 0;
};

struct RecorderState {
    bool recording = false;
    std::optional<Rational> last_detection_time;
    std::optional<Segment> open_segment; // grows while recording
    std::optional<Rational> last_timestamp;
};

struct StepResult {
    RecorderState state;
    StepAction action = StepAction::None;
    std::optional<Segment> closed; // set when action == Stop
};

// One transition of the gated-recording state machine.
//
// Hybrid: from idle, recording starts only when the frame has motion AND a
// nonempty (already filtered) detection list; the triggering frame is
// written. While recording, frames are written as long as less than `grace`
// seconds have passed since the last detection (strictly less); any frame
// with detections refreshes that clock. Once the grace window has elapsed, a
// frame without detections stops recording and is itself not written.
//
// MotionOnly substitutes the motion flag for the detection test; Continuous
// writes unconditionally.
StepResult step(const RecorderState& state, const RecorderConfig& config,
                std::int64_t frame_index, const Rational& timestamp, bool motion,
                const std::vector<Detection>& detections);

// Operator stop: closes any open segment at the last written frame.
StepResult stop_button(const RecorderState& state);

struct TraceEntry {
    std::int64_t frame_index = 0;
    bool motion = false;
    std::size_t detection_count = 0;
    StepAction action = StepAction::None;
};

struct RecordingLog {
    std::vector<Segment> segments;
    std::int64_t recorded_frame_count = 0;
    std::int64_t total_frames_processed = 0;
    Rational fps{30, 1};
    RecordMode mode = RecordMode::Hybrid;
    std::vector<TraceEntry> trace; // populated only when tracing is enabled

    Rational recorded_duration() const { return Rational(recorded_frame_count * fps.den, fps.num); }
    std::vector<std::int64_t> recorded_indices() const;
};

// Accumulates segments and counters from successive step() calls.
class RecorderSession {
  public:
    explicit RecorderSession(RecorderConfig config, bool trace = false);

    StepAction push(std::int64_t frame_index, const Rational& timestamp, bool motion,
                    const std::vector<Detection>& detections);
    // Operator stop between frames; a later qualifying frame reopens.
    std::optional<Segment> stop();
    // Closes any open segment at stream end and returns the log.
    RecordingLog finish();

    const RecorderState& state() const { return state_; }

  private:
    RecorderConfig config_;
    RecorderState state_;
    RecordingLog log_;
    bool trace_;
};

// Per-frame stage timings collected while the pipeline runs.
struct StageSamples {
    std::vector<double> preprocessing_ms;
    std::vector<double> inference_ms;
    std::vector<double> nms_ms;
};

struct PipelineOptions {
    bool trace = false;
    // When set, every written frame is re-emitted to per-segment Y4M files
    // under this directory (bit-exact luma).
    std::optional<std::string> dump_dir;
};

struct PipelineResult {
    RecordingLog log;
    StageSamples timing;
};

// Full per-frame loop: luma conversion, frame-subtraction motion gate, the
// object detector on motion frames only, NMS + relevance filtering, then one
// recorder step. The first frame of a stream has no predecessor and counts
// as motionless.
PipelineResult run_pipeline(FrameSource& source, const MotionConfig& motion_config,
                            Detector* detector, const DetectorConfig& detector_config,
                            const RecorderConfig& recorder_config,
                            const PipelineOptions& options = {});

} // namespace actigate
