#include "actigate/recorder.hpp"

#include <chrono>
#include <filesystem>

#include "actigate/y4m.hpp"

namespace actigate {

const char* to_string(RecordMode mode) {
    switch (mode) {
    case RecordMode::Continuous:
        return "continuous";
    case RecordMode::MotionOnly:
        return "motion";
    case RecordMode::Hybrid:
        return "hybrid";
    }
    return "unknown";
}

std::optional<RecordMode> mode_from_string(std::string_view name) {
    if (name == "continuous")
        return RecordMode::Continuous;
    if (name == "motion" || name == "motion-only")
        return RecordMode::MotionOnly;
    if (name == "hybrid")
        return RecordMode::Hybrid;
    return std::nullopt;
}

const char* to_string(StepAction action) {
    switch (action) {
    case StepAction::None:
        return "none";
    case StepAction::StartAndWrite:
        return "start";
    case StepAction::Write:
        return "write";
    case StepAction::Stop:
        return "stop";
    }
    return "unknown";
}

std::vector<std::int64_t> RecordingLog::recorded_indices() const {
    std::vector<std::int64_t> out;
    out.reserve(static_cast<std::size_t>(recorded_frame_count));
    for (const Segment& s : segments)
        for (std::int64_t i = s.start_index; i <= s.end_index; ++i)
            out.push_back(i);
    return out;
}

namespace {

void write_frame(RecorderState& st, std::int64_t index, const Rational& t) {
    if (!st.open_segment) {
        st.open_segment = Segment{index, index, t, t, 1};
        return;
    }
    Segment& seg = *st.open_segment;
    if (index != seg.end_index + 1)
        throw InvariantError("recorder: segment would be non-contiguous at frame " +
                             std::to_string(index));
    seg.end_index = index;
    seg.end_time = t;
    ++seg.frame_count;
}

std::optional<Segment> close_segment(RecorderState& st) {
    std::optional<Segment> seg = st.open_segment;
    st.open_segment.reset();
    st.recording = false;
    st.last_detection_time.reset();
    return seg;
}

} // namespace

StepResult step(const RecorderState& state, const RecorderConfig& config,
                std::int64_t frame_index, const Rational& timestamp, bool motion,
                const std::vector<Detection>& detections) {
    if (state.last_timestamp && timestamp < *state.last_timestamp)
        throw InvariantError("recorder step: decreasing timestamp at frame " +
                             std::to_string(frame_index));

    StepResult result;
    result.state = state;
    RecorderState& st = result.state;
    st.last_timestamp = timestamp;

    if (config.mode == RecordMode::Continuous) {
        result.action = st.recording ? StepAction::Write : StepAction::StartAndWrite;
        st.recording = true;
        write_frame(st, frame_index, timestamp);
        return result;
    }

    const bool object_signal =
        config.mode == RecordMode::Hybrid ? !detections.empty() : motion;

    bool started = false;
    if (!st.recording && motion && object_signal) {
        st.recording = true;
        st.last_detection_time = timestamp;
        started = true;
    }

    if (!st.recording) {
        result.action = StepAction::None;
        return result;
    }

    // The same iteration that starts recording also reaches this branch, so
    // the triggering frame is written.
    const Rational elapsed = timestamp - *st.last_detection_time;
    if (elapsed < config.grace) {
        if (object_signal)
            st.last_detection_time = timestamp;
        write_frame(st, frame_index, timestamp);
        result.action = started ? StepAction::StartAndWrite : StepAction::Write;
    } else if (!object_signal) {
        result.closed = close_segment(st);
        result.action = StepAction::Stop;
    } else {
        st.last_detection_time = timestamp;
        write_frame(st, frame_index, timestamp);
        result.action = started ? StepAction::StartAndWrite : StepAction::Write;
    }
    return result;
}

StepResult stop_button(const RecorderState& state) {
    StepResult result;
    result.state = state;
    if (state.recording) {
        result.closed = close_segment(result.state);
        result.action = StepAction::Stop;
    }
    return result;
}

RecorderSession::RecorderSession(RecorderConfig config, bool trace)
    : config_(std::move(config)), trace_(trace) {
    log_.fps = config_.fps;
    log_.mode = config_.mode;
}

StepAction RecorderSession::push(std::int64_t frame_index, const Rational& timestamp, bool motion,
                                 const std::vector<Detection>& detections) {
    StepResult r = step(state_, config_, frame_index, timestamp, motion, detections);
    state_ = std::move(r.state);
    if (r.closed && r.closed->frame_count > 0)
        log_.segments.push_back(*r.closed);
    if (r.action == StepAction::Write || r.action == StepAction::StartAndWrite)
        ++log_.recorded_frame_count;
    ++log_.total_frames_processed;
    if (trace_)
        log_.trace.push_back({frame_index, motion, detections.size(), r.action});
    return r.action;
}

std::optional<Segment> RecorderSession::stop() {
    StepResult r = stop_button(state_);
    state_ = std::move(r.state);
    if (r.closed && r.closed->frame_count > 0)
        log_.segments.push_back(*r.closed);
    return r.closed;
}

RecordingLog RecorderSession::finish() {
    stop();
    if (log_.recorded_frame_count >
        log_.total_frames_processed) // segments must partition processed frames
        throw InvariantError("recording log: more frames recorded than processed");
    return log_;
}

namespace {

class SegmentDumper {
  public:
    SegmentDumper(std::string dir, const StreamInfo& info) : dir_(std::move(dir)), info_(info) {
        std::filesystem::create_directories(dir_);
    }

    void on_write(const LumaFrame& luma, bool starts_segment) {
        if (starts_segment || !writer_) {
            ++segment_no_;
            char name[32];
            std::snprintf(name, sizeof(name), "segment_%04d.y4m", segment_no_);
            writer_ = std::make_unique<Y4mWriter>((std::filesystem::path(dir_) / name).string(),
                                                  info_.width, info_.height, info_.fps,
                                                  Y4mWriter::Colorspace::Mono);
        }
        writer_->write(luma);
    }

    void on_stop() { writer_.reset(); }

  private:
    std::string dir_;
    StreamInfo info_;
    std::unique_ptr<Y4mWriter> writer_;
    int segment_no_ = 0;
};

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

} // namespace

PipelineResult run_pipeline(FrameSource& source, const MotionConfig& motion_config,
                            Detector* detector, const DetectorConfig& detector_config,
                            const RecorderConfig& recorder_config,
                            const PipelineOptions& options) {
    RecorderConfig config = recorder_config;
    config.fps = source.info().fps;
    RecorderSession session(config, options.trace);
    PipelineResult result;

    std::optional<SegmentDumper> dumper;
    if (options.dump_dir)
        dumper.emplace(*options.dump_dir, source.info());

    const bool needs_motion = config.mode != RecordMode::Continuous;
    const bool needs_detector = config.mode == RecordMode::Hybrid;
    if (needs_detector && detector == nullptr)
        throw ConfigError("hybrid mode requires a detector");

    std::optional<LumaFrame> prev;
    std::int64_t frame_index = 0;
    while (true) {
        std::optional<Frame> frame;
        try {
            frame = source.next();
        } catch (const InputError&) {
            throw;
        } catch (const std::exception& e) {
            throw InputError("stream error at frame " + std::to_string(frame_index) + ": " +
                             e.what());
        }
        if (!frame)
            break;
        frame_index = frame->index;

        bool motion = false;
        std::optional<LumaFrame> luma;
        if (needs_motion || dumper) {
            const auto t0 = std::chrono::steady_clock::now();
            luma = to_luma(*frame);
            if (needs_motion && prev)
                motion = detect_motion(*prev, *luma, motion_config).motion;
            result.timing.preprocessing_ms.push_back(elapsed_ms(t0));
        }

        std::vector<Detection> relevant;
        if (needs_detector && motion) {
            const auto t1 = std::chrono::steady_clock::now();
            std::vector<Detection> raw;
            try {
                raw = detector->detect(*frame, frame->index);
            } catch (const std::exception& e) {
                throw InputError("detector error at frame " + std::to_string(frame->index) +
                                 ": " + e.what());
            }
            result.timing.inference_ms.push_back(elapsed_ms(t1));

            const auto t2 = std::chrono::steady_clock::now();
            const std::vector<Detection> kept =
                nms(raw, detector_config.iou_threshold, detector_config.max_detections);
            result.timing.nms_ms.push_back(elapsed_ms(t2));

            relevant = filter_detections(kept, detector_config);
        }

        const StepAction action =
            session.push(frame->index, frame->timestamp, motion, relevant);
        if (dumper) {
            if (action == StepAction::Write || action == StepAction::StartAndWrite)
                dumper->on_write(*luma, action == StepAction::StartAndWrite);
            else if (action == StepAction::Stop)
                dumper->on_stop();
        }

        if (needs_motion)
            prev = std::move(luma);
    }

    result.log = session.finish();
    const StreamInfo& info = source.info();
    if (info.frame_count && result.log.total_frames_processed != *info.frame_count)
        throw InputError("stream ended early: processed " +
                         std::to_string(result.log.total_frames_processed) + " of " +
                         std::to_string(*info.frame_count) + " frames");
    return result;
}

} // namespace actigate
