#include "actigate/storage.hpp"

namespace actigate {

double estimate_bytes(double duration_seconds, double bitrate_kbps) {
    if (duration_seconds < 0.0)
        throw InvariantError("estimate_bytes: negative duration");
    return duration_seconds * (bitrate_kbps * 125.0);
}

StorageReport compare_modes(const std::map<RecordMode, RecordingLog>& logs, const Rational& fps,
                            const BitrateModel& model) {
    StorageReport report;
    report.fps = fps;

    bool first = true;
    for (const auto& [mode, log] : logs) {
        if (first) {
            report.total_frames = log.total_frames_processed;
            first = false;
        } else if (log.total_frames_processed != report.total_frames) {
            throw InvariantError("compare_modes: logs cover different frame counts");
        }
        ModeUsage usage;
        usage.mode = mode;
        usage.recorded_frames = log.recorded_frame_count;
        usage.recorded_duration = Rational(log.recorded_frame_count * fps.den, fps.num);
        usage.duration_seconds = usage.recorded_duration.to_double();
        usage.bytes = estimate_bytes(usage.duration_seconds, model.rate_for(mode));
        usage.megabytes = usage.bytes / kBytesPerMegabyte;
        report.modes.push_back(usage);
    }

    for (const ModeUsage& a : report.modes) {
        for (const ModeUsage& b : report.modes) {
            if (a.mode == b.mode)
                continue;
            // Only report each mode against a strictly larger baseline tier.
            if (static_cast<int>(a.mode) <= static_cast<int>(b.mode))
                continue;
            Reduction red;
            red.mode = a.mode;
            red.baseline = b.mode;
            if (b.duration_seconds > 0.0)
                red.duration_reduction = 1.0 - a.duration_seconds / b.duration_seconds;
            if (b.bytes > 0.0)
                red.bytes_reduction = 1.0 - a.bytes / b.bytes;
            report.reductions.push_back(red);
        }
    }
    return report;
}

} // namespace actigate
