#pragma once

#include <map>
#include <optional>
#include <vector>

#include "actigate/recorder.hpp"

namespace actigate {

// Constant-bitrate storage model; reported megabytes are decimal (10^6).
struct BitrateModel {
    double bitrate_kbps = 7703.0;
    // Measured effective bitrates differ per recording chain, so a report
    // may override the rate for individual modes.
    std::map<RecordMode, double> per_mode_kbps;

    double rate_for(RecordMode mode) const {
        const auto it = per_mode_kbps.find(mode);
        return it == per_mode_kbps.end() ? bitrate_kbps : it->second;
    }
};

inline constexpr double kBytesPerMegabyte = 1'000'000.0;

// bytes = seconds * kbps * 1000 / 8
double estimate_bytes(double duration_seconds, double bitrate_kbps);
inline double estimate_bytes(double duration_seconds, const BitrateModel& model) {
    return estimate_bytes(duration_seconds, model.bitrate_kbps);
}

struct ModeUsage {
    RecordMode mode = RecordMode::Hybrid;
    std::int64_t recorded_frames = 0;
    Rational recorded_duration{0, 1}; // exactly recorded_frame_count / fps
    double duration_seconds = 0.0;
    double bytes = 0.0;
    double megabytes = 0.0;
};

struct Reduction {
    RecordMode mode = RecordMode::Hybrid;     // the smaller recording
    RecordMode baseline = RecordMode::Continuous;
    std::optional<double> duration_reduction; // 1 - mode/baseline; absent if baseline empty
    std::optional<double> bytes_reduction;
};

struct StorageReport {
    std::vector<ModeUsage> modes;
    std::vector<Reduction> reductions;
    std::int64_t total_frames = 0;
    Rational fps{30, 1};
};

// Builds the multi-mode comparison from logs produced over the same input
// stream. Throws when the logs disagree on the processed frame count.
StorageReport compare_modes(const std::map<RecordMode, RecordingLog>& logs, const Rational& fps,
                            const BitrateModel& model);

} // namespace actigate
