#include "actigate/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace actigate {

namespace {

std::string fixed3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

std::string pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

} // namespace

std::string format_duration(double seconds) {
    const std::int64_t whole = static_cast<std::int64_t>(seconds);
    const std::int64_t minutes = whole / 60;
    const double rem = seconds - static_cast<double>(minutes) * 60.0;
    std::ostringstream out;
    out << minutes << "m & ";
    if (std::abs(rem - std::round(rem)) < 1e-9)
        out << static_cast<std::int64_t>(std::round(rem)) << "s";
    else
        out << fixed3(rem) << "s";
    return out.str();
}

ordered_json segments_to_json(const RecordingLog& log, const BitrateModel& model) {
    ordered_json doc;
    doc["mode"] = to_string(log.mode);
    doc["fps"] = log.fps.str();
    doc["segments"] = ordered_json::array();
    const double kbps = model.rate_for(log.mode);
    for (const Segment& s : log.segments) {
        ordered_json seg;
        seg["start_index"] = s.start_index;
        seg["end_index"] = s.end_index;
        seg["start_time"] = s.start_time.to_double();
        seg["end_time"] = s.end_time.to_double();
        seg["frame_count"] = s.frame_count;
        const double duration =
            Rational(s.frame_count * log.fps.den, log.fps.num).to_double();
        seg["estimated_bytes"] = estimate_bytes(duration, kbps);
        doc["segments"].push_back(seg);
    }
    return doc;
}

ordered_json log_to_json(const RecordingLog& log, bool include_trace) {
    ordered_json doc;
    doc["mode"] = to_string(log.mode);
    doc["fps"] = log.fps.str();
    doc["total_frames_processed"] = log.total_frames_processed;
    doc["recorded_frame_count"] = log.recorded_frame_count;
    doc["recorded_duration_seconds"] = log.recorded_duration().to_double();
    doc["segment_count"] = log.segments.size();
    doc["segments"] = ordered_json::array();
    for (const Segment& s : log.segments) {
        doc["segments"].push_back({{"start_index", s.start_index},
                                   {"end_index", s.end_index},
                                   {"frame_count", s.frame_count}});
    }
    if (include_trace) {
        doc["trace"] = ordered_json::array();
        for (const TraceEntry& t : log.trace) {
            doc["trace"].push_back({{"index", t.frame_index},
                                    {"motion", t.motion},
                                    {"detections", t.detection_count},
                                    {"action", to_string(t.action)}});
        }
    }
    return doc;
}

ordered_json storage_to_json(const StorageReport& report) {
    ordered_json doc;
    doc["total_frames"] = report.total_frames;
    doc["fps"] = report.fps.str();
    doc["modes"] = ordered_json::array();
    for (const ModeUsage& m : report.modes) {
        ordered_json entry;
        entry["mode"] = to_string(m.mode);
        entry["recorded_frames"] = m.recorded_frames;
        entry["recorded_duration"] = m.recorded_duration.str();
        entry["recorded_duration_seconds"] = m.duration_seconds;
        entry["estimated_bytes"] = m.bytes;
        entry["estimated_megabytes"] = m.megabytes;
        doc["modes"].push_back(entry);
    }
    doc["reductions"] = ordered_json::array();
    for (const Reduction& r : report.reductions) {
        ordered_json entry;
        entry["mode"] = to_string(r.mode);
        entry["baseline"] = to_string(r.baseline);
        entry["duration_reduction"] =
            r.duration_reduction ? ordered_json(*r.duration_reduction) : ordered_json(nullptr);
        entry["bytes_reduction"] =
            r.bytes_reduction ? ordered_json(*r.bytes_reduction) : ordered_json(nullptr);
        doc["reductions"].push_back(entry);
    }
    return doc;
}

std::string storage_table(const StorageReport& report) {
    std::ostringstream out;
    out << pad("Mode", 14) << pad("Video Length", 18) << "Storage (MB)\n";
    out << std::string(44, '-') << "\n";
    for (const ModeUsage& m : report.modes) {
        char mb[32];
        std::snprintf(mb, sizeof(mb), "%.1f", m.megabytes);
        out << pad(to_string(m.mode), 14) << pad(format_duration(m.duration_seconds), 18) << mb
            << "\n";
    }
    for (const Reduction& r : report.reductions) {
        if (!r.duration_reduction)
            continue;
        out << to_string(r.mode) << " vs " << to_string(r.baseline) << ": duration -"
            << fixed3(*r.duration_reduction * 100.0) << "%";
        if (r.bytes_reduction)
            out << ", storage -" << fixed3(*r.bytes_reduction * 100.0) << "%";
        out << "\n";
    }
    return out.str();
}

ordered_json metrics_to_json(const MetricsReport& report) {
    ordered_json doc;
    doc["classes"] = ordered_json::array();
    for (const auto& [cls, m] : report.per_class) {
        ordered_json entry;
        entry["category"] = to_string(cls);
        entry["precision"] = m.precision;
        entry["recall"] = m.recall;
        entry["map50"] = m.map50;
        entry["map50_95"] = m.map50_95;
        doc["classes"].push_back(entry);
    }
    doc["overall"] = {{"precision", report.overall.precision},
                      {"recall", report.overall.recall},
                      {"map50", report.overall.map50},
                      {"map50_95", report.overall.map50_95}};
    return doc;
}

std::string metrics_table(const MetricsReport& report) {
    std::ostringstream out;
    out << pad("Category", 10) << pad("Precision", 11) << pad("Recall", 9) << pad("mAP50", 9)
        << "mAP50-95\n";
    out << std::string(47, '-') << "\n";
    const auto row = [&](const std::string& name, const ClassMetrics& m) {
        out << pad(name, 10) << pad(fixed3(m.precision), 11) << pad(fixed3(m.recall), 9)
            << pad(fixed3(m.map50), 9) << fixed3(m.map50_95) << "\n";
    };
    for (const auto& [cls, m] : report.per_class)
        row(to_string(cls), m);
    row("Overall", report.overall);
    return out.str();
}

ordered_json confusion_to_json(const ConfusionMatrix& matrix) {
    ordered_json doc;
    doc["labels"] = matrix.labels;
    doc["counts"] = matrix.counts;
    doc["row_normalized"] = matrix.row_normalized();
    doc["column_normalized"] = matrix.column_normalized();
    doc["total"] = matrix.total();
    return doc;
}

std::string confusion_table(const ConfusionMatrix& matrix) {
    std::ostringstream out;
    out << pad("true\\pred", 12);
    for (const std::string& label : matrix.labels)
        out << pad(label, 12);
    out << "\n" << std::string(12 * (matrix.labels.size() + 1), '-') << "\n";
    for (std::size_t r = 0; r < matrix.counts.size(); ++r) {
        out << pad(matrix.labels[r], 12);
        for (const std::int64_t v : matrix.counts[r])
            out << pad(std::to_string(v), 12);
        out << "\n";
    }
    return out.str();
}

ordered_json timing_to_json(const TimingReport& report) {
    const auto stage = [](const TimingStat& s) {
        ordered_json entry;
        entry["samples"] = s.count;
        entry["mean_ms"] = s.mean_ms ? ordered_json(*s.mean_ms) : ordered_json(nullptr);
        return entry;
    };
    ordered_json doc;
    doc["preprocessing"] = stage(report.preprocessing);
    doc["inference"] = stage(report.inference);
    doc["nms"] = stage(report.nms);
    return doc;
}

void write_text_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw InputError(path + ": cannot open for writing");
    out << body;
    if (!out)
        throw InputError(path + ": write failure");
}

void write_json_file(const std::string& path, const ordered_json& doc) {
    write_text_file(path, doc.dump(2) + "\n");
}

} // namespace actigate
