#pragma once

#include <string>

#include <json.hpp>

#include "actigate/eval.hpp"
#include "actigate/storage.hpp"

namespace actigate {

using ordered_json = nlohmann::ordered_json;

// Structured-text (JSON) report bodies. Key order is fixed and no wall-clock
// data is included, so identical runs serialize byte-identically.
ordered_json segments_to_json(const RecordingLog& log, const BitrateModel& model);
ordered_json log_to_json(const RecordingLog& log, bool include_trace);
ordered_json storage_to_json(const StorageReport& report);
ordered_json metrics_to_json(const MetricsReport& report);
ordered_json confusion_to_json(const ConfusionMatrix& matrix);
ordered_json timing_to_json(const TimingReport& report);

// Aligned plain-text tables.
std::string storage_table(const StorageReport& report);
std::string metrics_table(const MetricsReport& report);
std::string confusion_table(const ConfusionMatrix& matrix);

// "13m & 45s" style duration, fractional seconds trimmed.
std::string format_duration(double seconds);

void write_text_file(const std::string& path, const std::string& body);
void write_json_file(const std::string& path, const ordered_json& doc);

} // namespace actigate
