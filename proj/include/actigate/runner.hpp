#pragma once

#include <optional>
#include <string>
#include <vector>

#include "actigate/eval.hpp"
#include "actigate/report.hpp"
#include "actigate/storage.hpp"
#include "actigate/synth.hpp"

namespace actigate {

// Resolved configuration for one engine run: exactly one input source and
// exactly one detector choice.
struct RunConfig {
    std::optional<std::string> input_path;    // .y4m file or image-sequence manifest
    std::optional<std::string> scenario_path; // synthetic scenario spec

    std::optional<std::string> detector_script_path;
    bool detector_from_scenario = false; // play back the scenario's ground truth
    std::optional<ExternalBackendConfig> external_backend;

    MotionConfig motion;
    DetectorConfig detector;
    RecordMode mode = RecordMode::Hybrid;
    double grace_seconds = 20.0;
    BitrateModel bitrate;

    std::string out_dir = "out";
    std::optional<std::uint64_t> seed; // overrides the scenario seed when set
    bool paced = false;                // pace frames at fps (live emulation)
    bool trace = false;                // per-frame decision trace in the log
    bool dump_segments = false;        // re-emit written frames as Y4M
};

// Reads a config file (same keys as the CLI flags); flag overrides are
// applied by the CLI on top of this.
RunConfig load_run_config(const std::string& path);
void validate_run_config(const RunConfig& config);
ordered_json run_config_to_json(const RunConfig& config);

// End-to-end single-mode run; writes segments.json, recording_log.json,
// storage.json, timing.json and resolved_config.json under out_dir.
RecordingLog cmd_run(const RunConfig& config);

// Runs each mode over the identical generated stream, verifies the recorded
// index sets are nested (hybrid within motion within continuous), and writes
// per-mode logs plus the comparative storage report.
StorageReport cmd_simulate(const RunConfig& config, const std::vector<RecordMode>& modes);

struct EvalPaths {
    std::string predictions;
    std::string ground_truth;
    std::string out_dir = "out";
};

MetricsReport cmd_eval(const EvalPaths& paths, const EvalConfig& config);

} // namespace actigate
