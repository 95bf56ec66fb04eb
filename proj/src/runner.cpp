#include "actigate/runner.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "actigate/image_seq.hpp"
#include "actigate/script.hpp"
#include "actigate/y4m.hpp"

namespace actigate {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Replays an inner stream no faster than its frame rate (live emulation).
class PacedSource final : public FrameSource {
  public:
    explicit PacedSource(std::unique_ptr<FrameSource> inner) : inner_(std::move(inner)) {}

    const StreamInfo& info() const override { return inner_->info(); }

    std::optional<Frame> next() override {
        auto frame = inner_->next();
        if (!frame)
            return frame;
        if (!start_)
            start_ = std::chrono::steady_clock::now();
        const Rational& fps = inner_->info().fps;
        const double due_s = static_cast<double>(frame->index + 1) * fps.den / fps.num;
        std::this_thread::sleep_until(*start_ + std::chrono::duration<double>(due_s));
        return frame;
    }

  private:
    std::unique_ptr<FrameSource> inner_;
    std::optional<std::chrono::steady_clock::time_point> start_;
};

struct ResolvedInput {
    std::unique_ptr<FrameSource> source;
    std::optional<Scenario> scenario; // present for scenario inputs
};

ResolvedInput open_input(const RunConfig& config) {
    ResolvedInput input;
    if (config.scenario_path) {
        ScenarioSpec spec = load_scenario(*config.scenario_path);
        if (config.seed)
            spec.seed = *config.seed;
        input.scenario = generate_scenario(spec);
        input.source = input.scenario->make_stream();
    } else if (ends_with(*config.input_path, ".y4m")) {
        input.source = open_y4m(*config.input_path);
    } else {
        input.source = open_image_sequence(*config.input_path);
    }
    if (config.paced)
        input.source = std::make_unique<PacedSource>(std::move(input.source));
    return input;
}

std::unique_ptr<Detector> make_detector(const RunConfig& config, const ResolvedInput& input) {
    if (config.external_backend)
        throw ConfigError("no neural detector backend is compiled into this build; "
                          "use a detector script (see README)");
    if (config.detector_script_path)
        return make_scripted_detector(load_detector_script(*config.detector_script_path));
    if (config.detector_from_scenario) {
        if (!input.scenario)
            throw ConfigError("scenario-truth detector requires a scenario input");
        return make_scripted_detector(input.scenario->script);
    }
    throw ConfigError("no detector configured");
}

RecorderConfig recorder_config_for(const RunConfig& config, const FrameSource& source,
                                   RecordMode mode) {
    RecorderConfig rc;
    rc.mode = mode;
    rc.grace = Rational::from_double(config.grace_seconds);
    rc.fps = source.info().fps;
    if (config.grace_seconds < 0)
        throw ConfigError("grace_seconds must be nonnegative");
    return rc;
}

DetectionsByImage script_to_dataset(const DetectorScript& script) {
    DetectionsByImage by_image;
    for (const auto& [index, dets] : script.frames)
        by_image[index] = dets;
    return by_image;
}

void check_subset(const RecordingLog& small, const RecordingLog& large, const std::string& what) {
    const std::vector<std::int64_t> a = small.recorded_indices();
    const std::vector<std::int64_t> b = large.recorded_indices();
    if (!std::includes(b.begin(), b.end(), a.begin(), a.end()))
        throw InvariantError("mode-subset property violated: " + what);
}

} // namespace

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError(path + ": cannot open config file");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }

    RunConfig config;
    try {
        if (doc.contains("input"))
            config.input_path = doc["input"].get<std::string>();
        if (doc.contains("scenario"))
            config.scenario_path = doc["scenario"].get<std::string>();
        if (doc.contains("detector_script"))
            config.detector_script_path = doc["detector_script"].get<std::string>();
        config.detector_from_scenario = doc.value("detector_from_scenario", false);
        if (doc.contains("external_backend")) {
            const auto& e = doc["external_backend"];
            ExternalBackendConfig backend;
            backend.model_path = e.at("model").get<std::string>();
            backend.input_width = e.value("input_width", 640);
            backend.input_height = e.value("input_height", 640);
            config.external_backend = backend;
        }
        config.motion.pixel_threshold = doc.value("pixel_threshold", config.motion.pixel_threshold);
        config.motion.area_fraction_threshold =
            doc.value("area_fraction_threshold", config.motion.area_fraction_threshold);
        config.motion.blur_radius = doc.value("blur_radius", config.motion.blur_radius);
        config.detector.confidence_threshold =
            doc.value("confidence_threshold", config.detector.confidence_threshold);
        config.detector.iou_threshold = doc.value("iou_threshold", config.detector.iou_threshold);
        config.detector.max_detections =
            doc.value("max_detections", config.detector.max_detections);
        if (doc.contains("relevant_classes")) {
            config.detector.relevant_classes.clear();
            for (const auto& name : doc["relevant_classes"]) {
                const auto cls = class_from_string(name.get<std::string>());
                if (!cls)
                    throw ConfigError(path + ": unknown class '" + name.get<std::string>() + "'");
                config.detector.relevant_classes.insert(*cls);
            }
        }
        if (doc.contains("mode")) {
            const auto mode = mode_from_string(doc["mode"].get<std::string>());
            if (!mode)
                throw ConfigError(path + ": unknown mode '" + doc["mode"].get<std::string>() + "'");
            config.mode = *mode;
        }
        config.grace_seconds = doc.value("grace_seconds", config.grace_seconds);
        config.bitrate.bitrate_kbps = doc.value("bitrate_kbps", config.bitrate.bitrate_kbps);
        if (doc.contains("per_mode_bitrate_kbps")) {
            for (const auto& [key, value] : doc["per_mode_bitrate_kbps"].items()) {
                const auto mode = mode_from_string(key);
                if (!mode)
                    throw ConfigError(path + ": unknown mode '" + key + "' in bitrate overrides");
                config.bitrate.per_mode_kbps[*mode] = value.get<double>();
            }
        }
        config.out_dir = doc.value("out", config.out_dir);
        if (doc.contains("seed"))
            config.seed = doc["seed"].get<std::uint64_t>();
        config.paced = doc.value("paced", false);
        config.trace = doc.value("trace", false);
        config.dump_segments = doc.value("dump_segments", false);
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return config;
}

void validate_run_config(const RunConfig& config) {
    const int inputs = (config.input_path ? 1 : 0) + (config.scenario_path ? 1 : 0);
    if (inputs != 1)
        throw ConfigError("exactly one input source required (--input or --scenario)");
    const int detectors = (config.detector_script_path ? 1 : 0) +
                          (config.detector_from_scenario ? 1 : 0) +
                          (config.external_backend ? 1 : 0);
    if (detectors > 1)
        throw ConfigError("at most one detector choice allowed");
    if (detectors == 0 && !config.scenario_path && config.mode == RecordMode::Hybrid)
        throw ConfigError("hybrid runs on real footage need --detector-script");
    if (config.motion.pixel_threshold < 0 || config.motion.pixel_threshold > 255)
        throw ConfigError("pixel_threshold must be in [0, 255]");
    if (config.motion.area_fraction_threshold < 0 || config.motion.area_fraction_threshold > 1)
        throw ConfigError("area_fraction_threshold must be in [0, 1]");
    if (config.motion.blur_radius < 0)
        throw ConfigError("blur_radius must be nonnegative");
    if (config.detector.confidence_threshold < 0 || config.detector.confidence_threshold > 1)
        throw ConfigError("confidence_threshold must be in [0, 1]");
    if (config.detector.iou_threshold < 0 || config.detector.iou_threshold > 1)
        throw ConfigError("iou_threshold must be in [0, 1]");
    if (config.detector.max_detections <= 0)
        throw ConfigError("max_detections must be positive");
    if (config.grace_seconds < 0)
        throw ConfigError("grace_seconds must be nonnegative");
    if (config.bitrate.bitrate_kbps <= 0)
        throw ConfigError("bitrate_kbps must be positive");
}

ordered_json run_config_to_json(const RunConfig& config) {
    ordered_json doc;
    if (config.input_path)
        doc["input"] = *config.input_path;
    if (config.scenario_path)
        doc["scenario"] = *config.scenario_path;
    if (config.detector_script_path)
        doc["detector_script"] = *config.detector_script_path;
    doc["detector_from_scenario"] = config.detector_from_scenario;
    if (config.external_backend) {
        doc["external_backend"] = {{"model", config.external_backend->model_path},
                                   {"input_width", config.external_backend->input_width},
                                   {"input_height", config.external_backend->input_height}};
    }
    doc["pixel_threshold"] = config.motion.pixel_threshold;
    doc["area_fraction_threshold"] = config.motion.area_fraction_threshold;
    doc["blur_radius"] = config.motion.blur_radius;
    doc["confidence_threshold"] = config.detector.confidence_threshold;
    doc["iou_threshold"] = config.detector.iou_threshold;
    doc["max_detections"] = config.detector.max_detections;
    doc["relevant_classes"] = ordered_json::array();
    for (const ObjectClass cls : config.detector.relevant_classes)
        doc["relevant_classes"].push_back(to_string(cls));
    doc["mode"] = to_string(config.mode);
    doc["grace_seconds"] = config.grace_seconds;
    doc["bitrate_kbps"] = config.bitrate.bitrate_kbps;
    if (!config.bitrate.per_mode_kbps.empty()) {
        ordered_json overrides;
        for (const auto& [mode, kbps] : config.bitrate.per_mode_kbps)
            overrides[to_string(mode)] = kbps;
        doc["per_mode_bitrate_kbps"] = overrides;
    }
    doc["out"] = config.out_dir;
    if (config.seed)
        doc["seed"] = *config.seed;
    doc["paced"] = config.paced;
    doc["trace"] = config.trace;
    doc["dump_segments"] = config.dump_segments;
    return doc;
}

RecordingLog cmd_run(const RunConfig& config) {
    validate_run_config(config);
    fs::create_directories(config.out_dir);

    RunConfig resolved = config;
    if (resolved.scenario_path && !resolved.detector_script_path && !resolved.external_backend)
        resolved.detector_from_scenario = true;

    ResolvedInput input = open_input(resolved);
    std::unique_ptr<Detector> detector;
    if (resolved.mode == RecordMode::Hybrid)
        detector = make_detector(resolved, input);

    PipelineOptions options;
    options.trace = resolved.trace;
    if (resolved.dump_segments)
        options.dump_dir = (fs::path(resolved.out_dir) / "segments_y4m").string();

    const RecorderConfig rc = recorder_config_for(resolved, *input.source, resolved.mode);
    PipelineResult result =
        run_pipeline(*input.source, resolved.motion, detector.get(), resolved.detector, rc, options);

    const fs::path out(resolved.out_dir);
    write_json_file((out / "resolved_config.json").string(), run_config_to_json(resolved));
    write_json_file((out / "segments.json").string(),
                    segments_to_json(result.log, resolved.bitrate));
    write_json_file((out / "recording_log.json").string(),
                    log_to_json(result.log, resolved.trace));

    std::map<RecordMode, RecordingLog> logs;
    logs[resolved.mode] = result.log;
    const StorageReport storage = compare_modes(logs, result.log.fps, resolved.bitrate);
    write_json_file((out / "storage.json").string(), storage_to_json(storage));
    write_text_file((out / "storage.txt").string(), storage_table(storage));
    // Wall-clock stage timings are machine-dependent; kept out of the
    // deterministic reports above.
    write_json_file((out / "timing.json").string(), timing_to_json(timing_report(result.timing)));

    std::cout << "mode " << to_string(result.log.mode) << ": recorded "
              << result.log.recorded_frame_count << "/" << result.log.total_frames_processed
              << " frames in " << result.log.segments.size() << " segment(s)\n";
    return result.log;
}

StorageReport cmd_simulate(const RunConfig& config, const std::vector<RecordMode>& modes) {
    validate_run_config(config);
    if (!config.scenario_path)
        throw ConfigError("simulate requires --scenario");
    if (modes.empty())
        throw ConfigError("simulate requires at least one mode");
    fs::create_directories(config.out_dir);

    RunConfig resolved = config;
    if (!resolved.detector_script_path && !resolved.external_backend)
        resolved.detector_from_scenario = true;

    ResolvedInput input = open_input(resolved);

    std::map<RecordMode, RecordingLog> logs;
    StageSamples timing;
    for (const RecordMode mode : modes) {
        // Fresh stream per mode: generation is seeded, so every mode sees
        // bit-identical frames.
        std::unique_ptr<FrameSource> stream = input.scenario->make_stream();
        if (resolved.paced)
            stream = std::make_unique<PacedSource>(std::move(stream));
        std::unique_ptr<Detector> detector;
        if (mode == RecordMode::Hybrid)
            detector = make_detector(resolved, input);

        PipelineOptions options;
        options.trace = resolved.trace;
        if (resolved.dump_segments)
            options.dump_dir =
                (fs::path(resolved.out_dir) / (std::string("segments_y4m_") + to_string(mode)))
                    .string();

        const RecorderConfig rc = recorder_config_for(resolved, *stream, mode);
        PipelineResult result =
            run_pipeline(*stream, resolved.motion, detector.get(), resolved.detector, rc, options);
        if (mode == RecordMode::Hybrid)
            timing = std::move(result.timing);
        logs[mode] = std::move(result.log);
    }

    bool subset_checked = false;
    if (logs.count(RecordMode::Hybrid) && logs.count(RecordMode::MotionOnly)) {
        check_subset(logs[RecordMode::Hybrid], logs[RecordMode::MotionOnly],
                     "hybrid not within motion-only");
        subset_checked = true;
    }
    if (logs.count(RecordMode::MotionOnly) && logs.count(RecordMode::Continuous)) {
        check_subset(logs[RecordMode::MotionOnly], logs[RecordMode::Continuous],
                     "motion-only not within continuous");
        subset_checked = true;
    }
    if (logs.count(RecordMode::Hybrid) && logs.count(RecordMode::Continuous)) {
        check_subset(logs[RecordMode::Hybrid], logs[RecordMode::Continuous],
                     "hybrid not within continuous");
        subset_checked = true;
    }

    const fs::path out(resolved.out_dir);
    write_json_file((out / "resolved_config.json").string(), run_config_to_json(resolved));
    for (const auto& [mode, log] : logs) {
        const std::string suffix = to_string(mode);
        write_json_file((out / ("recording_log_" + suffix + ".json")).string(),
                        log_to_json(log, resolved.trace));
        write_json_file((out / ("segments_" + suffix + ".json")).string(),
                        segments_to_json(log, resolved.bitrate));
    }

    StorageReport report = compare_modes(logs, input.scenario->spec.fps, resolved.bitrate);
    ordered_json report_doc = storage_to_json(report);
    report_doc["subset_property_verified"] = subset_checked;
    write_json_file((out / "storage_report.json").string(), report_doc);
    write_text_file((out / "storage_report.txt").string(), storage_table(report));
    write_json_file((out / "timing.json").string(), timing_to_json(timing_report(timing)));

    std::cout << storage_table(report);
    return report;
}

MetricsReport cmd_eval(const EvalPaths& paths, const EvalConfig& config) {
    fs::create_directories(paths.out_dir);
    const DetectionsByImage preds = script_to_dataset(load_detector_script(paths.predictions));
    const DetectionsByImage gts = script_to_dataset(load_detector_script(paths.ground_truth));

    const MetricsReport metrics = map_report(preds, gts, config);
    const ConfusionMatrix confusion = confusion_matrix(preds, gts, config);

    const fs::path out(paths.out_dir);
    ordered_json resolved;
    resolved["predictions"] = paths.predictions;
    resolved["ground_truth"] = paths.ground_truth;
    resolved["confidence_threshold"] = config.confidence_threshold;
    resolved["iou_threshold"] = config.iou_threshold;
    resolved["iou_range"] = config.iou_range;
    resolved["max_detections"] = config.max_detections;
    resolved["interpolation"] =
        config.interpolation == Interpolation::AllPoint ? "allpoint" : "grid101";
    write_json_file((out / "resolved_config.json").string(), resolved);
    write_json_file((out / "metrics.json").string(), metrics_to_json(metrics));
    write_text_file((out / "metrics.txt").string(), metrics_table(metrics));
    write_json_file((out / "confusion.json").string(), confusion_to_json(confusion));
    write_text_file((out / "confusion.txt").string(), confusion_table(confusion));

    std::cout << metrics_table(metrics);
    return metrics;
}

} // namespace actigate
