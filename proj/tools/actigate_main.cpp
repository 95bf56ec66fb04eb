#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "actigate/runner.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitInput = 3;
constexpr int kExitInternal = 4;

struct CommonFlags {
    std::string config_path;
    std::string input, scenario, detector_script, mode_name, classes, out;
    double grace = -1, pixel_threshold = -1, area_threshold = -1, conf = -1, iou = -1,
           bitrate = -1;
    int max_det = -1, blur = -1;
    std::int64_t seed = -1;
    bool paced = false, trace = false, dump_segments = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON config file; flags override its values");
        cmd->add_option("--input", input, "y4m file or image-sequence manifest");
        cmd->add_option("--scenario", scenario, "synthetic scenario spec (JSON)");
        cmd->add_option("--detector-script", detector_script, "scripted detector file (JSONL)");
        cmd->add_option("--mode", mode_name, "continuous | motion | hybrid");
        cmd->add_option("--grace", grace, "grace period in seconds");
        cmd->add_option("--pixel-threshold", pixel_threshold, "motion pixel delta threshold");
        cmd->add_option("--area-threshold", area_threshold, "changed-area fraction threshold");
        cmd->add_option("--blur", blur, "box blur radius for motion detection");
        cmd->add_option("--conf", conf, "detector gating confidence threshold");
        cmd->add_option("--iou", iou, "NMS IoU threshold");
        cmd->add_option("--max-detections", max_det, "cap on detections per frame");
        cmd->add_option("--classes", classes, "comma-separated relevant classes");
        cmd->add_option("--bitrate-kbps", bitrate, "storage model bitrate");
        cmd->add_option("--seed", seed, "overrides the scenario seed");
        cmd->add_option("--out", out, "output directory");
        cmd->add_flag("--paced", paced, "pace frames at fps (live emulation)");
        cmd->add_flag("--trace", trace, "record the per-frame decision trace");
        cmd->add_flag("--dump-segments", dump_segments, "re-emit written frames as Y4M");
    }

    actigate::RunConfig resolve() const {
        actigate::RunConfig config;
        if (!config_path.empty())
            config = actigate::load_run_config(config_path);
        if (!input.empty())
            config.input_path = input;
        if (!scenario.empty())
            config.scenario_path = scenario;
        if (!detector_script.empty())
            config.detector_script_path = detector_script;
        if (!mode_name.empty()) {
            const auto mode = actigate::mode_from_string(mode_name);
            if (!mode)
                throw actigate::ConfigError("unknown mode '" + mode_name + "'");
            config.mode = *mode;
        }
        if (grace >= 0)
            config.grace_seconds = grace;
        if (pixel_threshold >= 0)
            config.motion.pixel_threshold = static_cast<int>(pixel_threshold);
        if (area_threshold >= 0)
            config.motion.area_fraction_threshold = area_threshold;
        if (blur >= 0)
            config.motion.blur_radius = blur;
        if (conf >= 0)
            config.detector.confidence_threshold = conf;
        if (iou >= 0)
            config.detector.iou_threshold = iou;
        if (max_det >= 0)
            config.detector.max_detections = max_det;
        if (!classes.empty()) {
            config.detector.relevant_classes.clear();
            std::string rest = classes;
            while (!rest.empty()) {
                const auto comma = rest.find(',');
                const std::string name = rest.substr(0, comma);
                const auto cls = actigate::class_from_string(name);
                if (!cls)
                    throw actigate::ConfigError("unknown class '" + name + "'");
                config.detector.relevant_classes.insert(*cls);
                rest = comma == std::string::npos ? "" : rest.substr(comma + 1);
            }
        }
        if (bitrate >= 0)
            config.bitrate.bitrate_kbps = bitrate;
        if (seed >= 0)
            config.seed = static_cast<std::uint64_t>(seed);
        if (!out.empty())
            config.out_dir = out;
        config.paced |= paced;
        config.trace |= trace;
        config.dump_segments |= dump_segments;
        return config;
    }
};

std::vector<actigate::RecordMode> parse_modes(const std::string& csv) {
    std::vector<actigate::RecordMode> modes;
    std::string rest = csv;
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        const std::string name = rest.substr(0, comma);
        const auto mode = actigate::mode_from_string(name);
        if (!mode)
            throw actigate::ConfigError("unknown mode '" + name + "'");
        modes.push_back(*mode);
        rest = comma == std::string::npos ? "" : rest.substr(comma + 1);
    }
    return modes;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"activity-gated surveillance video recording engine"};
    app.require_subcommand(1);

    CommonFlags run_flags;
    CLI::App* run_cmd = app.add_subcommand("run", "record one stream with the configured gating");
    run_flags.attach(run_cmd);

    CommonFlags sim_flags;
    std::string modes_csv = "continuous,motion,hybrid";
    CLI::App* sim_cmd =
        app.add_subcommand("simulate", "run several modes over one generated scenario");
    sim_flags.attach(sim_cmd);
    sim_cmd->add_option("--modes", modes_csv, "comma-separated modes to compare");

    std::string pred_path, gt_path, eval_out = "out", interp = "grid101";
    double eval_conf = 0.001, eval_iou = 0.5;
    int eval_max_det = 300;
    CLI::App* eval_cmd = app.add_subcommand("eval", "detection metrics from prediction/gt files");
    eval_cmd->add_option("--pred", pred_path, "predictions file (JSONL)")->required();
    eval_cmd->add_option("--gt", gt_path, "ground-truth file (JSONL)")->required();
    eval_cmd->add_option("--conf", eval_conf, "confidence threshold for the PR sweep");
    eval_cmd->add_option("--iou", eval_iou, "matching IoU threshold");
    eval_cmd->add_option("--max-detections", eval_max_det, "cap on detections per image");
    eval_cmd->add_option("--interp", interp, "allpoint | grid101");
    eval_cmd->add_option("--out", eval_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            actigate::cmd_run(run_flags.resolve());
        } else if (sim_cmd->parsed()) {
            actigate::cmd_simulate(sim_flags.resolve(), parse_modes(modes_csv));
        } else if (eval_cmd->parsed()) {
            actigate::EvalConfig config;
            config.confidence_threshold = eval_conf;
            config.iou_threshold = eval_iou;
            config.max_detections = eval_max_det;
            if (interp == "allpoint")
                config.interpolation = actigate::Interpolation::AllPoint;
            else if (interp == "grid101")
                config.interpolation = actigate::Interpolation::Grid101;
            else
                throw actigate::ConfigError("unknown interpolation '" + interp + "'");
            actigate::cmd_eval({pred_path, gt_path, eval_out}, config);
        }
    } catch (const actigate::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const actigate::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return 0;
}
