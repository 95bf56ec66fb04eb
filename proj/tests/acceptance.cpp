// Acceptance suite: runs every release criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exits nonzero if any fail.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "actigate/eval.hpp"
#include "actigate/runner.hpp"
#include "actigate/script.hpp"
#include "actigate/storage.hpp"
#include "actigate/synth.hpp"

using namespace actigate;
namespace fs = std::filesystem;

namespace {

struct CheckFailure {
    std::string message;
};

void require(bool ok, const std::string& message) {
    if (!ok)
        throw CheckFailure{message};
}

class Harness {
  public:
    void run(const std::string& name, const std::function<void()>& body) {
        const auto t0 = std::chrono::steady_clock::now();
        try {
            body();
            const double s =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            std::printf("[PASS] %s (%.1fs)\n", name.c_str(), s);
        } catch (const CheckFailure& f) {
            std::printf("[FAIL] %s: %s\n", name.c_str(), f.message.c_str());
            ++failures_;
        } catch (const std::exception& e) {
            std::printf("[FAIL] %s: unexpected error: %s\n", name.c_str(), e.what());
            ++failures_;
        }
        std::fflush(stdout);
    }

    int finish() const {
        if (failures_ == 0)
            std::printf("acceptance: all criteria passed\n");
        else
            std::printf("acceptance: %d criteria FAILED\n", failures_);
        return failures_ == 0 ? 0 : 1;
    }

  private:
    int failures_ = 0;
};

fs::path scratch_dir(const std::string& tag) {
    const fs::path p = fs::temp_directory_path() / ("actigate_accept_" + tag);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Drives the recorder the way the pipeline does: detector output is gated by
// motion, so the object signal on motionless frames is empty.
std::vector<std::int64_t> drive_recorder(const std::vector<bool>& motion,
                                         const std::vector<bool>& objects, const Rational& fps,
                                         const Rational& grace, RecordMode mode) {
    static const std::vector<Detection> kCar = {{ObjectClass::Car, 1.0, {0, 0, 8, 8}}};
    static const std::vector<Detection> kNone;
    RecorderConfig config;
    config.mode = mode;
    config.grace = grace;
    config.fps = fps;
    RecorderSession session(config);
    for (std::size_t i = 0; i < motion.size(); ++i) {
        const bool gated = motion[i] && objects[i];
        session.push(static_cast<std::int64_t>(i),
                     frame_timestamp(static_cast<std::int64_t>(i), fps), motion[i],
                     gated ? kCar : kNone);
    }
    return session.finish().recorded_indices();
}

// The desk-scale comparison scenario: 10 minutes at 10 fps, wind active on
// 50% of the timeline, relevant objects present on 20%.
ScenarioSpec table_scenario() {
    ScenarioSpec spec;
    spec.duration_seconds = 600;
    spec.fps = Rational(10, 1);
    spec.width = 160;
    spec.height = 120;
    spec.background = 70;
    spec.seed = 20240601;
    spec.wind.enabled = true;
    spec.wind.intensity = 40;
    spec.wind.active_intervals = {{0, 60}, {120, 180}, {240, 300}, {360, 420}, {480, 540}};
    const double starts[] = {70, 190, 310, 430};
    for (int k = 0; k < 4; ++k) {
        ObjectEvent ev;
        ev.class_id = k % 2 ? ObjectClass::Person : ObjectClass::Car;
        ev.enter_time = starts[k];
        ev.exit_time = starts[k] + 30;
        ev.from_x = 4;
        ev.from_y = 20 + 18 * k;
        ev.to_x = 120;
        ev.to_y = 20 + 18 * k;
        ev.width = 24;
        ev.height = 16;
        ev.intensity = 210;
        spec.objects.push_back(ev);
    }
    return spec;
}

struct ScenarioSignals {
    std::vector<bool> motion;  // actual frame-subtraction gate output
    std::vector<bool> objects; // scripted (ground-truth) object presence
};

ScenarioSignals recompute_signals(const Scenario& scenario, const MotionConfig& config) {
    ScenarioSignals signals;
    auto stream = scenario.make_stream();
    std::optional<LumaFrame> prev;
    while (auto frame = stream->next()) {
        LumaFrame luma = to_luma(*frame);
        signals.motion.push_back(prev ? detect_motion(*prev, luma, config).motion : false);
        signals.objects.push_back(scenario.script.at(frame->index) != nullptr);
        prev = std::move(luma);
    }
    return signals;
}

std::vector<Detection> random_dets(std::mt19937_64& rng, std::size_t count) {
    std::vector<Detection> dets;
    for (std::size_t i = 0; i < count; ++i) {
        Detection d;
        d.class_id = (rng() % 2) ? ObjectClass::Person : ObjectClass::Car;
        d.confidence = static_cast<double>(1 + rng() % 99) / 100.0;
        d.bbox = BBox{static_cast<double>(rng() % 12), static_cast<double>(rng() % 12),
                      static_cast<double>(2 + rng() % 8), static_cast<double>(2 + rng() % 8)};
        dets.push_back(d);
    }
    return dets;
}

std::vector<std::size_t> oracle_match_tps(const std::vector<Detection>& preds,
                                          const std::vector<Detection>& gts, double thr,
                                          std::vector<bool>& labels_out) {
    std::vector<std::size_t> order(preds.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return preds[a].confidence > preds[b].confidence;
    });
    std::set<std::size_t> used;
    labels_out.clear();
    for (const std::size_t pi : order) {
        double best = -1.0;
        std::size_t best_gt = SIZE_MAX;
        for (std::size_t gi = 0; gi < gts.size(); ++gi) {
            if (used.count(gi) || gts[gi].class_id != preds[pi].class_id)
                continue;
            const double v = iou(preds[pi].bbox, gts[gi].bbox);
            if (v >= thr && v > best) {
                best = v;
                best_gt = gi;
            }
        }
        if (best_gt != SIZE_MAX)
            used.insert(best_gt);
        labels_out.push_back(best_gt != SIZE_MAX);
    }
    return order;
}

} // namespace

int main() {
    Harness harness;

    harness.run("1. recorder equals timeline oracle on 1000 random timelines", [] {
        std::mt19937_64 rng(0xfeedbeef);
        const Rational fps_choices[] = {{1, 1}, {10, 1}, {30, 1}};
        const Rational graces[] = {{0, 1}, {1, 1}, {5, 1}, {20, 1}};
        int checked = 0;
        for (int trial = 0; trial < 1000; ++trial) {
            const std::size_t len = 1 + rng() % 2000;
            const Rational fps = fps_choices[rng() % 3];
            const Rational grace = graces[rng() % 4];
            const int motion_pct = static_cast<int>(rng() % 101);
            const int object_pct = static_cast<int>(rng() % 101);
            std::vector<bool> motion(len), objects(len);
            for (std::size_t i = 0; i < len; ++i) {
                motion[i] = static_cast<int>(rng() % 100) < motion_pct;
                objects[i] = static_cast<int>(rng() % 100) < object_pct;
            }
            for (const RecordMode mode : {RecordMode::Hybrid, RecordMode::MotionOnly}) {
                const auto machine = drive_recorder(motion, objects, fps, grace, mode);
                const auto oracle = timeline_oracle(motion, objects, fps, grace, mode);
                require(machine == oracle,
                        "mismatch on trial " + std::to_string(trial) + " mode " +
                            to_string(mode));
                ++checked;
            }
        }
        require(checked == 2000, "expected 2000 comparisons");
    });

    harness.run("2. grace boundary: object at t=0 records exactly 20 seconds", [] {
        {
            std::vector<bool> motion(60, false), objects(60, false);
            motion[0] = objects[0] = true;
            const auto got =
                drive_recorder(motion, objects, {1, 1}, {20, 1}, RecordMode::Hybrid);
            std::vector<std::int64_t> expected;
            for (int i = 0; i < 20; ++i)
                expected.push_back(i);
            require(got == expected, "1 fps: expected frames 0..19");
        }
        {
            std::vector<bool> motion(1200, false), objects(1200, false);
            motion[0] = objects[0] = true;
            const auto got =
                drive_recorder(motion, objects, {30, 1}, {20, 1}, RecordMode::Hybrid);
            std::vector<std::int64_t> expected;
            for (int i = 0; i < 600; ++i)
                expected.push_back(i);
            require(got == expected, "30 fps: expected frames 0..599");
        }
    });

    harness.run("3. mode subset: hybrid within motion-only within continuous", [] {
        std::mt19937_64 rng(777);
        for (int trial = 0; trial < 12; ++trial) {
            ScenarioSpec spec;
            spec.duration_seconds = 40;
            spec.fps = Rational(5, 1);
            spec.width = 80;
            spec.height = 60;
            spec.background = 60;
            spec.seed = rng();
            if (rng() % 2) {
                spec.wind.enabled = true;
                spec.wind.intensity = 30 + static_cast<int>(rng() % 30);
                spec.wind.active_intervals = {{0.0, static_cast<double>(5 + rng() % 20)}};
            }
            const int objects = static_cast<int>(rng() % 3);
            for (int k = 0; k < objects; ++k) {
                ObjectEvent ev;
                ev.class_id = (rng() % 2) ? ObjectClass::Person : ObjectClass::Car;
                ev.enter_time = static_cast<double>(rng() % 20);
                ev.exit_time = ev.enter_time + 2 + static_cast<double>(rng() % 15);
                ev.from_x = static_cast<double>(rng() % 60);
                ev.from_y = static_cast<double>(rng() % 40);
                ev.to_x = static_cast<double>(rng() % 60);
                ev.to_y = static_cast<double>(rng() % 40);
                ev.width = 8 + static_cast<int>(rng() % 10);
                ev.height = 8 + static_cast<int>(rng() % 10);
                spec.objects.push_back(ev);
            }
            const Scenario scenario = generate_scenario(spec);

            std::map<RecordMode, std::vector<std::int64_t>> recorded;
            for (const RecordMode mode :
                 {RecordMode::Continuous, RecordMode::MotionOnly, RecordMode::Hybrid}) {
                auto stream = scenario.make_stream();
                ScriptedDetector detector(scenario.script);
                const PipelineResult result =
                    run_pipeline(*stream, MotionConfig{}, &detector, DetectorConfig{},
                                 RecorderConfig{Rational(3, 1), mode, spec.fps});
                recorded[mode] = result.log.recorded_indices();
            }
            const auto& h = recorded[RecordMode::Hybrid];
            const auto& m = recorded[RecordMode::MotionOnly];
            const auto& c = recorded[RecordMode::Continuous];
            require(std::includes(m.begin(), m.end(), h.begin(), h.end()),
                    "hybrid not a subset of motion-only on trial " + std::to_string(trial));
            require(std::includes(c.begin(), c.end(), m.begin(), m.end()),
                    "motion-only not a subset of continuous on trial " + std::to_string(trial));
        }
    });

    harness.run("4. desk-scale storage comparison (wind 50%, objects 20%)", [] {
        const ScenarioSpec spec = table_scenario();
        const Scenario scenario = generate_scenario(spec);
        const MotionConfig motion_config;
        const Rational grace{20, 1};

        std::map<RecordMode, RecordingLog> logs;
        for (const RecordMode mode :
             {RecordMode::Continuous, RecordMode::MotionOnly, RecordMode::Hybrid}) {
            auto stream = scenario.make_stream();
            ScriptedDetector detector(scenario.script);
            logs[mode] = run_pipeline(*stream, motion_config, &detector, DetectorConfig{},
                                      RecorderConfig{grace, mode, spec.fps})
                             .log;
        }

        // Exact expected recorded sets come from the oracle over the actual
        // motion-gate output and the scripted object presence.
        const ScenarioSignals signals = recompute_signals(scenario, motion_config);
        for (const RecordMode mode : {RecordMode::Hybrid, RecordMode::MotionOnly}) {
            const auto expected =
                timeline_oracle(signals.motion, signals.objects, spec.fps, grace, mode);
            require(logs[mode].recorded_indices() == expected,
                    std::string("pipeline diverged from oracle in mode ") + to_string(mode));
        }

        const StorageReport report = compare_modes(logs, spec.fps, BitrateModel{});
        double hybrid_s = 0, motion_s = 0, continuous_s = 0;
        for (const ModeUsage& usage : report.modes) {
            if (usage.mode == RecordMode::Hybrid)
                hybrid_s = usage.duration_seconds;
            if (usage.mode == RecordMode::MotionOnly)
                motion_s = usage.duration_seconds;
            if (usage.mode == RecordMode::Continuous)
                continuous_s = usage.duration_seconds;
        }
        std::printf("       hybrid %.1fs, motion-only %.1fs, continuous %.1fs\n", hybrid_s,
                    motion_s, continuous_s);
        require(continuous_s == 600.0, "continuous must cover the full 10 minutes");
        require(motion_s >= 2.5 * hybrid_s, "motion-only must record >= 2.5x hybrid");
        require(1.0 - hybrid_s / continuous_s >= 0.60,
                "hybrid must cut >= 60% vs continuous");
    });

    harness.run("5. storage arithmetic: 825s fixture exact, linearity exact", [] {
        require(estimate_bytes(825.0, 7703.0) == 794'371'875.0,
                "825 s at 7703 kbps must be 794,371,875 bytes");
        // The published figure for that recording is 769 MB; the constant-
        // bitrate model lands ~3% above it and the gap stays visible in
        // reports rather than being absorbed into the model.
        std::mt19937_64 rng(0x5107);
        for (int trial = 0; trial < 1000; ++trial) {
            const double a = static_cast<double>(rng() % 800000) / 8.0;
            const double b = static_cast<double>(rng() % 800000) / 8.0;
            const double kbps = static_cast<double>(1 + rng() % 20000);
            require(estimate_bytes(a + b, kbps) ==
                        estimate_bytes(a, kbps) + estimate_bytes(b, kbps),
                    "linearity failed at trial " + std::to_string(trial));
        }
    });

    harness.run("6. detection metrics: matcher oracle, AP fixtures, grid bound", [] {
        std::mt19937_64 rng(0x6a6a);
        // (a) greedy matcher vs exhaustive oracle, 500 instances
        for (int trial = 0; trial < 500; ++trial) {
            const auto preds = random_dets(rng, rng() % 7);
            const auto gts = random_dets(rng, rng() % 5);
            const double thr = 0.25 + static_cast<double>(rng() % 50) / 100.0;
            const MatchResult got = match_detections(preds, gts, thr);
            std::vector<bool> labels;
            const auto order = oracle_match_tps(preds, gts, thr, labels);
            require(got.labels.size() == order.size(), "label count mismatch");
            std::int64_t tp = 0;
            for (std::size_t i = 0; i < order.size(); ++i) {
                require(got.labels[i].pred_index == order[i], "order mismatch");
                require(got.labels[i].is_tp == labels[i], "label mismatch");
                tp += labels[i] ? 1 : 0;
            }
            require(got.unmatched_gt == static_cast<std::int64_t>(gts.size()) - tp,
                    "FN count mismatch");
        }
        // (b) hand-computed all-point AP fixture
        const std::vector<Detection> gts = {{ObjectClass::Car, 1.0, {0, 0, 10, 10}},
                                            {ObjectClass::Car, 1.0, {100, 100, 10, 10}}};
        const std::vector<Detection> preds = {{ObjectClass::Car, 0.9, {0, 0, 10, 10}},
                                              {ObjectClass::Car, 0.8, {200, 200, 10, 10}},
                                              {ObjectClass::Car, 0.7, {100, 100, 10, 10}}};
        const double ap = average_precision(preds, gts, 0.5, Interpolation::AllPoint);
        require(std::abs(ap - (0.5 + (2.0 / 3.0) * 0.5)) < 1e-9,
                "3-pred/2-GT fixture must give AP 0.8333...");
        // (c) grid101 within 0.01 of all-point, 200 instances
        for (int trial = 0; trial < 200; ++trial) {
            const auto p = random_dets(rng, rng() % 7);
            const auto g = random_dets(rng, 1 + rng() % 4);
            const double exact = average_precision(p, g, 0.5, Interpolation::AllPoint);
            const double grid = average_precision(p, g, 0.5, Interpolation::Grid101);
            require(std::abs(exact - grid) <= 0.01, "grid101 deviated beyond 0.01");
        }
        // (d) perfect predictions: every metric exactly 1.0
        DetectionsByImage perfect;
        perfect[0] = {{ObjectClass::Car, 1.0, {0, 0, 10, 10}},
                      {ObjectClass::Person, 1.0, {30, 30, 6, 12}}};
        perfect[1] = {{ObjectClass::Person, 1.0, {5, 5, 6, 12}}};
        const MetricsReport report = map_report(perfect, perfect, EvalConfig{});
        require(report.overall.precision == 1.0 && report.overall.recall == 1.0 &&
                    report.overall.map50 == 1.0 && report.overall.map50_95 == 1.0,
                "perfect dataset must score 1.0 everywhere");
        // (e) 87 TP / 13 FP precision fixture
        MatchResult m;
        for (int i = 0; i < 87; ++i)
            m.labels.push_back({static_cast<std::size_t>(i), 0.9, true});
        for (int i = 0; i < 13; ++i)
            m.labels.push_back({static_cast<std::size_t>(87 + i), 0.8, false});
        require(precision_recall(m, 0.25).precision == 0.87,
                "87TP/13FP must give precision 0.870");
        // Reference-only fixture: the published trained-model metrics table
        // is shipped for report formatting, not reproduced by this engine.
        MetricsReport reference;
        reference.per_class = {{ObjectClass::Car, {0.855, 0.83, 0.899, 0.638}},
                               {ObjectClass::Person, {0.884, 0.819, 0.883, 0.478}}};
        reference.overall = {0.869, 0.824, 0.891, 0.558};
        const std::string table = metrics_table(reference);
        require(table.find("0.855") != std::string::npos &&
                    table.find("0.891") != std::string::npos,
                "reference fixture must render in the metrics table");
    });

    harness.run("7. NMS properties on 1000 random detection sets", [] {
        std::mt19937_64 rng(0x0707);
        for (int trial = 0; trial < 1000; ++trial) {
            const auto dets = random_dets(rng, rng() % 12);
            const double thr = static_cast<double>(rng() % 100) / 100.0;
            const int max_det = 1 + static_cast<int>(rng() % 8);
            const auto out = nms(dets, thr, max_det);

            require(out.size() <= static_cast<std::size_t>(max_det), "max_detections violated");
            for (const Detection& d : out) {
                const bool found =
                    std::any_of(dets.begin(), dets.end(), [&](const Detection& s) {
                        return s.confidence == d.confidence && s.class_id == d.class_id &&
                               s.bbox == d.bbox;
                    });
                require(found, "output not a subset of input");
            }
            for (std::size_t i = 0; i < out.size(); ++i)
                for (std::size_t j = i + 1; j < out.size(); ++j)
                    if (out[i].class_id == out[j].class_id)
                        require(iou(out[i].bbox, out[j].bbox) <= thr,
                                "same-class overlap above threshold survived");
            const auto again = nms(out, thr, max_det);
            require(again.size() == out.size(), "nms not idempotent (size)");
            for (std::size_t i = 0; i < out.size(); ++i)
                require(again[i].bbox == out[i].bbox && again[i].confidence == out[i].confidence,
                        "nms not idempotent (content)");
        }
    });

    harness.run("8. motion detector properties on 1000 random 64x64 pairs", [] {
        std::mt19937_64 rng(0x0808);
        for (int trial = 0; trial < 1000; ++trial) {
            LumaFrame a, b;
            a.width = b.width = 64;
            a.height = b.height = 64;
            a.y.resize(64 * 64);
            b.y.resize(64 * 64);
            for (auto& v : a.y)
                v = static_cast<std::uint8_t>(rng() & 0xff);
            for (auto& v : b.y)
                v = static_cast<std::uint8_t>(rng() & 0xff);
            const int t_low = static_cast<int>(rng() % 128);
            const int t_high = t_low + static_cast<int>(rng() % (256 - t_low));
            const int blur = static_cast<int>(rng() % 2);

            const DiffMask ab = frame_diff(a, b, t_low, blur);
            const DiffMask ba = frame_diff(b, a, t_low, blur);
            require(ab.mask == ba.mask, "frame_diff not symmetric");
            require(frame_diff(a, b, t_high, blur).changed_fraction <= ab.changed_fraction,
                    "raising the threshold increased changed_fraction");
            require(ab.changed_fraction >= 0.0 && ab.changed_fraction <= 1.0,
                    "changed_fraction out of [0,1]");
            require(frame_diff(a, a, t_low, blur).changed_fraction == 0.0,
                    "identical frames must have zero diff");
        }
    });

    harness.run("9. pipeline emits the three-stage timing report", [] {
        ScenarioSpec spec;
        spec.duration_seconds = 20;
        spec.fps = Rational(5, 1);
        spec.width = 64;
        spec.height = 48;
        spec.background = 50;
        spec.seed = 3;
        spec.objects.push_back({ObjectClass::Car, 2.0, 12.0, 2, 10, 50, 10, 12, 10, 200});
        const Scenario scenario = generate_scenario(spec);
        auto stream = scenario.make_stream();
        ScriptedDetector detector(scenario.script);
        const PipelineResult result =
            run_pipeline(*stream, MotionConfig{}, &detector, DetectorConfig{},
                         RecorderConfig{Rational(5, 1), RecordMode::Hybrid, spec.fps});
        const TimingReport timing = timing_report(result.timing);
        require(timing.preprocessing.count == 100, "one preprocessing sample per frame");
        require(timing.inference.count > 0, "no inference samples collected");
        require(timing.nms.count == timing.inference.count,
                "NMS must run once per detector invocation");
        const ordered_json doc = timing_to_json(timing);
        require(doc.contains("preprocessing") && doc.contains("inference") &&
                    doc.contains("nms"),
                "timing report must carry the three stages");
        require(doc["inference"]["mean_ms"].is_number(), "means must be present when sampled");
    });

    harness.run("10. simulate is byte-deterministic under a fixed seed", [] {
#ifndef ACTIGATE_CLI_PATH
        require(false, "CLI path not compiled in");
#else
        const fs::path dir = scratch_dir("determinism");
        const ScenarioSpec spec = table_scenario();
        ScenarioSpec small = spec; // trimmed copy keeps the CLI runs quick
        small.duration_seconds = 60;
        small.wind.active_intervals = {{0, 30}};
        small.objects.resize(1);
        small.objects[0].enter_time = 35;
        small.objects[0].exit_time = 50;
        save_scenario((dir / "scene.json").string(), small);

        const std::string base = std::string(ACTIGATE_CLI_PATH) + " simulate --scenario " +
                                 (dir / "scene.json").string() + " --grace 5 --seed 99 --out ";
        require(std::system((base + (dir / "a").string() + " > /dev/null").c_str()) == 0,
                "first simulate run failed");
        require(std::system((base + (dir / "b").string() + " > /dev/null").c_str()) == 0,
                "second simulate run failed");

        int compared = 0;
        for (const auto& entry : fs::directory_iterator(dir / "a")) {
            const std::string name = entry.path().filename().string();
            if (name == "timing.json")
                continue; // wall-clock means are machine-dependent by design
            require(slurp(dir / "a" / name) == slurp(dir / "b" / name),
                    "report differs between runs: " + name);
            ++compared;
        }
        require(compared >= 8, "expected at least 8 comparable report files");
        fs::remove_all(dir);
#endif
    });

    return harness.finish();
}
