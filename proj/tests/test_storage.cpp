#include <doctest.h>

#include <random>

#include "actigate/storage.hpp"

using namespace actigate;

namespace {

RecordingLog log_with(std::int64_t recorded, std::int64_t total, RecordMode mode, Rational fps) {
    RecordingLog log;
    log.mode = mode;
    log.fps = fps;
    log.recorded_frame_count = recorded;
    log.total_frames_processed = total;
    if (recorded > 0)
        log.segments.push_back({0, recorded - 1, Rational(0, 1),
                                Rational((recorded - 1) * fps.den, fps.num), recorded});
    return log;
}

} // namespace

TEST_CASE("estimate_bytes fixtures") {
    CHECK(estimate_bytes(0.0, 7703.0) == 0.0);
    CHECK(estimate_bytes(60.0, 8000.0) == 60'000'000.0);
    // 13m45s at the reference bitrate; the published size for that recording
    // was 769 MB, about 3% below this constant-bitrate figure.
    CHECK(estimate_bytes(825.0, 7703.0) == 794'371'875.0);
    CHECK_THROWS_AS(estimate_bytes(-1.0, 7703.0), InvariantError);
}

TEST_CASE("estimate_bytes is exactly linear on dyadic durations") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 1000; ++trial) {
        // Durations on a 1/8-second grid: every product below is an exact
        // integer in double precision, so linearity must hold bit-for-bit.
        const double a = static_cast<double>(rng() % 800000) / 8.0;
        const double b = static_cast<double>(rng() % 800000) / 8.0;
        const double kbps = static_cast<double>(1 + rng() % 20000);
        CHECK(estimate_bytes(a + b, kbps) == estimate_bytes(a, kbps) + estimate_bytes(b, kbps));
    }
}

TEST_CASE("compare_modes") {
    const Rational fps{10, 1};
    BitrateModel model;

    SUBCASE("durations are recorded_frames/fps and reductions follow") {
        std::map<RecordMode, RecordingLog> logs;
        logs[RecordMode::Continuous] = log_with(36000, 36000, RecordMode::Continuous, fps);
        logs[RecordMode::MotionOnly] = log_with(20000, 36000, RecordMode::MotionOnly, fps);
        logs[RecordMode::Hybrid] = log_with(8250, 36000, RecordMode::Hybrid, fps);

        const StorageReport report = compare_modes(logs, fps, model);
        REQUIRE(report.modes.size() == 3);
        CHECK(report.modes[0].mode == RecordMode::Continuous);
        CHECK(report.modes[0].duration_seconds == 3600.0);
        CHECK(report.modes[2].recorded_duration == Rational(825, 1));
        CHECK(report.modes[2].bytes == 794'371'875.0);

        REQUIRE(report.reductions.size() == 3);
        bool saw_hybrid_vs_continuous = false;
        for (const Reduction& r : report.reductions) {
            if (r.mode == RecordMode::Hybrid && r.baseline == RecordMode::Continuous) {
                saw_hybrid_vs_continuous = true;
                CHECK(*r.duration_reduction == doctest::Approx(1.0 - 825.0 / 3600.0));
                CHECK(*r.bytes_reduction == doctest::Approx(1.0 - 825.0 / 3600.0));
            }
        }
        CHECK(saw_hybrid_vs_continuous);
    }
    SUBCASE("identical logs reduce by zero") {
        std::map<RecordMode, RecordingLog> logs;
        logs[RecordMode::MotionOnly] = log_with(500, 1000, RecordMode::MotionOnly, fps);
        logs[RecordMode::Hybrid] = log_with(500, 1000, RecordMode::Hybrid, fps);
        const StorageReport report = compare_modes(logs, fps, model);
        REQUIRE(report.reductions.size() == 1);
        CHECK(*report.reductions[0].duration_reduction == 0.0);
    }
    SUBCASE("mismatched frame totals are rejected") {
        std::map<RecordMode, RecordingLog> logs;
        logs[RecordMode::Continuous] = log_with(100, 100, RecordMode::Continuous, fps);
        logs[RecordMode::Hybrid] = log_with(50, 99, RecordMode::Hybrid, fps);
        CHECK_THROWS_AS(compare_modes(logs, fps, model), InvariantError);
    }
    SUBCASE("single mode: no ratios") {
        std::map<RecordMode, RecordingLog> logs;
        logs[RecordMode::Hybrid] = log_with(50, 100, RecordMode::Hybrid, fps);
        const StorageReport report = compare_modes(logs, fps, model);
        CHECK(report.modes.size() == 1);
        CHECK(report.reductions.empty());
    }
    SUBCASE("zero-duration baseline leaves the ratio absent") {
        std::map<RecordMode, RecordingLog> logs;
        logs[RecordMode::MotionOnly] = log_with(0, 100, RecordMode::MotionOnly, fps);
        logs[RecordMode::Hybrid] = log_with(0, 100, RecordMode::Hybrid, fps);
        const StorageReport report = compare_modes(logs, fps, model);
        REQUIRE(report.reductions.size() == 1);
        CHECK_FALSE(report.reductions[0].duration_reduction.has_value());
    }
    SUBCASE("per-mode bitrate override") {
        BitrateModel mixed;
        mixed.bitrate_kbps = 7703.0;
        mixed.per_mode_kbps[RecordMode::Continuous] = 4260.0;
        std::map<RecordMode, RecordingLog> logs;
        logs[RecordMode::Continuous] = log_with(36000, 36000, RecordMode::Continuous, fps);
        logs[RecordMode::Hybrid] = log_with(8250, 36000, RecordMode::Hybrid, fps);
        const StorageReport report = compare_modes(logs, fps, mixed);
        CHECK(report.modes[0].bytes == doctest::Approx(3600.0 * 4260.0 * 125.0));
        CHECK(report.modes[1].bytes == 794'371'875.0);
    }
}

TEST_CASE("storage respects the mode-subset ordering") {
    std::mt19937_64 rng(3);
    const Rational fps{30, 1};
    for (int trial = 0; trial < 100; ++trial) {
        const std::int64_t total = 1000 + static_cast<std::int64_t>(rng() % 9000);
        const std::int64_t cont = total;
        const std::int64_t motion = static_cast<std::int64_t>(rng() % (total + 1));
        const std::int64_t hybrid = static_cast<std::int64_t>(rng() % (motion + 1));
        std::map<RecordMode, RecordingLog> logs;
        logs[RecordMode::Continuous] = log_with(cont, total, RecordMode::Continuous, fps);
        logs[RecordMode::MotionOnly] = log_with(motion, total, RecordMode::MotionOnly, fps);
        logs[RecordMode::Hybrid] = log_with(hybrid, total, RecordMode::Hybrid, fps);
        const StorageReport report = compare_modes(logs, fps, BitrateModel{});
        CHECK(report.modes[2].bytes <= report.modes[1].bytes);
        CHECK(report.modes[1].bytes <= report.modes[0].bytes);
        for (const Reduction& r : report.reductions) {
            if (r.duration_reduction) {
                CHECK(*r.duration_reduction >= 0.0);
                CHECK(*r.duration_reduction <= 1.0);
            }
        }
    }
}
