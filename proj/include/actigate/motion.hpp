#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "actigate/bbox.hpp"
#include "actigate/frame.hpp"

namespace actigate {

struct MotionConfig {
    int pixel_threshold = 25;             // 8-bit intensity delta
    double area_fraction_threshold = 0.005; // fraction of changed pixels
    int blur_radius = 1;                  // box blur; 0 disables
};

struct MotionResult {
    bool motion = false;
    double changed_fraction = 0.0;
    std::optional<BBox> changed_bbox; // tight box around changed pixels
};

struct DiffMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> mask; // 1 where |curr - prev| > threshold
    double changed_fraction = 0.0;
};

// Box blur with replicate borders; means are rounded half-up so results are
// identical across platforms. radius 0 returns the input unchanged.
LumaFrame box_blur(const LumaFrame& frame, int radius);

// Absolute-difference mask of two equally sized luma frames, optionally
// blurring both inputs first.
DiffMask frame_diff(const LumaFrame& prev, const LumaFrame& curr, int pixel_threshold,
                    int blur_radius = 0);

MotionResult detect_motion(const LumaFrame& prev, const LumaFrame& curr,
                           const MotionConfig& config);

} // namespace actigate
