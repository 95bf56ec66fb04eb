#include "actigate/motion.hpp"

#include <cstdlib>

namespace actigate {

LumaFrame box_blur(const LumaFrame& frame, int radius) {
    if (radius <= 0)
        return frame;
    const int w = frame.width;
    const int h = frame.height;
    LumaFrame out = frame;

    // Two-pass separable sum with replicate borders, then rounded divide.
    std::vector<std::uint32_t> row_sum(static_cast<std::size_t>(w) * h);
    for (int yy = 0; yy < h; ++yy) {
        for (int x = 0; x < w; ++x) {
            std::uint32_t s = 0;
            for (int dx = -radius; dx <= radius; ++dx) {
                const int xi = std::clamp(x + dx, 0, w - 1);
                s += frame.at(xi, yy);
            }
            row_sum[static_cast<std::size_t>(yy) * w + x] = s;
        }
    }
    const std::uint32_t count =
        static_cast<std::uint32_t>(2 * radius + 1) * static_cast<std::uint32_t>(2 * radius + 1);
    for (int yy = 0; yy < h; ++yy) {
        for (int x = 0; x < w; ++x) {
            std::uint32_t s = 0;
            for (int dy = -radius; dy <= radius; ++dy) {
                const int yi = std::clamp(yy + dy, 0, h - 1);
                s += row_sum[static_cast<std::size_t>(yi) * w + x];
            }
            out.y[static_cast<std::size_t>(yy) * w + x] =
                static_cast<std::uint8_t>((s + count / 2) / count);
        }
    }
    return out;
}

DiffMask frame_diff(const LumaFrame& prev, const LumaFrame& curr, int pixel_threshold,
                    int blur_radius) {
    if (prev.width != curr.width || prev.height != curr.height)
        throw InvariantError("frame_diff: dimension mismatch");

    const LumaFrame a = box_blur(prev, blur_radius);
    const LumaFrame b = box_blur(curr, blur_radius);

    DiffMask result;
    result.width = curr.width;
    result.height = curr.height;
    result.mask.resize(a.y.size());
    std::size_t changed = 0;
    for (std::size_t i = 0; i < a.y.size(); ++i) {
        const int delta = std::abs(static_cast<int>(b.y[i]) - static_cast<int>(a.y[i]));
        const bool hit = delta > pixel_threshold;
        result.mask[i] = hit ? 1 : 0;
        changed += hit ? 1 : 0;
    }
    result.changed_fraction =
        a.y.empty() ? 0.0 : static_cast<double>(changed) / static_cast<double>(a.y.size());
    return result;
}

MotionResult detect_motion(const LumaFrame& prev, const LumaFrame& curr,
                           const MotionConfig& config) {
    const DiffMask diff =
        frame_diff(prev, curr, config.pixel_threshold, config.blur_radius);

    MotionResult result;
    result.changed_fraction = diff.changed_fraction;
    result.motion = diff.changed_fraction >= config.area_fraction_threshold;

    if (diff.changed_fraction > 0.0) {
        int min_x = diff.width, min_y = diff.height, max_x = -1, max_y = -1;
        for (int yy = 0; yy < diff.height; ++yy) {
            for (int x = 0; x < diff.width; ++x) {
                if (diff.mask[static_cast<std::size_t>(yy) * diff.width + x]) {
                    min_x = std::min(min_x, x);
                    min_y = std::min(min_y, yy);
                    max_x = std::max(max_x, x);
                    max_y = std::max(max_y, yy);
                }
            }
        }
        result.changed_bbox = BBox{static_cast<double>(min_x), static_cast<double>(min_y),
                                   static_cast<double>(max_x - min_x + 1),
                                   static_cast<double>(max_y - min_y + 1)};
    }
    return result;
}

} // namespace actigate
