#include "actigate/frame.hpp"

namespace actigate {

LumaFrame to_luma(const Frame& frame) {
    if (frame.pixels.size() != frame.expected_size())
        throw InvariantError("frame pixel buffer size does not match geometry");
    LumaFrame out;
    out.index = frame.index;
    out.timestamp = frame.timestamp;
    out.width = frame.width;
    out.height = frame.height;
    const std::size_t n = static_cast<std::size_t>(frame.width) * frame.height;
    out.y.resize(n);
    if (frame.channels == 1) {
        out.y = frame.pixels;
        return out;
    }
    if (frame.channels != 3)
        throw InputError("to_luma: unsupported channel count " + std::to_string(frame.channels));
    // Integer BT.601: Y = round(0.299 R + 0.587 G + 0.114 B), scaled by 1000.
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t r = frame.pixels[i * 3];
        const std::uint32_t g = frame.pixels[i * 3 + 1];
        const std::uint32_t b = frame.pixels[i * 3 + 2];
        const std::uint32_t y = (299 * r + 587 * g + 114 * b + 500) / 1000;
        out.y[i] = static_cast<std::uint8_t>(y > 255 ? 255 : y);
    }
    return out;
}

} // namespace actigate
