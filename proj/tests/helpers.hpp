#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "actigate/detect.hpp"
#include "actigate/frame.hpp"

namespace testutil {

inline actigate::LumaFrame make_luma(int w, int h, std::uint8_t fill, std::int64_t index = 0,
                                     actigate::Rational fps = {30, 1}) {
    actigate::LumaFrame f;
    f.index = index;
    f.timestamp = actigate::frame_timestamp(index, fps);
    f.width = w;
    f.height = h;
    f.y.assign(static_cast<std::size_t>(w) * h, fill);
    return f;
}

inline void set_px(actigate::LumaFrame& f, int x, int y, std::uint8_t v) {
    f.y[static_cast<std::size_t>(y) * f.width + x] = v;
}

inline actigate::Frame make_rgb(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    actigate::Frame f;
    f.width = w;
    f.height = h;
    f.channels = 3;
    f.pixels.resize(f.expected_size());
    for (std::size_t i = 0; i < f.pixels.size(); i += 3) {
        f.pixels[i] = r;
        f.pixels[i + 1] = g;
        f.pixels[i + 2] = b;
    }
    return f;
}

// Scratch directory under the build tree, removed on destruction.
class TempDir {
  public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("actigate_" + tag + "_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

  private:
    std::filesystem::path path_;
};

// Independent IoU used by test oracles: integer-grid cell counting.
inline double grid_iou(int ax, int ay, int aw, int ah, int bx, int by, int bw, int bh) {
    long inter = 0, a_only = 0, b_only = 0;
    const int x0 = std::min(ax, bx), x1 = std::max(ax + aw, bx + bw);
    const int y0 = std::min(ay, by), y1 = std::max(ay + ah, by + bh);
    for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
            const bool in_a = x >= ax && x < ax + aw && y >= ay && y < ay + ah;
            const bool in_b = x >= bx && x < bx + bw && y >= by && y < by + bh;
            inter += (in_a && in_b) ? 1 : 0;
            a_only += (in_a && !in_b) ? 1 : 0;
            b_only += (!in_a && in_b) ? 1 : 0;
        }
    }
    const long uni = inter + a_only + b_only;
    return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

} // namespace testutil
