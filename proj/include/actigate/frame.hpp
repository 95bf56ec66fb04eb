#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "actigate/error.hpp"
#include "actigate/rational.hpp"

namespace actigate {

// One raster frame flowing through the pipeline. Row-major, 8 bits per
// channel, 3 channels (RGB) or 1 (luma).
struct Frame {
    std::int64_t index = 0;
    Rational timestamp{0, 1}; // seconds, index/fps
    int width = 0;
    int height = 0;
    int channels = 3;
    std::vector<std::uint8_t> pixels;

    std::size_t expected_size() const {
        return static_cast<std::size_t>(width) * height * channels;
    }
};

// Single-channel working representation used by frame subtraction.
struct LumaFrame {
    std::int64_t index = 0;
    Rational timestamp{0, 1};
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> y;

    std::uint8_t at(int x, int yy) const {
        return y[static_cast<std::size_t>(yy) * width + x];
    }
};

struct StreamInfo {
    int width = 0;
    int height = 0;
    Rational fps{30, 1};
    std::optional<std::int64_t> frame_count; // unknown for unbounded streams
};

inline Rational frame_timestamp(std::int64_t index, const Rational& fps) {
    if (fps.num <= 0)
        throw InvariantError("fps must be positive");
    return Rational(index * fps.den, fps.num);
}

// Pull-based frame stream. Single consumer; yielded frames are immutable
// values and may be handed to other threads freely.
class FrameSource {
  public:
    virtual ~FrameSource() = default;
    virtual const StreamInfo& info() const = 0;
    // Returns the next frame, or nullopt at end of stream.
    virtual std::optional<Frame> next() = 0;
};

// In-memory source, mainly for tests and generated content.
class MemorySource final : public FrameSource {
  public:
    MemorySource(StreamInfo info, std::vector<Frame> frames)
        : info_(std::move(info)), frames_(std::move(frames)) {
        info_.frame_count = static_cast<std::int64_t>(frames_.size());
    }

    const StreamInfo& info() const override { return info_; }

    std::optional<Frame> next() override {
        if (pos_ >= frames_.size())
            return std::nullopt;
        return frames_[pos_++];
    }

  private:
    StreamInfo info_;
    std::vector<Frame> frames_;
    std::size_t pos_ = 0;
};

// BT.601 integer-rounded luma conversion. 1-channel input passes through.
LumaFrame to_luma(const Frame& frame);

} // namespace actigate
