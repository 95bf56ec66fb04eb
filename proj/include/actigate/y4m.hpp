#pragma once

#include <fstream>
#include <memory>
#include <string>

#include "actigate/frame.hpp"

namespace actigate {

// YUV4MPEG2 ingestion. Only the 4:2:0 family and mono layouts are handled;
// chroma planes are skipped because the pipeline consumes luma only.
class Y4mReader final : public FrameSource {
  public:
    explicit Y4mReader(const std::string& path);

    const StreamInfo& info() const override { return info_; }
    std::optional<Frame> next() override;

  private:
    std::ifstream in_;
    std::string path_;
    StreamInfo info_;
    std::size_t luma_bytes_ = 0;
    std::size_t chroma_bytes_ = 0; // total for both chroma planes; 0 for mono
    std::int64_t index_ = 0;
};

// Writes mono or 4:2:0 Y4M from luma frames (4:2:0 gets neutral chroma).
class Y4mWriter {
  public:
    enum class Colorspace { Mono, C420 };

    Y4mWriter(const std::string& path, int width, int height, Rational fps,
              Colorspace cs = Colorspace::Mono);

    void write(const LumaFrame& frame);
    void close();

  private:
    std::ofstream out_;
    std::string path_;
    int width_;
    int height_;
    Colorspace cs_;
};

std::unique_ptr<FrameSource> open_y4m(const std::string& path);

} // namespace actigate
