#include "actigate/image_seq.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace actigate {

namespace fs = std::filesystem;

namespace {

int read_pnm_number(std::istream& in, const std::string& path) {
    // Skips whitespace and '#' comment lines between header fields.
    int c = in.get();
    while (c != EOF && (std::isspace(c) || c == '#')) {
        if (c == '#') {
            while (c != EOF && c != '\n')
                c = in.get();
        }
        c = in.get();
    }
    if (c == EOF || !std::isdigit(c))
        throw InputError(path + ": malformed pnm header");
    int value = 0;
    while (c != EOF && std::isdigit(c)) {
        value = value * 10 + (c - '0');
        c = in.get();
    }
    return value;
}

Rational fps_from_json(const nlohmann::json& v) {
    if (v.is_string())
        return parse_rational(v.get<std::string>());
    if (v.is_number_integer())
        return Rational(v.get<std::int64_t>(), 1);
    if (v.is_number_float())
        return Rational::from_double(v.get<double>());
    if (v.is_array() && v.size() == 2)
        return Rational(v[0].get<std::int64_t>(), v[1].get<std::int64_t>());
    throw InputError("manifest fps must be a number, \"num/den\" string, or [num, den]");
}

class ImageSequenceSource final : public FrameSource {
  public:
    ImageSequenceSource(StreamInfo info, std::vector<std::string> paths)
        : info_(std::move(info)), paths_(std::move(paths)) {}

    const StreamInfo& info() const override { return info_; }

    std::optional<Frame> next() override {
        if (pos_ >= paths_.size())
            return std::nullopt;
        Frame frame = load_pnm(paths_[pos_]);
        frame.index = static_cast<std::int64_t>(pos_);
        frame.timestamp = frame_timestamp(frame.index, info_.fps);
        if (pos_ == 0) {
            info_.width = frame.width;
            info_.height = frame.height;
        } else if (frame.width != info_.width || frame.height != info_.height) {
            throw InputError(paths_[pos_] + ": image dimensions " + std::to_string(frame.width) +
                             "x" + std::to_string(frame.height) + " do not match sequence " +
                             std::to_string(info_.width) + "x" + std::to_string(info_.height));
        }
        ++pos_;
        return frame;
    }

  private:
    StreamInfo info_;
    std::vector<std::string> paths_;
    std::size_t pos_ = 0;
};

} // namespace

Frame load_pnm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError(path + ": cannot open image");
    char m0 = 0, m1 = 0;
    in.get(m0);
    in.get(m1);
    int channels = 0;
    if (m0 == 'P' && m1 == '6')
        channels = 3;
    else if (m0 == 'P' && m1 == '5')
        channels = 1;
    else
        throw InputError(path + ": unsupported image format (want binary P5/P6 pnm)");

    Frame frame;
    frame.channels = channels;
    frame.width = read_pnm_number(in, path);
    frame.height = read_pnm_number(in, path);
    const int maxval = read_pnm_number(in, path);
    if (maxval != 255)
        throw InputError(path + ": pnm maxval must be 255");
    if (frame.width <= 0 || frame.height <= 0)
        throw InputError(path + ": non-positive image dimensions");

    frame.pixels.resize(frame.expected_size());
    in.read(reinterpret_cast<char*>(frame.pixels.data()),
            static_cast<std::streamsize>(frame.pixels.size()));
    if (static_cast<std::size_t>(in.gcount()) != frame.pixels.size())
        throw InputError(path + ": truncated image payload");
    return frame;
}

void save_pnm(const std::string& path, const Frame& frame) {
    if (frame.channels != 1 && frame.channels != 3)
        throw InvariantError("save_pnm: unsupported channel count");
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw InputError(path + ": cannot open image for writing");
    out << (frame.channels == 3 ? "P6" : "P5") << "\n"
        << frame.width << " " << frame.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(frame.pixels.data()),
              static_cast<std::streamsize>(frame.pixels.size()));
    if (!out)
        throw InputError(path + ": write failure");
}

std::unique_ptr<FrameSource> open_image_sequence(const std::string& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in)
        throw InputError(manifest_path + ": cannot open manifest");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(manifest_path + ": " + e.what());
    }
    if (!doc.contains("fps"))
        throw InputError(manifest_path + ": manifest missing 'fps'");

    StreamInfo info;
    info.fps = fps_from_json(doc["fps"]);
    if (info.fps.num <= 0)
        throw InputError(manifest_path + ": manifest fps must be positive");

    std::vector<std::string> paths;
    const fs::path base = fs::path(manifest_path).parent_path();
    for (const auto& entry : doc.value("images", nlohmann::json::array())) {
        const fs::path p(entry.get<std::string>());
        paths.push_back(p.is_absolute() ? p.string() : (base / p).string());
    }
    info.frame_count = static_cast<std::int64_t>(paths.size());
    return std::make_unique<ImageSequenceSource>(info, std::move(paths));
}

} // namespace actigate
