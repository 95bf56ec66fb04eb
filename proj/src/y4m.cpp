#include "actigate/y4m.hpp"

#include <sstream>

namespace actigate {

namespace {

std::int64_t parse_int_token(const std::string& token, const std::string& path) {
    try {
        std::size_t used = 0;
        const std::int64_t v = std::stoll(token.substr(1), &used);
        if (used != token.size() - 1)
            throw std::invalid_argument(token);
        return v;
    } catch (const std::exception&) {
        throw InputError(path + ": malformed y4m header token '" + token + "'");
    }
}

} // namespace

Y4mReader::Y4mReader(const std::string& path) : in_(path, std::ios::binary), path_(path) {
    if (!in_)
        throw InputError(path + ": cannot open file");
    std::string header;
    if (!std::getline(in_, header))
        throw InputError(path + ": missing y4m header line");

    std::istringstream tokens(header);
    std::string magic;
    tokens >> magic;
    if (magic != "YUV4MPEG2")
        throw InputError(path + ": bad y4m magic '" + magic + "'");

    bool have_w = false, have_h = false, have_f = false;
    std::string colorspace = "420";
    std::string token;
    while (tokens >> token) {
        switch (token[0]) {
        case 'W':
            info_.width = static_cast<int>(parse_int_token(token, path));
            have_w = true;
            break;
        case 'H':
            info_.height = static_cast<int>(parse_int_token(token, path));
            have_h = true;
            break;
        case 'F': {
            const auto colon = token.find(':');
            if (colon == std::string::npos)
                throw InputError(path + ": malformed y4m header token '" + token + "'");
            try {
                info_.fps = Rational(std::stoll(token.substr(1, colon - 1)),
                                     std::stoll(token.substr(colon + 1)));
            } catch (const std::exception&) {
                throw InputError(path + ": malformed y4m header token '" + token + "'");
            }
            have_f = true;
            break;
        }
        case 'C':
            colorspace = token.substr(1);
            break;
        case 'I':
        case 'A':
        case 'X':
            break; // interlacing, aspect and extensions are irrelevant here
        default:
            throw InputError(path + ": unknown y4m header token '" + token + "'");
        }
    }
    if (!have_w)
        throw InputError(path + ": y4m header missing 'W' token");
    if (!have_h)
        throw InputError(path + ": y4m header missing 'H' token");
    if (!have_f)
        throw InputError(path + ": y4m header missing 'F' token");
    if (info_.width <= 0 || info_.height <= 0)
        throw InputError(path + ": non-positive y4m frame dimensions");
    if (info_.fps.num <= 0)
        throw InputError(path + ": non-positive y4m frame rate");

    luma_bytes_ = static_cast<std::size_t>(info_.width) * info_.height;
    if (colorspace.rfind("420", 0) == 0) {
        if (info_.width % 2 != 0 || info_.height % 2 != 0)
            throw InputError(path + ": 4:2:0 y4m requires even dimensions");
        chroma_bytes_ = luma_bytes_ / 2;
    } else if (colorspace == "mono") {
        chroma_bytes_ = 0;
    } else {
        throw InputError(path + ": unsupported y4m colorspace 'C" + colorspace + "'");
    }
}

std::optional<Frame> Y4mReader::next() {
    std::string marker;
    if (!std::getline(in_, marker)) {
        if (in_.eof())
            return std::nullopt;
        throw InputError(path_ + ": read failure at frame " + std::to_string(index_));
    }
    if (marker.rfind("FRAME", 0) != 0)
        throw InputError(path_ + ": expected FRAME marker at frame " + std::to_string(index_));

    Frame frame;
    frame.index = index_;
    frame.timestamp = frame_timestamp(index_, info_.fps);
    frame.width = info_.width;
    frame.height = info_.height;
    frame.channels = 1;
    frame.pixels.resize(luma_bytes_);
    in_.read(reinterpret_cast<char*>(frame.pixels.data()),
             static_cast<std::streamsize>(luma_bytes_));
    if (static_cast<std::size_t>(in_.gcount()) != luma_bytes_)
        throw InputError(path_ + ": truncated frame payload at frame " + std::to_string(index_));
    if (chroma_bytes_ > 0) {
        in_.ignore(static_cast<std::streamsize>(chroma_bytes_));
        if (static_cast<std::size_t>(in_.gcount()) != chroma_bytes_)
            throw InputError(path_ + ": truncated frame payload at frame " +
                             std::to_string(index_));
    }
    ++index_;
    return frame;
}

Y4mWriter::Y4mWriter(const std::string& path, int width, int height, Rational fps, Colorspace cs)
    : out_(path, std::ios::binary), path_(path), width_(width), height_(height), cs_(cs) {
    if (!out_)
        throw InputError(path + ": cannot open file for writing");
    if (cs == Colorspace::C420 && (width % 2 != 0 || height % 2 != 0))
        throw ConfigError("4:2:0 y4m requires even dimensions");
    out_ << "YUV4MPEG2 W" << width << " H" << height << " F" << fps.num << ":" << fps.den
         << " Ip A1:1 C" << (cs == Colorspace::Mono ? "mono" : "420jpeg") << "\n";
}

void Y4mWriter::write(const LumaFrame& frame) {
    if (frame.width != width_ || frame.height != height_)
        throw InvariantError("y4m writer: frame dimensions changed mid-stream");
    out_ << "FRAME\n";
    out_.write(reinterpret_cast<const char*>(frame.y.data()),
               static_cast<std::streamsize>(frame.y.size()));
    if (cs_ == Colorspace::C420) {
        const std::vector<char> neutral(frame.y.size() / 2, static_cast<char>(128));
        out_.write(neutral.data(), static_cast<std::streamsize>(neutral.size()));
    }
    if (!out_)
        throw InputError(path_ + ": write failure");
}

void Y4mWriter::close() {
    out_.flush();
    out_.close();
}

std::unique_ptr<FrameSource> open_y4m(const std::string& path) {
    return std::make_unique<Y4mReader>(path);
}

} // namespace actigate
