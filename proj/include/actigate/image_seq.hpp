#pragma once

#include <memory>
#include <string>
#include <vector>

#include "actigate/frame.hpp"

namespace actigate {

// Binary PPM (P6, RGB) and PGM (P5, gray) load/store, maxval 255.
Frame load_pnm(const std::string& path);
void save_pnm(const std::string& path, const Frame& frame);

// Opens a JSON manifest {"fps": <number|"num/den">, "images": [paths...]}.
// Image paths are resolved relative to the manifest location; frames are
// yielded in manifest order with timestamps index/fps.
std::unique_ptr<FrameSource> open_image_sequence(const std::string& manifest_path);

} // namespace actigate
