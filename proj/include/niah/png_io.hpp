#pragma once

#include <filesystem>
#include <string>

#include "niah/core.hpp"

namespace niah {

// PNG encode/decode for 8-bit RGB rasters. Encoder settings are pinned
// (compression level, filter) so identical images produce identical bytes.

std::string encode_png(const Image& img);
Image decode_png(const std::string& bytes);

void write_png(const std::filesystem::path& path, const Image& img);
Image read_png(const std::filesystem::path& path);

}  // namespace niah
