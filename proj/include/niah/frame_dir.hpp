#pragma once

#include <filesystem>

#include "niah/core.hpp"

namespace niah {

// On-disk layout shared with external tools:
//   <dir>/frame_000000.png, frame_000001.png, ...
//   <dir>/meta.json            {"fps": ..., "resolution": [w, h], "source_id": ...}

std::filesystem::path frame_file_name(std::size_t index);

void save_frame_dir(const FrameSequence& seq, const std::filesystem::path& dir);
FrameSequence load_frame_dir(const std::filesystem::path& dir);

}  // namespace niah
