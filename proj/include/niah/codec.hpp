#pragma once

#include <filesystem>
#include <string>

#include "niah/core.hpp"

namespace niah {

// External codec contract. Decode and encode run as subprocesses built from
// command templates; the core never links a codec library. Placeholders:
//
//   {input}   source path
//   {output}  destination path
//   {fps}     requested frames per second
//   {width} {height}   requested raster size
//
// decode_command must write raw RGB24 frames (interleaved, row-major) to
// {output}, already resampled to {fps} and scaled/padded to {width}x{height}.
// encode_command reads the same raw stream from {input} and writes a
// container file to {output}. Exit code 0 signals success.
struct CodecBackend {
    std::string decode_command;
    std::string encode_command;

    static CodecBackend ffmpeg_default();
};

std::string expand_command(const std::string& command_template, const std::string& input,
                           const std::string& output, double fps, int width, int height);

// Decodes `path` through the backend at the requested rate and resolution.
// Throws DecodeError on nonzero exit or a malformed stream.
FrameSequence decode_video(const CodecBackend& backend, const std::filesystem::path& path,
                           double fps, int width, int height);

// Encodes a sequence to `out_path` through the backend.
void encode_video(const CodecBackend& backend, const FrameSequence& seq,
                  const std::filesystem::path& out_path);

}  // namespace niah
