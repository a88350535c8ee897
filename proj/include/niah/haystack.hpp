#pragma once

#include <cstdint>
#include <filesystem>

#include "niah/codec.hpp"
#include "niah/core.hpp"

namespace niah {

// Procedural haystack: drifting gradients plus moving shapes, seeded. Every
// frame differs from every other frame of the same sequence, so similarity
// filtering and needle visibility stay meaningful.
struct SyntheticHaystackConfig {
    std::uint64_t seed = 0;
    double duration_s = 30.0;  // studied range: 10 s .. 30 min
    double fps = 2.0;
    int width = 336;
    int height = 336;
    std::string motif = "gradient";  // gradient | shapes

    void validate() const;
};

FrameSequence synth_haystack(const SyntheticHaystackConfig& cfg);

// Contiguous cut of exactly target_duration_s; the offset is drawn
// uniformly from the valid range using `seed`. Throws TooShortError.
FrameSequence cut_haystack(const FrameSequence& src, double target_duration_s,
                           std::uint64_t seed);

// Decodes a video through the codec backend at the requested geometry.
FrameSequence load_haystack(const CodecBackend& backend, const std::filesystem::path& path,
                            double fps, int width, int height);

}  // namespace niah
