#pragma once

#include <string>
#include <vector>

#include "niah/core.hpp"
#include "niah/rng.hpp"

namespace niah {

// Subtitle band rendering. The bundled bitmap font makes rendering a pure
// function of (text, style, resolution), so frames are snapshot-testable.
struct SubtitleStyle {
    double height_fraction = 0.08;  // band height as fraction of frame height
    bool background_box = true;
    Rgb box_color{0, 0, 0};
    Rgb text_color{255, 255, 255};
};

// Region of one Counting-E2 clip: where and how often an image is pasted.
struct RegionSpec {
    Rect rect;
};

// Draws `text` in a bottom-centered band over every frame of `span`
// (Edit placement: frame count unchanged, untouched frames byte-identical).
FrameSequence overlay_subtitle(const FrameSequence& seq, const Placement& span,
                               const std::string& text, const SubtitleStyle& style = {});

// round(duration_s * fps) identical frames of the letterboxed image.
FrameSequence image_to_clip(const Image& image, double duration_s, double fps, int width,
                            int height);

// seq[0, at_frame) ++ clip ++ seq[at_frame, end). Clip must match resolution
// and fps of the target sequence.
FrameSequence insert_clip(const FrameSequence& seq, std::size_t at_frame,
                          const FrameSequence& clip);

// Pastes `image` scaled into every region of every frame of `span`.
// Regions must be 1..4, in-bounds and pairwise disjoint.
FrameSequence composite_regions(const FrameSequence& seq, const Placement& span,
                                const Image& image, const std::vector<RegionSpec>& regions);

// Draws `count` pairwise-disjoint in-bounds rectangles, uniformly placed.
// Rejection-samples up to 100 attempts per size, then shrinks and retries.
std::vector<RegionSpec> sample_disjoint_regions(int frame_width, int frame_height, int count,
                                                Rng& rng);

}  // namespace niah
