#include "niah/compositor.hpp"

#include <algorithm>
#include <cmath>

#include "niah/font.hpp"
#include "niah/image.hpp"

namespace niah {

namespace {

void check_edit_span(const FrameSequence& seq, const Placement& span, std::size_t dur) {
    if (span.mode != PlacementMode::Edit) {
        throw Error("edit operation requires an Edit placement");
    }
    if (span.start_frame + dur > seq.frame_count()) {
        throw SpanOutOfRange("span [" + std::to_string(span.start_frame) + ", " +
                             std::to_string(span.start_frame + dur) + ") exceeds sequence of " +
                             std::to_string(seq.frame_count()) + " frames");
    }
}

}  // namespace

FrameSequence overlay_subtitle(const FrameSequence& seq, const Placement& span,
                               const std::string& text, const SubtitleStyle& style) {
    seq.validate();
    if (text.empty()) throw InvalidText("overlay_subtitle: empty text");
    const std::size_t dur = span.duration_frames(seq.fps);
    check_edit_span(seq, span, dur);

    const int w = seq.width(), h = seq.height();
    const int band_h = std::max(static_cast<int>(std::lround(style.height_fraction * h)),
                                kGlyphHeight + 2);
    const int band_y = h - band_h;
    // Text is clipped if the frame is narrower than the minimum rendering.
    const int scale = std::max(1, fit_text_scale(text, w - 4, band_h - 2));
    const TextMetrics metrics = measure_text(text, scale);
    const int tx = (w - metrics.width) / 2;
    const int ty = band_y + (band_h - metrics.height) / 2;

    FrameSequence out = seq;
    for (std::size_t f = span.start_frame; f < span.start_frame + dur; ++f) {
        Frame& frame = out.frames[f];
        if (style.background_box) fill_rect(frame, {0, band_y, w, band_h}, style.box_color);
        draw_text(frame, tx, ty, text, scale, style.text_color);
    }
    return out;
}

FrameSequence image_to_clip(const Image& image, double duration_s, double fps, int width,
                            int height) {
    if (!(duration_s > 0.0)) throw Error("image_to_clip: duration must be positive");
    const auto count =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(duration_s * fps)));
    FrameSequence clip;
    clip.fps = fps;
    clip.source_id = "clip";
    clip.frames.assign(count, letterbox(image, width, height));
    return clip;
}

FrameSequence insert_clip(const FrameSequence& seq, std::size_t at_frame,
                          const FrameSequence& clip) {
    seq.validate();
    clip.validate();
    if (at_frame > seq.frame_count()) {
        throw SpanOutOfRange("insert_clip: at_frame " + std::to_string(at_frame) +
                             " beyond sequence of " + std::to_string(seq.frame_count()));
    }
    if (clip.width() != seq.width() || clip.height() != seq.height()) {
        throw ResolutionMismatch("insert_clip: clip " + std::to_string(clip.width()) + "x" +
                                 std::to_string(clip.height()) + " vs sequence " +
                                 std::to_string(seq.width()) + "x" + std::to_string(seq.height()));
    }
    FrameSequence out;
    out.fps = seq.fps;
    out.source_id = seq.source_id;
    out.frames.reserve(seq.frame_count() + clip.frame_count());
    const auto at = static_cast<std::ptrdiff_t>(at_frame);
    out.frames.insert(out.frames.end(), seq.frames.begin(), seq.frames.begin() + at);
    out.frames.insert(out.frames.end(), clip.frames.begin(), clip.frames.end());
    out.frames.insert(out.frames.end(), seq.frames.begin() + at, seq.frames.end());
    return out;
}

FrameSequence composite_regions(const FrameSequence& seq, const Placement& span,
                                const Image& image, const std::vector<RegionSpec>& regions) {
    seq.validate();
    if (regions.empty() || regions.size() > 4) {
        throw Error("composite_regions: region count must be in [1, 4]");
    }
    const std::size_t dur = span.duration_frames(seq.fps);
    check_edit_span(seq, span, dur);
    for (std::size_t i = 0; i < regions.size(); ++i) {
        const Rect& r = regions[i].rect;
        if (r.w <= 0 || r.h <= 0 || r.x < 0 || r.y < 0 || r.x + r.w > seq.width() ||
            r.y + r.h > seq.height()) {
            throw SpanOutOfRange("composite_regions: region outside frame bounds");
        }
        for (std::size_t j = i + 1; j < regions.size(); ++j) {
            if (r.intersects(regions[j].rect)) {
                throw RegionOverlap("composite_regions: regions " + std::to_string(i) + " and " +
                                    std::to_string(j) + " overlap");
            }
        }
    }

    FrameSequence out = seq;
    for (std::size_t f = span.start_frame; f < span.start_frame + dur; ++f) {
        for (const RegionSpec& region : regions) {
            paste_scaled(out.frames[f], image, region.rect);
        }
    }
    return out;
}

std::vector<RegionSpec> sample_disjoint_regions(int frame_width, int frame_height, int count,
                                                Rng& rng) {
    if (count < 1 || count > 4) throw Error("sample_disjoint_regions: count must be in [1, 4]");

    double size_lo = 0.18, size_hi = 0.30;
    for (int round = 0; round < 8; ++round) {
        for (int attempt = 0; attempt < 100; ++attempt) {
            std::vector<RegionSpec> regions;
            bool ok = true;
            for (int i = 0; i < count && ok; ++i) {
                const double frac = size_lo + (size_hi - size_lo) * rng.uniform_real();
                const int w = std::max(4, static_cast<int>(frac * frame_width));
                const int h = std::max(4, static_cast<int>(frac * frame_height));
                if (w >= frame_width || h >= frame_height) {
                    ok = false;
                    break;
                }
                const Rect rect{static_cast<int>(rng.uniform_int(0, frame_width - w)),
                                static_cast<int>(rng.uniform_int(0, frame_height - h)), w, h};
                for (const RegionSpec& prev : regions) {
                    if (rect.intersects(prev.rect)) {
                        ok = false;
                        break;
                    }
                }
                if (ok) regions.push_back({rect});
            }
            if (ok && static_cast<int>(regions.size()) == count) return regions;
        }
        // Crowded: shrink and try again.
        size_lo *= 0.8;
        size_hi *= 0.8;
    }
    throw Error("sample_disjoint_regions: could not place " + std::to_string(count) +
                " disjoint regions in " + std::to_string(frame_width) + "x" +
                std::to_string(frame_height));
}

}  // namespace niah
