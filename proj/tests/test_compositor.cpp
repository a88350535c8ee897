#include <doctest.h>

#include "niah/compositor.hpp"
#include "niah/haystack.hpp"
#include "niah/image.hpp"
#include "niah/pools.hpp"

using namespace niah;

namespace {

FrameSequence haystack_192(std::uint64_t seed = 21, double duration_s = 10.0) {
    SyntheticHaystackConfig cfg;
    cfg.seed = seed;
    cfg.duration_s = duration_s;
    cfg.fps = 2.0;
    cfg.width = 192;
    cfg.height = 108;
    return synth_haystack(cfg);
}

Placement edit_span(std::size_t start, double duration_s) {
    Placement p;
    p.mode = PlacementMode::Edit;
    p.start_frame = start;
    p.duration_s = duration_s;
    return p;
}

}  // namespace

TEST_CASE("overlay_subtitle touches exactly the spanned frames") {
    const FrameSequence seq = haystack_192();
    REQUIRE(seq.frame_count() == 20);
    const FrameSequence out =
        overlay_subtitle(seq, edit_span(4, 1.0), "The secret word is Bob.");

    CHECK(out.frame_count() == seq.frame_count());
    std::size_t modified = 0;
    for (std::size_t f = 0; f < seq.frame_count(); ++f) {
        if (!(out.frames[f] == seq.frames[f])) ++modified;
    }
    CHECK(modified == 2);  // frames 4 and 5 only
    CHECK_FALSE(out.frames[4] == seq.frames[4]);
    CHECK_FALSE(out.frames[5] == seq.frames[5]);
    CHECK(out.frames[3] == seq.frames[3]);
    CHECK(out.frames[6] == seq.frames[6]);
}

TEST_CASE("overlay_subtitle is deterministic and style-stable") {
    const FrameSequence seq = haystack_192();
    const FrameSequence a = overlay_subtitle(seq, edit_span(2, 1.0), "The secret word is Uma.");
    const FrameSequence b = overlay_subtitle(seq, edit_span(2, 1.0), "The secret word is Uma.");
    CHECK(hash_sequence(a) == hash_sequence(b));
}

TEST_CASE("overlay_subtitle error paths") {
    const FrameSequence seq = haystack_192();
    CHECK_THROWS_AS(overlay_subtitle(seq, edit_span(2, 1.0), ""), InvalidText);
    CHECK_THROWS_AS(overlay_subtitle(seq, edit_span(19, 2.0), "x"), SpanOutOfRange);
    CHECK_THROWS_AS(overlay_subtitle(seq, edit_span(25, 1.0), "x"), SpanOutOfRange);
}

TEST_CASE("image_to_clip produces identical letterboxed frames") {
    const Image icon = render_icon("pear");
    const FrameSequence clip2 = image_to_clip(icon, 1.0, 2.0, 192, 108);
    CHECK(clip2.frame_count() == 2);
    CHECK(clip2.frames[0] == clip2.frames[1]);

    const FrameSequence clip1 = image_to_clip(icon, 1.0, 1.0, 192, 108);
    CHECK(clip1.frame_count() == 1);
    CHECK(clip1.frames[0] == clip2.frames[0]);
    CHECK(clip1.frames[0].width() == 192);
    CHECK(clip1.frames[0].height() == 108);
}

TEST_CASE("insert_clip splice arithmetic and boundaries") {
    const FrameSequence seq = haystack_192();
    const FrameSequence clip = image_to_clip(render_icon("lemon"), 1.0, 2.0, 192, 108);

    const FrameSequence mid = insert_clip(seq, 10, clip);
    CHECK(mid.frame_count() == 22);
    CHECK(mid.frames[9] == seq.frames[9]);
    CHECK(mid.frames[10] == clip.frames[0]);
    CHECK(mid.frames[11] == clip.frames[1]);
    CHECK(mid.frames[12] == seq.frames[10]);

    const FrameSequence front = insert_clip(seq, 0, clip);
    CHECK(front.frames[0] == clip.frames[0]);
    CHECK(front.frames[2] == seq.frames[0]);

    const FrameSequence back = insert_clip(seq, seq.frame_count(), clip);
    CHECK(back.frames[back.frame_count() - 1] == clip.frames[1]);

    const FrameSequence wrong = image_to_clip(render_icon("lemon"), 1.0, 2.0, 64, 64);
    CHECK_THROWS_AS(insert_clip(seq, 5, wrong), ResolutionMismatch);
    CHECK_THROWS_AS(insert_clip(seq, 99, clip), SpanOutOfRange);
}

TEST_CASE("composite_regions pastes into exactly the given rects") {
    const FrameSequence seq = haystack_192();
    const Image icon = render_icon("dog");
    const std::vector<RegionSpec> regions = {
        {{4, 4, 30, 20}}, {{60, 40, 24, 24}}, {{120, 10, 40, 30}}};

    const FrameSequence out = composite_regions(seq, edit_span(6, 1.0), icon, regions);
    CHECK(out.frame_count() == seq.frame_count());

    for (std::size_t f : {6u, 7u}) {
        // Differences confined to the union of the rects.
        Image masked_in = out.frames[f];
        Image masked_src = seq.frames[f];
        std::size_t diff_outside = 0;
        for (int y = 0; y < seq.height(); ++y) {
            for (int x = 0; x < seq.width(); ++x) {
                bool inside = false;
                for (const RegionSpec& r : regions) {
                    inside |= x >= r.rect.x && x < r.rect.x + r.rect.w && y >= r.rect.y &&
                              y < r.rect.y + r.rect.h;
                }
                if (!inside && !(masked_in.at(x, y).r == masked_src.at(x, y).r &&
                                 masked_in.at(x, y).g == masked_src.at(x, y).g &&
                                 masked_in.at(x, y).b == masked_src.at(x, y).b)) {
                    ++diff_outside;
                }
            }
        }
        CHECK(diff_outside == 0);
        // And every rect is actually painted.
        for (const RegionSpec& r : regions) {
            std::size_t diff_inside = 0;
            for (int y = r.rect.y; y < r.rect.y + r.rect.h; ++y) {
                for (int x = r.rect.x; x < r.rect.x + r.rect.w; ++x) {
                    const Rgb a = out.frames[f].at(x, y), b = seq.frames[f].at(x, y);
                    if (a.r != b.r || a.g != b.g || a.b != b.b) ++diff_inside;
                }
            }
            CHECK(diff_inside > 0);
        }
    }
    CHECK(out.frames[5] == seq.frames[5]);
    CHECK(out.frames[8] == seq.frames[8]);
}

TEST_CASE("composite_regions error paths") {
    const FrameSequence seq = haystack_192();
    const Image icon = render_icon("cat");
    CHECK_THROWS_AS(composite_regions(seq, edit_span(2, 1.0), icon, {}), Error);
    CHECK_THROWS_AS(
        composite_regions(seq, edit_span(2, 1.0), icon,
                          {{{0, 0, 20, 20}}, {{10, 10, 20, 20}}}),
        RegionOverlap);
    CHECK_THROWS_AS(
        composite_regions(seq, edit_span(2, 1.0), icon, {{{180, 100, 30, 30}}}),
        SpanOutOfRange);
}

TEST_CASE("sample_disjoint_regions honors count, bounds, disjointness") {
    Rng rng(33);
    for (int trial = 0; trial < 50; ++trial) {
        const int count = 1 + static_cast<int>(rng.uniform_u64(4));
        const auto regions = sample_disjoint_regions(192, 108, count, rng);
        REQUIRE(static_cast<int>(regions.size()) == count);
        for (std::size_t i = 0; i < regions.size(); ++i) {
            const Rect& r = regions[i].rect;
            CHECK(r.x >= 0);
            CHECK(r.y >= 0);
            CHECK(r.x + r.w <= 192);
            CHECK(r.y + r.h <= 108);
            for (std::size_t j = i + 1; j < regions.size(); ++j) {
                CHECK_FALSE(r.intersects(regions[j].rect));
            }
        }
    }
}

TEST_CASE("edit keeps frame count, insert grows it by the clip length") {
    const FrameSequence seq = haystack_192();
    const FrameSequence edited =
        overlay_subtitle(seq, edit_span(0, 2.5), "The private key is zebra.");
    CHECK(edited.frame_count() == seq.frame_count());

    const FrameSequence clip = image_to_clip(render_icon("fish"), 2.5, 2.0, 192, 108);
    CHECK(insert_clip(seq, 3, clip).frame_count() == seq.frame_count() + 5);
}
