#include <doctest.h>

#include "niah/core.hpp"
#include "niah/rng.hpp"

using namespace niah;

TEST_CASE("depth_to_start_frame quantizes by rounding") {
    CHECK(depth_to_start_frame(0.0, 100) == 0);
    CHECK(depth_to_start_frame(0.5, 100) == 50);
    CHECK(depth_to_start_frame(0.9, 300) == 270);
    // Clamped into the valid frame range.
    CHECK(depth_to_start_frame(0.999, 10) == 9);
    CHECK(depth_to_start_frame(0.0, 1) == 0);
}

TEST_CASE("depth_to_start_frame clamps so the needle fits") {
    CHECK(depth_to_start_frame(0.95, 100, 10, PlacementMode::Edit) == 90);
    // Insert may start right at the end (append).
    CHECK(depth_to_start_frame(0.999, 100, 10, PlacementMode::Insert) == 100);
}

TEST_CASE("depth_to_start_frame is monotone in depth") {
    for (std::size_t frames : {7u, 100u, 301u}) {
        std::size_t prev = 0;
        for (double depth = 0.0; depth < 1.0; depth += 0.01) {
            const std::size_t cur = depth_to_start_frame(depth, frames);
            CHECK(cur >= prev);
            prev = cur;
        }
    }
}

TEST_CASE("effective_timeline: insert shifts later content") {
    Placement insert;
    insert.mode = PlacementMode::Insert;
    insert.start_frame = 50;
    insert.duration_s = 15.0;  // 30 frames at fps 2

    const auto spans = effective_timeline(100, 2.0, std::vector<Placement>{insert});
    REQUIRE(spans.size() == 1);
    CHECK(spans[0].begin == 50);
    CHECK(spans[0].end == 80);
    CHECK(output_frame_count(100, 2.0, std::vector<Placement>{insert}) == 130);
}

TEST_CASE("effective_timeline: no placements is the identity") {
    const auto spans = effective_timeline(100, 2.0, std::vector<Placement>{});
    CHECK(spans.empty());
    CHECK(output_frame_count(100, 2.0, std::vector<Placement>{}) == 100);
}

TEST_CASE("effective_timeline: touching edit spans do not overlap") {
    Placement a, b;
    a.start_frame = 10;
    a.duration_s = 15.0;  // frames [10, 40) at fps 2
    b.start_frame = 40;
    b.duration_s = 15.0;  // frames [40, 70)
    const auto spans = effective_timeline(100, 2.0, std::vector<Placement>{a, b});
    REQUIRE(spans.size() == 2);
    CHECK(spans[0].end == 40);
    CHECK(spans[1].begin == 40);
}

TEST_CASE("effective_timeline: intersecting spans throw") {
    Placement a, b;
    a.start_frame = 10;
    a.duration_s = 10.0;  // [10, 30)
    b.start_frame = 25;
    b.duration_s = 10.0;  // [25, 45)
    CHECK_THROWS_AS(effective_timeline(100, 2.0, std::vector<Placement>{a, b}), OverlapError);

    // Insert strictly inside an edit span collides with it.
    Placement edit, ins;
    edit.start_frame = 10;
    edit.duration_s = 15.0;  // [10, 40)
    ins.mode = PlacementMode::Insert;
    ins.start_frame = 20;
    ins.duration_s = 2.0;
    CHECK_THROWS_AS(effective_timeline(100, 2.0, std::vector<Placement>{edit, ins}),
                    OverlapError);
}

TEST_CASE("effective_timeline: multi-insert bookkeeping") {
    // Two inserts at original frames 10 and 20: the second lands after the
    // first has grown the timeline.
    Placement a, b;
    a.mode = b.mode = PlacementMode::Insert;
    a.start_frame = 10;
    a.duration_s = 1.0;  // 2 frames
    b.start_frame = 20;
    b.duration_s = 1.0;
    const auto spans = effective_timeline(100, 2.0, std::vector<Placement>{a, b});
    REQUIRE(spans.size() == 2);
    CHECK(spans[0].begin == 10);
    CHECK(spans[0].end == 12);
    CHECK(spans[1].begin == 22);
    CHECK(spans[1].end == 24);
    CHECK(output_frame_count(100, 2.0, std::vector<Placement>{a, b}) == 104);
}

TEST_CASE("effective_timeline property: edit-only count preserved, spans disjoint") {
    Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t frames = 40 + rng.uniform_u64(200);
        const std::size_t n = 1 + rng.uniform_u64(4);
        std::vector<Placement> placements;
        std::size_t cursor = 0;
        for (std::size_t i = 0; i < n; ++i) {
            Placement p;
            p.mode = rng.uniform_real() < 0.5 ? PlacementMode::Edit : PlacementMode::Insert;
            const std::size_t dur = 1 + rng.uniform_u64(4);
            const std::size_t gap = rng.uniform_u64(5);
            p.start_frame = cursor + gap;
            p.duration_s = static_cast<double>(dur) / 2.0;  // fps 2
            cursor = p.start_frame + dur;
            placements.push_back(p);
        }
        if (cursor >= frames) continue;

        const auto spans = effective_timeline(frames, 2.0, placements);
        REQUIRE(spans.size() == placements.size());
        std::size_t inserted = 0;
        for (std::size_t i = 0; i < spans.size(); ++i) {
            if (i > 0) CHECK(spans[i].begin >= spans[i - 1].end);
            if (spans[i].mode == PlacementMode::Insert) inserted += spans[i].end - spans[i].begin;
        }
        CHECK(output_frame_count(frames, 2.0, placements) == frames + inserted);
    }
}

TEST_CASE("image equality and hashing") {
    Image a(8, 6, {10, 20, 30});
    Image b(8, 6, {10, 20, 30});
    CHECK(a == b);
    CHECK(hash_image(a) == hash_image(b));
    b.set(3, 2, {11, 20, 30});
    CHECK_FALSE(a == b);
    CHECK(hash_image(a) != hash_image(b));
}

TEST_CASE("sample validation rejects duplicate options") {
    Sample s;
    s.sample_id = "t";
    s.haystack = {"h", 10.0, 2.0, 20};
    s.options = {"a", "b", "c", "a"};
    s.answer_index = 0;
    CHECK_THROWS_AS(s.validate(), Error);
    s.options = {"a", "b", "c", "d"};
    CHECK_NOTHROW(s.validate());
    s.answer_index = 4;
    CHECK_THROWS_AS(s.validate(), Error);
}

TEST_CASE("task kind round trip") {
    for (TaskKind task : kStandardTasks) {
        CHECK(task_from_string(to_string(task)) == task);
    }
    CHECK(to_string(TaskKind::RetrievalAct) == "retrieval-act");
    CHECK_THROWS_AS(task_from_string("no-such-task"), Error);
}

TEST_CASE("rng determinism and uniform bounds") {
    Rng a(42), b(42);
    for (int i = 0; i < 1000; ++i) {
        CHECK(a.next_u64() == b.next_u64());
    }
    Rng r(7);
    for (int i = 0; i < 1000; ++i) {
        const auto v = r.uniform_int(3, 9);
        CHECK(v >= 3);
        CHECK(v <= 9);
    }
}
