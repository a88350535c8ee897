#include <doctest.h>

#include <filesystem>

#include "niah/haystack.hpp"
#include "niah/png_io.hpp"
#include "niah/pools.hpp"
#include "niah/rng.hpp"
#include "niah/similarity.hpp"

using namespace niah;
namespace fs = std::filesystem;

TEST_CASE("builtin pools have the canonical candidate lists") {
    const NeedlePool& names = builtin_names_pool();
    CHECK(names.entries.size() == 26);
    CHECK(names.contains("Alice"));
    CHECK(names.contains("Quentin"));
    CHECK(names.contains("Zach"));

    const NeedlePool& objects = builtin_objects_pool();
    CHECK(objects.entries.size() == 26);
    CHECK(objects.contains("apple"));
    CHECK(objects.contains("xylophone"));
    CHECK(objects.contains("zebra"));

    CHECK(builtin_fruits_pool().entries.size() == 8);
    CHECK(builtin_animals_pool().entries.size() == 8);
    CHECK(builtin_fruits_pool().contains("pear"));
    CHECK(builtin_fruits_pool().contains("banana"));
}

TEST_CASE("subtitle_text renders the exact template") {
    const NeedlePool& names = builtin_names_pool();
    CHECK(subtitle_text("Carol", names) == "The secret word is Carol.");
    CHECK(subtitle_text("Kate", names) == "The secret word is Kate.");
    CHECK_THROWS_AS(subtitle_text("Zzz", names), UnknownLabel);
}

TEST_CASE("alt_subtitle_text renders the private-key template") {
    const NeedlePool& objects = builtin_objects_pool();
    CHECK(alt_subtitle_text("zebra", objects) == "The private key is zebra.");
    CHECK(alt_subtitle_text("apple", objects) == "The private key is apple.");
    CHECK_THROWS_AS(alt_subtitle_text("", objects), UnknownLabel);
}

TEST_CASE("icons are deterministic and label-distinct") {
    const Image a = render_icon("pear");
    const Image b = render_icon("pear");
    CHECK(a == b);
    CHECK_FALSE(render_icon("pear") == render_icon("banana"));
    CHECK(load_image_payload("builtin:fruits/pear") == a);
}

TEST_CASE("pool manifest round trip") {
    const fs::path path = fs::temp_directory_path() / "niah_test_pool.json";
    NeedlePool pool;
    pool.pool_id = "my-landmarks";
    pool.kind = PoolKind::LandmarkImages;
    pool.entries = {{"tower", "/data/tower.png"}, {"bridge", "/data/bridge.png"}};
    save_pool_manifest(pool, path);
    const NeedlePool back = load_pool_manifest(path);
    CHECK(back.pool_id == pool.pool_id);
    CHECK(back.kind == pool.kind);
    REQUIRE(back.entries.size() == 2);
    CHECK(back.entries[1].label == "bridge");
    CHECK(back.entries[1].payload_ref == "/data/bridge.png");
    fs::remove(path);
}

namespace {

FrameSequence gradient_haystack(std::uint64_t seed) {
    SyntheticHaystackConfig cfg;
    cfg.seed = seed;
    cfg.duration_s = 10.0;
    cfg.fps = 1.0;
    cfg.width = 64;
    cfg.height = 64;
    return synth_haystack(cfg);
}

Image noise_image(std::uint64_t seed) {
    Rng rng(seed);
    Image img(64, 64);
    for (int y = 0; y < 64; ++y) {
        for (int x = 0; x < 64; ++x) {
            img.set(x, y, {static_cast<std::uint8_t>(rng.uniform_int(0, 255)),
                           static_cast<std::uint8_t>(rng.uniform_int(0, 255)),
                           static_cast<std::uint8_t>(rng.uniform_int(0, 255))});
        }
    }
    return img;
}

}  // namespace

TEST_CASE("descriptor similarity: identity maximal, symmetric, deterministic") {
    DescriptorSimilarity backend;
    const FrameSequence hay = gradient_haystack(11);
    const Image x = hay.frames[2];
    const Image y = hay.frames[7];
    CHECK(backend.score(x, x) == doctest::Approx(1.0));
    CHECK(backend.score(x, y) == backend.score(y, x));
    CHECK(backend.score(x, y) <= backend.score(x, x));
    CHECK(backend.score(x, y) == backend.score(x, y));

    const Image noise = noise_image(5);
    CHECK(backend.score(x, noise) <= 1.0);
    CHECK(backend.score(x, noise) >= 0.0);
}

TEST_CASE("filter rejects a frame copied from the haystack") {
    DescriptorSimilarity backend;
    const FrameSequence hay = gradient_haystack(12);
    // A candidate that IS a haystack frame scores 1 against it.
    CHECK(max_similarity(hay.frames[4], hay, backend) == doctest::Approx(1.0));
}

TEST_CASE("filter partition is exhaustive and threshold 1.0 accepts everything") {
    DescriptorSimilarity backend;
    const FrameSequence hay = gradient_haystack(13);
    const std::vector<PoolEntry> candidates = builtin_fruits_pool().entries;

    const FilterResult at_default = filter_needles(candidates, hay, backend, 0.9);
    CHECK(at_default.accepted.size() + at_default.rejected.size() == candidates.size());

    const FilterResult at_one = filter_needles(candidates, hay, backend, 1.0);
    CHECK(at_one.rejected.empty());

    CHECK_THROWS_AS(filter_needles(candidates, hay, backend, 0.0), Error);
}

TEST_CASE("noise candidates pass the calibrated threshold against gradients") {
    DescriptorSimilarity backend;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const FrameSequence hay = gradient_haystack(100 + seed);
        for (std::uint64_t n = 0; n < 4; ++n) {
            CHECK(max_similarity(noise_image(200 + n), hay, backend) <=
                  kDefaultFilterThreshold);
        }
    }
}

TEST_CASE("accepted set is anti-monotone in threshold") {
    DescriptorSimilarity backend;
    const FrameSequence hay = gradient_haystack(14);
    std::vector<PoolEntry> candidates = builtin_fruits_pool().entries;
    // Add a guaranteed-reject candidate: a haystack frame.
    // (stored as an explicit png so the filter can load it)
    const fs::path copy = fs::temp_directory_path() / "niah_test_copy.png";
    write_png(copy, hay.frames[0]);
    candidates.push_back({"copycat", copy.string()});

    std::size_t prev_accepted = 0;
    for (double threshold : {0.2, 0.5, 0.9, 0.99}) {
        const FilterResult result = filter_needles(candidates, hay, backend, threshold);
        CHECK(result.accepted.size() >= prev_accepted);
        prev_accepted = result.accepted.size();
        // The copied frame must stay rejected below 1.0.
        bool copy_rejected = false;
        for (const PoolEntry& e : result.rejected) copy_rejected |= e.label == "copycat";
        CHECK(copy_rejected);
    }
    fs::remove(copy);
}
