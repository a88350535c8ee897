#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "niah/frame_dir.hpp"
#include "niah/haystack.hpp"
#include "niah/png_io.hpp"

using namespace niah;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("niah_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

SyntheticHaystackConfig small_cfg(std::uint64_t seed, double duration_s = 10.0) {
    SyntheticHaystackConfig cfg;
    cfg.seed = seed;
    cfg.duration_s = duration_s;
    cfg.fps = 2.0;
    cfg.width = 64;
    cfg.height = 64;
    return cfg;
}

}  // namespace

TEST_CASE("synth_haystack: frame count, determinism, distinct frames") {
    const auto cfg = small_cfg(1);
    const FrameSequence a = synth_haystack(cfg);
    CHECK(a.frame_count() == 20);
    CHECK(a.duration_s() == doctest::Approx(10.0));

    const FrameSequence b = synth_haystack(cfg);
    CHECK(hash_sequence(a) == hash_sequence(b));

    std::set<std::uint64_t> hashes;
    for (const Frame& f : a.frames) hashes.insert(hash_image(f));
    CHECK(hashes.size() == a.frame_count());
}

TEST_CASE("synth_haystack: different seeds differ") {
    const FrameSequence a = synth_haystack(small_cfg(1));
    const FrameSequence b = synth_haystack(small_cfg(2));
    CHECK(hash_sequence(a) != hash_sequence(b));
}

TEST_CASE("synth_haystack rejects out-of-range durations") {
    auto cfg = small_cfg(1);
    cfg.duration_s = 5.0;
    CHECK_THROWS_AS(synth_haystack(cfg), Error);
    cfg.duration_s = 2000.0;
    CHECK_THROWS_AS(synth_haystack(cfg), Error);
}

TEST_CASE("cut_haystack: contiguous slice of the source") {
    const FrameSequence src = synth_haystack(small_cfg(3, 90.0));
    const FrameSequence cut = cut_haystack(src, 10.0, 17);
    CHECK(cut.frame_count() == 20);

    // Find the offset via the first frame, then check contiguity.
    std::size_t offset = src.frame_count();
    for (std::size_t i = 0; i + cut.frame_count() <= src.frame_count(); ++i) {
        if (src.frames[i] == cut.frames[0]) {
            offset = i;
            break;
        }
    }
    REQUIRE(offset < src.frame_count());
    for (std::size_t i = 0; i < cut.frame_count(); ++i) {
        CHECK(cut.frames[i] == src.frames[offset + i]);
    }
}

TEST_CASE("cut_haystack: identity cut and error path") {
    const FrameSequence src = synth_haystack(small_cfg(4, 10.0));
    const FrameSequence whole = cut_haystack(src, 10.0, 5);
    CHECK(whole.frame_count() == src.frame_count());
    CHECK(whole.frames[0] == src.frames[0]);

    CHECK_THROWS_AS(cut_haystack(src, 200.0, 5), TooShortError);
}

TEST_CASE("png round trip") {
    const FrameSequence seq = synth_haystack(small_cfg(5));
    const std::string bytes = encode_png(seq.frames[3]);
    const Image back = decode_png(bytes);
    CHECK(back == seq.frames[3]);
    CHECK(encode_png(back) == bytes);

    CHECK_THROWS_AS(decode_png("not a png"), DecodeError);
}

TEST_CASE("frame dir round trip") {
    const auto dir = temp_dir("framedir");
    const FrameSequence seq = synth_haystack(small_cfg(6));
    save_frame_dir(seq, dir / "clip");
    const FrameSequence back = load_frame_dir(dir / "clip");
    CHECK(back.frame_count() == seq.frame_count());
    CHECK(back.fps == seq.fps);
    CHECK(back.source_id == seq.source_id);
    CHECK(hash_sequence(back) == hash_sequence(seq));
    fs::remove_all(dir);
}

TEST_CASE("codec subprocess contract with a stub backend") {
    const auto dir = temp_dir("codec");

    // Stub container: concatenated raw RGB24 frames plus a text header file
    // next to it. decode ignores fps/scale (the stream is already conformed).
    const fs::path script = dir / "codec.py";
    {
        std::ofstream out(script);
        out << R"(import sys, shutil
mode, src, dst = sys.argv[1], sys.argv[2], sys.argv[3]
shutil.copyfile(src, dst)
)";
    }
    CodecBackend stub;
    stub.decode_command = "python3 " + script.string() + " decode {input} {output}";
    stub.encode_command = "python3 " + script.string() + " encode {input} {output}";

    const FrameSequence seq = synth_haystack(small_cfg(7));
    const fs::path container = dir / "clip.raw";
    encode_video(stub, seq, container);
    CHECK(fs::file_size(container) == seq.frame_count() * 64 * 64 * 3);

    // decode(encode(x)) preserves the frame count at fixed fps.
    const FrameSequence back = decode_video(stub, container, seq.fps, 64, 64);
    CHECK(back.frame_count() == seq.frame_count());
    CHECK(hash_sequence(back) == hash_sequence(seq));

    // Nonzero exit and malformed streams surface as DecodeError.
    CodecBackend broken;
    broken.decode_command = "false";
    CHECK_THROWS_AS(decode_video(broken, container, 2.0, 64, 64), DecodeError);

    const fs::path garbage = dir / "garbage.raw";
    {
        std::ofstream out(garbage, std::ios::binary);
        out << "short";
    }
    CHECK_THROWS_AS(decode_video(stub, garbage, 2.0, 64, 64), DecodeError);
    fs::remove_all(dir);
}
