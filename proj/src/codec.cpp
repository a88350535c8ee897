#include "niah/codec.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <vector>

namespace fs = std::filesystem;

namespace niah {

CodecBackend CodecBackend::ffmpeg_default() {
    return CodecBackend{
        "ffmpeg -y -v error -i {input} -vf "
        "fps={fps},scale={width}:{height}:force_original_aspect_ratio=decrease,"
        "pad={width}:{height}:-1:-1:color=black -f rawvideo -pix_fmt rgb24 {output}",
        "ffmpeg -y -v error -f rawvideo -pix_fmt rgb24 -s {width}x{height} -r {fps} "
        "-i {input} -pix_fmt yuv420p {output}",
    };
}

namespace {

void replace_all(std::string& s, const std::string& from, const std::string& to) {
    std::size_t pos = 0;
    while ((pos = s.find(from, pos)) != std::string::npos) {
        s.replace(pos, from.size(), to);
        pos += to.size();
    }
}

std::string format_fps(double fps) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", fps);
    return buf;
}

fs::path temp_raw_path() {
    static std::atomic<unsigned> counter{0};
    const auto n = counter.fetch_add(1);
    return fs::temp_directory_path() /
           ("niah_codec_" + std::to_string(::getpid()) + "_" + std::to_string(n) + ".rgb24");
}

int run_command(const std::string& cmd) {
    const int rc = std::system(cmd.c_str());
    if (rc == -1) return -1;
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

std::string expand_command(const std::string& command_template, const std::string& input,
                           const std::string& output, double fps, int width, int height) {
    std::string cmd = command_template;
    replace_all(cmd, "{input}", input);
    replace_all(cmd, "{output}", output);
    replace_all(cmd, "{fps}", format_fps(fps));
    replace_all(cmd, "{width}", std::to_string(width));
    replace_all(cmd, "{height}", std::to_string(height));
    return cmd;
}

FrameSequence decode_video(const CodecBackend& backend, const fs::path& path, double fps,
                           int width, int height) {
    if (backend.decode_command.empty()) throw DecodeError("decode_video: no decode_command");
    const fs::path raw = temp_raw_path();
    const std::string cmd =
        expand_command(backend.decode_command, path.string(), raw.string(), fps, width, height);
    const int rc = run_command(cmd);
    if (rc != 0) {
        std::error_code ec;
        fs::remove(raw, ec);
        throw DecodeError("decode backend exited with status " + std::to_string(rc) + ": " + cmd);
    }

    std::ifstream in(raw, std::ios::binary);
    if (!in) throw DecodeError("decode_video: backend produced no output");
    std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    in.close();
    std::error_code ec;
    fs::remove(raw, ec);

    const std::size_t frame_bytes = static_cast<std::size_t>(width) * height * 3;
    if (bytes.empty() || bytes.size() % frame_bytes != 0) {
        throw DecodeError("decode_video: malformed raw stream (" + std::to_string(bytes.size()) +
                          " bytes, frame size " + std::to_string(frame_bytes) + ")");
    }

    FrameSequence seq;
    seq.fps = fps;
    seq.source_id = path.filename().string();
    const std::size_t count = bytes.size() / frame_bytes;
    seq.frames.reserve(count);
    for (std::size_t f = 0; f < count; ++f) {
        Image img(width, height);
        const auto* p = reinterpret_cast<const std::uint8_t*>(bytes.data()) + f * frame_bytes;
        for (int y = 0; y < height; ++y) {
            for (int x = 0; x < width; ++x) {
                const std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
                img.set(x, y, {p[i], p[i + 1], p[i + 2]});
            }
        }
        seq.frames.push_back(std::move(img));
    }
    seq.validate();
    return seq;
}

void encode_video(const CodecBackend& backend, const FrameSequence& seq, const fs::path& out_path) {
    if (backend.encode_command.empty()) throw IoError("encode_video: no encode_command");
    seq.validate();
    const fs::path raw = temp_raw_path();
    {
        std::ofstream out(raw, std::ios::binary);
        if (!out) throw IoError("encode_video: cannot write temp stream");
        for (const Frame& frame : seq.frames) {
            for (int y = 0; y < frame.height(); ++y) {
                for (int x = 0; x < frame.width(); ++x) {
                    const Rgb c = frame.at(x, y);
                    out.put(static_cast<char>(c.r));
                    out.put(static_cast<char>(c.g));
                    out.put(static_cast<char>(c.b));
                }
            }
        }
    }
    const std::string cmd = expand_command(backend.encode_command, raw.string(), out_path.string(),
                                           seq.fps, seq.width(), seq.height());
    const int rc = run_command(cmd);
    std::error_code ec;
    fs::remove(raw, ec);
    if (rc != 0) {
        throw IoError("encode backend exited with status " + std::to_string(rc) + ": " + cmd);
    }
}

}  // namespace niah
