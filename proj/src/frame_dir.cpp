#include "niah/frame_dir.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>

#include "niah/png_io.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace niah {

fs::path frame_file_name(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "frame_%06zu.png", index);
    return fs::path(buf);
}

void save_frame_dir(const FrameSequence& seq, const fs::path& dir) {
    seq.validate();
    fs::create_directories(dir);
    for (std::size_t i = 0; i < seq.frames.size(); ++i) {
        write_png(dir / frame_file_name(i), seq.frames[i]);
    }
    json meta = {
        {"fps", seq.fps},
        {"resolution", {seq.width(), seq.height()}},
        {"source_id", seq.source_id},
        {"frame_count", seq.frames.size()},
    };
    std::ofstream out(dir / "meta.json");
    if (!out) throw IoError("save_frame_dir: cannot write meta.json in " + dir.string());
    out << meta.dump(2) << "\n";
}

FrameSequence load_frame_dir(const fs::path& dir) {
    std::ifstream in(dir / "meta.json");
    if (!in) throw IoError("load_frame_dir: missing meta.json in " + dir.string());
    json meta = json::parse(in);

    FrameSequence seq;
    seq.fps = meta.at("fps").get<double>();
    seq.source_id = meta.value("source_id", dir.filename().string());
    const auto count = meta.at("frame_count").get<std::size_t>();
    seq.frames.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const fs::path file = dir / frame_file_name(i);
        if (!fs::exists(file)) {
            throw IoError("load_frame_dir: missing " + file.string());
        }
        seq.frames.push_back(read_png(file));
    }
    seq.validate();
    return seq;
}

}  // namespace niah
