#include "niah/core.hpp"

#include <algorithm>
#include <cmath>

namespace niah {

Image::Image(int width, int height, Rgb fill) {
    r = Channel::Constant(height, width, fill.r);
    g = Channel::Constant(height, width, fill.g);
    b = Channel::Constant(height, width, fill.b);
}

bool Image::operator==(const Image& other) const {
    if (!same_size(other)) return false;
    if (empty()) return true;
    return (r.array() == other.r.array()).all() &&
           (g.array() == other.g.array()).all() &&
           (b.array() == other.b.array()).all();
}

namespace {

inline void fnv_bytes(std::uint64_t& h, const std::uint8_t* data, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        h ^= data[i];
        h *= 1099511628211ull;
    }
}

inline void fnv_u64(std::uint64_t& h, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        h ^= (v >> (8 * i)) & 0xff;
        h *= 1099511628211ull;
    }
}

}  // namespace

std::uint64_t hash_image(const Image& img) {
    std::uint64_t h = 14695981039346656037ull;
    fnv_u64(h, static_cast<std::uint64_t>(img.width()));
    fnv_u64(h, static_cast<std::uint64_t>(img.height()));
    const auto n = static_cast<std::size_t>(img.r.size());
    fnv_bytes(h, img.r.data(), n);
    fnv_bytes(h, img.g.data(), n);
    fnv_bytes(h, img.b.data(), n);
    return h;
}

std::uint64_t hash_sequence(const FrameSequence& seq) {
    std::uint64_t h = 14695981039346656037ull;
    fnv_u64(h, seq.frames.size());
    for (const Frame& f : seq.frames) fnv_u64(h, hash_image(f));
    return h;
}

void FrameSequence::validate() const {
    if (frames.empty()) throw Error("FrameSequence: no frames");
    if (!(fps > 0.0)) throw Error("FrameSequence: fps must be positive");
    const int w = frames.front().width();
    const int h = frames.front().height();
    if (w <= 0 || h <= 0) throw Error("FrameSequence: empty frame raster");
    for (const Frame& f : frames) {
        if (f.width() != w || f.height() != h) {
            throw ResolutionMismatch("FrameSequence: mixed frame resolutions");
        }
    }
}

std::string to_string(TaskKind task) {
    switch (task) {
        case TaskKind::RetrievalE: return "retrieval-e";
        case TaskKind::RetrievalI1: return "retrieval-i1";
        case TaskKind::RetrievalI2: return "retrieval-i2";
        case TaskKind::OrderingE: return "ordering-e";
        case TaskKind::OrderingI1: return "ordering-i1";
        case TaskKind::OrderingI2: return "ordering-i2";
        case TaskKind::CountingE1: return "counting-e1";
        case TaskKind::CountingE2: return "counting-e2";
        case TaskKind::CountingI: return "counting-i";
        case TaskKind::RetrievalAct: return "retrieval-act";
        case TaskKind::OrderingAct: return "ordering-act";
        case TaskKind::CountingAct: return "counting-act";
    }
    throw Error("unreachable TaskKind");
}

TaskKind task_from_string(const std::string& name) {
    static const std::array<TaskKind, 12> all = {
        TaskKind::RetrievalE,   TaskKind::RetrievalI1, TaskKind::RetrievalI2,
        TaskKind::OrderingE,    TaskKind::OrderingI1,  TaskKind::OrderingI2,
        TaskKind::CountingE1,   TaskKind::CountingE2,  TaskKind::CountingI,
        TaskKind::RetrievalAct, TaskKind::OrderingAct, TaskKind::CountingAct,
    };
    for (TaskKind t : all) {
        if (to_string(t) == name) return t;
    }
    throw Error("unknown task kind: " + name);
}

bool is_counting(TaskKind task) {
    return task == TaskKind::CountingE1 || task == TaskKind::CountingE2 ||
           task == TaskKind::CountingI || task == TaskKind::CountingAct;
}

bool is_ordering(TaskKind task) {
    return task == TaskKind::OrderingE || task == TaskKind::OrderingI1 ||
           task == TaskKind::OrderingI2 || task == TaskKind::OrderingAct;
}

bool is_retrieval(TaskKind task) {
    return task == TaskKind::RetrievalE || task == TaskKind::RetrievalI1 ||
           task == TaskKind::RetrievalI2 || task == TaskKind::RetrievalAct;
}

bool is_edit_task(TaskKind task) {
    return task == TaskKind::RetrievalE || task == TaskKind::OrderingE ||
           task == TaskKind::CountingE1 || task == TaskKind::CountingE2;
}

std::string to_string(NeedleKind kind) {
    switch (kind) {
        case NeedleKind::SubtitleEdit: return "subtitle-edit";
        case NeedleKind::RegionComposite: return "region-composite";
        case NeedleKind::StaticImageInsert: return "static-image-insert";
        case NeedleKind::ClipInsert: return "clip-insert";
    }
    throw Error("unreachable NeedleKind");
}

NeedleKind needle_kind_from_string(const std::string& name) {
    if (name == "subtitle-edit") return NeedleKind::SubtitleEdit;
    if (name == "region-composite") return NeedleKind::RegionComposite;
    if (name == "static-image-insert") return NeedleKind::StaticImageInsert;
    if (name == "clip-insert") return NeedleKind::ClipInsert;
    throw Error("unknown needle kind: " + name);
}

void NeedleSpec::validate() const {
    if (label.empty()) throw Error("NeedleSpec: empty label");
    if (kind == NeedleKind::SubtitleEdit && text.empty()) {
        throw InvalidText("NeedleSpec: subtitle needle without text");
    }
    if (kind == NeedleKind::RegionComposite) {
        if (occurrences < 1 || occurrences > 4) {
            throw Error("NeedleSpec: occurrences_per_clip must be in [1, 4]");
        }
        if (!regions.empty() && static_cast<int>(regions.size()) != occurrences) {
            throw Error("NeedleSpec: regions inconsistent with occurrences");
        }
    }
}

std::string to_string(PlacementMode mode) {
    return mode == PlacementMode::Edit ? "edit" : "insert";
}

PlacementMode placement_mode_from_string(const std::string& name) {
    if (name == "edit") return PlacementMode::Edit;
    if (name == "insert") return PlacementMode::Insert;
    throw Error("unknown placement mode: " + name);
}

std::size_t Placement::duration_frames(double fps) const {
    const auto n = static_cast<long long>(std::llround(duration_s * fps));
    return n < 1 ? 1 : static_cast<std::size_t>(n);
}

std::size_t depth_to_start_frame(double depth, std::size_t frame_count) {
    const auto raw = static_cast<long long>(std::llround(depth * static_cast<double>(frame_count)));
    const long long hi = static_cast<long long>(frame_count) - 1;
    return static_cast<std::size_t>(std::clamp(raw, 0ll, std::max(0ll, hi)));
}

std::size_t depth_to_start_frame(double depth, std::size_t frame_count,
                                 std::size_t needle_frames, PlacementMode mode) {
    const auto raw = static_cast<long long>(std::llround(depth * static_cast<double>(frame_count)));
    // Insert may append at the very end; Edit must leave room for the needle.
    const long long hi = mode == PlacementMode::Insert
                             ? static_cast<long long>(frame_count)
                             : static_cast<long long>(frame_count) - static_cast<long long>(needle_frames);
    return static_cast<std::size_t>(std::clamp(raw, 0ll, std::max(0ll, hi)));
}

std::vector<ResolvedSpan> effective_timeline(std::size_t frame_count, double fps,
                                             std::span<const Placement> placements) {
    struct Indexed {
        std::size_t index;
        const Placement* p;
    };
    std::vector<Indexed> order;
    order.reserve(placements.size());
    for (std::size_t i = 0; i < placements.size(); ++i) order.push_back({i, &placements[i]});
    std::stable_sort(order.begin(), order.end(), [](const Indexed& a, const Indexed& b) {
        return a.p->start_frame < b.p->start_frame;
    });

    std::vector<ResolvedSpan> spans;
    spans.reserve(placements.size());
    std::size_t shift = 0;
    for (const Indexed& item : order) {
        const Placement& p = *item.p;
        const std::size_t dur = p.duration_frames(fps);
        if (p.mode == PlacementMode::Edit) {
            if (p.start_frame + dur > frame_count) {
                throw SpanOutOfRange("edit placement [" + std::to_string(p.start_frame) + ", " +
                                     std::to_string(p.start_frame + dur) + ") exceeds haystack of " +
                                     std::to_string(frame_count) + " frames");
            }
            spans.push_back({item.index, p.start_frame + shift, p.start_frame + dur + shift,
                             PlacementMode::Edit});
        } else {
            if (p.start_frame > frame_count) {
                throw SpanOutOfRange("insert placement at frame " + std::to_string(p.start_frame) +
                                     " beyond haystack of " + std::to_string(frame_count) + " frames");
            }
            spans.push_back({item.index, p.start_frame + shift, p.start_frame + dur + shift,
                             PlacementMode::Insert});
            shift += dur;
        }
    }

    std::vector<ResolvedSpan> sorted = spans;
    std::sort(sorted.begin(), sorted.end(),
              [](const ResolvedSpan& a, const ResolvedSpan& b) { return a.begin < b.begin; });
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i].begin < sorted[i - 1].end) {
            throw OverlapError("needle spans [" + std::to_string(sorted[i - 1].begin) + ", " +
                               std::to_string(sorted[i - 1].end) + ") and [" +
                               std::to_string(sorted[i].begin) + ", " +
                               std::to_string(sorted[i].end) + ") overlap");
        }
    }
    return sorted;
}

std::vector<ResolvedSpan> effective_timeline(const FrameSequence& haystack,
                                             std::span<const Placement> placements) {
    return effective_timeline(haystack.frame_count(), haystack.fps, placements);
}

std::size_t output_frame_count(std::size_t frame_count, double fps,
                               std::span<const Placement> placements) {
    std::size_t total = frame_count;
    for (const Placement& p : placements) {
        if (p.mode == PlacementMode::Insert) total += p.duration_frames(fps);
    }
    return total;
}

void Sample::validate() const {
    for (std::size_t i = 0; i < options.size(); ++i) {
        if (options[i].empty()) throw Error(sample_id + ": empty option");
        for (std::size_t j = i + 1; j < options.size(); ++j) {
            if (options[i] == options[j]) {
                throw Error(sample_id + ": duplicate option '" + options[i] + "'");
            }
        }
    }
    if (answer_index < 0 || answer_index > 3) {
        throw Error(sample_id + ": answer_index out of range");
    }
    if (haystack.frame_count == 0) throw Error(sample_id + ": empty haystack ref");

    for (const auto& [needle, placement] : needles) {
        needle.validate();
        (void)placement;
    }
    // Chronological order on the original timeline.
    for (std::size_t i = 1; i < needles.size(); ++i) {
        if (needles[i].second.start_frame < needles[i - 1].second.start_frame) {
            throw Error(sample_id + ": needles not chronologically sorted");
        }
    }
    if (!needle_spans.empty()) {
        if (needle_spans.size() != needles.size()) {
            throw Error(sample_id + ": span count != needle count");
        }
        for (std::size_t i = 1; i < needle_spans.size(); ++i) {
            if (needle_spans[i].begin < needle_spans[i - 1].end) {
                throw OverlapError(sample_id + ": resolved spans overlap");
            }
        }
    }
}

}  // namespace niah
