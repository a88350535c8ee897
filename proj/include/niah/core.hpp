#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "niah/errors.hpp"

namespace niah {

// ─── Rasters ─────────────────────────────────────────────────────────────

// One 8-bit channel, rows = y, cols = x.
using Channel = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
};

struct Image {
    Channel r, g, b;

    Image() = default;
    Image(int width, int height, Rgb fill = {});

    int width() const { return static_cast<int>(r.cols()); }
    int height() const { return static_cast<int>(r.rows()); }
    bool empty() const { return r.size() == 0; }
    bool same_size(const Image& other) const {
        return width() == other.width() && height() == other.height();
    }

    Rgb at(int x, int y) const { return {r(y, x), g(y, x), b(y, x)}; }
    void set(int x, int y, Rgb c) {
        r(y, x) = c.r;
        g(y, x) = c.g;
        b(y, x) = c.b;
    }

    bool operator==(const Image& other) const;
};

using Frame = Image;

std::uint64_t hash_image(const Image& img);

// The haystack: ordered frames at a fixed rate. Immutable by convention —
// compositing operations return fresh sequences.
struct FrameSequence {
    std::vector<Frame> frames;
    double fps = 2.0;
    std::string source_id;

    std::size_t frame_count() const { return frames.size(); }
    double duration_s() const { return static_cast<double>(frames.size()) / fps; }
    int width() const { return frames.empty() ? 0 : frames.front().width(); }
    int height() const { return frames.empty() ? 0 : frames.front().height(); }

    // frame_count >= 1, fps > 0, all frames one resolution.
    void validate() const;
};

std::uint64_t hash_sequence(const FrameSequence& seq);

// ─── Tasks ───────────────────────────────────────────────────────────────

enum class TaskKind {
    RetrievalE,
    RetrievalI1,
    RetrievalI2,
    OrderingE,
    OrderingI1,
    OrderingI2,
    CountingE1,
    CountingE2,
    CountingI,
    RetrievalAct,
    OrderingAct,
    CountingAct,
};

// The nine standard sub-tasks, in benchmark order.
constexpr std::array<TaskKind, 9> kStandardTasks = {
    TaskKind::RetrievalE,  TaskKind::RetrievalI1, TaskKind::RetrievalI2,
    TaskKind::OrderingE,   TaskKind::OrderingI1,  TaskKind::OrderingI2,
    TaskKind::CountingE1,  TaskKind::CountingE2,  TaskKind::CountingI,
};

std::string to_string(TaskKind task);
TaskKind task_from_string(const std::string& name);

bool is_counting(TaskKind task);
bool is_ordering(TaskKind task);
bool is_retrieval(TaskKind task);
// Intra-frame edit tasks keep the frame count; insert tasks grow it.
bool is_edit_task(TaskKind task);

// ─── Needles & placement ─────────────────────────────────────────────────

enum class NeedleKind {
    SubtitleEdit,
    RegionComposite,
    StaticImageInsert,
    ClipInsert,
};

std::string to_string(NeedleKind kind);
NeedleKind needle_kind_from_string(const std::string& name);

// Pixel rectangle, used by RegionComposite needles.
struct Rect {
    int x = 0, y = 0, w = 0, h = 0;
    bool intersects(const Rect& o) const {
        return x < o.x + o.w && o.x < x + w && y < o.y + o.h && o.y < y + h;
    }
};

struct NeedleSpec {
    NeedleKind kind = NeedleKind::SubtitleEdit;
    std::string label;        // canonical answer string
    std::string text;         // SubtitleEdit: full rendered subtitle line
    std::string payload_ref;  // image/clip reference, e.g. "builtin:fruits/pear"
    int occurrences = 1;      // RegionComposite: paste count in [1, 4]
    std::vector<Rect> regions;  // RegionComposite: realized paste rectangles

    void validate() const;
};

enum class PlacementMode { Edit, Insert };

std::string to_string(PlacementMode mode);
PlacementMode placement_mode_from_string(const std::string& name);

// Where a needle lives on the ORIGINAL haystack timeline. Insert placements
// are resolved left-to-right against the growing output timeline.
struct Placement {
    double depth = 0.0;        // fraction of haystack duration, [0, 1)
    std::size_t start_frame = 0;
    double duration_s = 1.0;
    PlacementMode mode = PlacementMode::Edit;

    std::size_t duration_frames(double fps) const;
};

// Depth fraction quantized to a frame index: round(depth * frame_count),
// clamped to [0, frame_count - 1].
std::size_t depth_to_start_frame(double depth, std::size_t frame_count);

// Same, but additionally clamped so an Edit needle of `needle_frames` fits
// inside the sequence. Insert needles may start at frame_count (append).
std::size_t depth_to_start_frame(double depth, std::size_t frame_count,
                                 std::size_t needle_frames, PlacementMode mode);

// A needle's realized frame interval [begin, end) on the OUTPUT timeline.
struct ResolvedSpan {
    std::size_t needle_index = 0;
    std::size_t begin = 0;
    std::size_t end = 0;
    PlacementMode mode = PlacementMode::Edit;
};

// Resolves placements against a haystack of `frame_count` frames: Edit spans
// keep their indices, each Insert shifts everything after it by its length.
// Result is sorted and pairwise disjoint; throws OverlapError otherwise.
std::vector<ResolvedSpan> effective_timeline(std::size_t frame_count, double fps,
                                             std::span<const Placement> placements);
std::vector<ResolvedSpan> effective_timeline(const FrameSequence& haystack,
                                             std::span<const Placement> placements);

// frame_count plus the total length of Insert placements.
std::size_t output_frame_count(std::size_t frame_count, double fps,
                               std::span<const Placement> placements);

// ─── Samples ─────────────────────────────────────────────────────────────

// Geometry of the source haystack, kept with each sample so evaluation can
// bucket by duration without reloading media.
struct HaystackRef {
    std::string source_id;
    double duration_s = 0.0;
    double fps = 0.0;
    std::size_t frame_count = 0;
};

struct Sample {
    std::string sample_id;
    TaskKind task = TaskKind::RetrievalE;
    HaystackRef haystack;
    std::vector<std::pair<NeedleSpec, Placement>> needles;
    std::string question;
    std::array<std::string, 4> options;
    int answer_index = 0;
    std::uint64_t gen_seed = 0;

    std::string media_path;                // frame dir (or container file), may be empty
    std::size_t output_frames = 0;         // frame count after inserts
    std::vector<ResolvedSpan> needle_spans;  // resolved output-timeline spans

    const std::string& answer_text() const { return options[static_cast<std::size_t>(answer_index)]; }

    // Core invariants: 4 distinct options, valid answer index, needles in
    // chronological order, spans consistent with placements.
    void validate() const;
};

}  // namespace niah
