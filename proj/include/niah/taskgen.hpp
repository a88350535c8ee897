#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "niah/compositor.hpp"
#include "niah/core.hpp"
#include "niah/haystack.hpp"
#include "niah/pools.hpp"
#include "niah/rng.hpp"
#include "niah/similarity.hpp"

namespace niah {

// Per-task generation rules: which pool feeds the needles, the question
// template ("{LABEL}" is substituted for counting tasks), timing bounds.
struct TaskConfig {
    TaskKind task = TaskKind::RetrievalE;
    NeedlePool pool;
    std::string question_template;
    double needle_duration_s = 1.0;
    double min_gap_s = 1.0;
    int count_min = 2;   // Counting-E1 / Counting-I needle count range
    int count_max = 6;
    double max_depth = 0.9;  // single-needle placement cap
};

std::string default_question_template(TaskKind task);

// ─── Placement ───────────────────────────────────────────────────────────

// n chronologically sorted placements with pairwise start gaps of at least
// needle_duration_s + min_gap_s, uniform over the feasible range. A single
// needle is capped at depth max_depth. Throws Infeasible.
std::vector<Placement> place_needles(std::size_t n, double haystack_duration_s, double fps,
                                     double needle_duration_s, double min_gap_s,
                                     PlacementMode mode, Rng& rng, double max_depth = 0.9);

// Same, with one duration per needle (clip needles vary in length).
std::vector<Placement> place_needles(std::span<const double> durations,
                                     double haystack_duration_s, double fps, double min_gap_s,
                                     PlacementMode mode, Rng& rng, double max_depth = 0.9);

// ─── Option rules ────────────────────────────────────────────────────────

struct OptionSet {
    std::array<std::string, 4> options;
    int answer_index = 0;
};

// Ground truth plus three distinct distractor labels drawn without
// replacement from the pool; answer position uniform.
OptionSet make_options_retrieval(const std::string& gt_label,
                                 const std::vector<std::string>& pool_labels, Rng& rng);

// Four pairwise-distinct orderings of the ground-truth sequence, one of
// which is the sequence itself. Rendered "a, b, c, d".
OptionSet make_options_ordering(const std::array<std::string, 4>& gt_sequence, Rng& rng);

// Ground truth plus three distinct positive integers drawn from
// Normal(gt, max(1, round(0.3 gt))), with a nearest-unused fallback.
OptionSet make_options_counting(int gt, Rng& rng);

std::string render_ordering_option(std::span<const std::string> labels);

// ─── Sample generation ───────────────────────────────────────────────────

struct GenSettings {
    const SimilarityBackend* filter_backend = nullptr;  // null disables the needle filter
    double filter_threshold = kDefaultFilterThreshold;
    bool render_media = true;
    SubtitleStyle subtitle_style;
};

struct GeneratedSample {
    Sample sample;
    FrameSequence media;  // populated when settings.render_media
    bool has_media = false;
};

// Draws needles and placements for cfg.task, renders the composited video
// (optional), and produces the question, four options and answer.
// Deterministic for a fixed (haystack, cfg, seed).
GeneratedSample gen_sample(const FrameSequence& haystack, const TaskConfig& cfg,
                           const std::string& sample_id, std::uint64_t seed,
                           const GenSettings& settings);

// Recomputes the composited sequence from a manifest sample. Pure function,
// used both for media regeneration and by tests.
FrameSequence render_sample_media(const FrameSequence& haystack, const Sample& sample,
                                  const SubtitleStyle& style = {});

// Ground truth re-derived from the needle list (the edit log): needle count
// or total pasted occurrences for counting tasks.
int recount_from_needles(const Sample& sample);

// ─── Benchmark plans ─────────────────────────────────────────────────────

struct HaystackSource {
    std::string kind;  // "synthetic" | "frame_dir" | "video"
    std::string id;
    SyntheticHaystackConfig synth;  // kind == synthetic
    std::string path;               // kind == frame_dir | video
};

struct TaskOverride {
    std::string pool;      // pool reference, e.g. "builtin:animals" or a manifest path
    std::string question;  // question template override
};

struct DurationBuckets {
    double short_lo = 10.0, medium_lo = 30.0, long_lo = 60.0, long_hi = 180.0;
    // Closed-open buckets [10,30) [30,60) [60,180]; outside -> "other".
    std::string bucket_of(double duration_s) const;
};

struct BenchmarkPlan {
    std::string benchmark_id = "benchmark";
    std::uint64_t seed = 0;
    double fps = 2.0;
    int width = 336, height = 336;
    std::vector<HaystackSource> haystacks;
    std::vector<TaskKind> tasks{kStandardTasks.begin(), kStandardTasks.end()};
    std::map<TaskKind, TaskOverride> overrides;
    bool filter_enabled = true;
    std::string filter_backend = "descriptor";
    double filter_threshold = kDefaultFilterThreshold;
    std::string media = "frames";  // "frames" | "none" | "video"
    double needle_duration_s = 1.0;
    double min_gap_s = 1.0;
    double max_depth = 0.9;
    int count_min = 2, count_max = 6;
    DurationBuckets buckets;
    CodecBackend codec = CodecBackend::ffmpeg_default();
};

// Pool reference feeding a task under this plan (override, or the default
// binding). Throws when a task needs a user-supplied pool that is missing.
std::string task_pool_ref(const BenchmarkPlan& plan, TaskKind task);
NeedlePool resolve_pool(const std::string& ref);

TaskConfig task_config_for(const BenchmarkPlan& plan, TaskKind task);

struct BuildError {
    std::string sample_id;
    std::string message;
};

struct BuildResult {
    std::vector<Sample> samples;
    std::vector<BuildError> errors;
    std::map<TaskKind, std::size_t> task_counts;
};

// One sample per (haystack, task). Media, when requested, is written under
// out_dir/media/<sample_id>/. Per-sample failures are collected, not fatal.
// Haystacks are processed by `jobs` workers; output order is independent of
// scheduling because every sample owns a seed derived from its id.
BuildResult build_benchmark(const BenchmarkPlan& plan, const std::filesystem::path& out_dir,
                            int jobs = 1);

}  // namespace niah
