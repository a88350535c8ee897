#include "niah/taskgen.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <set>
#include <thread>

#include "niah/frame_dir.hpp"
#include "niah/image.hpp"

namespace fs = std::filesystem;

namespace niah {

std::string default_question_template(TaskKind task) {
    switch (task) {
        case TaskKind::RetrievalE: return "What is the secret word in this video?";
        case TaskKind::RetrievalI1: return "What is the fruit that appears in this video?";
        case TaskKind::RetrievalI2: return "What is the landmark that appears in this video?";
        case TaskKind::OrderingE:
            return "What is the order of the secret words that appeared in the video?";
        case TaskKind::OrderingI1: return "What is the order of fruits appearing in the video?";
        case TaskKind::OrderingI2: return "What is the order of images appearing in the video?";
        case TaskKind::CountingE1: return "How many secret words appeared in the video?";
        case TaskKind::CountingE2:
            return "Some {LABEL}s were inserted into 4 small sections of the video. "
                   "How many {LABEL}s appeared in the video in total?";
        case TaskKind::CountingI: return "How many {LABEL}s appeared in the video?";
        case TaskKind::RetrievalAct: return "What is the action that appears in this video?";
        case TaskKind::OrderingAct: return "What is the order of actions appearing in the video?";
        case TaskKind::CountingAct: return "How many {LABEL} actions appeared in the video?";
    }
    throw Error("unreachable TaskKind");
}

// ─── Placement ───────────────────────────────────────────────────────────

std::vector<Placement> place_needles(std::span<const double> durations,
                                     double haystack_duration_s, double fps, double min_gap_s,
                                     PlacementMode mode, Rng& rng, double max_depth) {
    const std::size_t n = durations.size();
    if (n == 0) return {};
    const auto frame_count =
        static_cast<std::size_t>(std::llround(haystack_duration_s * fps));
    const auto gap_f = static_cast<std::size_t>(std::llround(min_gap_s * fps));

    std::vector<std::size_t> dur_f(n);
    std::size_t need = (n - 1) * gap_f;
    for (std::size_t i = 0; i < n; ++i) {
        dur_f[i] = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::llround(durations[i] * fps)));
        need += dur_f[i];
    }
    if (need > frame_count) {
        throw Infeasible("place_needles: " + std::to_string(n) + " needle(s) need " +
                         std::to_string(need) + " frames, haystack has " +
                         std::to_string(frame_count));
    }
    const std::size_t slack = frame_count - need;

    std::vector<std::size_t> starts(n);
    if (n == 1) {
        // Retrieval draws depth uniformly in [0, max_depth].
        const auto depth_cap = static_cast<std::size_t>(
            std::floor(max_depth * static_cast<double>(frame_count)));
        starts[0] = rng.uniform_u64(std::min(slack, depth_cap) + 1);
    } else {
        // Order statistics of n uniform draws over the slack, then spread by
        // the mandatory duration+gap budget: uniform placement, gaps exact.
        std::vector<std::size_t> u(n);
        for (std::size_t i = 0; i < n; ++i) u[i] = rng.uniform_u64(slack + 1);
        std::sort(u.begin(), u.end());
        std::size_t budget = 0;
        for (std::size_t i = 0; i < n; ++i) {
            starts[i] = u[i] + budget;
            budget += dur_f[i] + gap_f;
        }
    }

    std::vector<Placement> placements;
    placements.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Placement p;
        p.start_frame = starts[i];
        p.depth = static_cast<double>(starts[i]) / static_cast<double>(frame_count);
        p.duration_s = durations[i];
        p.mode = mode;
        placements.push_back(p);
    }
    return placements;
}

std::vector<Placement> place_needles(std::size_t n, double haystack_duration_s, double fps,
                                     double needle_duration_s, double min_gap_s,
                                     PlacementMode mode, Rng& rng, double max_depth) {
    const std::vector<double> durations(n, needle_duration_s);
    return place_needles(std::span<const double>(durations), haystack_duration_s, fps,
                         min_gap_s, mode, rng, max_depth);
}

// ─── Option rules ────────────────────────────────────────────────────────

namespace {

OptionSet shuffled_options(const std::string& gt, std::vector<std::string> distractors,
                           Rng& rng) {
    std::vector<std::string> options;
    options.reserve(4);
    options.push_back(gt);
    for (std::string& d : distractors) options.push_back(std::move(d));
    rng.shuffle(options);

    OptionSet out;
    for (std::size_t i = 0; i < 4; ++i) {
        out.options[i] = options[i];
        if (options[i] == gt) out.answer_index = static_cast<int>(i);
    }
    return out;
}

}  // namespace

OptionSet make_options_retrieval(const std::string& gt_label,
                                 const std::vector<std::string>& pool_labels, Rng& rng) {
    std::vector<std::string> others;
    others.reserve(pool_labels.size());
    bool found = false;
    for (const std::string& label : pool_labels) {
        if (label == gt_label) {
            found = true;
        } else {
            others.push_back(label);
        }
    }
    if (!found) throw UnknownLabel("make_options_retrieval: gt '" + gt_label + "' not in pool");
    if (others.size() < 3) {
        throw PoolTooSmall("make_options_retrieval: need 4 labels, pool has " +
                           std::to_string(pool_labels.size()));
    }
    const std::vector<std::size_t> picks = rng.sample_distinct(others.size(), 3);
    std::vector<std::string> distractors;
    for (std::size_t i : picks) distractors.push_back(others[i]);
    return shuffled_options(gt_label, std::move(distractors), rng);
}

std::string render_ordering_option(std::span<const std::string> labels) {
    std::string out;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (i) out += ", ";
        out += labels[i];
    }
    return out;
}

OptionSet make_options_ordering(const std::array<std::string, 4>& gt_sequence, Rng& rng) {
    {
        std::set<std::string> distinct(gt_sequence.begin(), gt_sequence.end());
        if (distinct.size() != 4) {
            throw Error("make_options_ordering: ground-truth labels not distinct");
        }
    }
    // All 24 permutations of {0,1,2,3}; index 0 is the identity.
    std::array<int, 4> perm{0, 1, 2, 3};
    std::vector<std::array<int, 4>> perms;
    do {
        perms.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));

    std::vector<std::array<int, 4>> non_identity(perms.begin() + 1, perms.end());
    const std::vector<std::size_t> picks = rng.sample_distinct(non_identity.size(), 3);

    std::vector<std::string> distractors;
    for (std::size_t pi : picks) {
        std::vector<std::string> seq;
        for (int j : non_identity[pi]) seq.push_back(gt_sequence[static_cast<std::size_t>(j)]);
        distractors.push_back(render_ordering_option(seq));
    }
    const std::string gt = render_ordering_option(
        std::vector<std::string>(gt_sequence.begin(), gt_sequence.end()));
    return shuffled_options(gt, std::move(distractors), rng);
}

OptionSet make_options_counting(int gt, Rng& rng) {
    if (gt < 1) throw Error("make_options_counting: gt must be positive");
    const double sigma = std::max(1.0, std::round(0.3 * gt));

    std::set<int> used{gt};
    std::vector<int> distractors;
    for (int attempt = 0; attempt < 256 && distractors.size() < 3; ++attempt) {
        const int draw = static_cast<int>(std::llround(rng.normal(gt, sigma)));
        if (draw >= 1 && used.insert(draw).second) distractors.push_back(draw);
    }
    // Nearest unused positive integers if the sampler stalled.
    for (int delta = 1; distractors.size() < 3; ++delta) {
        for (const int candidate : {gt + delta, gt - delta}) {
            if (distractors.size() == 3) break;
            if (candidate >= 1 && used.insert(candidate).second) distractors.push_back(candidate);
        }
    }

    std::vector<std::string> rendered;
    for (int d : distractors) rendered.push_back(std::to_string(d));
    return shuffled_options(std::to_string(gt), std::move(rendered), rng);
}

// ─── Sample generation ───────────────────────────────────────────────────

namespace {

NeedleKind insert_needle_kind(PoolKind kind) {
    return kind == PoolKind::ActionClips ? NeedleKind::ClipInsert
                                         : NeedleKind::StaticImageInsert;
}

std::string substitute_label(std::string question, const std::string& label) {
    const std::string token = "{LABEL}";
    std::size_t pos = 0;
    while ((pos = question.find(token, pos)) != std::string::npos) {
        question.replace(pos, token.size(), label);
        pos += label.size();
    }
    return question;
}

// Lazily filters shuffled pool entries, returning the first `want` accepted.
// Draw order is a function of the rng stream only, so swapping pool content
// of equal size preserves the rest of the sample geometry.
std::vector<PoolEntry> draw_filtered(const NeedlePool& pool, std::size_t want,
                                     const FrameSequence& haystack, const GenSettings& settings,
                                     Rng& rng) {
    std::vector<PoolEntry> shuffled = pool.entries;
    rng.shuffle(shuffled);
    std::vector<PoolEntry> accepted;
    for (const PoolEntry& entry : shuffled) {
        if (accepted.size() == want) break;
        if (settings.filter_backend != nullptr && pool.kind != PoolKind::ActionClips) {
            const Image img = load_image_payload(entry.payload_ref);
            if (max_similarity(img, haystack, *settings.filter_backend) >
                settings.filter_threshold) {
                continue;  // too similar to the haystack, redraw
            }
        }
        accepted.push_back(entry);
    }
    if (accepted.size() < want) {
        throw FilterExhausted("pool " + pool.pool_id + ": only " +
                              std::to_string(accepted.size()) + " of " + std::to_string(want) +
                              " candidates survive the similarity filter");
    }
    return accepted;
}

// Clip needles splice their frames verbatim, so their duration on the
// haystack timeline is frame_count at the haystack rate, not the clip's own.
double clip_duration_s(const PoolEntry& entry, double fps) {
    const FrameSequence clip = load_frame_dir(entry.payload_ref);
    return static_cast<double>(clip.frame_count()) / fps;
}

std::size_t feasible_needle_cap(double duration_s, double fps, double needle_s, double gap_s) {
    const auto frames = static_cast<std::size_t>(std::llround(duration_s * fps));
    const auto dur_f = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(needle_s * fps)));
    const auto gap_f = static_cast<std::size_t>(std::llround(gap_s * fps));
    return (frames + gap_f) / (dur_f + gap_f);
}

}  // namespace

FrameSequence render_sample_media(const FrameSequence& haystack, const Sample& sample,
                                  const SubtitleStyle& style) {
    FrameSequence out = haystack;
    // Edits first: they keep original indices.
    for (const auto& [needle, placement] : sample.needles) {
        if (placement.mode != PlacementMode::Edit) continue;
        switch (needle.kind) {
            case NeedleKind::SubtitleEdit:
                out = overlay_subtitle(out, placement, needle.text, style);
                break;
            case NeedleKind::RegionComposite: {
                std::vector<RegionSpec> regions;
                for (const Rect& r : needle.regions) regions.push_back({r});
                out = composite_regions(out, placement, load_image_payload(needle.payload_ref),
                                        regions);
                break;
            }
            default:
                throw Error(sample.sample_id + ": insert needle with Edit placement");
        }
    }
    // Inserts left to right, shifting by what has been spliced in already.
    std::size_t shift = 0;
    for (const auto& [needle, placement] : sample.needles) {
        if (placement.mode != PlacementMode::Insert) continue;
        FrameSequence clip;
        if (needle.kind == NeedleKind::StaticImageInsert) {
            clip = image_to_clip(load_image_payload(needle.payload_ref), placement.duration_s,
                                 haystack.fps, haystack.width(), haystack.height());
        } else if (needle.kind == NeedleKind::ClipInsert) {
            const FrameSequence raw = load_frame_dir(needle.payload_ref);
            clip.fps = haystack.fps;
            clip.source_id = raw.source_id;
            for (const Frame& f : raw.frames) {
                clip.frames.push_back(letterbox(f, haystack.width(), haystack.height()));
            }
        } else {
            throw Error(sample.sample_id + ": edit needle with Insert placement");
        }
        out = insert_clip(out, placement.start_frame + shift, clip);
        shift += clip.frame_count();
    }
    return out;
}

int recount_from_needles(const Sample& sample) {
    int total = 0;
    for (const auto& [needle, placement] : sample.needles) {
        (void)placement;
        total += needle.kind == NeedleKind::RegionComposite ? needle.occurrences : 1;
    }
    return total;
}

GeneratedSample gen_sample(const FrameSequence& haystack, const TaskConfig& cfg,
                           const std::string& sample_id, std::uint64_t seed,
                           const GenSettings& settings) {
    haystack.validate();
    Rng rng(seed);

    Sample sample;
    sample.sample_id = sample_id;
    sample.task = cfg.task;
    sample.gen_seed = seed;
    sample.haystack = {haystack.source_id, haystack.duration_s(), haystack.fps,
                       haystack.frame_count()};
    sample.question = cfg.question_template.empty() ? default_question_template(cfg.task)
                                                    : cfg.question_template;

    const double duration = haystack.duration_s();
    const double fps = haystack.fps;
    OptionSet opts;

    switch (cfg.task) {
        case TaskKind::RetrievalE: {
            const PoolEntry& entry =
                cfg.pool.entries[rng.uniform_u64(cfg.pool.entries.size())];
            auto placements = place_needles(1, duration, fps, cfg.needle_duration_s,
                                            cfg.min_gap_s, PlacementMode::Edit, rng,
                                            cfg.max_depth);
            NeedleSpec needle;
            needle.kind = NeedleKind::SubtitleEdit;
            needle.label = entry.label;
            needle.text = subtitle_text_for_pool(entry.label, cfg.pool);
            sample.needles.emplace_back(needle, placements[0]);
            opts = make_options_retrieval(entry.label, cfg.pool.labels(), rng);
            break;
        }
        case TaskKind::OrderingE: {
            if (cfg.pool.entries.size() < 4) {
                throw PoolTooSmall("ordering-e: pool " + cfg.pool.pool_id + " has fewer than 4 labels");
            }
            const auto picks = rng.sample_distinct(cfg.pool.entries.size(), 4);
            auto placements = place_needles(4, duration, fps, cfg.needle_duration_s,
                                            cfg.min_gap_s, PlacementMode::Edit, rng);
            std::array<std::string, 4> gt_sequence;
            for (std::size_t i = 0; i < 4; ++i) {
                const PoolEntry& entry = cfg.pool.entries[picks[i]];
                NeedleSpec needle;
                needle.kind = NeedleKind::SubtitleEdit;
                needle.label = entry.label;
                needle.text = subtitle_text_for_pool(entry.label, cfg.pool);
                sample.needles.emplace_back(needle, placements[i]);
                gt_sequence[i] = entry.label;
            }
            opts = make_options_ordering(gt_sequence, rng);
            break;
        }
        case TaskKind::CountingE1: {
            const std::size_t cap =
                feasible_needle_cap(duration, fps, cfg.needle_duration_s, cfg.min_gap_s);
            if (cap < static_cast<std::size_t>(cfg.count_min)) {
                throw Infeasible("counting-e1: haystack of " + std::to_string(duration) +
                                 " s cannot hold " + std::to_string(cfg.count_min) + " needles");
            }
            const auto hi = std::min<std::size_t>(cap, static_cast<std::size_t>(cfg.count_max));
            const auto n = static_cast<std::size_t>(
                rng.uniform_int(cfg.count_min, static_cast<std::int64_t>(hi)));
            auto placements = place_needles(n, duration, fps, cfg.needle_duration_s,
                                            cfg.min_gap_s, PlacementMode::Edit, rng);
            for (std::size_t i = 0; i < n; ++i) {
                const PoolEntry& entry =
                    cfg.pool.entries[rng.uniform_u64(cfg.pool.entries.size())];
                NeedleSpec needle;
                needle.kind = NeedleKind::SubtitleEdit;
                needle.label = entry.label;
                needle.text = subtitle_text_for_pool(entry.label, cfg.pool);
                sample.needles.emplace_back(needle, placements[i]);
            }
            opts = make_options_counting(static_cast<int>(n), rng);
            break;
        }
        case TaskKind::RetrievalI1:
        case TaskKind::RetrievalI2:
        case TaskKind::RetrievalAct: {
            const auto picked = draw_filtered(cfg.pool, 1, haystack, settings, rng);
            const PoolEntry& entry = picked[0];
            const double needle_s = cfg.pool.kind == PoolKind::ActionClips
                                        ? clip_duration_s(entry, fps)
                                        : cfg.needle_duration_s;
            auto placements = place_needles(1, duration, fps, needle_s, cfg.min_gap_s,
                                            PlacementMode::Insert, rng, cfg.max_depth);
            NeedleSpec needle;
            needle.kind = insert_needle_kind(cfg.pool.kind);
            needle.label = entry.label;
            needle.payload_ref = entry.payload_ref;
            sample.needles.emplace_back(needle, placements[0]);
            opts = make_options_retrieval(entry.label, cfg.pool.labels(), rng);
            break;
        }
        case TaskKind::OrderingI1:
        case TaskKind::OrderingI2:
        case TaskKind::OrderingAct: {
            const auto picked = draw_filtered(cfg.pool, 4, haystack, settings, rng);
            std::vector<double> durations;
            for (const PoolEntry& entry : picked) {
                durations.push_back(cfg.pool.kind == PoolKind::ActionClips
                                        ? clip_duration_s(entry, fps)
                                        : cfg.needle_duration_s);
            }
            auto placements = place_needles(std::span<const double>(durations), duration, fps,
                                            cfg.min_gap_s, PlacementMode::Insert, rng);
            std::array<std::string, 4> gt_sequence;
            for (std::size_t i = 0; i < 4; ++i) {
                NeedleSpec needle;
                needle.kind = insert_needle_kind(cfg.pool.kind);
                needle.label = picked[i].label;
                needle.payload_ref = picked[i].payload_ref;
                sample.needles.emplace_back(needle, placements[i]);
                gt_sequence[i] = picked[i].label;
            }
            opts = make_options_ordering(gt_sequence, rng);
            break;
        }
        case TaskKind::CountingE2: {
            const auto picked = draw_filtered(cfg.pool, 1, haystack, settings, rng);
            const PoolEntry& entry = picked[0];
            auto placements = place_needles(4, duration, fps, cfg.needle_duration_s,
                                            cfg.min_gap_s, PlacementMode::Edit, rng);
            int total = 0;
            for (std::size_t i = 0; i < 4; ++i) {
                const int occurrences = static_cast<int>(rng.uniform_int(1, 4));
                const auto regions =
                    sample_disjoint_regions(haystack.width(), haystack.height(), occurrences, rng);
                NeedleSpec needle;
                needle.kind = NeedleKind::RegionComposite;
                needle.label = entry.label;
                needle.payload_ref = entry.payload_ref;
                needle.occurrences = occurrences;
                for (const RegionSpec& region : regions) needle.regions.push_back(region.rect);
                sample.needles.emplace_back(needle, placements[i]);
                total += occurrences;
            }
            sample.question = substitute_label(sample.question, entry.label);
            opts = make_options_counting(total, rng);
            break;
        }
        case TaskKind::CountingI:
        case TaskKind::CountingAct: {
            const auto picked = draw_filtered(cfg.pool, 1, haystack, settings, rng);
            const PoolEntry& entry = picked[0];
            const double needle_s = cfg.pool.kind == PoolKind::ActionClips
                                        ? clip_duration_s(entry, fps)
                                        : cfg.needle_duration_s;
            const std::size_t cap = feasible_needle_cap(duration, fps, needle_s, cfg.min_gap_s);
            if (cap < static_cast<std::size_t>(cfg.count_min)) {
                throw Infeasible("counting-i: haystack of " + std::to_string(duration) +
                                 " s cannot hold " + std::to_string(cfg.count_min) + " needles");
            }
            const auto hi = std::min<std::size_t>(cap, static_cast<std::size_t>(cfg.count_max));
            const auto n = static_cast<std::size_t>(
                rng.uniform_int(cfg.count_min, static_cast<std::int64_t>(hi)));
            auto placements = place_needles(n, duration, fps, needle_s, cfg.min_gap_s,
                                            PlacementMode::Insert, rng);
            for (std::size_t i = 0; i < n; ++i) {
                NeedleSpec needle;
                needle.kind = insert_needle_kind(cfg.pool.kind);
                needle.label = entry.label;
                needle.payload_ref = entry.payload_ref;
                sample.needles.emplace_back(needle, placements[i]);
            }
            sample.question = substitute_label(sample.question, entry.label);
            opts = make_options_counting(static_cast<int>(n), rng);
            break;
        }
    }

    sample.options = opts.options;
    sample.answer_index = opts.answer_index;

    std::vector<Placement> placements;
    for (const auto& [needle, placement] : sample.needles) placements.push_back(placement);
    sample.needle_spans = effective_timeline(haystack.frame_count(), fps, placements);
    sample.output_frames = output_frame_count(haystack.frame_count(), fps, placements);
    sample.validate();
    if (is_counting(cfg.task) &&
        std::to_string(recount_from_needles(sample)) != sample.answer_text()) {
        throw Error(sample_id + ": recount does not match stored answer");
    }

    GeneratedSample out;
    out.sample = std::move(sample);
    if (settings.render_media) {
        out.media = render_sample_media(haystack, out.sample, settings.subtitle_style);
        out.has_media = true;
        if (out.media.frame_count() != out.sample.output_frames) {
            throw Error(sample_id + ": rendered frame count diverges from timeline arithmetic");
        }
    }
    return out;
}

// ─── Benchmark plans ─────────────────────────────────────────────────────

std::string DurationBuckets::bucket_of(double duration_s) const {
    if (duration_s >= short_lo && duration_s < medium_lo) return "short";
    if (duration_s >= medium_lo && duration_s < long_lo) return "medium";
    if (duration_s >= long_lo && duration_s <= long_hi) return "long";
    return "other";
}

std::string task_pool_ref(const BenchmarkPlan& plan, TaskKind task) {
    const auto it = plan.overrides.find(task);
    if (it != plan.overrides.end() && !it->second.pool.empty()) return it->second.pool;
    switch (task) {
        case TaskKind::RetrievalE:
        case TaskKind::OrderingE:
        case TaskKind::CountingE1:
            return "builtin:names";
        case TaskKind::RetrievalI1:
        case TaskKind::OrderingI1:
            return "builtin:fruits";
        default:
            throw Error("task " + to_string(task) +
                        " needs a user-supplied pool; set overrides[\"" + to_string(task) +
                        "\"].pool in the plan");
    }
}

NeedlePool resolve_pool(const std::string& ref) {
    if (auto builtin = builtin_pool(ref)) return *builtin;
    if (ref.rfind("builtin:", 0) == 0) throw Error("unknown builtin pool: " + ref);
    return load_pool_manifest(ref);
}

TaskConfig task_config_for(const BenchmarkPlan& plan, TaskKind task) {
    TaskConfig cfg;
    cfg.task = task;
    cfg.pool = resolve_pool(task_pool_ref(plan, task));
    const auto it = plan.overrides.find(task);
    cfg.question_template = (it != plan.overrides.end() && !it->second.question.empty())
                                ? it->second.question
                                : default_question_template(task);
    cfg.needle_duration_s = plan.needle_duration_s;
    cfg.min_gap_s = plan.min_gap_s;
    cfg.max_depth = plan.max_depth;
    cfg.count_min = plan.count_min;
    cfg.count_max = plan.count_max;
    return cfg;
}

namespace {

FrameSequence acquire_haystack(const BenchmarkPlan& plan, const HaystackSource& source) {
    if (source.kind == "synthetic") {
        SyntheticHaystackConfig cfg = source.synth;
        cfg.fps = plan.fps;
        cfg.width = plan.width;
        cfg.height = plan.height;
        FrameSequence seq = synth_haystack(cfg);
        if (!source.id.empty()) seq.source_id = source.id;
        return seq;
    }
    if (source.kind == "frame_dir") {
        FrameSequence seq = load_frame_dir(source.path);
        if (!source.id.empty()) seq.source_id = source.id;
        return seq;
    }
    if (source.kind == "video") {
        FrameSequence seq =
            load_haystack(plan.codec, source.path, plan.fps, plan.width, plan.height);
        if (!source.id.empty()) seq.source_id = source.id;
        return seq;
    }
    throw Error("unknown haystack source kind: " + source.kind);
}

}  // namespace

BuildResult build_benchmark(const BenchmarkPlan& plan, const fs::path& out_dir, int jobs) {
    if (plan.haystacks.empty()) throw Error("build_benchmark: plan has no haystacks");
    if (plan.media != "frames" && plan.media != "none" && plan.media != "video") {
        throw Error("build_benchmark: unknown media mode '" + plan.media + "'");
    }

    DescriptorSimilarity descriptor;
    GenSettings settings;
    settings.render_media = plan.media != "none";
    if (plan.filter_enabled) {
        if (plan.filter_backend != "descriptor") {
            throw Error("build_benchmark: unknown filter backend '" + plan.filter_backend + "'");
        }
        settings.filter_backend = &descriptor;
        settings.filter_threshold = plan.filter_threshold;
    }

    std::map<TaskKind, TaskConfig> configs;
    for (TaskKind task : plan.tasks) configs.emplace(task, task_config_for(plan, task));

    struct HaystackOutput {
        std::vector<Sample> samples;
        std::vector<BuildError> errors;
    };
    std::vector<HaystackOutput> outputs(plan.haystacks.size());

    auto process_haystack = [&](std::size_t h) {
        HaystackOutput& out = outputs[h];
        char hay_id[16];
        std::snprintf(hay_id, sizeof(hay_id), "hay%04zu", h);

        FrameSequence haystack;
        try {
            haystack = acquire_haystack(plan, plan.haystacks[h]);
            const std::string bucket = plan.buckets.bucket_of(haystack.duration_s());
            if (bucket == "other") {
                throw Error("haystack duration " + std::to_string(haystack.duration_s()) +
                            " s outside plan buckets");
            }
        } catch (const Error& e) {
            for (TaskKind task : plan.tasks) {
                out.errors.push_back({to_string(task) + "__" + hay_id, e.what()});
            }
            return;
        }

        for (TaskKind task : plan.tasks) {
            const std::string sample_id = to_string(task) + "__" + hay_id;
            try {
                const std::uint64_t seed = derive_seed(plan.seed, sample_id);
                GeneratedSample generated =
                    gen_sample(haystack, configs.at(task), sample_id, seed, settings);

                if (generated.has_media && !out_dir.empty()) {
                    const fs::path media_dir = out_dir / "media" / sample_id;
                    if (plan.media == "frames") {
                        save_frame_dir(generated.media, media_dir);
                        generated.sample.media_path = fs::relative(media_dir, out_dir).string();
                    } else {  // "video"
                        fs::create_directories(out_dir / "media");
                        const fs::path file = out_dir / "media" / (sample_id + ".mp4");
                        encode_video(plan.codec, generated.media, file);
                        generated.sample.media_path = fs::relative(file, out_dir).string();
                    }
                }
                out.samples.push_back(std::move(generated.sample));
            } catch (const Error& e) {
                out.errors.push_back({sample_id, e.what()});
            }
        }
    };

    const int workers =
        std::max(1, std::min(jobs, static_cast<int>(plan.haystacks.size())));
    if (workers == 1) {
        for (std::size_t h = 0; h < plan.haystacks.size(); ++h) process_haystack(h);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (;;) {
                const std::size_t h = next.fetch_add(1);
                if (h >= plan.haystacks.size()) return;
                process_haystack(h);
            }
        };
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    // Merge in haystack order so scheduling never shows in the manifest.
    BuildResult result;
    for (HaystackOutput& out : outputs) {
        for (Sample& s : out.samples) {
            result.task_counts[s.task] += 1;
            result.samples.push_back(std::move(s));
        }
        result.errors.insert(result.errors.end(), out.errors.begin(), out.errors.end());
    }
    return result;
}

}  // namespace niah
