#include "niah/sweep.hpp"

#include <cmath>
#include <limits>

#include "niah/frame_dir.hpp"
#include "niah/rng.hpp"

namespace fs = std::filesystem;

namespace niah {

void SweepPlan::validate() const {
    if (durations_s.empty() || depths.empty()) throw Error("sweep: empty axes");
    for (double d : durations_s) {
        if (d < 10.0 || d > 180.0) {
            throw Error("sweep: durations must lie within [10, 180] s");
        }
    }
    for (double p : depths) {
        if (p < 0.0 || p > 0.9) throw Error("sweep: depths must lie within [0, 0.9]");
    }
    if (n_per_cell < 1) throw Error("sweep: n_per_cell must be positive");
    if (k < 1 || k > 4) throw Error("sweep: k must be in [1, 4]");
}

namespace {

std::string cell_sample_id(int slot, double duration_s, double depth) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "sweep__d%g__p%g__s%02d", duration_s, depth, slot);
    return buf;
}

Sample make_cell_sample(const SweepPlan& plan, const SweepSlot& slot_spec, int slot,
                        double duration_s, double depth, double fps) {
    const auto frames = static_cast<std::size_t>(std::llround(duration_s * fps));
    const auto needle_frames = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(plan.needle_duration_s * fps)));

    Placement placement;
    placement.mode = PlacementMode::Insert;
    placement.duration_s = plan.needle_duration_s;
    placement.start_frame =
        depth_to_start_frame(depth, frames, needle_frames, PlacementMode::Insert);
    placement.depth = depth;

    NeedleSpec needle;
    needle.kind = NeedleKind::StaticImageInsert;
    needle.label = slot_spec.entry.label;
    needle.payload_ref = slot_spec.entry.payload_ref;

    Sample sample;
    sample.sample_id = cell_sample_id(slot, duration_s, depth);
    sample.task = TaskKind::RetrievalI1;
    sample.haystack = {"sweep-source", duration_s, fps, frames};
    sample.needles.emplace_back(needle, placement);
    sample.question = default_question_template(TaskKind::RetrievalI1);
    sample.options = slot_spec.options.options;
    sample.answer_index = slot_spec.options.answer_index;
    sample.gen_seed = derive_seed(plan.seed, sample.sample_id);
    sample.needle_spans = {{0, placement.start_frame, placement.start_frame + needle_frames,
                            PlacementMode::Insert}};
    sample.output_frames = frames + needle_frames;
    return sample;
}

}  // namespace

SweepSlot sweep_slot(const SweepPlan& plan, int slot) {
    const NeedlePool pool = resolve_pool(plan.pool_ref);
    Rng rng(derive_seed(plan.seed, "sweep/slot" + std::to_string(slot)));
    SweepSlot spec;
    spec.entry = pool.entries[rng.uniform_u64(pool.entries.size())];
    spec.options = make_options_retrieval(spec.entry.label, pool.labels(), rng);
    return spec;
}

SweepSampleGeometry sweep_sample_geometry(const SweepPlan& plan, int slot, double duration_s,
                                          double depth) {
    const double fps = plan.long_source.fps;
    const auto frames = static_cast<std::size_t>(std::llround(duration_s * fps));
    const auto needle_frames = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(plan.needle_duration_s * fps)));
    const std::size_t start =
        depth_to_start_frame(depth, frames, needle_frames, PlacementMode::Insert);
    return {cell_sample_id(slot, duration_s, depth), frames, frames + needle_frames, start,
            start + needle_frames};
}

SweepGrid depth_sweep(const SweepPlan& plan, Adapter& adapter) {
    plan.validate();
    const double fps = plan.long_source.fps;

    std::vector<SweepSlot> slots;
    slots.reserve(static_cast<std::size_t>(plan.n_per_cell));
    for (int s = 0; s < plan.n_per_cell; ++s) slots.push_back(sweep_slot(plan, s));

    // Long source and per-(slot, duration) cuts are only materialized when
    // the adapter actually consumes pixels.
    const bool needs_media = adapter.needs_media();
    FrameSequence long_source;
    fs::path media_dir;
    if (needs_media) {
        long_source = synth_haystack(plan.long_source);
        media_dir = fs::temp_directory_path() / ("niah_sweep_" + std::to_string(plan.seed));
        fs::create_directories(media_dir);
    }

    EvalOptions eval_options;
    eval_options.k = plan.k;

    SweepGrid grid;
    grid.durations_s = plan.durations_s;
    grid.depths = plan.depths;
    grid.acc = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(plan.depths.size()),
                                         static_cast<Eigen::Index>(plan.durations_s.size()),
                                         std::numeric_limits<double>::quiet_NaN());

    for (std::size_t di = 0; di < plan.durations_s.size(); ++di) {
        const double duration = plan.durations_s[di];
        for (std::size_t pi = 0; pi < plan.depths.size(); ++pi) {
            const double depth = plan.depths[pi];
            SweepCell cell;
            cell.duration_s = duration;
            cell.depth = depth;

            if (duration > plan.long_source.duration_s) {
                cell.feasible = false;
                cell.note = "duration exceeds the long source";
                grid.cells.push_back(cell);
                continue;
            }

            std::size_t correct = 0;
            try {
                for (int s = 0; s < plan.n_per_cell; ++s) {
                    Sample sample = make_cell_sample(plan, slots[static_cast<std::size_t>(s)],
                                                     s, duration, depth, fps);
                    MediaRef media = media_ref_for(sample, {});
                    fs::path sample_dir;
                    if (needs_media) {
                        const std::uint64_t cut_seed = derive_seed(
                            plan.seed,
                            "cut/slot" + std::to_string(s) + "/d" + std::to_string(duration));
                        const FrameSequence cut =
                            cut_haystack(long_source, duration, cut_seed);
                        const FrameSequence rendered = render_sample_media(cut, sample);
                        sample_dir = media_dir / sample.sample_id;
                        save_frame_dir(rendered, sample_dir);
                        sample.media_path = sample_dir.string();
                        media = media_ref_for(sample, {});
                    }
                    const EvalRecord record =
                        evaluate_sample(sample, adapter, eval_options, media);
                    correct += record.circular_correct ? 1 : 0;
                    if (!sample_dir.empty()) {
                        std::error_code ec;
                        fs::remove_all(sample_dir, ec);
                    }
                }
                cell.n = plan.n_per_cell;
                cell.mean_acc = static_cast<double>(correct) / plan.n_per_cell;
                grid.acc(static_cast<Eigen::Index>(pi), static_cast<Eigen::Index>(di)) =
                    cell.mean_acc;
            } catch (const Infeasible& e) {
                cell.feasible = false;
                cell.note = e.what();
            }
            grid.cells.push_back(cell);
        }
    }

    if (needs_media && !media_dir.empty()) {
        std::error_code ec;
        fs::remove_all(media_dir, ec);
    }
    return grid;
}

}  // namespace niah
