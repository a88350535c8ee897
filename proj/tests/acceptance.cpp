// Acceptance suite: one pass/fail line per criterion, exit nonzero on any
// failure. Structural and statistical checks run at desk scale against the
// synthetic haystack generator; no external model or data is required.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "niah/commands.hpp"
#include "niah/frame_dir.hpp"
#include "niah/png_io.hpp"
#include "niah/report.hpp"
#include "niah/runner.hpp"
#include "niah/similarity.hpp"
#include "niah/sweep.hpp"

using namespace niah;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

int g_failures = 0;

void report_line(bool ok, const std::string& name, const std::string& detail) {
    std::printf("%s  %-34s %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

// chi-square critical value, 3 dof, alpha = 0.01
constexpr double kChi2Crit3Dof01 = 11.344866730144373;

fs::path work_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "niah_acceptance";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// 9-task plan over `count` synthetic haystacks, manifest-only, spanning the
// three duration buckets.
BenchmarkPlan structural_plan(int count, std::uint64_t seed, bool swapped_content) {
    BenchmarkPlan plan;
    plan.benchmark_id = swapped_content ? "structural-swap" : "structural";
    plan.seed = seed;
    plan.fps = 1.0;
    plan.width = 64;
    plan.height = 64;
    plan.media = "none";
    for (int i = 0; i < count; ++i) {
        HaystackSource src;
        src.kind = "synthetic";
        src.synth.seed = 5000 + static_cast<std::uint64_t>(i);
        switch (i % 3) {
            case 0: src.synth.duration_s = 10.0 + (i % 7) * 2.0; break;
            case 1: src.synth.duration_s = 30.0 + (i % 5) * 6.0; break;
            default: src.synth.duration_s = 60.0 + (i % 4) * 30.0; break;
        }
        plan.haystacks.push_back(src);
    }
    if (!swapped_content) {
        plan.overrides[TaskKind::RetrievalI2] = {"builtin:animals", ""};
        plan.overrides[TaskKind::OrderingI2] = {"builtin:animals", ""};
        plan.overrides[TaskKind::CountingE2] = {"builtin:animals", ""};
        plan.overrides[TaskKind::CountingI] = {"builtin:fruits", ""};
    } else {
        // Needle-content swap: names -> objects, fruits <-> animals.
        plan.overrides[TaskKind::RetrievalE] = {"builtin:objects", ""};
        plan.overrides[TaskKind::OrderingE] = {"builtin:objects", ""};
        plan.overrides[TaskKind::CountingE1] = {"builtin:objects", ""};
        plan.overrides[TaskKind::RetrievalI1] = {"builtin:animals", ""};
        plan.overrides[TaskKind::OrderingI1] = {"builtin:animals", ""};
        plan.overrides[TaskKind::RetrievalI2] = {"builtin:fruits", ""};
        plan.overrides[TaskKind::OrderingI2] = {"builtin:fruits", ""};
        plan.overrides[TaskKind::CountingE2] = {"builtin:fruits", ""};
        plan.overrides[TaskKind::CountingI] = {"builtin:animals", ""};
    }
    return plan;
}

Manifest manifest_from_build(const BenchmarkPlan& plan, const BuildResult& result) {
    Manifest m;
    m.benchmark_id = plan.benchmark_id;
    m.global_seed = plan.seed;
    m.config = plan_to_json(plan);
    m.samples = result.samples;
    return m;
}

MetricsReport evaluate_with(const Manifest& manifest, const std::string& spec, int k,
                            std::vector<EvalRecord>* records_out = nullptr) {
    auto adapter = make_adapter_from_spec(spec);
    EvalOptions options;
    options.k = k;
    options.jobs = 4;
    auto records = run_evaluation(manifest, *adapter, options);
    const MetricsReport report = aggregate(records, manifest);
    if (records_out != nullptr) *records_out = std::move(records);
    return report;
}

bool check_group_identities(const MetricsReport& report, std::string& detail) {
    auto ok = [&](const GroupMetrics& g, const std::string& name) {
        if (g.acc() > g.consist() + 1e-12) {
            detail = name + ": Acc > Consist";
            return false;
        }
        if (auto agc = g.acc_given_consist()) {
            if (std::abs(*agc * g.consist() - g.acc()) > 1e-9) {
                detail = name + ": Acc|Consist * Consist != Acc";
                return false;
            }
        }
        return true;
    };
    if (!ok(report.overall, "overall")) return false;
    for (const auto& [task, g] : report.per_task) {
        if (!ok(g, task)) return false;
    }
    for (const auto& [bucket, g] : report.per_bucket) {
        if (!ok(g, bucket)) return false;
    }
    for (const auto& [count, g] : report.per_needle_count) {
        if (!ok(g, "count=" + std::to_string(count))) return false;
    }
    return true;
}

// Shared artifacts across criteria.
Manifest g_manifest_1350;
Manifest g_demo_manifest;
fs::path g_demo_dir;

// ─── 1. Benchmark structure ─────────────────────────────────────────────

void criterion_1_structure() {
    std::string detail;
    bool ok = true;

    const BenchmarkPlan plan150 = structural_plan(150, 2024, false);
    const BuildResult r150 = build_benchmark(plan150, {}, 4);
    g_manifest_1350 = manifest_from_build(plan150, r150);
    if (!r150.errors.empty()) {
        ok = false;
        detail = std::to_string(r150.errors.size()) + " generation errors (first: " +
                 r150.errors.front().sample_id + ": " + r150.errors.front().message + ")";
    } else if (r150.samples.size() != 1350) {
        ok = false;
        detail = "150 haystacks gave " + std::to_string(r150.samples.size()) + " samples";
    } else {
        for (TaskKind task : kStandardTasks) {
            if (r150.task_counts.at(task) != 150) {
                ok = false;
                detail = to_string(task) + " has " +
                         std::to_string(r150.task_counts.at(task)) + " samples";
                break;
            }
        }
    }

    // Demo-scale generation with media, timed.
    if (ok) {
        g_demo_dir = work_dir() / "demo";
        GenerateOptions gen;
        gen.plan_path = fs::path(NIAH_SOURCE_DIR) / "plans" / "demo.json";
        gen.out_dir = g_demo_dir;
        gen.jobs = 4;
        std::ostringstream log;
        const auto t0 = std::chrono::steady_clock::now();
        const int rc = cmd_generate(gen, log);
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        g_demo_manifest = load_manifest(g_demo_dir / "manifest.json");
        if (rc != 0) {
            ok = false;
            detail = "demo generation failed:\n" + log.str();
        } else if (g_demo_manifest.samples.size() != 90) {
            ok = false;
            detail = "demo produced " + std::to_string(g_demo_manifest.samples.size());
        } else if (elapsed >= 300.0) {
            ok = false;
            detail = "demo took " + std::to_string(elapsed) + " s";
        } else {
            char buf[128];
            std::snprintf(buf, sizeof(buf),
                          "1350 @ 150 per task; 90-sample demo with media in %.1f s", elapsed);
            detail = buf;
        }
    }

    // Doubling haystacks doubles the sample count.
    if (ok) {
        const BenchmarkPlan plan300 = structural_plan(300, 2024, false);
        const BuildResult r300 = build_benchmark(plan300, {}, 4);
        if (!r300.errors.empty() || r300.samples.size() != 2700) {
            ok = false;
            detail = "300 haystacks gave " + std::to_string(r300.samples.size()) +
                     " samples with " + std::to_string(r300.errors.size()) + " errors";
        }
    }
    report_line(ok, "1 benchmark-structure", detail);
}

// ─── 2. Needle mechanics ────────────────────────────────────────────────

void criterion_2_needle_mechanics() {
    std::string detail;
    bool ok = true;
    std::size_t counting_checked = 0;

    auto check_sample = [&](const Sample& s) {
        std::size_t inserted = 0;
        for (const auto& [needle, placement] : s.needles) {
            if (placement.mode == PlacementMode::Insert) {
                inserted += placement.duration_frames(s.haystack.fps);
            }
            // Realized start within one frame of depth * frame_count.
            const double requested =
                placement.depth * static_cast<double>(s.haystack.frame_count);
            if (std::abs(requested - static_cast<double>(placement.start_frame)) >= 1.0) {
                ok = false;
                detail = s.sample_id + ": depth quantization off by >= 1 frame";
            }
        }
        if (s.output_frames != s.haystack.frame_count + inserted) {
            ok = false;
            detail = s.sample_id + ": frame bookkeeping broken";
        }
        if (is_edit_task(s.task) && s.output_frames != s.haystack.frame_count) {
            ok = false;
            detail = s.sample_id + ": edit sample changed frame count";
        }
        if (is_counting(s.task)) {
            ++counting_checked;
            if (std::to_string(recount_from_needles(s)) != s.answer_text()) {
                ok = false;
                detail = s.sample_id + ": recount != stored answer";
            }
            if (s.task == TaskKind::CountingE2) {
                const int gt = recount_from_needles(s);
                if (gt < 4 || gt > 16) {
                    ok = false;
                    detail = s.sample_id + ": counting-e2 gt out of [4,16]";
                }
            }
        }
    };
    for (const Sample& s : g_manifest_1350.samples) check_sample(s);
    for (const Sample& s : g_demo_manifest.samples) check_sample(s);

    // Physical check on the demo media tree: written frames match the
    // arithmetic (meta for all samples, full pixel load for a few).
    std::size_t loaded = 0;
    for (const Sample& s : g_demo_manifest.samples) {
        std::ifstream meta_in(g_demo_dir / s.media_path / "meta.json");
        if (!meta_in) {
            ok = false;
            detail = s.sample_id + ": missing media meta";
            break;
        }
        const json meta = json::parse(meta_in);
        if (meta.at("frame_count").get<std::size_t>() != s.output_frames) {
            ok = false;
            detail = s.sample_id + ": media frame count != output_frames";
            break;
        }
        if (loaded < 5) {
            const FrameSequence media = load_frame_dir(g_demo_dir / s.media_path);
            if (media.frame_count() != s.output_frames) {
                ok = false;
                detail = s.sample_id + ": decoded media frame count mismatch";
                break;
            }
            ++loaded;
        }
    }
    if (ok) {
        detail = std::to_string(counting_checked) + " counting samples recounted, 100% match";
    }
    report_line(ok, "2 needle-mechanics", detail);
}

// ─── 3. Option rules ────────────────────────────────────────────────────

void criterion_3_option_rules() {
    std::string detail;
    bool ok = true;
    std::array<std::size_t, 4> position_counts{0, 0, 0, 0};

    for (const Sample& s : g_manifest_1350.samples) {
        const std::set<std::string> distinct(s.options.begin(), s.options.end());
        if (distinct.size() != 4) {
            ok = false;
            detail = s.sample_id + ": options not distinct";
            break;
        }
        std::size_t gt_occurrences = 0;
        for (const std::string& o : s.options) gt_occurrences += o == s.answer_text() ? 1 : 0;
        if (gt_occurrences != 1) {
            ok = false;
            detail = s.sample_id + ": gt not present exactly once";
            break;
        }
        position_counts[static_cast<std::size_t>(s.answer_index)] += 1;

        if (is_ordering(s.task)) {
            // Every option is a permutation of the needle labels.
            std::multiset<std::string> labels;
            for (const auto& [needle, placement] : s.needles) labels.insert(needle.label);
            for (const std::string& option : s.options) {
                std::multiset<std::string> parts;
                std::stringstream ss(option);
                std::string part;
                while (std::getline(ss, part, ',')) {
                    if (!part.empty() && part.front() == ' ') part.erase(part.begin());
                    parts.insert(part);
                }
                if (parts != labels) {
                    ok = false;
                    detail = s.sample_id + ": option is not a permutation of the labels";
                }
            }
        }
        if (is_counting(s.task)) {
            std::set<long> values;
            for (const std::string& o : s.options) {
                const long v = std::strtol(o.c_str(), nullptr, 10);
                if (v < 1) {
                    ok = false;
                    detail = s.sample_id + ": non-positive counting option";
                }
                values.insert(v);
            }
            if (values.size() != 4) {
                ok = false;
                detail = s.sample_id + ": counting options not distinct integers";
            }
        }
        if (!ok) break;
    }

    double chi2 = 0.0;
    if (ok) {
        const double expected = static_cast<double>(g_manifest_1350.samples.size()) / 4.0;
        for (std::size_t c : position_counts) {
            const double d = static_cast<double>(c) - expected;
            chi2 += d * d / expected;
        }
        if (chi2 >= kChi2Crit3Dof01) {
            ok = false;
            detail = "answer positions non-uniform: chi2 = " + std::to_string(chi2);
        } else {
            char buf[160];
            std::snprintf(buf, sizeof(buf),
                          "positions A-D: %zu/%zu/%zu/%zu, chi2 = %.2f < %.2f (p > 0.01)",
                          position_counts[0], position_counts[1], position_counts[2],
                          position_counts[3], chi2, kChi2Crit3Dof01);
            detail = buf;
        }
    }
    report_line(ok, "3 option-rules", detail);
}

// ─── 4. Circular evaluation calculus ────────────────────────────────────

void criterion_4_circular_calculus() {
    std::string detail;
    bool ok = true;

    // Oracle: 100.0 accuracy and consistency on all nine tasks.
    const MetricsReport oracle = evaluate_with(g_manifest_1350, "oracle", 4);
    for (TaskKind task : kStandardTasks) {
        const GroupMetrics& g = oracle.per_task.at(to_string(task));
        if (g.acc() != 1.0 || g.consist() != 1.0) {
            ok = false;
            detail = "oracle not perfect on " + to_string(task);
        }
    }

    // Fixed letter under k=4 rotations: zero accuracy, zero consistency.
    if (ok) {
        const MetricsReport fixed = evaluate_with(g_manifest_1350, "fixed:A", 4);
        if (fixed.overall.acc() != 0.0 || fixed.overall.consist() != 0.0) {
            ok = false;
            detail = "fixed-letter responder should score 0 accuracy and 0 consistency";
        }
    }

    // Uniform random responder over 12000 samples: Acc(k) within 3 standard
    // errors of (1/4)^k for k = 1..4, and monotone non-increasing.
    std::string random_summary;
    if (ok) {
        std::vector<Sample> stubs;
        stubs.reserve(12000);
        Rng rng(909);
        const auto labels = builtin_names_pool().labels();
        for (int i = 0; i < 12000; ++i) {
            Sample s;
            s.sample_id = "stub" + std::to_string(i);
            s.task = TaskKind::RetrievalE;
            s.haystack = {"stub", 20.0, 1.0, 20};
            s.question = "What is the secret word in this video?";
            const OptionSet opts =
                make_options_retrieval(labels[rng.uniform_u64(labels.size())], labels, rng);
            s.options = opts.options;
            s.answer_index = opts.answer_index;
            stubs.push_back(std::move(s));
        }
        Manifest stub_manifest;
        stub_manifest.benchmark_id = "stubs";
        stub_manifest.samples = std::move(stubs);

        std::vector<EvalRecord> records;
        evaluate_with(stub_manifest, "random:2024", 4, &records);
        const std::vector<double> curve = iteration_curve(records);
        const double n = 12000.0;
        for (std::size_t k = 1; k <= 4 && ok; ++k) {
            const double p = std::pow(0.25, static_cast<double>(k));
            const double se = std::sqrt(p * (1.0 - p) / n);
            const double acc = curve[k - 1];
            if (std::abs(acc - p) > 3.0 * se) {
                ok = false;
                char buf[128];
                std::snprintf(buf, sizeof(buf), "random Acc(%zu) = %.5f outside %.5f +- %.5f",
                              k, acc, p, 3.0 * se);
                detail = buf;
            }
            if (k > 1 && curve[k - 1] > curve[k - 2] + 1e-12) {
                ok = false;
                detail = "Acc(k) increased with k";
            }
        }
        if (ok) {
            char buf[160];
            std::snprintf(buf, sizeof(buf),
                          "random Acc(1..4) = %.4f/%.4f/%.4f/%.4f vs (1/4)^k; ", curve[0],
                          curve[1], curve[2], curve[3]);
            random_summary = buf;
        }

        // Identity checks across groups for a mixed-quality trace.
        if (ok) {
            std::vector<EvalRecord> mixed;
            const MetricsReport sampler =
                evaluate_with(g_manifest_1350, "sampler:uniform:8:7", 4, &mixed);
            if (!check_group_identities(sampler, detail)) ok = false;
            if (ok && !check_group_identities(oracle, detail)) ok = false;
            for (std::size_t k = 1; k < sampler.iteration_curve.size() && ok; ++k) {
                if (sampler.iteration_curve[k] > sampler.iteration_curve[k - 1] + 1e-12) {
                    ok = false;
                    detail = "sampler Acc(k) increased with k";
                }
            }
        }
    }
    if (ok) detail = random_summary + "identities hold to 1e-9 on every group";
    report_line(ok, "4 circular-calculus", detail);
}

// ─── 5. Needle filter ───────────────────────────────────────────────────

void criterion_5_filter() {
    std::string detail;
    bool ok = true;
    DescriptorSimilarity backend;

    SyntheticHaystackConfig cfg;
    cfg.duration_s = 10.0;
    cfg.fps = 1.0;
    cfg.width = 64;
    cfg.height = 64;

    // A candidate copied from a haystack frame is rejected at any threshold < 1.
    cfg.seed = 31337;
    const FrameSequence hay = synth_haystack(cfg);
    const fs::path copied = work_dir() / "copied_frame.png";
    write_png(copied, hay.frames[3]);
    for (double threshold : {0.1, 0.25, 0.5, 0.7, 0.9, 0.99}) {
        const FilterResult r = filter_needles({{"copy", copied.string()}}, hay, backend, threshold);
        if (r.rejected.size() != 1) {
            ok = false;
            detail = "haystack-copied candidate accepted at threshold " +
                     std::to_string(threshold);
            break;
        }
    }

    // 100 random (synthetic haystack, noise candidate) pairs: no false
    // rejections at the calibrated threshold.
    if (ok) {
        double max_seen = 0.0;
        for (int i = 0; i < 100 && ok; ++i) {
            cfg.seed = 7000 + static_cast<std::uint64_t>(i);
            const FrameSequence pair_hay = synth_haystack(cfg);
            Rng rng(40000 + static_cast<std::uint64_t>(i));
            Image noise(64, 64);
            for (int y = 0; y < 64; ++y) {
                for (int x = 0; x < 64; ++x) {
                    noise.set(x, y, {static_cast<std::uint8_t>(rng.uniform_int(0, 255)),
                                     static_cast<std::uint8_t>(rng.uniform_int(0, 255)),
                                     static_cast<std::uint8_t>(rng.uniform_int(0, 255))});
                }
            }
            const double score = max_similarity(noise, pair_hay, backend);
            max_seen = std::max(max_seen, score);
            if (score > kDefaultFilterThreshold) {
                ok = false;
                detail = "noise candidate falsely rejected (score " + std::to_string(score) + ")";
            }
        }
        if (ok) {
            char buf[96];
            std::snprintf(buf, sizeof(buf), "0/100 false rejections, max noise score %.3f",
                          max_seen);
            detail = buf;
        }
    }

    // Accepted set anti-monotone in threshold (nested as threshold rises).
    if (ok) {
        cfg.seed = 31338;
        const FrameSequence hay2 = synth_haystack(cfg);
        std::vector<PoolEntry> candidates = builtin_fruits_pool().entries;
        candidates.push_back({"copy", copied.string()});
        std::set<std::string> previous;
        for (double threshold : {0.1, 0.3, 0.5, 0.7, 0.8, 0.9, 0.95, 0.99}) {
            const FilterResult r = filter_needles(candidates, hay2, backend, threshold);
            std::set<std::string> accepted;
            for (const PoolEntry& e : r.accepted) accepted.insert(e.label);
            for (const std::string& label : previous) {
                if (!accepted.contains(label)) {
                    ok = false;
                    detail = "accepted set lost '" + label + "' as the threshold rose";
                }
            }
            previous = std::move(accepted);
        }
    }
    report_line(ok, "5 needle-filter", detail);
}

// ─── 6. Depth sweep ─────────────────────────────────────────────────────

void criterion_6_depth_sweep() {
    std::string detail;
    bool ok = true;

    SweepPlan plan;
    for (int d = 10; d <= 180; d += 10) plan.durations_s.push_back(d);
    for (int p = 0; p <= 9; ++p) plan.depths.push_back(p / 10.0);
    plan.n_per_cell = 32;
    plan.k = 4;
    plan.seed = 606;
    plan.long_source.seed = 77;
    plan.long_source.duration_s = 200.0;
    plan.long_source.fps = 2.0;
    plan.long_source.width = 64;
    plan.long_source.height = 64;

    const std::uint64_t responder_seed = 13;
    const int uniform_n = 16;
    {
        auto adapter = make_adapter_from_spec("sampler:uniform:" + std::to_string(uniform_n) +
                                              ":" + std::to_string(responder_seed));
        const SweepGrid grid = depth_sweep(plan, *adapter);

        // Closed-form prediction per cell, recomputed here: a slot sample is
        // correct iff a uniformly sampled index lands in its needle span;
        // otherwise iff the documented fallback letters match all rotations.
        std::size_t cells = 0, matching = 0;
        for (std::size_t di = 0; di < plan.durations_s.size(); ++di) {
            for (std::size_t pi = 0; pi < plan.depths.size(); ++pi) {
                int predicted_correct = 0;
                for (int s = 0; s < plan.n_per_cell; ++s) {
                    const SweepSampleGeometry geo = sweep_sample_geometry(
                        plan, s, plan.durations_s[di], plan.depths[pi]);
                    bool covered = false;
                    for (int j = 0; j < uniform_n; ++j) {
                        const std::size_t idx =
                            static_cast<std::size_t>(j) * geo.output_frames /
                            static_cast<std::size_t>(uniform_n);
                        covered |= idx >= geo.span_begin && idx < geo.span_end;
                    }
                    if (covered) {
                        predicted_correct += 1;
                        continue;
                    }
                    const int answer_index = sweep_slot(plan, s).options.answer_index;
                    bool all_lucky = true;
                    for (int r = 0; r < plan.k; ++r) {
                        const char expected =
                            static_cast<char>('A' + ((answer_index - r) % 4 + 4) % 4);
                        all_lucky &= SamplerSimResponder::fallback_letter(
                                         responder_seed, geo.sample_id, r) == expected;
                    }
                    predicted_correct += all_lucky ? 1 : 0;
                }
                const double predicted =
                    static_cast<double>(predicted_correct) / plan.n_per_cell;
                const double actual = grid.acc(static_cast<Eigen::Index>(pi),
                                               static_cast<Eigen::Index>(di));
                ++cells;
                matching += predicted == actual ? 1 : 0;
            }
        }
        const double fraction = static_cast<double>(matching) / static_cast<double>(cells);
        if (fraction < 0.99) {
            ok = false;
            detail = "uniform sampler matched prediction in only " +
                     std::to_string(100.0 * fraction) + "% of cells";
        } else {
            char buf[128];
            std::snprintf(buf, sizeof(buf), "uniform-%d: %zu/%zu cells equal prediction",
                          uniform_n, matching, cells);
            detail = buf;
        }
    }

    // Sequential capped responder: lost-in-the-middle shape at long durations.
    if (ok) {
        json cfg = {{"type", "sampler_sim"}, {"policy", "sequential"},
                    {"frames", 64},          {"policy_fps", 1.0},
                    {"seed", responder_seed}};
        auto adapter = make_adapter(cfg);
        const SweepGrid grid = depth_sweep(plan, *adapter);
        double mid_sum = 0.0, edge_sum = 0.0;
        int mid_n = 0, edge_n = 0;
        for (std::size_t di = 0; di < plan.durations_s.size(); ++di) {
            if (plan.durations_s[di] < 120.0) continue;
            for (std::size_t pi = 0; pi < plan.depths.size(); ++pi) {
                const double acc = grid.acc(static_cast<Eigen::Index>(pi),
                                            static_cast<Eigen::Index>(di));
                const double depth = plan.depths[pi];
                if (depth == 0.4 || depth == 0.5) {
                    mid_sum += acc;
                    ++mid_n;
                } else if (depth == 0.0 || depth == 0.9) {
                    edge_sum += acc;
                    ++edge_n;
                }
            }
        }
        const double mid = mid_sum / mid_n, edge = edge_sum / edge_n;
        if (!(mid < edge)) {
            ok = false;
            char buf[128];
            std::snprintf(buf, sizeof(buf),
                          "sequential shape wrong: mid %.3f vs edge %.3f", mid, edge);
            detail = buf;
        } else {
            char buf[96];
            std::snprintf(buf, sizeof(buf), "%s; sequential mid %.3f < edge %.3f",
                          detail.c_str(), mid, edge);
            detail = buf;
        }
    }
    report_line(ok, "6 depth-sweep", detail);
}

// ─── 7. Determinism ─────────────────────────────────────────────────────

void criterion_7_determinism() {
    std::string detail;
    bool ok = true;

    // Regenerate the demo plan (different job count) and compare bytes.
    GenerateOptions gen;
    gen.plan_path = fs::path(NIAH_SOURCE_DIR) / "plans" / "demo.json";
    gen.out_dir = work_dir() / "demo_again";
    gen.jobs = 2;
    std::ostringstream log;
    if (cmd_generate(gen, log) != 0) {
        ok = false;
        detail = "regeneration failed";
    } else if (slurp(g_demo_dir / "manifest.json") != slurp(gen.out_dir / "manifest.json")) {
        ok = false;
        detail = "manifests differ between identical runs";
    } else {
        std::size_t checked = 0;
        for (const Sample& s : g_demo_manifest.samples) {
            if (checked >= 10) break;
            const auto file = fs::path(s.media_path) / "frame_000000.png";
            if (slurp(g_demo_dir / file) != slurp(gen.out_dir / file)) {
                ok = false;
                detail = s.sample_id + ": media bytes differ";
                break;
            }
            ++checked;
        }
    }

    // Results replayed through report give identical tables.
    if (ok) {
        auto adapter = make_adapter_from_spec("oracle");
        EvalOptions options;
        options.k = 4;
        options.journal = work_dir() / "demo_results.jsonl";
        run_evaluation(g_demo_manifest, *adapter, options);

        ReportOptions rp;
        rp.manifest_path = g_demo_dir / "manifest.json";
        rp.results = {options.journal};
        std::ostringstream report_log;
        rp.out_dir = work_dir() / "report_a";
        cmd_report(rp, report_log);
        rp.out_dir = work_dir() / "report_b";
        cmd_report(rp, report_log);
        for (const char* file : {"report.json", "per_task.csv", "buckets.csv",
                                 "needle_counts.csv", "iteration_curve.csv"}) {
            if (slurp(work_dir() / "report_a" / file) != slurp(work_dir() / "report_b" / file)) {
                ok = false;
                detail = std::string(file) + " differs between report replays";
                break;
            }
        }
        if (ok) detail = "byte-identical manifests, media and replayed reports";
    }
    fs::remove_all(work_dir() / "demo_again");
    report_line(ok, "7 determinism", detail);
}

// ─── 8. Needle-content swap robustness ──────────────────────────────────

void criterion_8_content_swap() {
    std::string detail;
    bool ok = true;

    const BenchmarkPlan swap_plan = structural_plan(150, 2024, true);
    const BuildResult swap_result = build_benchmark(swap_plan, {}, 4);
    if (!swap_result.errors.empty() || swap_result.samples.size() != 1350) {
        ok = false;
        detail = "swapped-content generation failed";
    }

    if (ok) {
        const Manifest swapped = manifest_from_build(swap_plan, swap_result);
        const std::vector<std::string> responders = {
            "sampler:uniform:4:5", "sampler:uniform:8:5", "sampler:uniform:16:5",
            "sampler:sequential:16:5", "random:3"};
        std::vector<double> vec_src, vec_new;
        for (const std::string& spec : responders) {
            const MetricsReport src = evaluate_with(g_manifest_1350, spec, 4);
            const MetricsReport swp = evaluate_with(swapped, spec, 4);
            for (TaskKind task : kStandardTasks) {
                vec_src.push_back(src.per_task.at(to_string(task)).acc());
                vec_new.push_back(swp.per_task.at(to_string(task)).acc());
            }
        }
        const double r = pearson(vec_src, vec_new);
        if (r < 0.99) {
            ok = false;
            detail = "per-task accuracy correlation " + std::to_string(r) + " < 0.99";
        } else {
            char buf[96];
            std::snprintf(buf, sizeof(buf),
                          "corr(src, swapped) = %.4f over %zu task/responder accuracies", r,
                          vec_src.size());
            detail = buf;
        }
    }
    report_line(ok, "8 content-swap", detail);
}

}  // namespace

int main() {
    try {
        criterion_1_structure();
        criterion_2_needle_mechanics();
        criterion_3_option_rules();
        criterion_4_circular_calculus();
        criterion_5_filter();
        criterion_6_depth_sweep();
        criterion_7_determinism();
        criterion_8_content_swap();
    } catch (const std::exception& e) {
        std::printf("FAIL  acceptance aborted: %s\n", e.what());
        g_failures += 1;
    }
    std::error_code ec;
    fs::remove_all(work_dir(), ec);
    if (g_failures == 0) {
        std::printf("all acceptance criteria passed\n");
        return 0;
    }
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
}
