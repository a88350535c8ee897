#include "niah/manifest.hpp"

#include <fstream>
#include <set>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace niah {

const Sample& Manifest::sample(const std::string& sample_id) const {
    for (const Sample& s : samples) {
        if (s.sample_id == sample_id) return s;
    }
    throw Error("manifest has no sample '" + sample_id + "'");
}

bool Manifest::operator==(const Manifest& other) const {
    return manifest_to_json(*this) == manifest_to_json(other);
}

json sample_to_json(const Sample& s) {
    json needles = json::array();
    for (const auto& [needle, placement] : s.needles) {
        json n = {
            {"kind", to_string(needle.kind)},
            {"label", needle.label},
            {"placement",
             {{"depth", placement.depth},
              {"start_frame", placement.start_frame},
              {"duration_s", placement.duration_s},
              {"mode", to_string(placement.mode)}}},
        };
        if (!needle.text.empty()) n["text"] = needle.text;
        if (!needle.payload_ref.empty()) n["payload"] = needle.payload_ref;
        if (needle.kind == NeedleKind::RegionComposite) {
            n["occurrences"] = needle.occurrences;
            json regions = json::array();
            for (const Rect& r : needle.regions) regions.push_back({r.x, r.y, r.w, r.h});
            n["regions"] = regions;
        }
        needles.push_back(std::move(n));
    }

    json spans = json::array();
    for (const ResolvedSpan& span : s.needle_spans) {
        spans.push_back({{"needle", span.needle_index},
                         {"begin", span.begin},
                         {"end", span.end},
                         {"mode", to_string(span.mode)}});
    }

    return json{
        {"sample_id", s.sample_id},
        {"task", to_string(s.task)},
        {"haystack",
         {{"source_id", s.haystack.source_id},
          {"duration_s", s.haystack.duration_s},
          {"fps", s.haystack.fps},
          {"frame_count", s.haystack.frame_count}}},
        {"needles", std::move(needles)},
        {"question", s.question},
        {"options", s.options},
        {"answer_index", s.answer_index},
        {"gen_seed", s.gen_seed},
        {"media_path", s.media_path},
        {"output_frames", s.output_frames},
        {"needle_spans", std::move(spans)},
    };
}

Sample sample_from_json(const json& j) {
    Sample s;
    s.sample_id = j.at("sample_id").get<std::string>();
    s.task = task_from_string(j.at("task").get<std::string>());
    const json& hay = j.at("haystack");
    s.haystack.source_id = hay.at("source_id").get<std::string>();
    s.haystack.duration_s = hay.at("duration_s").get<double>();
    s.haystack.fps = hay.at("fps").get<double>();
    s.haystack.frame_count = hay.at("frame_count").get<std::size_t>();

    for (const json& n : j.at("needles")) {
        NeedleSpec needle;
        needle.kind = needle_kind_from_string(n.at("kind").get<std::string>());
        needle.label = n.at("label").get<std::string>();
        needle.text = n.value("text", std::string{});
        needle.payload_ref = n.value("payload", std::string{});
        needle.occurrences = n.value("occurrences", 1);
        if (n.contains("regions")) {
            for (const json& r : n.at("regions")) {
                needle.regions.push_back({r.at(0).get<int>(), r.at(1).get<int>(),
                                          r.at(2).get<int>(), r.at(3).get<int>()});
            }
        }
        const json& p = n.at("placement");
        Placement placement;
        placement.depth = p.at("depth").get<double>();
        placement.start_frame = p.at("start_frame").get<std::size_t>();
        placement.duration_s = p.at("duration_s").get<double>();
        placement.mode = placement_mode_from_string(p.at("mode").get<std::string>());
        s.needles.emplace_back(std::move(needle), placement);
    }

    s.question = j.at("question").get<std::string>();
    s.options = j.at("options").get<std::array<std::string, 4>>();
    s.answer_index = j.at("answer_index").get<int>();
    s.gen_seed = j.at("gen_seed").get<std::uint64_t>();
    s.media_path = j.value("media_path", std::string{});
    s.output_frames = j.at("output_frames").get<std::size_t>();
    for (const json& sp : j.at("needle_spans")) {
        s.needle_spans.push_back({sp.at("needle").get<std::size_t>(),
                                  sp.at("begin").get<std::size_t>(),
                                  sp.at("end").get<std::size_t>(),
                                  placement_mode_from_string(sp.at("mode").get<std::string>())});
    }
    return s;
}

namespace {
const std::set<std::string> kManifestKeys = {
    "schema_version", "benchmark_id", "global_seed", "config", "pools", "samples",
};
}

json manifest_to_json(const Manifest& m) {
    json j = m.extra;
    j["schema_version"] = m.schema_version;
    j["benchmark_id"] = m.benchmark_id;
    j["global_seed"] = m.global_seed;
    j["config"] = m.config;
    j["pools"] = m.pools;
    json samples = json::array();
    for (const Sample& s : m.samples) samples.push_back(sample_to_json(s));
    j["samples"] = std::move(samples);
    return j;
}

Manifest manifest_from_json(const json& j) {
    Manifest m;
    m.schema_version = j.at("schema_version").get<int>();
    if (m.schema_version != kManifestSchemaVersion) {
        throw SchemaMismatch("manifest schema_version " + std::to_string(m.schema_version) +
                             ", expected " + std::to_string(kManifestSchemaVersion));
    }
    m.benchmark_id = j.at("benchmark_id").get<std::string>();
    m.global_seed = j.at("global_seed").get<std::uint64_t>();
    m.config = j.value("config", json::object());
    m.pools = j.value("pools", json::object());
    for (const json& s : j.at("samples")) m.samples.push_back(sample_from_json(s));
    for (const auto& [key, value] : j.items()) {
        if (!kManifestKeys.contains(key)) m.extra[key] = value;
    }
    return m;
}

void save_manifest(const Manifest& manifest, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("save_manifest: cannot write " + path.string());
    out << manifest_to_json(manifest).dump(2) << "\n";
}

Manifest load_manifest(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("load_manifest: cannot open " + path.string());
    return manifest_from_json(json::parse(in));
}

void validate_manifest(const Manifest& manifest, const fs::path& media_root) {
    std::set<std::string> ids;
    for (const Sample& s : manifest.samples) {
        if (!ids.insert(s.sample_id).second) {
            throw Error("duplicate sample id: " + s.sample_id);
        }
        s.validate();
        if (!media_root.empty() && !s.media_path.empty()) {
            if (!fs::exists(media_root / s.media_path)) {
                throw IoError(s.sample_id + ": media path missing: " +
                              (media_root / s.media_path).string());
            }
        }
    }
}

// ─── Plan files ──────────────────────────────────────────────────────────

BenchmarkPlan plan_from_json(const json& j) {
    BenchmarkPlan plan;
    plan.benchmark_id = j.value("benchmark_id", plan.benchmark_id);
    plan.seed = j.value("seed", plan.seed);
    plan.fps = j.value("fps", plan.fps);
    if (j.contains("resolution")) {
        plan.width = j.at("resolution").at(0).get<int>();
        plan.height = j.at("resolution").at(1).get<int>();
    }
    if (j.contains("tasks")) {
        plan.tasks.clear();
        for (const json& t : j.at("tasks")) {
            plan.tasks.push_back(task_from_string(t.get<std::string>()));
        }
    }
    for (const json& h : j.at("haystacks")) {
        HaystackSource src;
        src.kind = h.at("type").get<std::string>();
        src.id = h.value("id", std::string{});
        if (src.kind == "synthetic") {
            src.synth.seed = h.at("seed").get<std::uint64_t>();
            src.synth.duration_s = h.at("duration_s").get<double>();
            src.synth.motif = h.value("motif", src.synth.motif);
        } else {
            src.path = h.at("path").get<std::string>();
        }
        plan.haystacks.push_back(std::move(src));
    }
    if (j.contains("task_overrides")) {
        for (const auto& [key, value] : j.at("task_overrides").items()) {
            TaskOverride o;
            o.pool = value.value("pool", std::string{});
            o.question = value.value("question", std::string{});
            plan.overrides[task_from_string(key)] = std::move(o);
        }
    }
    if (j.contains("filter")) {
        const json& f = j.at("filter");
        plan.filter_enabled = f.value("enabled", true);
        plan.filter_backend = f.value("backend", plan.filter_backend);
        plan.filter_threshold = f.value("threshold", plan.filter_threshold);
    }
    plan.media = j.value("media", plan.media);
    plan.needle_duration_s = j.value("needle_duration_s", plan.needle_duration_s);
    plan.min_gap_s = j.value("min_gap_s", plan.min_gap_s);
    plan.max_depth = j.value("max_depth", plan.max_depth);
    if (j.contains("counting_range")) {
        plan.count_min = j.at("counting_range").at(0).get<int>();
        plan.count_max = j.at("counting_range").at(1).get<int>();
    }
    if (j.contains("duration_buckets")) {
        const json& b = j.at("duration_buckets");
        plan.buckets.short_lo = b.at(0).get<double>();
        plan.buckets.medium_lo = b.at(1).get<double>();
        plan.buckets.long_lo = b.at(2).get<double>();
        plan.buckets.long_hi = b.at(3).get<double>();
    }
    if (j.contains("codec")) {
        plan.codec.decode_command = j.at("codec").value("decode", std::string{});
        plan.codec.encode_command = j.at("codec").value("encode", std::string{});
    }
    return plan;
}

json plan_to_json(const BenchmarkPlan& plan) {
    json haystacks = json::array();
    for (const HaystackSource& src : plan.haystacks) {
        json h = {{"type", src.kind}};
        if (!src.id.empty()) h["id"] = src.id;
        if (src.kind == "synthetic") {
            h["seed"] = src.synth.seed;
            h["duration_s"] = src.synth.duration_s;
            h["motif"] = src.synth.motif;
        } else {
            h["path"] = src.path;
        }
        haystacks.push_back(std::move(h));
    }
    json tasks = json::array();
    for (TaskKind t : plan.tasks) tasks.push_back(to_string(t));
    json overrides = json::object();
    for (const auto& [task, o] : plan.overrides) {
        json entry = json::object();
        if (!o.pool.empty()) entry["pool"] = o.pool;
        if (!o.question.empty()) entry["question"] = o.question;
        overrides[to_string(task)] = std::move(entry);
    }
    return json{
        {"benchmark_id", plan.benchmark_id},
        {"seed", plan.seed},
        {"fps", plan.fps},
        {"resolution", {plan.width, plan.height}},
        {"haystacks", std::move(haystacks)},
        {"tasks", std::move(tasks)},
        {"task_overrides", std::move(overrides)},
        {"filter",
         {{"enabled", plan.filter_enabled},
          {"backend", plan.filter_backend},
          {"threshold", plan.filter_threshold}}},
        {"media", plan.media},
        {"needle_duration_s", plan.needle_duration_s},
        {"min_gap_s", plan.min_gap_s},
        {"max_depth", plan.max_depth},
        {"counting_range", {plan.count_min, plan.count_max}},
        {"duration_buckets",
         {plan.buckets.short_lo, plan.buckets.medium_lo, plan.buckets.long_lo,
          plan.buckets.long_hi}},
    };
}

DurationBuckets buckets_from_config(const json& config) {
    DurationBuckets buckets;
    if (config.contains("duration_buckets")) {
        const json& b = config.at("duration_buckets");
        buckets.short_lo = b.at(0).get<double>();
        buckets.medium_lo = b.at(1).get<double>();
        buckets.long_lo = b.at(2).get<double>();
        buckets.long_hi = b.at(3).get<double>();
    }
    return buckets;
}

BenchmarkPlan load_plan(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("load_plan: cannot open " + path.string());
    return plan_from_json(json::parse(in));
}

}  // namespace niah
