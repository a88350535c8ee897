#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

#include "niah/core.hpp"
#include "niah/taskgen.hpp"

namespace niah {

inline constexpr int kManifestSchemaVersion = 1;

// The benchmark artifact: everything needed to evaluate, and to regenerate
// the media tree bit-identically (config snapshot + per-sample gen seeds).
struct Manifest {
    int schema_version = kManifestSchemaVersion;
    std::string benchmark_id;
    std::uint64_t global_seed = 0;
    nlohmann::json config;  // plan snapshot
    nlohmann::json pools;   // pool_id -> {kind, entries}
    std::vector<Sample> samples;
    nlohmann::json extra = nlohmann::json::object();  // unknown fields, preserved on rewrite

    const Sample& sample(const std::string& sample_id) const;
    bool operator==(const Manifest& other) const;
};

nlohmann::json sample_to_json(const Sample& sample);
Sample sample_from_json(const nlohmann::json& j);

nlohmann::json manifest_to_json(const Manifest& manifest);
Manifest manifest_from_json(const nlohmann::json& j);

void save_manifest(const Manifest& manifest, const std::filesystem::path& path);
Manifest load_manifest(const std::filesystem::path& path);

// Validates structural invariants: unique ids, per-sample invariants, and
// (when media_root is non-empty) that every media path exists.
void validate_manifest(const Manifest& manifest, const std::filesystem::path& media_root = {});

// ─── Plan files ──────────────────────────────────────────────────────────

BenchmarkPlan plan_from_json(const nlohmann::json& j);
nlohmann::json plan_to_json(const BenchmarkPlan& plan);
BenchmarkPlan load_plan(const std::filesystem::path& path);

// Duration buckets recorded in a manifest's config snapshot (defaults when
// the snapshot predates the field or lacks it).
DurationBuckets buckets_from_config(const nlohmann::json& config);

}  // namespace niah
