#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "niah/core.hpp"

namespace niah {

enum class PoolKind {
    SubtitleNames,
    SubtitleObjects,
    FruitImages,
    AnimalImages,
    ObjectImages,
    LandmarkImages,
    ActionClips,
};

std::string to_string(PoolKind kind);
PoolKind pool_kind_from_string(const std::string& name);

struct PoolEntry {
    std::string label;
    std::string payload_ref;  // "builtin:<pool>/<label>", image path, or clip dir
};

// A candidate pool. Labels are pairwise distinct within a pool.
struct NeedlePool {
    std::string pool_id;
    PoolKind kind = PoolKind::SubtitleNames;
    std::vector<PoolEntry> entries;

    bool contains(const std::string& label) const;
    std::vector<std::string> labels() const;
    const PoolEntry& entry(const std::string& label) const;  // throws UnknownLabel

    void validate() const;
};

// Builtin pools. Names and objects are the canonical 26-entry candidate
// lists; fruit/animal pools are 8 procedurally rendered placeholder icons.
const NeedlePool& builtin_names_pool();
const NeedlePool& builtin_objects_pool();
const NeedlePool& builtin_fruits_pool();
const NeedlePool& builtin_animals_pool();

// Resolves "builtin:names|objects|fruits|animals"; nullopt for other ids.
std::optional<NeedlePool> builtin_pool(const std::string& ref);

// Deterministic 128x128 placeholder icon for a label (used by the builtin
// image pools and regenerable from the payload ref alone).
Image render_icon(const std::string& label);

// Loads an image payload: "builtin:<pool>/<label>" renders the icon, any
// other ref is read as a PNG path.
Image load_image_payload(const std::string& payload_ref);

// Pool manifest file: {"pool_id": ..., "kind": ..., "entries": [{"label","path"}]}.
NeedlePool load_pool_manifest(const std::filesystem::path& path);
void save_pool_manifest(const NeedlePool& pool, const std::filesystem::path& path);

// Subtitle renderings. Labels must exist in the given pool.
std::string subtitle_text(const std::string& name, const NeedlePool& pool);
std::string alt_subtitle_text(const std::string& object, const NeedlePool& pool);

// Template applied by a pool's subtitle task: names use the secret-word
// line, objects use the private-key line.
std::string subtitle_text_for_pool(const std::string& label, const NeedlePool& pool);

}  // namespace niah
