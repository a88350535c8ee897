#include "niah/pools.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <set>

#include "niah/font.hpp"
#include "niah/image.hpp"
#include "niah/png_io.hpp"
#include "niah/rng.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace niah {

namespace {

const std::vector<std::string> kNames = {
    "Alice", "Bob",    "Carol", "Dave",  "Eve",    "Frank",  "Grace",  "Harry", "Ivy",
    "Jack",  "Kate",   "Leo",   "Mary",  "Nick",   "Olivia", "Paul",   "Quentin",
    "Rachel", "Sam",   "Tom",   "Uma",   "Victor", "Wendy",  "Xander", "Yvonne", "Zach",
};

const std::vector<std::string> kObjects = {
    "apple",  "banana",   "cherry", "desert",   "eagle",  "forest",    "garden",
    "harmony", "island",  "jungle", "kite",     "lemon",  "mountain",  "nectar",
    "ocean",  "planet",   "quartz", "river",    "sunset", "tulip",     "umbrella",
    "village", "waterfall", "xylophone", "yogurt", "zebra",
};

const std::vector<std::string> kFruits = {
    "apple", "banana", "cherry", "grapes", "lemon", "orange", "peach", "pear",
};

const std::vector<std::string> kAnimals = {
    "bird", "cat", "dog", "elephant", "fish", "horse", "rabbit", "turtle",
};

NeedlePool make_builtin(const std::string& id, PoolKind kind,
                        const std::vector<std::string>& labels) {
    NeedlePool pool;
    pool.pool_id = "builtin:" + id;
    pool.kind = kind;
    pool.entries.reserve(labels.size());
    for (const std::string& label : labels) {
        pool.entries.push_back({label, "builtin:" + id + "/" + label});
    }
    pool.validate();
    return pool;
}

}  // namespace

std::string to_string(PoolKind kind) {
    switch (kind) {
        case PoolKind::SubtitleNames: return "subtitle-names";
        case PoolKind::SubtitleObjects: return "subtitle-objects";
        case PoolKind::FruitImages: return "fruit-images";
        case PoolKind::AnimalImages: return "animal-images";
        case PoolKind::ObjectImages: return "object-images";
        case PoolKind::LandmarkImages: return "landmark-images";
        case PoolKind::ActionClips: return "action-clips";
    }
    throw Error("unreachable PoolKind");
}

PoolKind pool_kind_from_string(const std::string& name) {
    if (name == "subtitle-names") return PoolKind::SubtitleNames;
    if (name == "subtitle-objects") return PoolKind::SubtitleObjects;
    if (name == "fruit-images") return PoolKind::FruitImages;
    if (name == "animal-images") return PoolKind::AnimalImages;
    if (name == "object-images") return PoolKind::ObjectImages;
    if (name == "landmark-images") return PoolKind::LandmarkImages;
    if (name == "action-clips") return PoolKind::ActionClips;
    throw Error("unknown pool kind: " + name);
}

bool NeedlePool::contains(const std::string& label) const {
    return std::any_of(entries.begin(), entries.end(),
                       [&](const PoolEntry& e) { return e.label == label; });
}

std::vector<std::string> NeedlePool::labels() const {
    std::vector<std::string> out;
    out.reserve(entries.size());
    for (const PoolEntry& e : entries) out.push_back(e.label);
    return out;
}

const PoolEntry& NeedlePool::entry(const std::string& label) const {
    for (const PoolEntry& e : entries) {
        if (e.label == label) return e;
    }
    throw UnknownLabel("pool " + pool_id + " has no label '" + label + "'");
}

void NeedlePool::validate() const {
    std::set<std::string> seen;
    for (const PoolEntry& e : entries) {
        if (e.label.empty()) throw Error("pool " + pool_id + ": empty label");
        if (!seen.insert(e.label).second) {
            throw Error("pool " + pool_id + ": duplicate label '" + e.label + "'");
        }
    }
}

const NeedlePool& builtin_names_pool() {
    static const NeedlePool pool = make_builtin("names", PoolKind::SubtitleNames, kNames);
    return pool;
}

const NeedlePool& builtin_objects_pool() {
    static const NeedlePool pool = make_builtin("objects", PoolKind::SubtitleObjects, kObjects);
    return pool;
}

const NeedlePool& builtin_fruits_pool() {
    static const NeedlePool pool = make_builtin("fruits", PoolKind::FruitImages, kFruits);
    return pool;
}

const NeedlePool& builtin_animals_pool() {
    static const NeedlePool pool = make_builtin("animals", PoolKind::AnimalImages, kAnimals);
    return pool;
}

std::optional<NeedlePool> builtin_pool(const std::string& ref) {
    if (ref == "builtin:names") return builtin_names_pool();
    if (ref == "builtin:objects") return builtin_objects_pool();
    if (ref == "builtin:fruits") return builtin_fruits_pool();
    if (ref == "builtin:animals") return builtin_animals_pool();
    return std::nullopt;
}

Image render_icon(const std::string& label) {
    constexpr int kSize = 128;
    Rng rng(derive_seed(0x1c0d, label));
    const Rgb bg{static_cast<std::uint8_t>(rng.uniform_int(24, 96)),
                 static_cast<std::uint8_t>(rng.uniform_int(24, 96)),
                 static_cast<std::uint8_t>(rng.uniform_int(24, 96))};
    const Rgb fg{static_cast<std::uint8_t>(rng.uniform_int(140, 255)),
                 static_cast<std::uint8_t>(rng.uniform_int(140, 255)),
                 static_cast<std::uint8_t>(rng.uniform_int(140, 255))};
    Image img(kSize, kSize, bg);

    const int cx = kSize / 2, cy = kSize / 2 - 10, half = 38;
    switch (rng.uniform_int(0, 4)) {
        case 0: draw_disc(img, cx, cy, half, fg); break;
        case 1: fill_rect(img, {cx - half, cy - half, 2 * half, 2 * half}, fg); break;
        case 2: draw_triangle(img, cx, cy, half, fg); break;
        case 3: draw_diamond(img, cx, cy, half, fg); break;
        default: draw_ring(img, cx, cy, half, half - 14, fg); break;
    }

    const int scale = std::max(1, fit_text_scale(label, kSize - 8, 24));
    const TextMetrics m = measure_text(label, scale);
    draw_text(img, (kSize - m.width) / 2, kSize - 10 - m.height, label, scale, {255, 255, 255});
    return img;
}

Image load_image_payload(const std::string& payload_ref) {
    if (payload_ref.rfind("builtin:", 0) == 0) {
        const auto slash = payload_ref.find('/');
        if (slash == std::string::npos) {
            throw Error("builtin payload ref without label: " + payload_ref);
        }
        return render_icon(payload_ref.substr(slash + 1));
    }
    return read_png(payload_ref);
}

NeedlePool load_pool_manifest(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("load_pool_manifest: cannot open " + path.string());
    json j = json::parse(in);
    NeedlePool pool;
    pool.pool_id = j.at("pool_id").get<std::string>();
    pool.kind = pool_kind_from_string(j.at("kind").get<std::string>());
    for (const json& e : j.at("entries")) {
        pool.entries.push_back({e.at("label").get<std::string>(),
                                e.value("path", std::string{})});
    }
    pool.validate();
    return pool;
}

void save_pool_manifest(const NeedlePool& pool, const fs::path& path) {
    json entries = json::array();
    for (const PoolEntry& e : pool.entries) {
        entries.push_back({{"label", e.label}, {"path", e.payload_ref}});
    }
    json j = {{"pool_id", pool.pool_id}, {"kind", to_string(pool.kind)}, {"entries", entries}};
    std::ofstream out(path);
    if (!out) throw IoError("save_pool_manifest: cannot write " + path.string());
    out << j.dump(2) << "\n";
}

std::string subtitle_text(const std::string& name, const NeedlePool& pool) {
    if (!pool.contains(name)) {
        throw UnknownLabel("subtitle_text: '" + name + "' not in pool " + pool.pool_id);
    }
    return "The secret word is " + name + ".";
}

std::string alt_subtitle_text(const std::string& object, const NeedlePool& pool) {
    if (!pool.contains(object)) {
        throw UnknownLabel("alt_subtitle_text: '" + object + "' not in pool " + pool.pool_id);
    }
    return "The private key is " + object + ".";
}

std::string subtitle_text_for_pool(const std::string& label, const NeedlePool& pool) {
    return pool.kind == PoolKind::SubtitleObjects ? alt_subtitle_text(label, pool)
                                                  : subtitle_text(label, pool);
}

}  // namespace niah
