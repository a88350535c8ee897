#include "niah/haystack.hpp"

#include <cmath>
#include <numbers>

#include "niah/image.hpp"
#include "niah/rng.hpp"

namespace niah {

void SyntheticHaystackConfig::validate() const {
    if (duration_s < 10.0 || duration_s > 1800.0) {
        throw Error("SyntheticHaystackConfig: duration_s must be within [10, 1800] seconds");
    }
    if (!(fps > 0.0)) throw Error("SyntheticHaystackConfig: fps must be positive");
    if (width < 16 || height < 16) throw Error("SyntheticHaystackConfig: resolution too small");
    if (motif != "gradient" && motif != "shapes") {
        throw Error("SyntheticHaystackConfig: unknown motif '" + motif + "'");
    }
}

namespace {

// Stamps the frame index as a 24-pixel binary strip in the top-left corner.
// Guarantees no two frames of a sequence are byte-identical, whatever the
// motif parameters round to.
void stamp_frame_index(Image& img, std::size_t index) {
    for (int bit = 0; bit < 24 && bit < img.width(); ++bit) {
        const bool on = (index >> bit) & 1;
        img.set(bit, 0, on ? Rgb{255, 255, 255} : Rgb{0, 0, 0});
    }
}

}  // namespace

FrameSequence synth_haystack(const SyntheticHaystackConfig& cfg) {
    cfg.validate();
    Rng rng(derive_seed(cfg.seed, "synth-haystack"));

    // Gradient parameters: spatial frequencies, per-channel phases, drift.
    const double fx[3] = {rng.uniform_real() * 4.0 + 1.0, rng.uniform_real() * 4.0 + 1.0,
                          rng.uniform_real() * 4.0 + 1.0};
    const double fy[3] = {rng.uniform_real() * 4.0 + 1.0, rng.uniform_real() * 4.0 + 1.0,
                          rng.uniform_real() * 4.0 + 1.0};
    const double ph[3] = {rng.uniform_real() * 6.28, rng.uniform_real() * 6.28,
                          rng.uniform_real() * 6.28};
    const double drift[3] = {rng.uniform_real() * 0.5 + 0.15, rng.uniform_real() * 0.5 + 0.15,
                             rng.uniform_real() * 0.5 + 0.15};

    struct Blob {
        double x, y, vx, vy, radius;
        Rgb color;
    };
    std::vector<Blob> blobs;
    const int blob_count = cfg.motif == "shapes" ? 4 : 2;
    for (int i = 0; i < blob_count; ++i) {
        blobs.push_back({rng.uniform_real(), rng.uniform_real(),
                         (rng.uniform_real() - 0.5) * 0.2, (rng.uniform_real() - 0.5) * 0.2,
                         rng.uniform_real() * 0.08 + 0.04,
                         Rgb{static_cast<std::uint8_t>(rng.uniform_int(64, 255)),
                             static_cast<std::uint8_t>(rng.uniform_int(64, 255)),
                             static_cast<std::uint8_t>(rng.uniform_int(64, 255))}});
    }

    const auto count = static_cast<std::size_t>(std::llround(cfg.duration_s * cfg.fps));
    FrameSequence seq;
    seq.fps = cfg.fps;
    seq.source_id = "synthetic-" + std::to_string(cfg.seed);
    seq.frames.reserve(count);

    const double inv_w = 1.0 / cfg.width, inv_h = 1.0 / cfg.height;
    for (std::size_t t = 0; t < count; ++t) {
        Image img(cfg.width, cfg.height);
        const double ts = static_cast<double>(t) / cfg.fps;
        for (int y = 0; y < cfg.height; ++y) {
            const double ny = y * inv_h;
            for (int x = 0; x < cfg.width; ++x) {
                const double nx = x * inv_w;
                std::uint8_t c[3];
                for (int ch = 0; ch < 3; ++ch) {
                    const double v =
                        std::sin(2.0 * std::numbers::pi * (fx[ch] * nx + fy[ch] * ny) +
                                 ph[ch] + drift[ch] * ts);
                    c[ch] = static_cast<std::uint8_t>(std::lround(127.5 + 127.0 * v));
                }
                img.set(x, y, {c[0], c[1], c[2]});
            }
        }
        for (const Blob& blob : blobs) {
            const double bx = blob.x + blob.vx * ts;
            const double by = blob.y + blob.vy * ts;
            // Wrap into [0, 1) so blobs keep moving over long durations.
            const double wx = bx - std::floor(bx);
            const double wy = by - std::floor(by);
            draw_disc(img, static_cast<int>(wx * cfg.width), static_cast<int>(wy * cfg.height),
                      static_cast<int>(blob.radius * std::min(cfg.width, cfg.height)), blob.color);
        }
        stamp_frame_index(img, t);
        seq.frames.push_back(std::move(img));
    }
    seq.validate();
    return seq;
}

FrameSequence cut_haystack(const FrameSequence& src, double target_duration_s,
                           std::uint64_t seed) {
    src.validate();
    const auto target = static_cast<std::size_t>(std::llround(target_duration_s * src.fps));
    if (target < 1) throw TooShortError("cut_haystack: target duration below one frame");
    if (target > src.frame_count()) {
        throw TooShortError("cut_haystack: source of " + std::to_string(src.duration_s()) +
                            " s shorter than target " + std::to_string(target_duration_s) + " s");
    }
    Rng rng(derive_seed(seed, "cut-haystack"));
    const std::size_t max_offset = src.frame_count() - target;
    const std::size_t offset =
        max_offset == 0 ? 0 : static_cast<std::size_t>(rng.uniform_u64(max_offset + 1));

    FrameSequence out;
    out.fps = src.fps;
    out.source_id = src.source_id + "+cut" + std::to_string(offset);
    out.frames.assign(src.frames.begin() + static_cast<std::ptrdiff_t>(offset),
                      src.frames.begin() + static_cast<std::ptrdiff_t>(offset + target));
    return out;
}

FrameSequence load_haystack(const CodecBackend& backend, const std::filesystem::path& path,
                            double fps, int width, int height) {
    return decode_video(backend, path, fps, width, height);
}

}  // namespace niah
