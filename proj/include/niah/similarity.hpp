#pragma once

#include <memory>
#include <string>
#include <vector>

#include "niah/core.hpp"
#include "niah/pools.hpp"

namespace niah {

// Pairwise image similarity in [0, 1]. Implementations must be symmetric
// and deterministic; the filter relies on score(x, x) being maximal.
class SimilarityBackend {
public:
    virtual ~SimilarityBackend() = default;
    virtual double score(const Image& a, const Image& b) const = 0;
    virtual std::string id() const = 0;
};

// Default backend: 16x16 luma descriptor, normalized correlation mapped to
// [0, 1]. score(x, x) = 1 for any image with non-constant luma. The
// calibrated rejection threshold for this backend is 0.9.
class DescriptorSimilarity : public SimilarityBackend {
public:
    explicit DescriptorSimilarity(int grid = 16) : grid_(grid) {}
    double score(const Image& a, const Image& b) const override;
    std::string id() const override { return "descriptor-" + std::to_string(grid_); }

private:
    int grid_;
};

// Adapter for an external embedding service:
// POST {image_a: <base64 png>, image_b: <base64 png>} -> {"score": float}.
class HttpSimilarity : public SimilarityBackend {
public:
    HttpSimilarity(std::string host, int port, std::string path = "/similarity",
                   double timeout_s = 30.0);
    double score(const Image& a, const Image& b) const override;
    std::string id() const override;

private:
    std::string host_;
    int port_;
    std::string path_;
    double timeout_s_;
};

inline constexpr double kDefaultFilterThreshold = 0.9;

struct FilterResult {
    std::vector<PoolEntry> accepted;
    std::vector<PoolEntry> rejected;
};

// Partitions candidates: rejected iff the maximum similarity to any haystack
// frame strictly exceeds `threshold`. Exhaustive and deterministic.
FilterResult filter_needles(const std::vector<PoolEntry>& candidates,
                            const FrameSequence& haystack, const SimilarityBackend& backend,
                            double threshold);

// Max similarity of one candidate image over all haystack frames.
double max_similarity(const Image& candidate, const FrameSequence& haystack,
                      const SimilarityBackend& backend);

}  // namespace niah
