#include "niah/similarity.hpp"

#include <nlohmann/json.hpp>

#include <cmath>

#include "niah/b64.hpp"
#include "niah/image.hpp"
#include "niah/png_io.hpp"

// httplib must be included once with its implementation visible; keep it in
// translation units only.
#include <httplib.h>

using json = nlohmann::json;

namespace niah {

double DescriptorSimilarity::score(const Image& a, const Image& b) const {
    if (a.empty() || b.empty()) throw BackendError("descriptor: empty image");
    const Eigen::MatrixXf da = box_downsample(luma(a), grid_);
    const Eigen::MatrixXf db = box_downsample(luma(b), grid_);

    const float mean_a = da.mean();
    const float mean_b = db.mean();
    const Eigen::MatrixXf ca = da.array() - mean_a;
    const Eigen::MatrixXf cb = db.array() - mean_b;
    const float na = ca.norm();
    const float nb = cb.norm();

    // Constant images carry no structure to correlate; define corr = 0.
    constexpr float kEps = 1e-6f;
    float corr = 0.0f;
    if (na > kEps && nb > kEps) {
        corr = (ca.array() * cb.array()).sum() / (na * nb);
        corr = std::clamp(corr, -1.0f, 1.0f);
    }
    return (static_cast<double>(corr) + 1.0) / 2.0;
}

HttpSimilarity::HttpSimilarity(std::string host, int port, std::string path, double timeout_s)
    : host_(std::move(host)), port_(port), path_(std::move(path)), timeout_s_(timeout_s) {}

std::string HttpSimilarity::id() const {
    return "http:" + host_ + ":" + std::to_string(port_) + path_;
}

double HttpSimilarity::score(const Image& a, const Image& b) const {
    httplib::Client client(host_, port_);
    client.set_connection_timeout(static_cast<time_t>(timeout_s_), 0);
    client.set_read_timeout(static_cast<time_t>(timeout_s_), 0);

    json body = {{"image_a", base64_encode(encode_png(a))},
                 {"image_b", base64_encode(encode_png(b))}};
    auto res = client.Post(path_, body.dump(), "application/json");
    if (!res) throw BackendError("similarity service unreachable: " + id());
    if (res->status != 200) {
        throw BackendError("similarity service status " + std::to_string(res->status));
    }
    try {
        return json::parse(res->body).at("score").get<double>();
    } catch (const json::exception& e) {
        throw BackendError(std::string("similarity service returned malformed body: ") + e.what());
    }
}

double max_similarity(const Image& candidate, const FrameSequence& haystack,
                      const SimilarityBackend& backend) {
    double best = 0.0;
    for (const Frame& frame : haystack.frames) {
        best = std::max(best, backend.score(candidate, frame));
    }
    return best;
}

FilterResult filter_needles(const std::vector<PoolEntry>& candidates,
                            const FrameSequence& haystack, const SimilarityBackend& backend,
                            double threshold) {
    if (!(threshold > 0.0 && threshold <= 1.0)) {
        throw Error("filter_needles: threshold must be in (0, 1]");
    }
    FilterResult result;
    for (const PoolEntry& entry : candidates) {
        Image img;
        try {
            img = load_image_payload(entry.payload_ref);
        } catch (const Error& e) {
            throw BackendError("filter_needles: candidate '" + entry.label + "': " + e.what());
        }
        double best;
        try {
            best = max_similarity(img, haystack, backend);
        } catch (const Error& e) {
            throw BackendError("filter_needles: candidate '" + entry.label + "': " + e.what());
        }
        if (best > threshold) {
            result.rejected.push_back(entry);
        } else {
            result.accepted.push_back(entry);
        }
    }
    return result;
}

}  // namespace niah
