#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "niah/eval.hpp"

namespace niah {

// Everything an adapter may need about the sample's video: a path for real
// models, geometry and ground-truth spans for the synthetic responders.
struct MediaRef {
    std::string media_path;  // frame dir or container file; may be empty
    std::size_t frame_count = 0;
    double fps = 0.0;
    std::vector<std::pair<std::size_t, std::size_t>> needle_spans;  // [begin, end)
};

// The unified inference prompt: question, four lettered lines, then the
// directive. Byte-stable.
std::string format_prompt(const TryInstance& t);

// Judge prompt templates (system + user) and strict 0/1 parsing.
std::string judge_system_prompt();
std::string judge_user_prompt(const std::string& question, const std::string& gt_answer,
                              const std::string& predicted);
int parse_judge_verdict(const std::string& response);  // throws JudgeUnparseable

class JudgeClient {
public:
    JudgeClient(std::string host, int port, std::string path = "/judge", double timeout_s = 30.0);
    // Sends the templates verbatim with slots filled; returns 0 or 1.
    int verdict(const std::string& question, const std::string& gt_answer,
                const std::string& predicted) const;

private:
    std::string host_;
    int port_;
    std::string path_;
    double timeout_s_;
};

// ─── Adapter contract ────────────────────────────────────────────────────

class Adapter {
public:
    virtual ~Adapter() = default;
    virtual std::string answer(const TryInstance& t, const MediaRef& media) = 0;
    virtual std::string id() const = 0;
    virtual bool needs_media() const { return false; }
    virtual int max_in_flight() const { return 8; }
    // Judge fallback for models that cannot emit option letters.
    virtual const JudgeClient* judge() const { return nullptr; }
};

// ─── Frame sampling policies ─────────────────────────────────────────────

// How a model consumes frames. The synthetic sampler responder reproduces
// recall geometry directly from these index sets.
struct SamplingPolicy {
    std::string kind = "uniform";  // "all_at_fps" | "uniform" | "sequential"
    double fps = 1.0;              // all_at_fps & sequential: sampling rate
    int max_frames = 16;           // uniform: N; sequential: cap

    // Deterministic sampled frame indices for a video of `frame_count`
    // frames at `video_fps`. "sequential" keeps the head and tail halves of
    // its budget when the video exceeds the cap.
    std::vector<std::size_t> sample_indices(std::size_t frame_count, double video_fps) const;

    bool covers_any(const MediaRef& media) const;  // hits any needle span
};

// ─── Synthetic responders ────────────────────────────────────────────────

class OracleResponder : public Adapter {
public:
    std::string answer(const TryInstance& t, const MediaRef&) override;
    std::string id() const override { return "oracle"; }
};

class FixedLetterResponder : public Adapter {
public:
    explicit FixedLetterResponder(char letter = 'A') : letter_(letter) {}
    std::string answer(const TryInstance&, const MediaRef&) override;
    std::string id() const override { return std::string("fixed-") + letter_; }

private:
    char letter_;
};

class UniformRandomResponder : public Adapter {
public:
    explicit UniformRandomResponder(std::uint64_t seed) : seed_(seed) {}
    std::string answer(const TryInstance& t, const MediaRef&) override;
    std::string id() const override { return "uniform-random"; }

private:
    std::uint64_t seed_;
};

// Answers correctly iff its sampling policy covers a needle frame; otherwise
// answers a uniformly random letter drawn from a pure function of
// (seed, sample_id, try_index). The fallback being replayable is what lets
// sweep predictions be computed in closed form.
class SamplerSimResponder : public Adapter {
public:
    SamplerSimResponder(SamplingPolicy policy, std::uint64_t seed)
        : policy_(std::move(policy)), seed_(seed) {}
    std::string answer(const TryInstance& t, const MediaRef& media) override;
    std::string id() const override;

    static char fallback_letter(std::uint64_t seed, const std::string& sample_id, int try_index);
    const SamplingPolicy& policy() const { return policy_; }

private:
    SamplingPolicy policy_;
    std::uint64_t seed_;
};

// Replays responses from a fixture: either a results JSONL file or lines of
// {"sample_id", "try_index", "response"}.
class ReplayAdapter : public Adapter {
public:
    explicit ReplayAdapter(const std::filesystem::path& fixture);
    std::string answer(const TryInstance& t, const MediaRef&) override;
    std::string id() const override { return "replay"; }

private:
    std::map<std::string, std::string> responses_;  // "<sample_id>#<try>" -> response
};

// ─── HTTP adapter ────────────────────────────────────────────────────────

struct HttpAdapterConfig {
    std::string host;
    int port = 80;
    std::string path = "/infer";
    std::string media_mode = "frames";  // "frames" (base64 PNG list) | "video_url"
    SamplingPolicy policy;              // applied when frames exceed max_frames
    int max_frames = 32;
    double timeout_s = 30.0;
    int retries = 3;
    double backoff_s = 0.5;             // doubled per retry
    std::string api_key_env;            // env var holding the bearer token
    std::size_t max_media_bytes = 64ull << 20;
    int max_in_flight = 4;
    std::optional<std::pair<std::string, int>> judge_endpoint;  // host, port
    std::string judge_path = "/judge";
};

// POST {prompt, frames|[video_url], metadata} -> {"text": ...}. Retries
// transient failures with exponential backoff; never blocks past its
// configured timeout per attempt.
class HttpAdapter : public Adapter {
public:
    explicit HttpAdapter(HttpAdapterConfig config);
    std::string answer(const TryInstance& t, const MediaRef& media) override;
    std::string id() const override;
    bool needs_media() const override { return true; }
    int max_in_flight() const override { return config_.max_in_flight; }
    const JudgeClient* judge() const override { return judge_ ? judge_.get() : nullptr; }

private:
    HttpAdapterConfig config_;
    std::unique_ptr<JudgeClient> judge_;
};

// Builds an adapter from a JSON config file or inline spec string
// ("oracle", "fixed:A", "random:7", ...). See README for the schema.
std::unique_ptr<Adapter> make_adapter(const nlohmann::json& config);
std::unique_ptr<Adapter> make_adapter_from_spec(const std::string& spec);

}  // namespace niah
