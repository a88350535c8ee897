#include "niah/adapters.hpp"

#include <httplib.h>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <thread>

#include "niah/b64.hpp"
#include "niah/frame_dir.hpp"
#include "niah/png_io.hpp"
#include "niah/rng.hpp"

using json = nlohmann::json;

namespace niah {

std::string format_prompt(const TryInstance& t) {
    std::string prompt = t.question;
    for (int j = 0; j < 4; ++j) {
        prompt += "\n";
        prompt += static_cast<char>('A' + j);
        prompt += ". ";
        prompt += t.options[static_cast<std::size_t>(j)];
    }
    prompt += "\nAnswer with the option's letter from the given choices directly.";
    return prompt;
}

std::string judge_system_prompt() {
    return "You are an intelligent chatbot designed for evaluating the correctness of "
           "generative outputs for question-answer pairs. Your task is to compare the "
           "predicted answer with the correct answer and determine if they match "
           "meaningfully. Here's how you can accomplish the task:\n"
           "------\n"
           "##INSTRUCTIONS:\n"
           "- Focus on the meaningful match between the predicted answer and the correct "
           "answer.\n"
           "- Consider synonyms or paraphrases as valid matches.\n"
           "- Evaluate the correctness of the prediction compared to the answer.";
}

std::string judge_user_prompt(const std::string& question, const std::string& gt_answer,
                              const std::string& predicted) {
    return "Please evaluate the following video-based question-answer pair:\n"
           "Question: " + question + "\n"
           "Correct Answer: " + gt_answer + "\n"
           "Predicted Answer: " + predicted + "\n"
           "If the predicted answer expresses the same meaning as the correct answer, "
           "please output 1; otherwise, output 0.\n"
           "DO NOT PROVIDE ANY OTHER OUTPUT TEXT OR EXPLANATION. Only provide 0 or 1.";
}

int parse_judge_verdict(const std::string& response) {
    std::string t = response;
    t.erase(std::remove_if(t.begin(), t.end(),
                           [](unsigned char c) { return std::isspace(c); }),
            t.end());
    if (t == "0") return 0;
    if (t == "1") return 1;
    throw JudgeUnparseable("judge replied '" + response + "', expected exactly 0 or 1");
}

JudgeClient::JudgeClient(std::string host, int port, std::string path, double timeout_s)
    : host_(std::move(host)), port_(port), path_(std::move(path)), timeout_s_(timeout_s) {}

int JudgeClient::verdict(const std::string& question, const std::string& gt_answer,
                         const std::string& predicted) const {
    httplib::Client client(host_, port_);
    client.set_connection_timeout(static_cast<time_t>(timeout_s_), 0);
    client.set_read_timeout(static_cast<time_t>(timeout_s_), 0);
    const json body = {{"system", judge_system_prompt()},
                       {"prompt", judge_user_prompt(question, gt_answer, predicted)}};
    auto res = client.Post(path_, body.dump(), "application/json");
    if (!res) throw AdapterTimeout("judge endpoint unreachable: " + host_);
    if (res->status != 200) {
        throw AdapterRejected("judge endpoint status " + std::to_string(res->status));
    }
    std::string text;
    try {
        text = json::parse(res->body).at("text").get<std::string>();
    } catch (const json::exception&) {
        throw JudgeUnparseable("judge endpoint returned malformed body");
    }
    return parse_judge_verdict(text);
}

// ─── Sampling policies ───────────────────────────────────────────────────

std::vector<std::size_t> SamplingPolicy::sample_indices(std::size_t frame_count,
                                                        double video_fps) const {
    std::vector<std::size_t> indices;
    if (frame_count == 0) return indices;

    if (kind == "uniform") {
        const auto n = static_cast<std::size_t>(std::max(1, max_frames));
        std::set<std::size_t> distinct;
        for (std::size_t j = 0; j < n; ++j) {
            distinct.insert(std::min(frame_count - 1, j * frame_count / n));
        }
        indices.assign(distinct.begin(), distinct.end());
        return indices;
    }

    // all_at_fps and sequential both walk the video at `fps`.
    const double stride = video_fps / fps;
    if (!(stride > 0.0)) throw Error("SamplingPolicy: invalid fps");
    for (double pos = 0.0; pos < static_cast<double>(frame_count); pos += stride) {
        const auto idx = static_cast<std::size_t>(pos);
        if (indices.empty() || indices.back() != idx) indices.push_back(idx);
    }
    if (kind == "all_at_fps") return indices;

    if (kind == "sequential") {
        const auto cap = static_cast<std::size_t>(std::max(1, max_frames));
        if (indices.size() > cap) {
            // Keep the head and tail halves of the budget; the middle is
            // what a window-limited model drops.
            const std::size_t head = (cap + 1) / 2;
            const std::size_t tail = cap - head;
            std::vector<std::size_t> kept(indices.begin(),
                                          indices.begin() + static_cast<std::ptrdiff_t>(head));
            kept.insert(kept.end(), indices.end() - static_cast<std::ptrdiff_t>(tail),
                        indices.end());
            return kept;
        }
        return indices;
    }
    throw Error("SamplingPolicy: unknown kind '" + kind + "'");
}

bool SamplingPolicy::covers_any(const MediaRef& media) const {
    const auto indices = sample_indices(media.frame_count, media.fps);
    for (std::size_t idx : indices) {
        for (const auto& [begin, end] : media.needle_spans) {
            if (idx >= begin && idx < end) return true;
        }
    }
    return false;
}

// ─── Synthetic responders ────────────────────────────────────────────────

std::string OracleResponder::answer(const TryInstance& t, const MediaRef&) {
    return std::string(1, t.answer_letter);
}

std::string FixedLetterResponder::answer(const TryInstance&, const MediaRef&) {
    return std::string(1, letter_);
}

std::string UniformRandomResponder::answer(const TryInstance& t, const MediaRef&) {
    Rng rng(derive_seed(seed_, t.sample_id + "#try" + std::to_string(t.try_index)));
    return std::string(1, static_cast<char>('A' + rng.uniform_int(0, 3)));
}

char SamplerSimResponder::fallback_letter(std::uint64_t seed, const std::string& sample_id,
                                          int try_index) {
    Rng rng(derive_seed(seed, sample_id + "#try" + std::to_string(try_index)));
    return static_cast<char>('A' + rng.uniform_int(0, 3));
}

std::string SamplerSimResponder::answer(const TryInstance& t, const MediaRef& media) {
    if (media.frame_count == 0) {
        throw Error("sampler-sim needs media geometry for " + t.sample_id);
    }
    if (policy_.covers_any(media)) return std::string(1, t.answer_letter);
    return std::string(1, fallback_letter(seed_, t.sample_id, t.try_index));
}

std::string SamplerSimResponder::id() const {
    return "sampler-" + policy_.kind + "-" + std::to_string(policy_.max_frames);
}

ReplayAdapter::ReplayAdapter(const std::filesystem::path& fixture) {
    std::ifstream in(fixture);
    if (!in) throw IoError("ReplayAdapter: cannot open " + fixture.string());
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        const json j = json::parse(line);
        const std::string sample_id = j.at("sample_id").get<std::string>();
        if (j.contains("tries")) {  // results-file schema
            int i = 0;
            for (const json& t : j.at("tries")) {
                responses_[sample_id + "#" + std::to_string(i++)] =
                    t.at("response").get<std::string>();
            }
        } else {
            responses_[sample_id + "#" + std::to_string(j.at("try_index").get<int>())] =
                j.at("response").get<std::string>();
        }
    }
}

std::string ReplayAdapter::answer(const TryInstance& t, const MediaRef&) {
    const auto it = responses_.find(t.sample_id + "#" + std::to_string(t.try_index));
    if (it == responses_.end()) {
        throw Error("ReplayAdapter: no fixture response for " + t.sample_id + " try " +
                    std::to_string(t.try_index));
    }
    return it->second;
}

// ─── HTTP adapter ────────────────────────────────────────────────────────

HttpAdapter::HttpAdapter(HttpAdapterConfig config) : config_(std::move(config)) {
    if (config_.judge_endpoint) {
        judge_ = std::make_unique<JudgeClient>(config_.judge_endpoint->first,
                                               config_.judge_endpoint->second,
                                               config_.judge_path, config_.timeout_s);
    }
}

std::string HttpAdapter::id() const {
    return "http:" + config_.host + ":" + std::to_string(config_.port) + config_.path;
}

std::string HttpAdapter::answer(const TryInstance& t, const MediaRef& media) {
    json body = {{"prompt", format_prompt(t)},
                 {"metadata", {{"sample_id", t.sample_id}, {"try_index", t.try_index}}}};

    if (config_.media_mode == "video_url") {
        body["video_url"] = media.media_path;
    } else {
        if (media.media_path.empty()) {
            throw Error("http adapter: sample " + t.sample_id + " has no media path");
        }
        FrameSequence seq = load_frame_dir(media.media_path);
        std::vector<std::size_t> picks;
        if (config_.max_frames > 0 &&
            seq.frame_count() > static_cast<std::size_t>(config_.max_frames)) {
            SamplingPolicy policy = config_.policy;
            policy.max_frames = config_.max_frames;
            picks = policy.sample_indices(seq.frame_count(), seq.fps);
            // Policies driven by rate rather than count can still overshoot.
            if (picks.size() > static_cast<std::size_t>(config_.max_frames)) {
                SamplingPolicy uniform{"uniform", 1.0, config_.max_frames};
                picks = uniform.sample_indices(seq.frame_count(), seq.fps);
            }
        } else {
            picks.resize(seq.frame_count());
            for (std::size_t i = 0; i < picks.size(); ++i) picks[i] = i;
        }
        json frames = json::array();
        std::size_t total_bytes = 0;
        for (std::size_t idx : picks) {
            const std::string png = encode_png(seq.frames[idx]);
            total_bytes += png.size();
            if (total_bytes > config_.max_media_bytes) {
                throw MediaTooLarge("http adapter: media for " + t.sample_id + " exceeds " +
                                    std::to_string(config_.max_media_bytes) + " bytes");
            }
            frames.push_back(base64_encode(png));
        }
        body["frames"] = std::move(frames);
    }

    const std::string payload = body.dump();
    std::string api_key;
    if (!config_.api_key_env.empty()) {
        const char* value = std::getenv(config_.api_key_env.c_str());
        if (value != nullptr) api_key = value;
    }

    double backoff = config_.backoff_s;
    std::string last_error;
    for (int attempt = 0; attempt <= config_.retries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(std::chrono::duration<double>(backoff));
            backoff *= 2.0;
        }
        httplib::Client client(config_.host, config_.port);
        client.set_connection_timeout(static_cast<time_t>(config_.timeout_s), 0);
        client.set_read_timeout(static_cast<time_t>(config_.timeout_s), 0);
        httplib::Headers headers;
        if (!api_key.empty()) headers.emplace("Authorization", "Bearer " + api_key);

        auto res = client.Post(config_.path, headers, payload, "application/json");
        if (!res) {
            last_error = "transport error / timeout";
            continue;  // transient
        }
        if (res->status >= 400 && res->status < 500) {
            throw AdapterRejected("endpoint " + id() + " status " + std::to_string(res->status) +
                                  ": " + res->body);
        }
        if (res->status != 200) {
            last_error = "status " + std::to_string(res->status);
            continue;  // 5xx: transient
        }
        try {
            return json::parse(res->body).at("text").get<std::string>();
        } catch (const json::exception&) {
            throw Error("endpoint " + id() + " returned malformed body");
        }
    }
    throw AdapterTimeout("endpoint " + id() + " failed after " +
                         std::to_string(config_.retries + 1) + " attempts: " + last_error);
}

// ─── Factory ─────────────────────────────────────────────────────────────

namespace {

SamplingPolicy policy_from_json(const json& j) {
    SamplingPolicy policy;
    policy.kind = j.value("policy", policy.kind);
    policy.fps = j.value("policy_fps", policy.fps);
    policy.max_frames = j.value("frames", j.value("max_frames", policy.max_frames));
    return policy;
}

}  // namespace

std::unique_ptr<Adapter> make_adapter(const json& config) {
    const std::string type = config.at("type").get<std::string>();
    if (type == "oracle") return std::make_unique<OracleResponder>();
    if (type == "fixed_letter") {
        const std::string letter = config.value("letter", "A");
        return std::make_unique<FixedLetterResponder>(letter.empty() ? 'A' : letter[0]);
    }
    if (type == "uniform_random") {
        return std::make_unique<UniformRandomResponder>(config.value("seed", 0ull));
    }
    if (type == "sampler_sim") {
        return std::make_unique<SamplerSimResponder>(policy_from_json(config),
                                                     config.value("seed", 0ull));
    }
    if (type == "replay") {
        return std::make_unique<ReplayAdapter>(config.at("fixture").get<std::string>());
    }
    if (type == "http") {
        HttpAdapterConfig c;
        c.host = config.at("host").get<std::string>();
        c.port = config.value("port", 80);
        c.path = config.value("path", c.path);
        c.media_mode = config.value("media", c.media_mode);
        c.policy = policy_from_json(config);
        c.max_frames = config.value("max_frames", c.max_frames);
        c.timeout_s = config.value("timeout_s", c.timeout_s);
        c.retries = config.value("retries", c.retries);
        c.backoff_s = config.value("backoff_s", c.backoff_s);
        c.api_key_env = config.value("api_key_env", c.api_key_env);
        c.max_in_flight = config.value("max_in_flight", c.max_in_flight);
        if (config.contains("judge")) {
            const json& jj = config.at("judge");
            c.judge_endpoint = {{jj.at("host").get<std::string>(), jj.value("port", 80)}};
            c.judge_path = jj.value("path", c.judge_path);
        }
        return std::make_unique<HttpAdapter>(std::move(c));
    }
    throw Error("make_adapter: unknown adapter type '" + type + "'");
}

std::unique_ptr<Adapter> make_adapter_from_spec(const std::string& spec) {
    // Inline shorthands for the synthetic responders.
    if (spec == "oracle") return make_adapter({{"type", "oracle"}});
    if (spec.rfind("fixed:", 0) == 0) {
        return make_adapter({{"type", "fixed_letter"}, {"letter", spec.substr(6)}});
    }
    if (spec.rfind("random:", 0) == 0) {
        return make_adapter(
            {{"type", "uniform_random"}, {"seed", std::stoull(spec.substr(7))}});
    }
    if (spec.rfind("sampler:", 0) == 0) {
        // sampler:<kind>:<frames>[:<seed>]
        const std::string rest = spec.substr(8);
        const auto c1 = rest.find(':');
        if (c1 == std::string::npos) throw Error("sampler spec: sampler:<kind>:<frames>[:<seed>]");
        const auto c2 = rest.find(':', c1 + 1);
        json cfg = {{"type", "sampler_sim"},
                    {"policy", rest.substr(0, c1)},
                    {"frames", std::stoi(rest.substr(c1 + 1, c2 - c1 - 1))}};
        if (c2 != std::string::npos) cfg["seed"] = std::stoull(rest.substr(c2 + 1));
        return make_adapter(cfg);
    }
    // Otherwise treat it as a JSON config path.
    std::ifstream in(spec);
    if (!in) throw IoError("adapter config not found: " + spec);
    return make_adapter(json::parse(in));
}

}  // namespace niah
