#include "niah/eval.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>

#include "niah/rng.hpp"

using json = nlohmann::json;

namespace niah {

std::vector<TryInstance> circular_variants(const Sample& sample, int k, ShuffleMode mode,
                                           std::uint64_t seed) {
    if (k < 1 || k > 4) throw Error("circular_variants: k must be in [1, 4]");

    std::vector<TryInstance> tries;
    tries.reserve(static_cast<std::size_t>(k));
    for (int t = 0; t < k; ++t) {
        TryInstance instance;
        instance.sample_id = sample.sample_id;
        instance.try_index = t;
        instance.question = sample.question;

        std::array<int, 4> order{};
        if (mode == ShuffleMode::Rotation) {
            for (int j = 0; j < 4; ++j) order[static_cast<std::size_t>(j)] = (j + t) % 4;
        } else {
            std::vector<int> perm{0, 1, 2, 3};
            if (t > 0) {
                Rng rng(derive_seed(seed, sample.sample_id + "#shuffle" + std::to_string(t)));
                rng.shuffle(perm);
            }
            std::copy(perm.begin(), perm.end(), order.begin());
        }
        instance.order = order;
        for (int j = 0; j < 4; ++j) {
            instance.options[static_cast<std::size_t>(j)] =
                sample.options[static_cast<std::size_t>(order[static_cast<std::size_t>(j)])];
            if (order[static_cast<std::size_t>(j)] == sample.answer_index) {
                instance.answer_letter = static_cast<char>('A' + j);
            }
        }
        tries.push_back(std::move(instance));
    }
    return tries;
}

namespace {

bool is_option_letter(char c) {
    return (c >= 'A' && c <= 'D') || (c >= 'a' && c <= 'd');
}

char to_upper_letter(char c) {
    return static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool is_boundary(const std::string& s, std::size_t pos) {
    if (pos == 0 || pos >= s.size()) return true;
    return !std::isalnum(static_cast<unsigned char>(s[pos]));
}

// True when `needle` occurs in `hay` bounded by non-alphanumerics, so "3"
// does not match inside "13". Case-insensitive.
bool contains_bounded(const std::string& hay, const std::string& needle) {
    if (needle.empty() || needle.size() > hay.size()) return false;
    auto lower = [](const std::string& s) {
        std::string out = s;
        std::transform(out.begin(), out.end(), out.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        return out;
    };
    const std::string h = lower(hay), n = lower(needle);
    std::size_t pos = 0;
    while ((pos = h.find(n, pos)) != std::string::npos) {
        if (is_boundary(h, pos == 0 ? 0 : pos - 1) &&
            (pos == 0 || !std::isalnum(static_cast<unsigned char>(h[pos - 1]))) &&
            is_boundary(h, pos + n.size())) {
            return true;
        }
        ++pos;
    }
    return false;
}

// "answer is (C)", "Answer: B", "the answer is C."
std::optional<char> match_answer_phrase(const std::string& s) {
    static const std::string kKey = "answer";
    std::string lower = s;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    std::size_t pos = lower.find(kKey);
    while (pos != std::string::npos) {
        std::size_t i = pos + kKey.size();
        // Skip "is", ':', '-' and whitespace/brackets between.
        while (i < s.size()) {
            const char c = lower[i];
            if (c == ' ' || c == ':' || c == '-' || c == '(' || c == '[') {
                ++i;
            } else if (lower.compare(i, 2, "is") == 0) {
                i += 2;
            } else {
                break;
            }
        }
        if (i < s.size() && is_option_letter(s[i]) && is_boundary(lower, i + 1)) {
            return to_upper_letter(s[i]);
        }
        pos = lower.find(kKey, pos + 1);
    }
    return std::nullopt;
}

}  // namespace

std::optional<char> extract_choice(const std::string& response,
                                   const std::array<std::string, 4>& options) {
    const std::string text = trim(response);
    if (text.empty()) return std::nullopt;

    // Whole response is a bare letter, possibly decorated: "A", "(b)", "C.".
    {
        std::string stripped = text;
        while (!stripped.empty() && (stripped.front() == '(' || stripped.front() == '[')) {
            stripped.erase(stripped.begin());
        }
        while (!stripped.empty()) {
            const char back = stripped.back();
            if (back == ')' || back == ']' || back == '.' || back == ':' || back == ',') {
                stripped.pop_back();
            } else {
                break;
            }
        }
        if (stripped.size() == 1 && is_option_letter(stripped[0])) {
            return to_upper_letter(stripped[0]);
        }
    }

    // Leading letter with a separator: "B. Carol", "C) next", "A: ...".
    if (is_option_letter(text[0]) && text.size() >= 2) {
        const char sep = text[1];
        if (sep == '.' || sep == ')' || sep == ':' || sep == ',' || sep == ' ') {
            return to_upper_letter(text[0]);
        }
    }
    // "(A) ..." at the start.
    if (text.size() >= 3 && (text[0] == '(' || text[0] == '[') && is_option_letter(text[1]) &&
        (text[2] == ')' || text[2] == ']')) {
        return to_upper_letter(text[1]);
    }

    if (auto phrase = match_answer_phrase(text)) return phrase;

    // Isolated letter tokens anywhere, if exactly one distinct letter occurs.
    {
        std::set<char> found;
        for (std::size_t i = 0; i < text.size(); ++i) {
            if (!is_option_letter(text[i])) continue;
            const bool left_ok = i == 0 || !std::isalnum(static_cast<unsigned char>(text[i - 1]));
            const bool right_ok =
                i + 1 >= text.size() || !std::isalnum(static_cast<unsigned char>(text[i + 1]));
            // Lowercase isolated letters ("a") are too ambiguous in prose.
            if (left_ok && right_ok && std::isupper(static_cast<unsigned char>(text[i]))) {
                found.insert(to_upper_letter(text[i]));
            }
        }
        if (found.size() == 1) return *found.begin();
        if (found.size() > 1) return std::nullopt;
    }

    // Full option-text containment, if exactly one option matches.
    {
        std::optional<char> match;
        for (std::size_t j = 0; j < options.size(); ++j) {
            if (contains_bounded(text, options[j])) {
                if (match) return std::nullopt;  // ambiguous
                match = static_cast<char>('A' + j);
            }
        }
        return match;
    }
}

EvalRecord score_sample(const Sample& sample, const std::vector<TryInstance>& tries,
                        const std::vector<std::string>& responses,
                        const std::vector<std::optional<int>>& judged_correct) {
    if (tries.size() != responses.size()) {
        throw Error("score_sample: " + std::to_string(tries.size()) + " tries vs " +
                    std::to_string(responses.size()) + " responses");
    }
    EvalRecord record;
    record.sample_id = sample.sample_id;
    record.tries.reserve(tries.size());

    for (std::size_t i = 0; i < tries.size(); ++i) {
        const TryInstance& t = tries[i];
        TryOutcome outcome;
        outcome.order = t.order;
        outcome.response = responses[i];

        const std::optional<int> judge =
            i < judged_correct.size() ? judged_correct[i] : std::nullopt;
        if (judge.has_value()) {
            // Judge fallback delivers a verdict, not a letter. A positive
            // verdict pins the content to the ground truth so consistency
            // stays well-defined; a negative one leaves the content unknown.
            outcome.correct = *judge == 1;
            if (outcome.correct) outcome.content = sample.answer_text();
        } else {
            outcome.letter = extract_choice(responses[i], t.options);
            if (outcome.letter) {
                const auto idx = static_cast<std::size_t>(*outcome.letter - 'A');
                outcome.content = t.options[idx];
                outcome.correct = *outcome.letter == t.answer_letter;
            }
        }
        record.tries.push_back(std::move(outcome));
    }

    record.circular_correct =
        !record.tries.empty() &&
        std::all_of(record.tries.begin(), record.tries.end(),
                    [](const TryOutcome& t) { return t.correct; });
    record.consistent = !record.tries.empty() && record.tries.front().content.has_value();
    if (record.consistent) {
        const std::string& first = *record.tries.front().content;
        for (const TryOutcome& t : record.tries) {
            if (!t.content || *t.content != first) {
                record.consistent = false;
                break;
            }
        }
    }
    return record;
}

MetricsReport aggregate(const std::vector<EvalRecord>& records, const Manifest& manifest,
                        const DurationBuckets& buckets) {
    std::map<std::string, const EvalRecord*> by_id;
    for (const EvalRecord& r : records) {
        if (!by_id.emplace(r.sample_id, &r).second) {
            throw Error("aggregate: duplicate record for " + r.sample_id);
        }
    }
    std::set<std::string> manifest_ids;
    for (const Sample& s : manifest.samples) manifest_ids.insert(s.sample_id);
    for (const EvalRecord& r : records) {
        if (!manifest_ids.contains(r.sample_id)) {
            throw Error("aggregate: record for unknown sample " + r.sample_id);
        }
    }
    std::vector<std::string> missing;
    for (const Sample& s : manifest.samples) {
        if (!by_id.contains(s.sample_id)) missing.push_back(s.sample_id);
    }
    if (!missing.empty()) throw MissingRecords(std::move(missing));

    MetricsReport report;
    auto tally = [](GroupMetrics& g, const EvalRecord& r) {
        g.n += 1;
        g.correct += r.circular_correct ? 1 : 0;
        g.consistent += r.consistent ? 1 : 0;
    };
    for (const Sample& s : manifest.samples) {
        const EvalRecord& r = *by_id.at(s.sample_id);
        tally(report.overall, r);
        tally(report.per_task[to_string(s.task)], r);
        tally(report.per_bucket[buckets.bucket_of(s.haystack.duration_s)], r);
        if (is_counting(s.task)) {
            tally(report.per_needle_count[recount_from_needles(s)], r);
        }
    }
    report.iteration_curve = iteration_curve(records);
    return report;
}

std::vector<double> iteration_curve(const std::vector<EvalRecord>& records) {
    std::size_t max_tries = 0;
    for (const EvalRecord& r : records) max_tries = std::max(max_tries, r.tries.size());

    std::vector<double> curve;
    for (std::size_t k = 1; k <= max_tries; ++k) {
        std::size_t correct = 0, total = 0;
        for (const EvalRecord& r : records) {
            if (r.tries.size() < k) continue;
            total += 1;
            bool all = true;
            for (std::size_t i = 0; i < k; ++i) all = all && r.tries[i].correct;
            correct += all ? 1 : 0;
        }
        curve.push_back(total == 0 ? 0.0 : static_cast<double>(correct) / total);
    }
    return curve;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 2) {
        throw Error("pearson: vectors must have equal length >= 2");
    }
    const auto n = static_cast<Eigen::Index>(a.size());
    Eigen::Map<const Eigen::VectorXd> va(a.data(), n);
    Eigen::Map<const Eigen::VectorXd> vb(b.data(), n);
    const Eigen::VectorXd ca = va.array() - va.mean();
    const Eigen::VectorXd cb = vb.array() - vb.mean();
    const double na = ca.norm(), nb = cb.norm();
    if (na == 0.0 || nb == 0.0) {
        throw DegenerateVector("pearson: zero-variance vector");
    }
    return ca.dot(cb) / (na * nb);
}

Eigen::MatrixXd task_correlation(const std::vector<std::vector<double>>& vectors) {
    if (vectors.size() < 2) throw Error("task_correlation: need at least 2 vectors");
    const std::size_t len = vectors.front().size();
    for (const auto& v : vectors) {
        if (v.size() != len) throw Error("task_correlation: vectors differ in length");
    }
    const auto m = static_cast<Eigen::Index>(vectors.size());
    Eigen::MatrixXd corr(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        corr(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < m; ++j) {
            const double r = pearson(vectors[static_cast<std::size_t>(i)],
                                     vectors[static_cast<std::size_t>(j)]);
            corr(i, j) = r;
            corr(j, i) = r;
        }
    }
    return corr;
}

// ─── Results files ──────────────────────────────────────────────────────

namespace {

json record_to_json(const EvalRecord& r) {
    json tries = json::array();
    for (const TryOutcome& t : r.tries) {
        json entry = {
            {"order", t.order},
            {"response", t.response},
            {"letter", t.letter ? json(std::string(1, *t.letter)) : json(nullptr)},
            {"content", t.content ? json(*t.content) : json(nullptr)},
            {"correct", t.correct},
        };
        tries.push_back(std::move(entry));
    }
    return json{{"schema_version", 1},
                {"sample_id", r.sample_id},
                {"tries", std::move(tries)},
                {"circular_correct", r.circular_correct},
                {"consistent", r.consistent}};
}

EvalRecord record_from_json(const json& j) {
    if (j.value("schema_version", 1) != 1) {
        throw SchemaMismatch("results record schema_version != 1");
    }
    EvalRecord r;
    r.sample_id = j.at("sample_id").get<std::string>();
    for (const json& t : j.at("tries")) {
        TryOutcome outcome;
        outcome.order = t.at("order").get<std::array<int, 4>>();
        outcome.response = t.at("response").get<std::string>();
        if (!t.at("letter").is_null()) outcome.letter = t.at("letter").get<std::string>()[0];
        if (!t.at("content").is_null()) outcome.content = t.at("content").get<std::string>();
        outcome.correct = t.at("correct").get<bool>();
        r.tries.push_back(std::move(outcome));
    }
    r.circular_correct = j.at("circular_correct").get<bool>();
    r.consistent = j.at("consistent").get<bool>();
    return r;
}

}  // namespace

void append_result(std::ostream& out, const EvalRecord& record) {
    out << record_to_json(record).dump() << "\n";
}

std::vector<EvalRecord> load_results(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("load_results: cannot open " + path.string());
    std::vector<EvalRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        records.push_back(record_from_json(json::parse(line)));
    }
    return records;
}

void save_results(const std::vector<EvalRecord>& records, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("save_results: cannot write " + path.string());
    for (const EvalRecord& r : records) append_result(out, r);
}

}  // namespace niah
