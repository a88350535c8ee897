#pragma once

#include <Eigen/Dense>

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "niah/core.hpp"
#include "niah/manifest.hpp"

namespace niah {

// ─── Circular evaluation ─────────────────────────────────────────────────

// One presentation of a sample: the options in this try's order plus the
// letter that hosts the ground truth under that order.
struct TryInstance {
    std::string sample_id;
    int try_index = 0;
    std::string question;
    std::array<std::string, 4> options;  // presented order
    std::array<int, 4> order;            // options[j] == sample.options[order[j]]
    char answer_letter = 'A';
};

enum class ShuffleMode {
    Rotation,  // k cyclic rotations: for k = 4 the answer visits every letter
    Random,    // k seeded random permutations
};

// 1 <= k <= 4 tries. Rotation mode guarantees that a fixed-letter responder
// can be correct in at most one try of four.
std::vector<TryInstance> circular_variants(const Sample& sample, int k,
                                           ShuffleMode mode = ShuffleMode::Rotation,
                                           std::uint64_t seed = 0);

// Rule-based option-letter extraction: canonical letter forms first
// ("A", "A.", "(A)", "Answer: A"), then unique option-text containment.
// nullopt when absent or ambiguous (scored incorrect and inconsistent).
std::optional<char> extract_choice(const std::string& response,
                                   const std::array<std::string, 4>& options);

struct TryOutcome {
    std::array<int, 4> order;
    std::string response;
    std::optional<char> letter;
    std::optional<std::string> content;  // option text behind the chosen letter
    bool correct = false;
};

// Per-sample circular-evaluation trace. circular_correct requires all tries
// correct; consistent requires the chosen option CONTENT to be identical
// across tries (letters may differ under shuffling).
struct EvalRecord {
    std::string sample_id;
    std::vector<TryOutcome> tries;
    bool circular_correct = false;
    bool consistent = false;
};

// Scores raw responses against their tries. `judged_correct`, when present,
// overrides try i's verdict with a judge decision (content forced to the
// ground truth on 1, cleared on 0).
EvalRecord score_sample(const Sample& sample, const std::vector<TryInstance>& tries,
                        const std::vector<std::string>& responses,
                        const std::vector<std::optional<int>>& judged_correct = {});

// ─── Metrics ─────────────────────────────────────────────────────────────

struct GroupMetrics {
    std::size_t n = 0;
    std::size_t correct = 0;
    std::size_t consistent = 0;

    double acc() const { return n == 0 ? 0.0 : static_cast<double>(correct) / n; }
    double consist() const { return n == 0 ? 0.0 : static_cast<double>(consistent) / n; }
    // Acc/Consist; absent when the consistent set is empty.
    std::optional<double> acc_given_consist() const {
        if (consistent == 0) return std::nullopt;
        return static_cast<double>(correct) / static_cast<double>(consistent);
    }
};

struct MetricsReport {
    GroupMetrics overall;
    std::map<std::string, GroupMetrics> per_task;
    std::map<std::string, GroupMetrics> per_bucket;        // short / medium / long
    std::map<int, GroupMetrics> per_needle_count;          // counting tasks only
    std::vector<double> iteration_curve;                   // Acc(k), k = 1..max tries
};

// Folds records against the manifest. Throws MissingRecords listing any
// manifest sample without a record; unknown record ids are an error.
MetricsReport aggregate(const std::vector<EvalRecord>& records, const Manifest& manifest,
                        const DurationBuckets& buckets = {});

// Acc(k) using only the first k tries of each record, k = 1..max.
std::vector<double> iteration_curve(const std::vector<EvalRecord>& records);

// Pearson correlation matrix of equal-length result vectors. Throws
// DegenerateVector on zero variance.
Eigen::MatrixXd task_correlation(const std::vector<std::vector<double>>& vectors);
double pearson(const std::vector<double>& a, const std::vector<double>& b);

// ─── Results files (one JSON record per line) ────────────────────────────

void append_result(std::ostream& out, const EvalRecord& record);
std::vector<EvalRecord> load_results(const std::filesystem::path& path);
void save_results(const std::vector<EvalRecord>& records, const std::filesystem::path& path);

}  // namespace niah
