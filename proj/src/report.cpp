#include "niah/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace niah {

namespace {

std::string pct(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", fraction * 100.0);
    return buf;
}

std::string num(double v, const char* fmt = "%.6g") {
    char buf[48];
    std::snprintf(buf, sizeof(buf), fmt, v);
    return buf;
}

json group_to_json(const GroupMetrics& g) {
    json j = {{"n", g.n}, {"acc", g.acc()}, {"consist", g.consist()}};
    if (auto agc = g.acc_given_consist()) {
        j["acc_given_consist"] = *agc;
    } else {
        j["acc_given_consist"] = nullptr;
    }
    return j;
}

std::string group_row(const std::string& key, const GroupMetrics& g) {
    std::string row = key + "," + std::to_string(g.n) + "," + pct(g.acc()) + "," +
                      pct(g.consist()) + ",";
    if (auto agc = g.acc_given_consist()) row += pct(*agc);
    return row + "\n";
}

}  // namespace

json metrics_to_json(const MetricsReport& report) {
    json per_task = json::object();
    for (const auto& [task, g] : report.per_task) per_task[task] = group_to_json(g);
    json per_bucket = json::object();
    for (const auto& [bucket, g] : report.per_bucket) per_bucket[bucket] = group_to_json(g);
    json per_count = json::object();
    for (const auto& [count, g] : report.per_needle_count) {
        per_count[std::to_string(count)] = group_to_json(g);
    }
    return json{{"overall", group_to_json(report.overall)},
                {"per_task", std::move(per_task)},
                {"duration_buckets", std::move(per_bucket)},
                {"needle_counts", std::move(per_count)},
                {"iteration_curve", report.iteration_curve}};
}

std::string metrics_table_csv(const MetricsReport& report) {
    std::string out = "task,n,acc,consist,acc_given_consist\n";
    for (const auto& [task, g] : report.per_task) out += group_row(task, g);
    out += group_row("overall", report.overall);
    return out;
}

std::string buckets_csv(const MetricsReport& report) {
    std::string out = "bucket,n,acc,consist,acc_given_consist\n";
    for (const char* bucket : {"short", "medium", "long", "other"}) {
        const auto it = report.per_bucket.find(bucket);
        if (it != report.per_bucket.end()) out += group_row(bucket, it->second);
    }
    return out;
}

std::string needle_counts_csv(const MetricsReport& report) {
    std::string out = "needle_count,n,acc\n";
    for (const auto& [count, g] : report.per_needle_count) {
        out += std::to_string(count) + "," + std::to_string(g.n) + "," + pct(g.acc()) + "\n";
    }
    return out;
}

std::string iteration_curve_csv(const MetricsReport& report) {
    std::string out = "k,acc\n";
    for (std::size_t k = 0; k < report.iteration_curve.size(); ++k) {
        out += std::to_string(k + 1) + "," + pct(report.iteration_curve[k]) + "\n";
    }
    return out;
}

std::string sweep_csv(const SweepGrid& grid) {
    std::string out = "duration_s,depth,n,mean_acc,feasible,note\n";
    for (const SweepCell& cell : grid.cells) {
        out += num(cell.duration_s) + std::string(",") + num(cell.depth) + "," +
               std::to_string(cell.n) + ",";
        if (cell.feasible) out += num(cell.mean_acc, "%.4f");
        out += cell.feasible ? ",1," : ",0,";
        out += cell.note + "\n";
    }
    return out;
}

json sweep_to_json(const SweepGrid& grid) {
    json cells = json::array();
    for (const SweepCell& cell : grid.cells) {
        cells.push_back({{"duration_s", cell.duration_s},
                         {"depth", cell.depth},
                         {"n", cell.n},
                         {"mean_acc", cell.feasible ? json(cell.mean_acc) : json(nullptr)},
                         {"feasible", cell.feasible},
                         {"note", cell.note}});
    }
    return json{{"durations_s", grid.durations_s}, {"depths", grid.depths},
                {"cells", std::move(cells)}};
}

namespace {

// Three-stop ramp (dark blue -> teal -> yellow), close enough to viridis to
// read hot/cold at a glance.
void heat_color(double v, int& r, int& g, int& b) {
    v = std::clamp(v, 0.0, 1.0);
    const double stops[3][3] = {{68, 1, 84}, {33, 145, 140}, {253, 231, 37}};
    const double t = v * 2.0;
    const int lo = t < 1.0 ? 0 : 1;
    const double f = t - lo;
    r = static_cast<int>(std::lround(stops[lo][0] + f * (stops[lo + 1][0] - stops[lo][0])));
    g = static_cast<int>(std::lround(stops[lo][1] + f * (stops[lo + 1][1] - stops[lo][1])));
    b = static_cast<int>(std::lround(stops[lo][2] + f * (stops[lo + 1][2] - stops[lo][2])));
}

}  // namespace

std::string sweep_svg(const SweepGrid& grid) {
    const int cell = 28, margin_left = 56, margin_top = 24, margin_bottom = 40;
    const int cols = static_cast<int>(grid.durations_s.size());
    const int rows = static_cast<int>(grid.depths.size());
    const int width = margin_left + cols * cell + 16;
    const int height = margin_top + rows * cell + margin_bottom;

    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                      std::to_string(width) + "\" height=\"" + std::to_string(height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (int yi = 0; yi < rows; ++yi) {
        for (int xi = 0; xi < cols; ++xi) {
            const double v = grid.acc(yi, xi);
            std::string fill = "#cccccc";  // infeasible
            if (!std::isnan(v)) {
                int r, g, b;
                heat_color(v, r, g, b);
                char buf[16];
                std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
                fill = buf;
            }
            svg += "<rect x=\"" + std::to_string(margin_left + xi * cell) + "\" y=\"" +
                   std::to_string(margin_top + yi * cell) + "\" width=\"" + std::to_string(cell) +
                   "\" height=\"" + std::to_string(cell) + "\" fill=\"" + fill +
                   "\" stroke=\"white\" stroke-width=\"1\"/>\n";
        }
    }
    for (int yi = 0; yi < rows; ++yi) {
        svg += "<text x=\"" + std::to_string(margin_left - 6) + "\" y=\"" +
               std::to_string(margin_top + yi * cell + cell / 2 + 4) +
               "\" font-size=\"10\" text-anchor=\"end\">" + num(grid.depths[yi], "%.1f") +
               "</text>\n";
    }
    for (int xi = 0; xi < cols; ++xi) {
        svg += "<text x=\"" + std::to_string(margin_left + xi * cell + cell / 2) + "\" y=\"" +
               std::to_string(margin_top + rows * cell + 14) +
               "\" font-size=\"10\" text-anchor=\"middle\">" + num(grid.durations_s[xi], "%g") +
               "</text>\n";
    }
    svg += "<text x=\"" + std::to_string(margin_left + cols * cell / 2) + "\" y=\"" +
           std::to_string(height - 8) +
           "\" font-size=\"11\" text-anchor=\"middle\">duration (s)</text>\n";
    svg += "<text x=\"12\" y=\"" + std::to_string(margin_top - 8) +
           "\" font-size=\"11\">depth</text>\n";
    svg += "</svg>\n";
    return svg;
}

std::string correlation_csv(const Eigen::MatrixXd& corr, const std::vector<std::string>& labels) {
    std::string out = "run";
    for (const std::string& label : labels) out += "," + label;
    out += "\n";
    for (Eigen::Index i = 0; i < corr.rows(); ++i) {
        out += labels[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < corr.cols(); ++j) {
            out += "," + std::string(num(corr(i, j), "%.6f"));
        }
        out += "\n";
    }
    return out;
}

void write_text_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("write_text_file: cannot write " + path.string());
    out << content;
}

std::string task_stats_table(const std::map<TaskKind, std::size_t>& counts) {
    std::string out = "task            samples\n";
    std::size_t total = 0;
    for (const auto& [task, count] : counts) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%-15s %7zu\n", to_string(task).c_str(), count);
        out += buf;
        total += count;
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%-15s %7zu\n", "total", total);
    out += buf;
    return out;
}

}  // namespace niah
