#include "afm/bench/summary.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <sstream>

#include "afm/error.hpp"
#include "json.hpp"

namespace afm::bench {

namespace {

std::string fixed(double value, int digits) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(digits) << value;
    return out.str();
}

}  // namespace

std::string MethodSummary::format_pass_rate(std::size_t passes, std::size_t runs) {
    std::string label = std::to_string(passes) + "/" + std::to_string(runs) + " (";
    if (passes == 0 || runs == 0) {
        label += "0%";
    } else if (passes == runs) {
        label += "100%";
    } else {
        label += fixed(100.0 * static_cast<double>(passes) / static_cast<double>(runs), 1) + "%";
    }
    return label + ")";
}

MeanStd mean_std(std::span<const double> values) {
    if (values.empty()) return {};
    double sum = 0.0;
    for (const double v : values) sum += v;
    const double mean = sum / static_cast<double>(values.size());
    double sq = 0.0;
    for (const double v : values) sq += (v - mean) * (v - mean);
    return {mean, std::sqrt(sq / static_cast<double>(values.size()))};
}

MethodSummary summarize(std::span<const RunResult> results) {
    if (results.empty()) throw EmptyResults("cannot summarize an empty result set");
    MethodSummary row;
    row.method = results.front().method;
    row.scenario = results.front().scenario;
    row.runs = results.size();

    std::vector<double> tokens, latency;
    double full = 0.0, compressed = 0.0, stubs = 0.0, dropped = 0.0;
    for (const auto& r : results) {
        row.passes += r.passed ? 1 : 0;
        tokens.push_back(static_cast<double>(r.graded_turn_tokens));
        latency.push_back(r.latency_seconds);
        full += static_cast<double>(r.stats.full_count);
        compressed += static_cast<double>(r.stats.compressed_count);
        stubs += static_cast<double>(r.stats.stub_count);
        dropped += static_cast<double>(r.stats.dropped_count);
    }
    const auto n = static_cast<double>(results.size());
    row.pass_rate = 100.0 * static_cast<double>(row.passes) / n;
    const MeanStd t = mean_std(tokens);
    const MeanStd l = mean_std(latency);
    row.tokens_mean = t.mean;
    row.tokens_std = t.std;
    row.latency_mean = l.mean;
    row.latency_std = l.std;
    row.full_mean = full / n;
    row.compressed_mean = compressed / n;
    row.stub_mean = stubs / n;
    row.dropped_mean = dropped / n;
    return row;
}

std::vector<MethodSummary> summarize_by_method(std::span<const RunResult> results) {
    if (results.empty()) throw EmptyResults("cannot summarize an empty result set");
    std::vector<std::pair<std::string, std::vector<RunResult>>> groups;
    for (const auto& r : results) {
        const std::string key = r.scenario + "\n" + r.method;
        auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == key; });
        if (it == groups.end()) {
            groups.push_back({key, {}});
            it = std::prev(groups.end());
        }
        it->second.push_back(r);
    }
    std::vector<MethodSummary> rows;
    for (const auto& [key, group] : groups) rows.push_back(summarize(group));
    return rows;
}

std::string summary_to_json(std::span<const MethodSummary> rows) {
    nlohmann::ordered_json root;
    root["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json j;
        j["scenario"] = r.scenario;
        j["method"] = r.method;
        j["runs"] = r.runs;
        j["passes"] = r.passes;
        j["pass_rate"] = r.pass_rate;
        j["pass_label"] = r.pass_label();
        j["tokens_mean"] = r.tokens_mean;
        j["tokens_std"] = r.tokens_std;
        j["latency_mean"] = r.latency_mean;
        j["latency_std"] = r.latency_std;
        j["full_mean"] = r.full_mean;
        j["compressed_mean"] = r.compressed_mean;
        j["stub_mean"] = r.stub_mean;
        j["dropped_mean"] = r.dropped_mean;
        root["rows"].push_back(std::move(j));
    }
    return root.dump(2) + "\n";
}

std::string summary_to_csv(std::span<const MethodSummary> rows) {
    std::ostringstream out;
    out << "scenario,method,runs,passes,pass_rate,pass_label,tokens_mean,tokens_std,latency_mean,"
           "latency_std,full_mean,compressed_mean,stub_mean,dropped_mean\n";
    for (const auto& r : rows) {
        out << r.scenario << ',' << r.method << ',' << r.runs << ',' << r.passes << ','
            << fixed(r.pass_rate, 1) << ",\"" << r.pass_label() << "\"," << fixed(r.tokens_mean, 1) << ','
            << fixed(r.tokens_std, 1) << ',' << fixed(r.latency_mean, 2) << ',' << fixed(r.latency_std, 2)
            << ',' << fixed(r.full_mean, 1) << ',' << fixed(r.compressed_mean, 1) << ','
            << fixed(r.stub_mean, 1) << ',' << fixed(r.dropped_mean, 1) << '\n';
    }
    return out.str();
}

std::string summary_table(std::span<const MethodSummary> rows) {
    std::ostringstream out;
    out << std::left << std::setw(10) << "scenario" << std::setw(34) << "method" << std::setw(16) << "pass rate"
        << std::setw(18) << "tokens" << std::setw(16) << "latency (s)" << "full/compressed/stub\n";
    for (const auto& r : rows) {
        out << std::left << std::setw(10) << r.scenario << std::setw(34) << r.method << std::setw(16)
            << r.pass_label() << std::setw(18) << (fixed(r.tokens_mean, 1) + " +- " + fixed(r.tokens_std, 1))
            << std::setw(16) << (fixed(r.latency_mean, 2) + " +- " + fixed(r.latency_std, 2))
            << fixed(r.full_mean, 1) << " / " << fixed(r.compressed_mean, 1) << " / " << fixed(r.stub_mean, 1)
            << '\n';
    }
    return out.str();
}

}  // namespace afm::bench
