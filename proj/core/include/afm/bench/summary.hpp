#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "afm/bench/harness.hpp"

namespace afm::bench {

struct MethodSummary {
    std::string method;
    std::string scenario;
    std::size_t runs = 0;
    std::size_t passes = 0;
    double pass_rate = 0.0;  // percent
    double tokens_mean = 0.0;
    double tokens_std = 0.0;
    double latency_mean = 0.0;
    double latency_std = 0.0;
    double full_mean = 0.0;
    double compressed_mean = 0.0;
    double stub_mean = 0.0;
    double dropped_mean = 0.0;

    std::string pass_label() const { return format_pass_rate(passes, runs); }

    static std::string format_pass_rate(std::size_t passes, std::size_t runs);
};

// Population mean and standard deviation.
struct MeanStd {
    double mean = 0.0;
    double std = 0.0;
};
MeanStd mean_std(std::span<const double> values);

// One row for a homogeneous set of runs. Throws EmptyResults.
MethodSummary summarize(std::span<const RunResult> results);

// Groups by (scenario, method) in first-seen order.
std::vector<MethodSummary> summarize_by_method(std::span<const RunResult> results);

std::string summary_to_json(std::span<const MethodSummary> rows);
std::string summary_to_csv(std::span<const MethodSummary> rows);

// "Method | Pass rate | Tokens | Latency" plus the fidelity counts.
std::string summary_table(std::span<const MethodSummary> rows);

}  // namespace afm::bench
