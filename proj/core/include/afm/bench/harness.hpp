#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "afm/baselines.hpp"
#include "afm/bench/scenario.hpp"
#include "afm/focus_manager.hpp"
#include "afm/gateway.hpp"

namespace afm::bench {

struct BenchOptions {
    Method method = Method::Afm;
    std::size_t seeds = 30;
    std::uint64_t first_seed = 0;
    std::size_t budget = 286;
    AblationFlags ablations;
    FocusConfig focus;
    RecencyOptions recency;
    std::string chat_model = "gpt-4o-mini";
    double temperature = 0.0;
    std::size_t jobs = 1;
    // Transcripts and runs.jsonl are written here when set.
    std::optional<std::filesystem::path> out_dir;
};

struct RunResult {
    std::string method;
    std::string scenario;
    std::uint64_t seed = 0;
    bool passed = false;
    // Packed context plus the graded query, in TokenCounter units.
    std::size_t graded_turn_tokens = 0;
    double latency_seconds = 0.0;
    PackStats stats;
    std::string response;
    std::optional<std::filesystem::path> transcript_path;
};

// Backends shared by every seed of a run.
struct BenchBackends {
    std::shared_ptr<Gateway> gateway;
    FocusBackends focus;  // classifier is replaced by the default one under no_importance
    std::shared_ptr<Gateway> judge;  // JUDGE mode only; falls back to gateway
};

// Deterministic stand-in for the chat model: filler replies for ordinary
// turns, and for the graded query the compliant reply only if some
// constraint turn appears verbatim in the prompt.
StubGateway::Responder offline_responder(const Scenario& scenario);

// Offline wiring: stub gateway driven by offline_responder, hashing embedder,
// bundled rule classifier and the heuristic compressor.
BenchBackends offline_bench_backends(const Scenario& scenario, TokenCounter counter = {});

// Live wiring over one gateway: remote embedder, classifier and compressor.
BenchBackends live_bench_backends(std::shared_ptr<Gateway> gateway, const GatewayConfig& config,
                                  TokenCounter counter = {});

std::unique_ptr<HistoryStrategy> make_strategy(const BenchOptions& options,
                                               const BenchBackends& backends);

// Replays the scenario once per seed and grades the final reply. Each
// finished run is appended to out_dir/runs.jsonl before the next starts, so
// a gateway error leaves completed runs on disk before it propagates.
std::vector<RunResult> run_benchmark(const Scenario& scenario, const BenchOptions& options,
                                     const BenchBackends& backends);

RunResult run_seed(const Scenario& scenario, const BenchOptions& options,
                   const BenchBackends& backends, std::uint64_t seed);

// Transcript events: {"seed","turn","kind","role","content"} with kind one
// of "message" (history), "prompt" (packed graded context, with "fidelity"
// and "id") or "response" (graded reply, with "passed").
struct TranscriptEvent {
    std::uint64_t seed = 0;
    std::size_t turn = 0;
    std::string kind;
    Role role = Role::User;
    std::string content;
    std::optional<Fidelity> fidelity;
    std::optional<MessageId> id;
    std::optional<bool> passed;
};

std::vector<TranscriptEvent> read_transcript(const std::filesystem::path& path);
std::vector<TranscriptEvent> parse_transcript(std::string_view jsonl);

// History messages rebuilt from "message" events (or bare {role, content}
// / {role, text} lines).
std::vector<Message> history_from_transcript(const std::vector<TranscriptEvent>& events);

// The packed graded-turn prompt recorded in the transcript.
std::vector<PackedEntry> recorded_prompt(const std::vector<TranscriptEvent>& events);

}  // namespace afm::bench
