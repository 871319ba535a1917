#include "afm/bench/harness.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <mutex>
#include <sstream>

#include "afm/bench/grading.hpp"
#include "afm/error.hpp"
#include "json.hpp"
#include "text_util.hpp"

namespace afm::bench {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string method_label(const BenchOptions& options) {
    std::string label(to_string(options.method));
    if (options.method == Method::Afm) {
        if (options.ablations.no_compression) label += "+no-compression";
        if (options.ablations.no_stubs) label += "+no-stubs";
        if (options.ablations.no_importance) label += "+no-importance";
    }
    return label;
}

std::string event_line(const TranscriptEvent& event) {
    ordered_json j;
    j["seed"] = event.seed;
    j["turn"] = event.turn;
    j["kind"] = event.kind;
    j["role"] = to_string(event.role);
    j["content"] = event.content;
    if (event.fidelity) j["fidelity"] = to_string(*event.fidelity);
    if (event.kind == "prompt") {
        if (event.id) {
            j["id"] = *event.id;
        } else {
            j["id"] = nullptr;
        }
    }
    if (event.passed) j["passed"] = *event.passed;
    return j.dump();
}

// Appends transcript lines as the run progresses so an aborted run still
// leaves its prefix on disk.
class TranscriptWriter {
public:
    explicit TranscriptWriter(const std::optional<std::filesystem::path>& path) {
        if (path) {
            std::filesystem::create_directories(path->parent_path());
            out_.open(*path, std::ios::trunc);
            if (!out_) throw Error("cannot write transcript: " + path->string());
        }
    }

    void write(const TranscriptEvent& event) {
        if (!out_.is_open()) return;
        out_ << event_line(event) << '\n';
        out_.flush();
    }

private:
    std::ofstream out_;
};

std::string run_line(const RunResult& r) {
    ordered_json j;
    j["method"] = r.method;
    j["scenario"] = r.scenario;
    j["seed"] = r.seed;
    j["passed"] = r.passed;
    j["graded_turn_tokens"] = r.graded_turn_tokens;
    j["latency_seconds"] = r.latency_seconds;
    j["full_count"] = r.stats.full_count;
    j["compressed_count"] = r.stats.compressed_count;
    j["stub_count"] = r.stats.stub_count;
    j["dropped_count"] = r.stats.dropped_count;
    j["context_tokens"] = r.stats.total_tokens;
    j["transcript"] = r.transcript_path ? r.transcript_path->filename().string() : "";
    return j.dump();
}

}  // namespace

StubGateway::Responder offline_responder(const Scenario& scenario) {
    return [scenario](std::span<const ChatMessage> messages, const ChatOptions&) -> std::string {
        if (messages.empty()) return scenario.offline.filler;
        const std::string& query = messages.back().content;
        const ScenarioTurn& graded = scenario.graded_turn();
        if (query == graded.text) {
            for (const std::size_t c : scenario.constraint_indices()) {
                const std::string& constraint = scenario.turns[c].text;
                for (std::size_t i = 0; i + 1 < messages.size(); ++i) {
                    if (messages[i].content.find(constraint) != std::string::npos) {
                        return scenario.offline.compliant;
                    }
                }
            }
            return scenario.offline.generic;
        }
        for (const auto& turn : scenario.turns) {
            if (turn.role == Role::User && turn.text == query && turn.offline_reply) return *turn.offline_reply;
        }
        return scenario.offline.filler;
    };
}

BenchBackends offline_bench_backends(const Scenario& scenario, TokenCounter counter) {
    BenchBackends backends;
    backends.gateway = std::make_shared<StubGateway>(offline_responder(scenario));
    backends.focus = offline_backends(counter);
    backends.focus.classifier = std::make_shared<RuleClassifier>(RuleClassifier::bundled());
    return backends;
}

BenchBackends live_bench_backends(std::shared_ptr<Gateway> gateway, const GatewayConfig& config,
                                  TokenCounter counter) {
    BenchBackends backends;
    backends.gateway = gateway;
    backends.focus.embedder = std::make_shared<RemoteEmbedder>(gateway, config.embed_model);
    backends.focus.classifier = std::make_shared<RemoteClassifier>(gateway, config.chat_model);
    backends.focus.compressor = std::make_shared<RemoteCompressor>(gateway, config.chat_model);
    backends.focus.counter = counter;
    return backends;
}

std::unique_ptr<HistoryStrategy> make_strategy(const BenchOptions& options, const BenchBackends& backends) {
    const TokenCounter& counter = backends.focus.counter;
    switch (options.method) {
        case Method::Default: return std::make_unique<StatelessStrategy>(counter);
        case Method::Naive: return std::make_unique<NaiveReplayStrategy>(counter);
        case Method::Recency: return std::make_unique<RecencyCompressionStrategy>(counter, options.recency);
        case Method::Afm:
            return std::make_unique<AfmStrategy>(FocusPacker(options.focus, backends.focus, options.ablations));
    }
    throw InvalidArgument("unknown method");
}

RunResult run_seed(const Scenario& scenario, const BenchOptions& options, const BenchBackends& backends,
                   std::uint64_t seed) {
    if (!backends.gateway) throw InvalidArgument("benchmark needs a gateway");
    const auto strategy = make_strategy(options, backends);
    const TokenCounter& counter = backends.focus.counter;

    RunResult result;
    result.method = method_label(options);
    result.scenario = scenario.name;
    result.seed = seed;
    if (options.out_dir) {
        result.transcript_path = *options.out_dir / "transcripts" /
                                 (scenario.name + "_" + result.method + "_seed" + std::to_string(seed) + ".jsonl");
    }
    TranscriptWriter transcript(result.transcript_path);

    ChatOptions chat_options;
    chat_options.model = options.chat_model;
    chat_options.temperature = options.temperature;
    chat_options.seed = static_cast<std::int64_t>(seed);

    const std::optional<std::string_view> preamble =
        scenario.system_prompt.empty() ? std::nullopt : std::optional<std::string_view>(scenario.system_prompt);

    std::vector<Message> history;
    const auto log_message = [&](std::size_t turn, Role role, const std::string& content) {
        transcript.write({seed, turn, "message", role, content, std::nullopt, std::nullopt, std::nullopt});
    };

    for (std::size_t t = 0; t < scenario.turns.size(); ++t) {
        const ScenarioTurn& turn = scenario.turns[t];
        if (turn.role == Role::Assistant) {
            append_message(history, Role::Assistant, turn.text);
            log_message(t, Role::Assistant, turn.text);
            continue;
        }

        const PackedPrompt packed = strategy->pack(history, turn.text, options.budget, preamble);
        std::vector<ChatMessage> request = packed.messages();
        request.push_back({Role::User, turn.text});

        if (!turn.is_graded) {
            const ChatReply reply = backends.gateway->chat(request, chat_options);
            append_message(history, Role::User, turn.text);
            log_message(t, Role::User, turn.text);
            append_message(history, Role::Assistant, reply.text);
            log_message(t, Role::Assistant, reply.text);
            continue;
        }

        for (const auto& entry : packed.entries) {
            transcript.write({seed, t, "prompt", entry.role, entry.content, entry.fidelity, entry.message_id,
                              std::nullopt});
        }
        const ChatReply reply = backends.gateway->chat(request, chat_options);

        JudgeContext context;
        for (const std::size_t c : scenario.constraint_indices()) {
            if (!context.constraint.empty()) context.constraint += "\n";
            context.constraint += scenario.turns[c].text;
        }
        context.query = turn.text;
        Gateway* judge = backends.judge ? backends.judge.get() : backends.gateway.get();
        ChatOptions judge_options = chat_options;
        judge_options.seed.reset();

        result.passed = grade(reply.text, scenario.grading, judge, judge_options, context);
        result.response = reply.text;
        result.latency_seconds = reply.latency_seconds;
        result.stats = packed.stats;
        result.graded_turn_tokens = packed.stats.total_tokens + counter.count(turn.text);
        transcript.write({seed, t, "response", Role::Assistant, reply.text, std::nullopt, std::nullopt, result.passed});
        break;
    }
    return result;
}

std::vector<RunResult> run_benchmark(const Scenario& scenario, const BenchOptions& options,
                                     const BenchBackends& backends) {
    if (options.seeds == 0) throw InvalidArgument("seeds must be at least 1");
    validate_scenario(scenario);

    std::ofstream runs;
    std::mutex runs_mutex;
    if (options.out_dir) {
        std::filesystem::create_directories(*options.out_dir);
        runs.open(*options.out_dir / "runs.jsonl", std::ios::app);
    }
    const auto flush_run = [&](const RunResult& r) {
        if (!runs.is_open()) return;
        std::lock_guard lock(runs_mutex);
        runs << run_line(r) << '\n';
        runs.flush();
    };

    std::vector<RunResult> results(options.seeds);
    const std::size_t jobs = std::max<std::size_t>(1, std::min(options.jobs, options.seeds));
    if (jobs == 1) {
        for (std::size_t i = 0; i < options.seeds; ++i) {
            results[i] = run_seed(scenario, options, backends, options.first_seed + i);
            flush_run(results[i]);
        }
        return results;
    }

    std::vector<std::future<void>> workers;
    std::mutex next_mutex;
    std::size_t next = 0;
    for (std::size_t w = 0; w < jobs; ++w) {
        workers.push_back(std::async(std::launch::async, [&] {
            for (;;) {
                std::size_t i = 0;
                {
                    std::lock_guard lock(next_mutex);
                    if (next >= options.seeds) return;
                    i = next++;
                }
                results[i] = run_seed(scenario, options, backends, options.first_seed + i);
                flush_run(results[i]);
            }
        }));
    }
    std::exception_ptr failure;
    for (auto& worker : workers) {
        try {
            worker.get();
        } catch (...) {
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return results;
}

std::vector<TranscriptEvent> parse_transcript(std::string_view jsonl) {
    std::vector<TranscriptEvent> events;
    std::istringstream in{std::string(jsonl)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim_ascii(line).empty()) continue;
        try {
            const json j = json::parse(line);
            TranscriptEvent event;
            event.seed = j.value("seed", std::uint64_t{0});
            event.turn = j.value("turn", std::size_t{0});
            event.kind = j.value("kind", std::string("message"));
            event.role = parse_role(j.at("role").get<std::string>());
            if (j.contains("content")) {
                event.content = j["content"].get<std::string>();
            } else {
                event.content = j.at("text").get<std::string>();
            }
            if (j.contains("fidelity") && !j["fidelity"].is_null()) {
                event.fidelity = parse_fidelity(j["fidelity"].get<std::string>());
            }
            if (j.contains("id") && !j["id"].is_null()) event.id = j["id"].get<MessageId>();
            if (j.contains("passed")) event.passed = j["passed"].get<bool>();
            events.push_back(std::move(event));
        } catch (const json::exception& e) {
            throw SchemaError("line " + std::to_string(line_no) + ": " + e.what());
        } catch (const InvalidArgument& e) {
            throw SchemaError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return events;
}

std::vector<TranscriptEvent> read_transcript(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError(path.string() + ": cannot open transcript");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_transcript(buffer.str());
}

std::vector<Message> history_from_transcript(const std::vector<TranscriptEvent>& events) {
    std::vector<Message> history;
    for (const auto& event : events) {
        if (event.kind == "message") append_message(history, event.role, event.content);
    }
    return history;
}

std::vector<PackedEntry> recorded_prompt(const std::vector<TranscriptEvent>& events) {
    std::vector<PackedEntry> entries;
    for (const auto& event : events) {
        if (event.kind != "prompt") continue;
        entries.push_back({event.role, event.content, event.fidelity.value_or(Fidelity::Full), event.id, 0});
    }
    return entries;
}

}  // namespace afm::bench
