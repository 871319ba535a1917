#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "afm/compression.hpp"
#include "afm/embeddings.hpp"
#include "afm/focus_manager.hpp"
#include "afm/importance.hpp"

namespace {

std::string sentence_text(std::mt19937_64& rng, std::size_t sentences) {
    static const char* words[] = {"peanut", "allergy", "market", "dinner", "the", "we", "should", "try",
                                  "noodles", "flight", "hotel", "budget", "temple", "boat", "spicy", "rice"};
    std::string text;
    for (std::size_t s = 0; s < sentences; ++s) {
        const std::size_t n = 5 + rng() % 20;
        for (std::size_t w = 0; w < n; ++w) {
            if (!text.empty()) text += ' ';
            text += words[rng() % std::size(words)];
        }
        text += '.';
    }
    return text;
}

std::vector<afm::Message> make_history(std::size_t n) {
    std::mt19937_64 rng(7);
    std::vector<afm::Message> history;
    for (std::size_t i = 0; i < n; ++i) {
        afm::append_message(history, i % 2 == 0 ? afm::Role::User : afm::Role::Assistant,
                            sentence_text(rng, 1 + rng() % 4));
    }
    return history;
}

void BM_PackCold(benchmark::State& state) {
    const auto fresh = make_history(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        state.PauseTiming();
        auto history = fresh;
        state.ResumeTiming();
        afm::FocusBackends backends = afm::offline_backends();
        backends.classifier = std::make_shared<afm::RuleClassifier>(afm::RuleClassifier::bundled());
        const afm::FocusPacker packer(afm::FocusConfig{}, backends);
        benchmark::DoNotOptimize(packer.pack(history, "what should we eat tonight", 286));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PackCold)->Arg(26)->Arg(100)->Arg(200);

void BM_PackWarm(benchmark::State& state) {
    auto history = make_history(static_cast<std::size_t>(state.range(0)));
    afm::FocusBackends backends = afm::offline_backends();
    backends.classifier = std::make_shared<afm::RuleClassifier>(afm::RuleClassifier::bundled());
    const afm::FocusPacker packer(afm::FocusConfig{}, backends);
    packer.pack(history, "what should we eat tonight", 286);
    for (auto _ : state) {
        benchmark::DoNotOptimize(packer.pack(history, "what should we eat tonight", 286));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PackWarm)->Arg(26)->Arg(100)->Arg(200);

void BM_HashEmbed(benchmark::State& state) {
    std::mt19937_64 rng(11);
    const std::string text = sentence_text(rng, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(afm::hash_embed(text));
    state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_HashEmbed)->Arg(1)->Arg(10)->Arg(100);

void BM_HeuristicCompress(benchmark::State& state) {
    std::mt19937_64 rng(13);
    const std::string text = sentence_text(rng, static_cast<std::size_t>(state.range(0)));
    const afm::HeuristicCompressor compressor;
    for (auto _ : state) benchmark::DoNotOptimize(compressor.compress(text, 40, "peanut allergy dinner"));
}
BENCHMARK(BM_HeuristicCompress)->Arg(5)->Arg(50);

}  // namespace

BENCHMARK_MAIN();
