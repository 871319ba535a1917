#pragma once

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "afm/compression.hpp"
#include "afm/embeddings.hpp"
#include "afm/error.hpp"
#include "afm/importance.hpp"

namespace testing_support {

class CountingEmbedder final : public afm::Embedder {
public:
    afm::Embedding embed(std::string_view text) const override {
        ++calls;
        if (fail) throw afm::NetworkError("embedder down");
        return afm::hash_embed(text);
    }
    std::size_t dimension() const override { return 256; }

    mutable std::atomic<int> calls{0};
    bool fail = false;
};

class CountingClassifier final : public afm::ImportanceClassifier {
public:
    explicit CountingClassifier(afm::ImportanceLabel label = afm::ImportanceLabel::Trivial) : label(label) {}
    afm::ImportanceLabel classify(const afm::Message&) const override {
        ++calls;
        return label;
    }

    afm::ImportanceLabel label;
    mutable std::atomic<int> calls{0};
};

class CountingCompressor final : public afm::Compressor {
public:
    std::string compress(std::string_view text, std::size_t target, std::string_view hint) const override {
        ++calls;
        return inner.compress(text, target, hint);
    }

    afm::HeuristicCompressor inner;
    mutable std::atomic<int> calls{0};
};

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("afm_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline const std::vector<std::string>& vocabulary() {
    static const std::vector<std::string> words{
        "peanut", "allergy", "market", "train", "beach", "temple", "visa", "budget", "the", "a",
        "is", "we", "should", "avoid", "dinner", "tax", "income", "report", "law", "cash",
        "hotel", "island", "snorkel", "phrase", "elephant", "ticket", "night", "food", "safe", "plan"};
    return words;
}

// Random prose: words, punctuation, occasional newlines and multi-byte text.
inline std::string random_text(std::mt19937_64& rng, std::size_t max_words) {
    const auto& words = vocabulary();
    std::uniform_int_distribution<std::size_t> n_dist(0, max_words);
    std::uniform_int_distribution<std::size_t> w_dist(0, words.size() - 1);
    std::uniform_int_distribution<int> p_dist(0, 19);
    static const std::vector<std::string> seps{" ", " ", " ", " ", "  ", "\t", "\n", ". ", "! ", "? ", "... ",
                                               "\xC2\xA0", "\xE2\x80\x83", " caf\xC3\xA9 ", " \xE6\x97\xA5\xE6\x9C\xAC "};
    std::string out;
    const std::size_t n = n_dist(rng);
    for (std::size_t i = 0; i < n; ++i) {
        out += words[w_dist(rng)];
        const int p = p_dist(rng);
        out += p < static_cast<int>(seps.size()) ? seps[static_cast<std::size_t>(p)] : " ";
    }
    return out;
}

}  // namespace testing_support
