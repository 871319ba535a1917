#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "afm/model.hpp"

namespace afm {

class Gateway;

inline constexpr std::uint64_t kFnvOffsetBasis = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis = kFnvOffsetBasis);

// Lowercased maximal alphanumeric runs. Bytes >= 0x80 are treated as word
// characters so multi-byte letters stay inside their word.
std::vector<std::string> lexical_tokens(std::string_view text);

class Embedder {
public:
    virtual ~Embedder() = default;

    virtual Embedding embed(std::string_view text) const = 0;
    virtual std::size_t dimension() const = 0;
};

// Feature-hashing bag of words, L2-normalized. Norm is 1 for text with at
// least one token and 0 otherwise.
class HashingEmbedder final : public Embedder {
public:
    explicit HashingEmbedder(std::size_t dimension = 256, std::uint64_t seed = kFnvOffsetBasis);

    Embedding embed(std::string_view text) const override;
    std::size_t dimension() const override { return dimension_; }

private:
    std::size_t dimension_;
    std::uint64_t seed_;
};

Embedding hash_embed(std::string_view text, std::size_t dimension = 256,
                     std::uint64_t seed = kFnvOffsetBasis);

// Embeddings from an OpenAI-compatible endpoint through the gateway.
class RemoteEmbedder final : public Embedder {
public:
    RemoteEmbedder(std::shared_ptr<Gateway> gateway, std::string model,
                   std::size_t dimension = 1536);

    Embedding embed(std::string_view text) const override;
    std::size_t dimension() const override { return dimension_; }

private:
    std::shared_ptr<Gateway> gateway_;
    std::string model_;
    std::size_t dimension_;
};

// Cosine similarity; 0 when either vector has zero norm.
// Throws DimensionMismatch on unequal lengths.
double cosine(std::span<const double> a, std::span<const double> b);

// Cached embedding of the message's original text. The embedder is called at
// most once per message; on failure the cache is left empty.
const Embedding& embedding_of(Message& message, const Embedder& embedder);

}  // namespace afm
