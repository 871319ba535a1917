#include "afm/embeddings.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "afm/error.hpp"
#include "afm/gateway.hpp"

namespace afm {

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis) {
    std::uint64_t hash = basis;
    for (const char c : bytes) {
        hash ^= static_cast<unsigned char>(c);
        hash *= kFnvPrime;
    }
    return hash;
}

std::vector<std::string> lexical_tokens(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (const char c : text) {
        const auto u = static_cast<unsigned char>(c);
        if (std::isalnum(u) || u >= 0x80) {
            current.push_back(static_cast<char>(u < 0x80 ? std::tolower(u) : u));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

Embedding hash_embed(std::string_view text, std::size_t dimension, std::uint64_t seed) {
    if (dimension == 0) throw InvalidArgument("embedding dimension must be positive");
    Embedding vec(dimension, 0.0);
    for (const auto& token : lexical_tokens(text)) {
        vec[fnv1a64(token, seed) % dimension] += 1.0;
    }
    double norm = 0.0;
    for (const double v : vec) norm += v * v;
    if (norm > 0.0) {
        norm = std::sqrt(norm);
        for (double& v : vec) v /= norm;
    }
    return vec;
}

HashingEmbedder::HashingEmbedder(std::size_t dimension, std::uint64_t seed)
    : dimension_(dimension), seed_(seed) {
    if (dimension_ == 0) throw InvalidArgument("embedding dimension must be positive");
}

Embedding HashingEmbedder::embed(std::string_view text) const {
    return hash_embed(text, dimension_, seed_);
}

RemoteEmbedder::RemoteEmbedder(std::shared_ptr<Gateway> gateway, std::string model,
                               std::size_t dimension)
    : gateway_(std::move(gateway)), model_(std::move(model)), dimension_(dimension) {
    if (!gateway_) throw InvalidArgument("RemoteEmbedder needs a gateway");
}

Embedding RemoteEmbedder::embed(std::string_view text) const {
    const std::string input(text);
    auto vectors = gateway_->embed(std::span<const std::string>(&input, 1), model_);
    if (vectors.size() != 1) throw DecodeError("embedding endpoint returned a wrong vector count");
    return std::move(vectors.front());
}

double cosine(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw DimensionMismatch("cosine of vectors with sizes " + std::to_string(a.size()) +
                                " and " + std::to_string(b.size()));
    }
    double dot = 0.0;
    double na = 0.0;
    double nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    const double c = dot / (std::sqrt(na) * std::sqrt(nb));
    return std::clamp(c, -1.0, 1.0);
}

const Embedding& embedding_of(Message& message, const Embedder& embedder) {
    if (!message.embedding) message.embedding = embedder.embed(message.text);
    return *message.embedding;
}

}  // namespace afm
