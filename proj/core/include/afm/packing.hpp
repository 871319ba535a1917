#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "afm/model.hpp"

namespace afm {

struct AblationFlags {
    bool no_compression = false;
    bool no_stubs = false;
    bool no_importance = false;

    friend bool operator==(const AblationFlags&, const AblationFlags&) = default;
};

// Representations tried for a message, best first. Without ablations:
//   FULL        -> full, summary, stub
//   COMPRESSED  -> summary, stub
//   PLACEHOLDER -> stub
// no_compression removes the summary rung; no_stubs removes the stub rung
// and lets a PLACEHOLDER intent try the summary instead.
std::vector<Fidelity> representation_ladder(Fidelity intended, const AblationFlags& flags);

struct PackDecision {
    std::optional<Fidelity> achieved;  // empty when dropped
    std::size_t tokens = 0;

    friend bool operator==(const PackDecision&, const PackDecision&) = default;
};

// Token cost of rendering message `index` at `rung`. May render lazily.
using RepresentationCost = std::function<std::size_t(std::size_t index, Fidelity rung)>;

// Single oldest-to-newest pass: each message takes the first rung of its
// ladder that fits the remaining budget, or is dropped.
std::vector<PackDecision> pack_greedy(std::span<const Fidelity> intended, std::size_t budget,
                                      const AblationFlags& flags, const RepresentationCost& cost);

}  // namespace afm
