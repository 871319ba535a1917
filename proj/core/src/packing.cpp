#include "afm/packing.hpp"

namespace afm {

std::vector<Fidelity> representation_ladder(Fidelity intended, const AblationFlags& flags) {
    std::vector<Fidelity> ladder;
    if (intended == Fidelity::Full) ladder.push_back(Fidelity::Full);
    const bool wants_summary =
        intended != Fidelity::Placeholder || flags.no_stubs;
    if (wants_summary && !flags.no_compression) ladder.push_back(Fidelity::Compressed);
    if (!flags.no_stubs) ladder.push_back(Fidelity::Placeholder);
    return ladder;
}

std::vector<PackDecision> pack_greedy(std::span<const Fidelity> intended, std::size_t budget,
                                      const AblationFlags& flags, const RepresentationCost& cost) {
    std::vector<PackDecision> decisions(intended.size());
    std::size_t left = budget;
    for (std::size_t i = 0; i < intended.size(); ++i) {
        for (const Fidelity rung : representation_ladder(intended[i], flags)) {
            const std::size_t tokens = cost(i, rung);
            if (tokens <= left) {
                decisions[i] = {rung, tokens};
                left -= tokens;
                break;
            }
        }
    }
    return decisions;
}

}  // namespace afm
