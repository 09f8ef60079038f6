#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cmatch/choice.hpp"
#include "cmatch/preference.hpp"

namespace cmatch {

/// An agreement problem: a contract universe and the two sides' choice functions.
struct Instance {
    int universe = 0;
    std::vector<std::string> names;
    ChoiceSpec f1;
    ChoiceSpec f2;
    /// Per-contract producer/consumer, when the sides were built from agents.
    std::optional<std::vector<ContractLabel>> labels;
    std::vector<std::string> agents_i;
    std::vector<std::string> agents_j;
    CoherenceStatus status1 = CoherenceStatus::unknown;
    CoherenceStatus status2 = CoherenceStatus::unknown;

    const ChoiceSpec& side(int k) const { return k == 1 ? f1 : f2; }
    CoherenceStatus status(int k) const { return k == 1 ? status1 : status2; }
    bool known_coherent() const {
        auto ok = [](CoherenceStatus s) { return s == CoherenceStatus::verified || s == CoherenceStatus::asserted; };
        return ok(status1) && ok(status2);
    }
    ContractSet full() const { return ContractSet::full(universe); }

    /// The same problem with the sides exchanged.
    Instance swapped() const {
        Instance out = *this;
        std::swap(out.f1, out.f2);
        std::swap(out.status1, out.status2);
        return out;
    }

    std::string name_of(ContractId id) const {
        return id >= 0 && static_cast<std::size_t>(id) < names.size() ? names[static_cast<std::size_t>(id)]
                                                                        : std::to_string(id);
    }

    std::string render(ContractSet s) const {
        std::string out = "{";
        bool first = true;
        for (ContractId id : s) {
            if (!first) out += ", ";
            out += name_of(id);
            first = false;
        }
        return out + "}";
    }
};

/// Checks f1 and f2 exhaustively and records the outcome in the status fields.
inline void verify_coherence(Instance& inst, const CheckLimits& limits = {}) {
    inst.status1 = check_coherent(inst.f1, limits).coherent() ? CoherenceStatus::verified : CoherenceStatus::violated;
    inst.status2 = check_coherent(inst.f2, limits).coherent() ? CoherenceStatus::verified : CoherenceStatus::violated;
}

inline std::vector<std::string> default_names(int n) {
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) names.push_back("x" + std::to_string(i));
    return names;
}

} // namespace cmatch
