#pragma once

#include <random>
#include <string>
#include <vector>

#include "cmatch/cmatch.hpp"

namespace cmatch::testing {

// contracts of the two-contract non-existence example
inline constexpr ContractId kA = 0;
inline constexpr ContractId kB = 1;

inline ChoiceSpec nonexistence_f1() {
    // rows by mask: {}, {a}, {b}, {a,b}
    return table_choice(2, {ContractSet{}, ContractSet{kA}, ContractSet{}, ContractSet{kA, kB}});
}

inline ChoiceSpec nonexistence_f2() {
    return table_choice(2, {ContractSet{}, ContractSet{kA}, ContractSet{kB}, ContractSet{kB}});
}

inline Instance nonexistence_instance() {
    Instance inst;
    inst.universe = 2;
    inst.names = {"a", "b"};
    inst.f1 = nonexistence_f1();
    inst.f2 = nonexistence_f2();
    return inst;
}

inline Instance identity_instance(int n) {
    Instance inst;
    inst.universe = n;
    inst.names = default_names(n);
    inst.f1 = identity_choice(n);
    inst.f2 = identity_choice(n);
    inst.status1 = inst.status2 = CoherenceStatus::asserted;
    return inst;
}

/// Uniformly random table on n contracts; contractive when asked.
inline ChoiceSpec random_table(std::mt19937_64& rng, int n, bool contractive = true) {
    std::uniform_int_distribution<std::uint64_t> bits(0, (std::uint64_t{1} << n) - 1);
    return table_from(n, [&](ContractSet a) {
        const auto row = ContractSet::from_mask(bits(rng));
        return contractive ? row & a : row;
    });
}

/// Random coherent spec on n contracts, as used by the instance generator.
inline ChoiceSpec random_coherent(std::mt19937_64& rng, int n) { return gen::random_coherent_part(rng, n); }

inline std::string fixture(const std::string& name) { return std::string(CMATCH_FIXTURE_DIR) + "/" + name; }

} // namespace cmatch::testing
