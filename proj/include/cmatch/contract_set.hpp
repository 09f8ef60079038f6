#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <iterator>
#include <string>
#include <vector>

#include "cmatch/errors.hpp"

namespace cmatch {

/// Dense index of a contract in its universe, 0..n-1.
using ContractId = int;

/// Largest universe a ContractSet can address.
inline constexpr int kMaxContracts = 64;

/// A finite set of contracts over a universe of at most 64 contracts.
///
/// Stored as a bitmask: bit i is set iff contract i is a member. Equality,
/// ordering and hashing are on the mask, so two sets are equal iff they have
/// the same members. The set does not remember its universe size; functions
/// that need one take it explicitly.
class ContractSet {
public:
    using mask_type = std::uint64_t;

    constexpr ContractSet() noexcept = default;

    constexpr ContractSet(std::initializer_list<ContractId> ids) {
        for (ContractId id : ids) insert(id);
    }

    static constexpr ContractSet from_mask(mask_type m) noexcept {
        ContractSet s;
        s.bits_ = m;
        return s;
    }

    /// {0, ..., n-1}
    static constexpr ContractSet full(int n) {
        check_universe(n);
        return from_mask(n == kMaxContracts ? ~mask_type{0} : ((mask_type{1} << n) - 1));
    }

    static constexpr ContractSet single(ContractId id) {
        ContractSet s;
        s.insert(id);
        return s;
    }

    static constexpr void check_universe(int n) {
        if (n < 0 || n > kMaxContracts)
            throw domain_error("universe size " + std::to_string(n) + " outside [0, 64]");
    }

    constexpr mask_type mask() const noexcept { return bits_; }

    constexpr bool empty() const noexcept { return bits_ == 0; }
    constexpr int size() const noexcept { return std::popcount(bits_); }

    constexpr bool contains(ContractId id) const noexcept {
        return id >= 0 && id < kMaxContracts && ((bits_ >> id) & 1u);
    }

    constexpr void insert(ContractId id) {
        check_id(id);
        bits_ |= mask_type{1} << id;
    }

    constexpr void erase(ContractId id) {
        check_id(id);
        bits_ &= ~(mask_type{1} << id);
    }

    constexpr ContractSet with(ContractId id) const {
        ContractSet s = *this;
        s.insert(id);
        return s;
    }

    constexpr ContractSet without(ContractId id) const {
        ContractSet s = *this;
        s.erase(id);
        return s;
    }

    constexpr bool subset_of(ContractSet other) const noexcept { return (bits_ & ~other.bits_) == 0; }
    constexpr bool disjoint(ContractSet other) const noexcept { return (bits_ & other.bits_) == 0; }
    constexpr bool within(int n) const noexcept {
        return n >= kMaxContracts || (bits_ >> n) == 0;
    }

    /// Smallest member; -1 on the empty set.
    constexpr ContractId first() const noexcept {
        return bits_ == 0 ? -1 : std::countr_zero(bits_);
    }

    friend constexpr ContractSet operator|(ContractSet a, ContractSet b) noexcept { return from_mask(a.bits_ | b.bits_); }
    friend constexpr ContractSet operator&(ContractSet a, ContractSet b) noexcept { return from_mask(a.bits_ & b.bits_); }
    friend constexpr ContractSet operator-(ContractSet a, ContractSet b) noexcept { return from_mask(a.bits_ & ~b.bits_); }
    constexpr ContractSet& operator|=(ContractSet o) noexcept { bits_ |= o.bits_; return *this; }
    constexpr ContractSet& operator&=(ContractSet o) noexcept { bits_ &= o.bits_; return *this; }
    constexpr ContractSet& operator-=(ContractSet o) noexcept { bits_ &= ~o.bits_; return *this; }

    friend constexpr bool operator==(ContractSet, ContractSet) noexcept = default;
    friend constexpr auto operator<=>(ContractSet a, ContractSet b) noexcept { return a.bits_ <=> b.bits_; }

    /// Forward iterator over members in increasing id order.
    class iterator {
    public:
        using value_type = ContractId;
        using difference_type = std::ptrdiff_t;
        using iterator_category = std::forward_iterator_tag;
        using reference = ContractId;
        using pointer = void;

        constexpr iterator() noexcept = default;
        constexpr explicit iterator(mask_type rest) noexcept : rest_(rest) {}
        constexpr ContractId operator*() const noexcept { return std::countr_zero(rest_); }
        constexpr iterator& operator++() noexcept { rest_ &= rest_ - 1; return *this; }
        constexpr iterator operator++(int) noexcept { iterator t = *this; ++*this; return t; }
        friend constexpr bool operator==(iterator, iterator) noexcept = default;

    private:
        mask_type rest_ = 0;
    };

    constexpr iterator begin() const noexcept { return iterator(bits_); }
    constexpr iterator end() const noexcept { return iterator(0); }

    std::vector<ContractId> ids() const { return {begin(), end()}; }

    std::string to_string() const {
        std::string out = "{";
        bool first_item = true;
        for (ContractId id : *this) {
            if (!first_item) out += ",";
            out += std::to_string(id);
            first_item = false;
        }
        return out + "}";
    }

private:
    static constexpr void check_id(ContractId id) {
        if (id < 0 || id >= kMaxContracts)
            throw domain_error("contract id " + std::to_string(id) + " outside [0, 64)");
    }

    mask_type bits_ = 0;
};

/// Calls fn(subset) for every subset of `s`, including the empty set and `s`
/// itself, in increasing mask order.
template <typename Fn>
constexpr void for_each_subset(ContractSet s, Fn&& fn) {
    const auto m = s.mask();
    ContractSet::mask_type sub = 0;
    while (true) {
        fn(ContractSet::from_mask(sub));
        if (sub == m) break;
        sub = (sub - m) & m;
    }
}

/// Calls fn(subset) for every subset of {0..n-1}. Only sensible for small n.
template <typename Fn>
void for_each_subset(int n, Fn&& fn) {
    if (n < 0 || n > 30) throw size_error("refusing to enumerate 2^" + std::to_string(n) + " subsets", n, 30);
    const std::uint64_t count = std::uint64_t{1} << n;
    for (std::uint64_t m = 0; m < count; ++m) fn(ContractSet::from_mask(m));
}

/// Packs the members of `s` that lie in `slice` into consecutive low bits,
/// in increasing id order (software PEXT). Used to re-index a global set
/// into an agent-local universe.
inline ContractSet compress(ContractSet s, ContractSet slice) noexcept {
    ContractSet::mask_type out = 0;
    int bit = 0;
    for (ContractId id : slice) {
        if (s.contains(id)) out |= ContractSet::mask_type{1} << bit;
        ++bit;
    }
    return ContractSet::from_mask(out);
}

/// Inverse of compress: spreads the low bits of `local` onto the members of `slice`.
inline ContractSet expand(ContractSet local, ContractSet slice) noexcept {
    ContractSet::mask_type out = 0;
    int bit = 0;
    for (ContractId id : slice) {
        if (local.contains(bit)) out |= ContractSet::mask_type{1} << id;
        ++bit;
    }
    return ContractSet::from_mask(out);
}

} // namespace cmatch

template <>
struct std::hash<cmatch::ContractSet> {
    std::size_t operator()(cmatch::ContractSet s) const noexcept {
        return std::hash<std::uint64_t>{}(s.mask());
    }
};
