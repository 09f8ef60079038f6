#pragma once

#include <compare>
#include <string>

namespace cmatch {

/// The two sides of a bilateral market: I (proposers, producers, men) and J.
enum class Side { I, J };

inline const char* side_name(Side s) { return s == Side::I ? "I" : "J"; }

/// An agent, identified by its side and a dense per-side index.
struct AgentId {
    Side side = Side::I;
    int index = 0;

    friend bool operator==(const AgentId&, const AgentId&) = default;
    friend auto operator<=>(const AgentId&, const AgentId&) = default;

    std::string to_string() const { return std::string(side_name(side)) + std::to_string(index); }
};

/// The two parties named by a contract. `producer.side == I`, `consumer.side == J`.
struct ContractLabel {
    AgentId producer{Side::I, 0};
    AgentId consumer{Side::J, 0};

    friend bool operator==(const ContractLabel&, const ContractLabel&) = default;
};

} // namespace cmatch
