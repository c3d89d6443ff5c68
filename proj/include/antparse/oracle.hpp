#pragma once

#include "antparse/grammar.hpp"
#include "antparse/rewrite.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace antparse {

/// The search hit its state ceiling before reaching a verdict. This is
/// never a proof of non-membership.
class OracleBudgetExceeded : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::size_t default_oracle_states = 1'000'000;

struct OracleResult {
    bool member {};
    std::optional<std::size_t> shortest_steps;
    std::optional<Derivation> witness;
    /// Distinct forms expanded.
    std::size_t states_explored {};
};

/// Breadth-first search over every (production, position) reduction from
/// omega. Forms are never longer than omega, so the reachable space is
/// finite; a visited set stops unit-production cycles.
///
/// Throws OracleBudgetExceeded once more than max_states distinct forms
/// have been discovered.
[[nodiscard]] auto shortest_reduction(const Grammar& grammar, const SententialForm& omega,
                                      std::size_t max_states = default_oracle_states)
    -> OracleResult;

/// Every terminal string of length 1..max_len in the language, by testing
/// each candidate over T. Sorted by length, then by symbol id.
///
/// Throws OracleBudgetExceeded when there are more than max_candidates
/// candidate strings.
[[nodiscard]] auto enumerate_members(const Grammar& grammar, std::size_t max_len,
                                     std::size_t max_candidates = 1'000'000)
    -> std::vector<SententialForm>;

}  // namespace antparse
