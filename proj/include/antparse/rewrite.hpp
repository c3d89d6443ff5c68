#pragma once

#include "antparse/grammar.hpp"

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace antparse {

/// Thrown when a reduction is requested at a position where the
/// production's right-hand side does not occur.
class ContractViolation : public std::logic_error {
   public:
    using std::logic_error::logic_error;
};

/// Thrown by replay() when a recorded step does not fit the form it is
/// applied to. step() is 0-based.
class CorruptedDerivation : public std::runtime_error {
   public:
    CorruptedDerivation(std::size_t step, const std::string& message);

    [[nodiscard]] auto step() const noexcept -> std::size_t { return step_; }

   private:
    std::size_t step_;
};

/// One bottom-up reduction: the slice [position, position + |rhs|) of
/// `before` replaced by the rule's left-hand side gives `after`.
struct DerivationStep {
    std::size_t rule_index {};
    std::size_t position {};
    SententialForm before;
    SententialForm after;

    auto operator==(const DerivationStep&) const -> bool = default;
};

struct Derivation {
    std::vector<DerivationStep> steps;

    [[nodiscard]] auto size() const noexcept -> std::size_t { return steps.size(); }
    [[nodiscard]] auto empty() const noexcept -> bool { return steps.empty(); }

    auto operator==(const Derivation&) const -> bool = default;
};

/// All positions where the production's right-hand side occurs in the
/// form, ascending, overlapping occurrences included.
[[nodiscard]] auto find_matches(const SententialForm& form, const Production& production)
    -> std::vector<std::size_t>;

/// Replaces the occurrence at `position` by the production's left-hand side.
[[nodiscard]] auto apply_reduction(const SententialForm& form, const Production& production,
                                   std::size_t position) -> SententialForm;

/// True iff the form is exactly the start symbol.
[[nodiscard]] auto is_goal(const SententialForm& form, const Grammar& grammar) -> bool;

/// Re-applies every step from start_form, checking each recorded
/// before/after pair. Returns the final form.
[[nodiscard]] auto replay(const Grammar& grammar, const Derivation& derivation,
                          const SententialForm& start_form) -> SententialForm;

}  // namespace antparse
