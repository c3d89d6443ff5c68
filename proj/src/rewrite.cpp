#include "antparse/rewrite.hpp"

#include <algorithm>
#include <string>

namespace antparse {

namespace {

auto matches_at(const SententialForm& form, const Production& production, std::size_t position)
    -> bool {
    const auto& rhs = production.rhs;
    if (rhs.empty() || position > form.size() || form.size() - position < rhs.size()) {
        return false;
    }
    return std::equal(rhs.begin(), rhs.end(), form.symbols().begin() + position);
}

}  // namespace

CorruptedDerivation::CorruptedDerivation(std::size_t step, const std::string& message)
    : std::runtime_error {"corrupted derivation at step " + std::to_string(step + 1) + ": " +
                          message},
      step_ {step} {}

auto find_matches(const SententialForm& form, const Production& production)
    -> std::vector<std::size_t> {
    auto positions = std::vector<std::size_t> {};
    const auto& rhs = production.rhs;
    if (rhs.empty() || rhs.size() > form.size()) {
        return positions;
    }
    const auto symbols = form.symbols();
    auto it = symbols.begin();
    while (true) {
        it = std::search(it, symbols.end(), rhs.begin(), rhs.end());
        if (it == symbols.end()) {
            break;
        }
        positions.push_back(static_cast<std::size_t>(it - symbols.begin()));
        ++it;
    }
    return positions;
}

auto apply_reduction(const SententialForm& form, const Production& production,
                     std::size_t position) -> SententialForm {
    if (!matches_at(form, production, position)) {
        throw ContractViolation {"rule " + std::to_string(production.index + 1) +
                                 " has no match at position " + std::to_string(position)};
    }
    const auto symbols = form.symbols();
    auto reduced = std::vector<SymbolId> {};
    reduced.reserve(symbols.size() - production.rhs.size() + 1);
    reduced.insert(reduced.end(), symbols.begin(), symbols.begin() + position);
    reduced.push_back(production.lhs);
    reduced.insert(reduced.end(), symbols.begin() + position + production.rhs.size(),
                   symbols.end());
    return SententialForm {std::move(reduced)};
}

auto is_goal(const SententialForm& form, const Grammar& grammar) -> bool {
    return form.size() == 1 && form[0] == grammar.start();
}

auto replay(const Grammar& grammar, const Derivation& derivation,
            const SententialForm& start_form) -> SententialForm {
    auto current = start_form;
    for (auto k = std::size_t {0}; k < derivation.steps.size(); ++k) {
        const auto& step = derivation.steps[k];
        if (step.before != current) {
            throw CorruptedDerivation {k, "recorded form \"" + grammar.render(step.before) +
                                              "\" differs from \"" + grammar.render(current) +
                                              "\""};
        }
        if (step.rule_index >= grammar.productions().size()) {
            throw CorruptedDerivation {k, "unknown rule index " + std::to_string(step.rule_index)};
        }
        const auto& production = grammar.production(step.rule_index);
        if (!matches_at(current, production, step.position)) {
            throw CorruptedDerivation {k, "rule " + std::to_string(step.rule_index + 1) +
                                              " does not match at position " +
                                              std::to_string(step.position)};
        }
        auto next = apply_reduction(current, production, step.position);
        if (next != step.after) {
            throw CorruptedDerivation {k, "recorded result \"" + grammar.render(step.after) +
                                              "\" differs from \"" + grammar.render(next) + "\""};
        }
        current = std::move(next);
    }
    return current;
}

}  // namespace antparse
