#include "antparse/oracle.hpp"

#include <algorithm>
#include <deque>
#include <string>
#include <unordered_map>

namespace antparse {

namespace {

struct Node {
    SententialForm form;
    std::size_t parent;
    std::size_t rule_index;
    std::size_t position;
};

constexpr auto no_parent = static_cast<std::size_t>(-1);

auto build_witness(const std::vector<Node>& nodes, std::size_t goal) -> Derivation {
    auto derivation = Derivation {};
    for (auto at = goal; nodes[at].parent != no_parent; at = nodes[at].parent) {
        const auto& node = nodes[at];
        derivation.steps.push_back(DerivationStep {node.rule_index, node.position,
                                                   nodes[node.parent].form, node.form});
    }
    std::reverse(derivation.steps.begin(), derivation.steps.end());
    return derivation;
}

}  // namespace

auto shortest_reduction(const Grammar& grammar, const SententialForm& omega,
                        std::size_t max_states) -> OracleResult {
    auto result = OracleResult {};
    if (is_goal(omega, grammar)) {
        result.member = true;
        result.shortest_steps = 0;
        result.witness = Derivation {};
        return result;
    }

    auto nodes = std::vector<Node> {};
    auto index = std::unordered_map<SententialForm, std::size_t> {};
    nodes.push_back(Node {omega, no_parent, 0, 0});
    index.emplace(omega, 0);

    auto queue = std::deque<std::size_t> {0};
    auto depth = std::vector<std::size_t> {0};

    while (!queue.empty()) {
        const auto current = queue.front();
        queue.pop_front();
        ++result.states_explored;

        // copy: nodes may reallocate while children are added
        const auto form = nodes[current].form;
        for (const auto& production : grammar.productions()) {
            for (const auto position : find_matches(form, production)) {
                auto child = apply_reduction(form, production, position);
                if (index.contains(child)) {
                    continue;
                }
                if (nodes.size() >= max_states) {
                    throw OracleBudgetExceeded {"oracle budget exceeded: more than " +
                                                std::to_string(max_states) + " forms"};
                }
                const auto id = nodes.size();
                const auto goal = is_goal(child, grammar);
                index.emplace(child, id);
                nodes.push_back(Node {std::move(child), current, production.index, position});
                depth.push_back(depth[current] + 1);
                if (goal) {
                    result.member = true;
                    result.shortest_steps = depth[id];
                    result.witness = build_witness(nodes, id);
                    return result;
                }
                queue.push_back(id);
            }
        }
    }
    return result;
}

auto enumerate_members(const Grammar& grammar, std::size_t max_len, std::size_t max_candidates)
    -> std::vector<SententialForm> {
    auto members = std::vector<SententialForm> {};
    const auto alphabet = grammar.terminals();
    if (max_len == 0 || alphabet.empty()) {
        return members;
    }

    auto total = std::size_t {0};
    auto layer = std::size_t {1};
    for (auto length = std::size_t {1}; length <= max_len; ++length) {
        if (layer > max_candidates / alphabet.size()) {
            throw OracleBudgetExceeded {"too many candidate strings up to length " +
                                        std::to_string(max_len)};
        }
        layer *= alphabet.size();
        total += layer;
        if (total > max_candidates) {
            throw OracleBudgetExceeded {"too many candidate strings up to length " +
                                        std::to_string(max_len)};
        }
    }

    for (auto length = std::size_t {1}; length <= max_len; ++length) {
        auto digits = std::vector<std::size_t>(length, 0);
        while (true) {
            auto symbols = std::vector<SymbolId> {};
            symbols.reserve(length);
            for (const auto d : digits) {
                symbols.push_back(alphabet[d]);
            }
            auto candidate = SententialForm {std::move(symbols)};
            if (shortest_reduction(grammar, candidate).member) {
                members.push_back(std::move(candidate));
            }

            auto k = length;
            while (k > 0 && ++digits[k - 1] == alphabet.size()) {
                digits[k - 1] = 0;
                --k;
            }
            if (k == 0) {
                break;
            }
        }
    }
    return members;
}

}  // namespace antparse
