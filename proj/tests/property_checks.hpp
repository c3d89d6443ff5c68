#pragma once

// Randomized invariant checks shared by the unit tests (small counts) and
// the acceptance binary (full counts). Each returns the number of cases
// examined and the first failure found, if any.

#include "antparse/cli.hpp"
#include "antparse/colony.hpp"
#include "antparse/oracle.hpp"
#include "antparse/rewrite.hpp"

#include "random_grammar.hpp"
#include "reference.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace antparse::testing {

struct CheckResult {
    std::size_t cases {};
    std::optional<std::string> failure;
    double worst {};

    [[nodiscard]] auto ok() const -> bool { return !failure; }
    void fail(std::string message) {
        if (!failure) {
            failure = std::move(message);
        }
    }
};

inline auto uniform(Rng& rng, double lo, double hi) -> double {
    return lo + (hi - lo) * rng.uniform01();
}

/// Transition probabilities sum to one and are non-negative.
inline auto check_normalization(std::uint64_t seed, std::size_t rows) -> CheckResult {
    auto rng = Rng {seed};
    auto result = CheckResult {};
    static constexpr double exponents[] = {0.0, 0.5, 1.0, 2.0, 3.0};
    for (; result.cases < rows; ++result.cases) {
        const auto n = 1 + rng.below(16);
        auto tau = std::vector<double>(n);
        auto eta = std::vector<double>(n);
        for (auto j = std::size_t {0}; j < n; ++j) {
            tau[j] = std::exp(uniform(rng, std::log(1e-4), std::log(50.0)));
            eta[j] = uniform(rng, 0.1, 5.0);
        }
        const auto alpha = exponents[1 + rng.below(4)];
        const auto beta = exponents[rng.below(5)];
        const auto p = transition_probabilities(tau, eta, alpha, beta);
        const auto sum = std::accumulate(p.begin(), p.end(), 0.0);
        result.worst = std::max(result.worst, std::abs(sum - 1.0));
        if (std::abs(sum - 1.0) > 1e-12) {
            result.fail("row " + std::to_string(result.cases) + " sums to " + std::to_string(sum));
        }
        if (std::any_of(p.begin(), p.end(), [](double x) { return !(x >= 0.0); })) {
            result.fail("negative probability in row " + std::to_string(result.cases));
        }
    }
    return result;
}

/// Roulette frequencies against closed-form probabilities; worst is the
/// largest absolute deviation.
inline auto check_roulette(std::uint64_t seed, std::size_t draws, double tolerance)
    -> CheckResult {
    const auto tau = std::vector<double> {1.0, 2.0, 3.0, 0.5, 3.5, 0.25};
    const auto eta = std::vector<double> {1.0, 1.0, 2.0, 1.0, 0.5, 4.0};
    const auto alpha = 1.0;
    const auto beta = 1.0;
    const auto expected = transition_probabilities(tau, eta, alpha, beta);

    auto rng = Rng {seed};
    auto counts = std::vector<std::size_t>(tau.size());
    auto result = CheckResult {};
    for (; result.cases < draws; ++result.cases) {
        ++counts[select_next_node(rng, 1.0, tau, eta, alpha, beta)];
    }
    for (auto j = std::size_t {0}; j < tau.size(); ++j) {
        const auto observed = static_cast<double>(counts[j]) / static_cast<double>(draws);
        result.worst = std::max(result.worst, std::abs(observed - expected[j]));
    }
    if (result.worst > tolerance) {
        result.fail("roulette deviation " + std::to_string(result.worst));
    }
    return result;
}

inline auto random_form(Rng& rng, const Grammar& g, std::size_t max_len) -> SententialForm {
    auto symbols = std::vector<SymbolId>(1 + rng.below(max_len));
    for (auto& s : symbols) {
        s = SymbolId {static_cast<std::uint32_t>(rng.below(g.symbol_count()))};
    }
    return SententialForm {std::move(symbols)};
}

/// Random single reductions: the form shrinks by |rhs| - 1, only the
/// matched span changes, and find_matches equals a naive scan.
inline auto check_reductions(std::uint64_t seed, std::size_t reductions) -> CheckResult {
    auto rng = Rng {seed};
    auto result = CheckResult {};
    auto attempts = std::size_t {0};
    while (result.cases < reductions && attempts++ < reductions * 100) {
        const auto g = parse_grammar(random_grammar_text(rng));
        for (auto round = 0; round < 50 && result.cases < reductions; ++round) {
            const auto form = random_form(rng, g, 8);
            const auto& rule = g.production(rng.below(g.productions().size()));
            const auto positions = find_matches(form, rule);
            const auto raw = std::vector<SymbolId>(form.begin(), form.end());
            if (positions != naive_matches(raw, rule.rhs)) {
                result.fail("find_matches disagrees with a naive scan on " + g.render(form));
            }
            if (positions.empty()) {
                continue;
            }
            const auto pos = positions[rng.below(positions.size())];
            const auto after = apply_reduction(form, rule, pos);
            ++result.cases;
            if (after.size() != form.size() - rule.rhs.size() + 1 || after.size() > form.size()) {
                result.fail("length not monotone: " + g.render(form) + " => " + g.render(after));
            }
            const auto prefix = std::equal(form.begin(), form.begin() + pos, after.begin());
            const auto suffix = std::equal(form.begin() + pos + rule.rhs.size(), form.end(),
                                           after.begin() + pos + 1);
            if (!prefix || !suffix || after[pos] != rule.lhs) {
                result.fail("reduction not local: " + g.render(form) + " => " + g.render(after));
            }
        }
    }
    return result;
}

/// Random evaporate / deposit / set_tau sequences keep every trail finite
/// and at or above the floor.
inline auto check_pheromone_bounds(std::uint64_t seed, std::size_t sequences) -> CheckResult {
    auto rng = Rng {seed};
    auto result = CheckResult {};
    for (; result.cases < sequences; ++result.cases) {
        const auto n = 1 + rng.below(8);
        const auto tau_min = std::exp(uniform(rng, std::log(1e-8), std::log(1e-2)));
        auto graph = PheromoneGraph {n, uniform(rng, tau_min, 10.0), tau_min};
        const auto ops = 1 + rng.below(60);
        for (auto k = std::uint64_t {0}; k < ops; ++k) {
            switch (rng.below(3)) {
            case 0:
                graph.evaporate(uniform(rng, 0.0, 0.999));
                break;
            case 1: {
                auto outcome = AntOutcome {};
                outcome.status = AntStatus::success;
                outcome.hops = rng.below(12);
                for (auto h = std::uint64_t {0}; h < outcome.hops; ++h) {
                    outcome.path.push_back(Link {rng.below(n), rng.below(n)});
                }
                graph.deposit(outcome, uniform(rng, 0.0, 5.0));
                break;
            }
            default:
                graph.set_tau(rng.below(n), rng.below(n), uniform(rng, -1.0, 1.0) * tau_min * 3);
                break;
            }
        }
        for (auto i = std::size_t {0}; i < n; ++i) {
            for (auto j = std::size_t {0}; j < n; ++j) {
                const auto t = graph.tau(i, j);
                if (!std::isfinite(t) || t < tau_min) {
                    result.fail("trail " + std::to_string(t) + " after sequence " +
                                std::to_string(result.cases));
                }
            }
        }
    }
    return result;
}

/// Random grammars whose language holds at least one string of length <= 6.
inline auto productive_grammars(std::uint64_t seed, std::size_t count) -> std::vector<Grammar> {
    auto rng = Rng {seed};
    auto grammars = std::vector<Grammar> {};
    while (grammars.size() < count) {
        auto g = parse_grammar(random_grammar_text(rng));
        if (!enumerate_members(g, 6).empty()) {
            grammars.push_back(std::move(g));
        }
    }
    return grammars;
}

/// BFS lengths against the iterative-deepening reference, and invariance of
/// the BFS length under a permuted production order.
inline auto check_oracle_agreement(std::uint64_t seed, std::size_t grammars) -> CheckResult {
    auto rng = Rng {seed};
    auto result = CheckResult {};
    for (auto gi = std::size_t {0}; gi < grammars; ++gi) {
        const auto text = random_grammar_text(rng);
        const auto g = parse_grammar(text);

        // same rules, reversed order, same start
        auto lines = std::vector<std::string> {};
        auto line = std::string {};
        for (const auto ch : text) {
            if (ch == '\n') {
                lines.push_back(line);
                line.clear();
            } else {
                line += ch;
            }
        }
        std::reverse(lines.begin() + 1, lines.end());
        auto permuted_text = std::string {};
        for (const auto& l : lines) {
            permuted_text += l + '\n';
        }
        const auto permuted = parse_grammar(permuted_text);

        for (auto k = 0; k < 20; ++k) {
            const auto form = random_form(rng, g, 5);
            const auto bfs = shortest_reduction(g, form);
            const auto reference = reference_shortest(g, form, form.size() * 3 + 2);
            ++result.cases;
            if (bfs.shortest_steps != reference) {
                result.fail("oracle disagrees with reference on " + g.render(form));
            }
            if (bfs.witness && replay(g, *bfs.witness, form) != SententialForm {g.start()}) {
                result.fail("oracle witness does not replay");
            }
            auto renamed_symbols = std::vector<SymbolId> {};
            for (const auto s : form) {
                renamed_symbols.push_back(permuted.symbol(g.name(s)));
            }
            const auto renamed = SententialForm {std::move(renamed_symbols)};
            if (shortest_reduction(permuted, renamed).shortest_steps != bfs.shortest_steps) {
                result.fail("production order changed the shortest length for " +
                            g.render(form));
            }
        }
    }
    return result;
}

/// Identical trace JSON for serial and threaded colony runs.
inline auto check_parallel_determinism(const Grammar& g, const SententialForm& omega,
                                       ColonyConfig config, std::size_t seeds) -> CheckResult {
    auto result = CheckResult {};
    for (; result.cases < seeds; ++result.cases) {
        config.seed = result.cases;
        config.threads = 1;
        const auto serial = trace_record(g, omega, config, run_colony(g, omega, config), true);
        config.threads = 4;
        const auto threaded = trace_record(g, omega, config, run_colony(g, omega, config), true);
        if (serial.dump() != threaded.dump()) {
            result.fail("threaded run differs for seed " + std::to_string(config.seed));
        }
    }
    return result;
}

}  // namespace antparse::testing
