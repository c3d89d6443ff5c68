#pragma once

#include "antparse/grammar.hpp"
#include "antparse/random.hpp"
#include "antparse/rewrite.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace antparse {

/// Colony parameters. max_hops unset means 4 * |omega| * |P|.
struct ColonyConfig {
    std::size_t n_ants = 100;
    std::size_t n_iterations = 50;
    double q0 = 0.9;
    double alpha = 1.0;
    double beta = 0.0;
    double rho = 0.1;
    double deposit_q = 1.0;
    double tau0 = 1.0;
    double tau_min = 1e-4;
    std::optional<std::uint64_t> max_hops;
    std::uint64_t seed = 42;
    /// Stop after this many iterations without a shorter derivation; 0 disables.
    std::size_t stall_limit = 0;
    /// Extra deposit on the best-so-far walk each iteration, as a multiple of
    /// the regular deposit; 0 disables.
    double elitist_weight = 0.0;
    /// Worker threads for the ants of one iteration. Results do not depend on it.
    std::size_t threads = 1;

    /// Throws std::invalid_argument on out-of-range values.
    void validate() const;

    [[nodiscard]] auto hop_budget(const Grammar& grammar, const SententialForm& omega) const
        -> std::uint64_t;
};

struct Link {
    std::size_t from {};
    std::size_t to {};

    auto operator==(const Link&) const -> bool = default;
};

enum class AntStatus : std::uint8_t { success, inactive, exhausted };

struct AntOutcome {
    AntStatus status {AntStatus::inactive};
    std::size_t start_node {};
    /// Holds the reductions only when status is success.
    Derivation derivation;
    std::uint64_t hops {};
    std::vector<Link> path;
};

struct PheromoneSummary {
    double min {};
    double max {};
    double mean {};
};

/// Complete directed graph over production nodes, self-loops included,
/// with trail and heuristic matrices. Trails never drop below the floor.
class PheromoneGraph {
   public:
    PheromoneGraph(std::size_t n_nodes, double tau0, double tau_min);

    [[nodiscard]] auto size() const noexcept -> std::size_t { return n_; }
    [[nodiscard]] auto tau_min() const noexcept -> double { return tau_min_; }

    [[nodiscard]] auto tau(std::size_t i, std::size_t j) const -> double;
    [[nodiscard]] auto eta(std::size_t i, std::size_t j) const -> double;
    [[nodiscard]] auto tau_row(std::size_t i) const -> std::span<const double>;
    [[nodiscard]] auto eta_row(std::size_t i) const -> std::span<const double>;

    void set_tau(std::size_t i, std::size_t j, double value);
    void set_eta(std::size_t i, std::size_t j, double value);

    /// Adds deposit_q / max(hops, 1) to every traversed link, once per
    /// traversal. The outcome must be a success.
    void deposit(const AntOutcome& outcome, double deposit_q);

    /// tau <- max(tau_min, (1 - rho) * tau) on every link.
    void evaporate(double rho);

    [[nodiscard]] auto summary() const -> PheromoneSummary;

   private:
    [[nodiscard]] auto offset(std::size_t i, std::size_t j) const -> std::size_t;

    std::size_t n_;
    double tau_min_;
    std::vector<double> tau_;
    std::vector<double> eta_;
};

/// P(j) = tau_ij^alpha * eta_ij^beta / sum_k tau_ik^alpha * eta_ik^beta
[[nodiscard]] auto transition_probabilities(std::span<const double> tau_row,
                                            std::span<const double> eta_row, double alpha,
                                            double beta) -> std::vector<double>;

/// Highest weight, ties to the lowest index.
[[nodiscard]] auto greedy_node(std::span<const double> tau_row, std::span<const double> eta_row,
                               double alpha, double beta) -> std::size_t;

/// Pseudo-random-proportional choice. A draw q <= q0 samples the
/// roulette wheel, q > q0 takes the greedy node.
[[nodiscard]] auto select_next_node(Rng& rng, double q0, std::span<const double> tau_row,
                                    std::span<const double> eta_row, double alpha, double beta)
    -> std::size_t;

/// One ant walk with caller-supplied choices. `next_node(current)` picks
/// the following node, `pick_match(count)` picks among match positions.
///
/// The goal test precedes the first reduction. The starting node's rule
/// costs no hop; every later move costs one.
template <class NextNode, class PickMatch>
[[nodiscard]] auto walk_ant(const Grammar& grammar, const SententialForm& omega,
                            std::size_t start_node, std::uint64_t max_hops, NextNode&& next_node,
                            PickMatch&& pick_match) -> AntOutcome {
    auto outcome = AntOutcome {};
    outcome.start_node = start_node;
    if (is_goal(omega, grammar)) {
        outcome.status = AntStatus::success;
        return outcome;
    }

    auto current = omega;
    auto node = start_node;
    while (true) {
        const auto& production = grammar.production(node);
        const auto positions = find_matches(current, production);
        if (positions.empty()) {
            outcome.status = AntStatus::inactive;
            outcome.derivation.steps.clear();
            return outcome;
        }
        const auto position = positions[pick_match(positions.size())];
        auto next = apply_reduction(current, production, position);
        outcome.derivation.steps.push_back(DerivationStep {node, position, current, next});
        current = std::move(next);

        if (is_goal(current, grammar)) {
            outcome.status = AntStatus::success;
            return outcome;
        }
        if (outcome.hops >= max_hops) {
            outcome.status = AntStatus::exhausted;
            outcome.derivation.steps.clear();
            return outcome;
        }
        const auto following = static_cast<std::size_t>(next_node(node));
        outcome.path.push_back(Link {node, following});
        ++outcome.hops;
        node = following;
    }
}

/// Ant placed on a uniformly random node, moving by select_next_node and
/// choosing among match positions uniformly.
[[nodiscard]] auto run_ant(const Grammar& grammar, const PheromoneGraph& graph,
                           const SententialForm& omega, const ColonyConfig& config, Rng& rng)
    -> AntOutcome;

struct IterationStats {
    std::size_t successes {};
    /// Best-so-far derivation length after this iteration.
    std::optional<std::size_t> best_steps;
    PheromoneSummary pheromone;
};

struct ParseResult {
    bool accepted {};
    std::optional<Derivation> best_derivation;
    /// Equals best_derivation->size() when present.
    std::optional<std::size_t> best_steps;
    /// Link traversals of the best walk: best_steps - 1, or 0 for an empty derivation.
    std::optional<std::uint64_t> best_hops;
    std::size_t iterations_run {};
    std::size_t successes {};
    std::vector<IterationStats> stats;
};

/// Called after each iteration's pheromone update.
using IterationObserver = std::function<void(std::size_t iteration, const PheromoneGraph& graph)>;

/// Runs the colony: every iteration runs all ants against the frozen
/// trail, then evaporates once, then applies the deposits of that
/// iteration's successful ants.
[[nodiscard]] auto run_colony(const Grammar& grammar, const SententialForm& omega,
                              const ColonyConfig& config,
                              const IterationObserver& observer = {}) -> ParseResult;

}  // namespace antparse
