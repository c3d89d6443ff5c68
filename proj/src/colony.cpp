#include "antparse/colony.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

namespace antparse {

namespace {

auto link_weight(double tau, double eta, double alpha, double beta) -> double {
    const auto t = alpha == 1.0 ? tau : std::pow(tau, alpha);
    const auto h = beta == 0.0 ? 1.0 : std::pow(eta, beta);
    return t * h;
}

void check_rows(std::span<const double> tau_row, std::span<const double> eta_row) {
    if (tau_row.empty() || tau_row.size() != eta_row.size()) {
        throw std::logic_error {"trail and heuristic rows must be non-empty and of equal size"};
    }
}

}  // namespace

void ColonyConfig::validate() const {
    const auto fail = [](const std::string& message) { throw std::invalid_argument {message}; };
    if (n_ants == 0) {
        fail("n_ants must be positive");
    }
    if (!(q0 > 0.0 && q0 < 1.0)) {
        fail("q0 must lie in (0, 1)");
    }
    if (!(alpha >= 0.0) || !(beta >= 0.0)) {
        fail("alpha and beta must be non-negative");
    }
    if (!(rho >= 0.0 && rho < 1.0)) {
        fail("rho must lie in [0, 1)");
    }
    if (!(deposit_q > 0.0) || !std::isfinite(deposit_q)) {
        fail("deposit must be positive");
    }
    if (!(tau_min > 0.0) || !std::isfinite(tau_min)) {
        fail("tau_min must be positive");
    }
    if (!(tau0 >= tau_min) || !std::isfinite(tau0)) {
        fail("tau0 must be at least tau_min");
    }
    if (!(elitist_weight >= 0.0) || !std::isfinite(elitist_weight)) {
        fail("elitist weight must be non-negative");
    }
}

auto ColonyConfig::hop_budget(const Grammar& grammar, const SententialForm& omega) const
    -> std::uint64_t {
    if (max_hops) {
        return *max_hops;
    }
    return 4 * static_cast<std::uint64_t>(omega.size()) *
           static_cast<std::uint64_t>(grammar.productions().size());
}

PheromoneGraph::PheromoneGraph(std::size_t n_nodes, double tau0, double tau_min)
    : n_ {n_nodes},
      tau_min_ {tau_min},
      tau_(n_nodes * n_nodes, std::max(tau0, tau_min)),
      eta_(n_nodes * n_nodes, 1.0) {
    if (n_nodes == 0) {
        throw std::invalid_argument {"pheromone graph needs at least one node"};
    }
    if (!(tau_min > 0.0)) {
        throw std::invalid_argument {"tau_min must be positive"};
    }
}

auto PheromoneGraph::offset(std::size_t i, std::size_t j) const -> std::size_t {
    if (i >= n_ || j >= n_) {
        throw std::out_of_range {"link (" + std::to_string(i) + ", " + std::to_string(j) +
                                 ") outside graph of " + std::to_string(n_) + " nodes"};
    }
    return i * n_ + j;
}

auto PheromoneGraph::tau(std::size_t i, std::size_t j) const -> double {
    return tau_[offset(i, j)];
}

auto PheromoneGraph::eta(std::size_t i, std::size_t j) const -> double {
    return eta_[offset(i, j)];
}

auto PheromoneGraph::tau_row(std::size_t i) const -> std::span<const double> {
    return std::span {tau_}.subspan(offset(i, 0), n_);
}

auto PheromoneGraph::eta_row(std::size_t i) const -> std::span<const double> {
    return std::span {eta_}.subspan(offset(i, 0), n_);
}

void PheromoneGraph::set_tau(std::size_t i, std::size_t j, double value) {
    if (!std::isfinite(value)) {
        throw std::invalid_argument {"trail value must be finite"};
    }
    tau_[offset(i, j)] = std::max(tau_min_, value);
}

void PheromoneGraph::set_eta(std::size_t i, std::size_t j, double value) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw std::invalid_argument {"heuristic value must be positive"};
    }
    eta_[offset(i, j)] = value;
}

void PheromoneGraph::deposit(const AntOutcome& outcome, double deposit_q) {
    if (outcome.status != AntStatus::success) {
        throw std::logic_error {"deposit requires a successful ant"};
    }
    const auto amount = deposit_q / static_cast<double>(std::max<std::uint64_t>(outcome.hops, 1));
    for (const auto& link : outcome.path) {
        tau_[offset(link.from, link.to)] += amount;
    }
}

void PheromoneGraph::evaporate(double rho) {
    if (!(rho >= 0.0 && rho < 1.0)) {
        throw std::invalid_argument {"rho must lie in [0, 1)"};
    }
    for (auto& value : tau_) {
        value = std::max(tau_min_, (1.0 - rho) * value);
    }
}

auto PheromoneGraph::summary() const -> PheromoneSummary {
    const auto [lo, hi] = std::minmax_element(tau_.begin(), tau_.end());
    auto total = 0.0;
    for (const auto value : tau_) {
        total += value;
    }
    return PheromoneSummary {*lo, *hi, total / static_cast<double>(tau_.size())};
}

auto transition_probabilities(std::span<const double> tau_row, std::span<const double> eta_row,
                              double alpha, double beta) -> std::vector<double> {
    check_rows(tau_row, eta_row);
    auto probabilities = std::vector<double>(tau_row.size());
    auto total = 0.0;
    for (auto j = std::size_t {0}; j < tau_row.size(); ++j) {
        probabilities[j] = link_weight(tau_row[j], eta_row[j], alpha, beta);
        total += probabilities[j];
    }
    if (!(total > 0.0) || !std::isfinite(total)) {
        throw std::logic_error {"transition weights sum to " + std::to_string(total)};
    }
    for (auto& p : probabilities) {
        p /= total;
    }
    return probabilities;
}

auto greedy_node(std::span<const double> tau_row, std::span<const double> eta_row, double alpha,
                 double beta) -> std::size_t {
    check_rows(tau_row, eta_row);
    auto best = std::size_t {0};
    auto best_weight = link_weight(tau_row[0], eta_row[0], alpha, beta);
    for (auto j = std::size_t {1}; j < tau_row.size(); ++j) {
        const auto weight = link_weight(tau_row[j], eta_row[j], alpha, beta);
        if (weight > best_weight) {
            best = j;
            best_weight = weight;
        }
    }
    return best;
}

auto select_next_node(Rng& rng, double q0, std::span<const double> tau_row,
                      std::span<const double> eta_row, double alpha, double beta) -> std::size_t {
    const auto q = rng.uniform01();
    if (q > q0) {
        return greedy_node(tau_row, eta_row, alpha, beta);
    }

    check_rows(tau_row, eta_row);
    auto cumulative = std::vector<double>(tau_row.size());
    auto total = 0.0;
    for (auto j = std::size_t {0}; j < tau_row.size(); ++j) {
        total += link_weight(tau_row[j], eta_row[j], alpha, beta);
        cumulative[j] = total;
    }
    if (!(total > 0.0) || !std::isfinite(total)) {
        throw std::logic_error {"transition weights sum to " + std::to_string(total)};
    }
    const auto target = rng.uniform01() * total;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
    if (it == cumulative.end()) {
        // rounding put target on the last boundary
        return tau_row.size() - 1;
    }
    return static_cast<std::size_t>(it - cumulative.begin());
}

auto run_ant(const Grammar& grammar, const PheromoneGraph& graph, const SententialForm& omega,
             const ColonyConfig& config, Rng& rng) -> AntOutcome {
    const auto start = static_cast<std::size_t>(rng.below(graph.size()));
    return walk_ant(
        grammar, omega, start, config.hop_budget(grammar, omega),
        [&](std::size_t node) {
            return select_next_node(rng, config.q0, graph.tau_row(node), graph.eta_row(node),
                                    config.alpha, config.beta);
        },
        [&](std::size_t count) {
            return count == 1 ? std::size_t {0} : static_cast<std::size_t>(rng.below(count));
        });
}

auto run_colony(const Grammar& grammar, const SententialForm& omega, const ColonyConfig& config,
                const IterationObserver& observer) -> ParseResult {
    config.validate();
    if (grammar.productions().empty()) {
        throw std::invalid_argument {"grammar has no productions"};
    }

    auto graph = PheromoneGraph {grammar.productions().size(), config.tau0, config.tau_min};
    auto result = ParseResult {};
    auto best = std::optional<AntOutcome> {};
    auto stalled = std::size_t {0};

    auto outcomes = std::vector<AntOutcome>(config.n_ants);
    const auto n_workers = std::clamp<std::size_t>(config.threads, 1, config.n_ants);

    for (auto iteration = std::size_t {0}; iteration < config.n_iterations; ++iteration) {
        const auto run_range = [&](std::size_t first, std::size_t last) {
            for (auto ant = first; ant < last; ++ant) {
                auto rng = Rng {stream_seed(config.seed, iteration, ant)};
                outcomes[ant] = run_ant(grammar, graph, omega, config, rng);
            }
        };
        if (n_workers == 1) {
            run_range(0, config.n_ants);
        } else {
            auto workers = std::vector<std::jthread> {};
            workers.reserve(n_workers);
            const auto chunk = (config.n_ants + n_workers - 1) / n_workers;
            for (auto w = std::size_t {0}; w < n_workers; ++w) {
                const auto first = std::min(config.n_ants, w * chunk);
                const auto last = std::min(config.n_ants, first + chunk);
                workers.emplace_back(run_range, first, last);
            }
        }

        auto stats = IterationStats {};
        auto improved = false;
        for (auto& outcome : outcomes) {
            if (outcome.status != AntStatus::success) {
                continue;
            }
            ++stats.successes;
            if (!best || outcome.derivation.size() < best->derivation.size()) {
                best = outcome;
                improved = true;
            }
        }

        graph.evaporate(config.rho);
        for (const auto& outcome : outcomes) {
            if (outcome.status == AntStatus::success) {
                graph.deposit(outcome, config.deposit_q);
            }
        }
        if (best && config.elitist_weight > 0.0) {
            graph.deposit(*best, config.elitist_weight * config.deposit_q);
        }

        result.successes += stats.successes;
        if (best) {
            stats.best_steps = best->derivation.size();
        }
        stats.pheromone = graph.summary();
        result.stats.push_back(stats);
        result.iterations_run = iteration + 1;
        if (observer) {
            observer(iteration, graph);
        }

        stalled = improved ? 0 : stalled + 1;
        if (config.stall_limit > 0 && stalled >= config.stall_limit) {
            break;
        }
    }

    if (best) {
        result.accepted = true;
        result.best_steps = best->derivation.size();
        result.best_hops = best->hops;
        result.best_derivation = std::move(best->derivation);
    }
    return result;
}

}  // namespace antparse
