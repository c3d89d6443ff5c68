#include "antparse/cli.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace antparse {

namespace {

auto code(ExitCode exit) -> int { return static_cast<int>(exit); }

struct CommonOptions {
    std::string grammar_path;
    std::string input;
    bool chars = false;
    bool json = false;
};

struct ColonyOptions {
    ColonyConfig config;
    std::uint64_t max_hops = 0;
    bool trace = false;
};

void add_colony_flags(CLI::App& command, ColonyOptions& options) {
    auto& config = options.config;
    command.add_option("--ants", config.n_ants, "ants per iteration")->capture_default_str();
    command.add_option("--iters", config.n_iterations, "iterations")->capture_default_str();
    command.add_option("--q0", config.q0, "roulette/greedy split: q <= q0 samples the roulette")
        ->capture_default_str();
    command.add_option("--alpha", config.alpha, "trail exponent")->capture_default_str();
    command.add_option("--beta", config.beta, "heuristic exponent")->capture_default_str();
    command.add_option("--rho", config.rho, "evaporation rate")->capture_default_str();
    command.add_option("--deposit", config.deposit_q, "deposit numerator Q")
        ->capture_default_str();
    command.add_option("--tau0", config.tau0, "initial trail")->capture_default_str();
    command.add_option("--tau-min", config.tau_min, "trail floor")->capture_default_str();
    command.add_option("--max-hops", options.max_hops,
                       "hop budget per ant (0: 4 * |input| * |rules|)")
        ->capture_default_str();
    command.add_option("--seed", config.seed, "random seed")->capture_default_str();
    command.add_option("--stall", config.stall_limit,
                       "stop after N iterations without improvement (0: never)")
        ->capture_default_str();
    command.add_option("--elitist", config.elitist_weight,
                       "extra deposit on the best walk, in units of Q")
        ->capture_default_str();
    command.add_option("--threads", config.threads, "worker threads per iteration")
        ->capture_default_str();
}

auto finish_config(const ColonyOptions& options) -> ColonyConfig {
    auto config = options.config;
    if (options.max_hops > 0) {
        config.max_hops = options.max_hops;
    }
    config.validate();
    return config;
}

auto read_file(const std::string& path) -> std::string {
    auto in = std::ifstream {path, std::ios::binary};
    if (!in) {
        throw std::runtime_error {path + ": cannot open file"};
    }
    auto buffer = std::ostringstream {};
    buffer << in.rdbuf();
    return buffer.str();
}

auto input_mode(bool chars) -> InputMode {
    return chars ? InputMode::characters : InputMode::tokens;
}

void print_derivation(std::ostream& out, const Grammar& grammar, const Derivation& derivation) {
    auto k = std::size_t {1};
    for (const auto& step : derivation.steps) {
        out << "  " << k++ << ". rule " << step.rule_index + 1 << " ("
            << grammar.render(grammar.production(step.rule_index)) << ") at " << step.position
            << ": " << grammar.render(step.before) << "  =>  " << grammar.render(step.after)
            << '\n';
    }
}

auto cmd_recognize(const CommonOptions& common, const ColonyOptions& options, std::ostream& out,
                   std::ostream& err) -> int {
    const auto config = finish_config(options);
    const auto grammar = load_grammar(common.grammar_path);
    const auto omega = parse_input(common.input, grammar, input_mode(common.chars));
    const auto result = run_colony(grammar, omega, config);

    if (common.json) {
        out << trace_record(grammar, omega, config, result, options.trace).dump() << '\n';
    } else {
        out << "input:      " << grammar.render(omega) << '\n';
        if (result.accepted) {
            out << "accepted:   yes\n";
            out << "steps:      " << *result.best_steps << " (" << *result.best_hops
                << " hops)\n";
        } else {
            out << "accepted:   no (not accepted within budget)\n";
        }
        out << "iterations: " << result.iterations_run
            << ", successful walks: " << result.successes << '\n';
        if (result.best_derivation) {
            out << "derivation:\n";
            print_derivation(out, grammar, *result.best_derivation);
        }
        if (options.trace) {
            out << "trace:\n";
            for (auto i = std::size_t {0}; i < result.stats.size(); ++i) {
                const auto& stats = result.stats[i];
                out << "  iter " << i << ": successes " << stats.successes << ", best "
                    << (stats.best_steps ? std::to_string(*stats.best_steps) : "-")
                    << ", tau min/mean/max " << stats.pheromone.min << '/'
                    << stats.pheromone.mean << '/' << stats.pheromone.max << '\n';
            }
        }
    }
    if (!result.accepted && !common.json) {
        err << "not accepted within budget\n";
    }
    return code(result.accepted ? ExitCode::accepted : ExitCode::rejected);
}

auto cmd_oracle(const CommonOptions& common, std::size_t max_states, std::ostream& out,
                std::ostream& err) -> int {
    const auto grammar = load_grammar(common.grammar_path);
    const auto omega = parse_input(common.input, grammar, input_mode(common.chars));
    auto result = OracleResult {};
    try {
        result = shortest_reduction(grammar, omega, max_states);
    } catch (const OracleBudgetExceeded& error) {
        if (common.json) {
            out << Json {{"input", grammar.render(omega)}, {"error", error.what()}}.dump() << '\n';
        }
        err << "error: " << error.what() << '\n';
        return code(ExitCode::budget);
    }

    if (common.json) {
        auto record = Json {};
        record["input"] = grammar.render(omega);
        record["member"] = result.member;
        record["shortest_steps"] = result.shortest_steps ? Json(*result.shortest_steps) : Json();
        record["states_explored"] = result.states_explored;
        record["witness"] =
            result.witness ? derivation_json(grammar, *result.witness) : Json::array();
        out << record.dump() << '\n';
    } else {
        out << "input:           " << grammar.render(omega) << '\n';
        out << "member:          " << (result.member ? "yes" : "no") << '\n';
        if (result.member) {
            out << "shortest steps:  " << *result.shortest_steps << '\n';
        }
        out << "states explored: " << result.states_explored << '\n';
        if (result.witness && !result.witness->empty()) {
            out << "witness:\n";
            print_derivation(out, grammar, *result.witness);
        }
    }
    return code(result.member ? ExitCode::accepted : ExitCode::rejected);
}

struct BenchInput {
    std::string text;
    std::optional<SententialForm> form;
    std::string error;
    std::optional<OracleResult> oracle;
    std::string oracle_error;
};

struct BenchRun {
    Json line;
    bool accepted {};
    std::optional<std::size_t> steps;
    bool sound = true;
    std::optional<bool> agrees;
    bool optimal = false;
};

auto cmd_bench(const CommonOptions& common, const std::string& inputs_path,
               const ColonyOptions& options, std::size_t n_seeds, std::size_t jobs,
               std::size_t max_states, std::ostream& out, std::ostream& err) -> int {
    const auto config = finish_config(options);
    const auto grammar = load_grammar(common.grammar_path);

    auto inputs = std::vector<BenchInput> {};
    {
        auto stream = std::istringstream {read_file(inputs_path)};
        auto line = std::string {};
        while (std::getline(stream, line)) {
            if (!line.empty() && line.back() == '\r') {
                line.pop_back();
            }
            if (line.find_first_not_of(" \t") == std::string::npos || line.front() == '#') {
                continue;
            }
            inputs.push_back(BenchInput {line, std::nullopt, {}, std::nullopt, {}});
        }
    }
    if (inputs.empty()) {
        err << "error: " << inputs_path << ": no inputs\n";
        return code(ExitCode::usage);
    }

    auto skipped = std::size_t {0};
    for (auto& input : inputs) {
        try {
            input.form = parse_input(input.text, grammar, input_mode(common.chars));
        } catch (const InputError& error) {
            input.error = error.what();
            ++skipped;
            continue;
        }
        try {
            input.oracle = shortest_reduction(grammar, *input.form, max_states);
        } catch (const OracleBudgetExceeded& error) {
            input.oracle_error = error.what();
        }
    }

    // one task per (input, seed); error lines get a single task
    struct Task {
        std::size_t input;
        std::uint64_t seed;
    };
    auto tasks = std::vector<Task> {};
    for (auto i = std::size_t {0}; i < inputs.size(); ++i) {
        if (!inputs[i].form) {
            tasks.push_back(Task {i, 0});
            continue;
        }
        for (auto s = std::size_t {0}; s < n_seeds; ++s) {
            tasks.push_back(Task {i, config.seed + s});
        }
    }

    const auto run_task = [&](const Task& task) -> BenchRun {
        const auto& input = inputs[task.input];
        auto run = BenchRun {};
        if (!input.form) {
            run.line = Json {{"input", input.text}, {"error", input.error}};
            return run;
        }
        auto seeded = config;
        seeded.seed = task.seed;
        seeded.threads = 1;
        const auto started = std::chrono::steady_clock::now();
        const auto result = run_colony(grammar, *input.form, seeded);
        const auto elapsed = std::chrono::duration<double, std::milli>(
                                 std::chrono::steady_clock::now() - started)
                                 .count();
        run.accepted = result.accepted;
        run.steps = result.best_steps;
        if (input.oracle) {
            const auto& oracle = *input.oracle;
            run.agrees = oracle.member == result.accepted;
            if (result.accepted) {
                run.sound = oracle.member && *result.best_steps >= *oracle.shortest_steps;
                run.optimal = oracle.member && *result.best_steps == *oracle.shortest_steps;
            }
        }
        run.line = Json {};
        run.line["input"] = input.text;
        run.line["seed"] = task.seed;
        run.line["accepted"] = result.accepted;
        run.line["steps"] = result.best_steps ? Json(*result.best_steps) : Json();
        run.line["oracle_member"] = input.oracle ? Json(input.oracle->member) : Json();
        run.line["oracle_steps"] = input.oracle && input.oracle->shortest_steps
                                       ? Json(*input.oracle->shortest_steps)
                                       : Json();
        if (!input.oracle_error.empty()) {
            run.line["oracle_error"] = input.oracle_error;
        }
        run.line["millis"] = elapsed;
        return run;
    };

    const auto started = std::chrono::steady_clock::now();
    auto runs = std::vector<std::optional<BenchRun>>(tasks.size());
    auto mutex = std::mutex {};
    auto ready = std::condition_variable {};
    auto next = std::atomic<std::size_t> {0};
    const auto worker = [&] {
        while (true) {
            const auto t = next.fetch_add(1);
            if (t >= tasks.size()) {
                return;
            }
            auto run = run_task(tasks[t]);
            {
                const auto lock = std::lock_guard {mutex};
                runs[t] = std::move(run);
            }
            ready.notify_all();
        }
    };

    auto workers = std::vector<std::jthread> {};
    for (auto w = std::size_t {0}; w < std::max<std::size_t>(jobs, 1); ++w) {
        workers.emplace_back(worker);
    }

    // lines are streamed in task order as soon as their prefix is complete
    auto n_runs = std::size_t {0};
    auto n_accepted = std::size_t {0};
    auto n_agree = std::size_t {0};
    auto n_compared = std::size_t {0};
    auto n_optimal = std::size_t {0};
    auto n_unsound = std::size_t {0};
    auto histogram = std::map<std::size_t, std::size_t> {};
    for (auto t = std::size_t {0}; t < tasks.size(); ++t) {
        auto lock = std::unique_lock {mutex};
        ready.wait(lock, [&] { return runs[t].has_value(); });
        const auto run = std::move(*runs[t]);
        lock.unlock();

        out << run.line.dump() << '\n' << std::flush;
        if (!inputs[tasks[t].input].form) {
            continue;
        }
        ++n_runs;
        if (run.accepted) {
            ++n_accepted;
            ++histogram[*run.steps];
        }
        if (run.agrees) {
            ++n_compared;
            n_agree += *run.agrees ? 1 : 0;
        }
        n_optimal += run.optimal ? 1 : 0;
        n_unsound += run.sound ? 0 : 1;
    }
    workers.clear();

    auto steps = Json::object();
    for (const auto& [length, count] : histogram) {
        steps[std::to_string(length)] = count;
    }
    auto summary = Json {};
    summary["summary"] = true;
    summary["inputs"] = inputs.size();
    summary["skipped"] = skipped;
    summary["seeds"] = n_seeds;
    summary["runs"] = n_runs;
    summary["accepted"] = n_accepted;
    summary["success_rate"] = n_runs == 0 ? 0.0 : static_cast<double>(n_accepted) / n_runs;
    summary["step_counts"] = steps;
    summary["oracle_agreement"] =
        n_compared == 0 ? Json() : Json(static_cast<double>(n_agree) / n_compared);
    summary["optimal"] = n_optimal;
    summary["soundness_violations"] = n_unsound;
    summary["millis"] = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - started)
                            .count();
    out << summary.dump() << '\n';
    return code(ExitCode::accepted);
}

}  // namespace

auto derivation_json(const Grammar& grammar, const Derivation& derivation) -> Json {
    auto steps = Json::array();
    for (const auto& step : derivation.steps) {
        auto record = Json {};
        record["rule_index"] = step.rule_index;
        record["production"] = grammar.render(grammar.production(step.rule_index));
        record["position"] = step.position;
        record["before"] = grammar.render(step.before);
        record["after"] = grammar.render(step.after);
        steps.push_back(std::move(record));
    }
    return steps;
}

auto config_json(const ColonyConfig& config, std::uint64_t max_hops) -> Json {
    auto record = Json {};
    record["n_ants"] = config.n_ants;
    record["n_iterations"] = config.n_iterations;
    record["q0"] = config.q0;
    record["alpha"] = config.alpha;
    record["beta"] = config.beta;
    record["rho"] = config.rho;
    record["deposit_q"] = config.deposit_q;
    record["tau0"] = config.tau0;
    record["tau_min"] = config.tau_min;
    record["max_hops"] = max_hops;
    record["seed"] = config.seed;
    record["stall_limit"] = config.stall_limit;
    record["elitist_weight"] = config.elitist_weight;
    return record;
}

auto trace_record(const Grammar& grammar, const SententialForm& omega,
                  const ColonyConfig& config, const ParseResult& result, bool include_iterations)
    -> Json {
    auto record = Json {};
    record["input"] = grammar.render(omega);
    record["accepted"] = result.accepted;
    record["derivation"] = result.best_derivation
                               ? derivation_json(grammar, *result.best_derivation)
                               : Json::array();
    record["steps"] = result.best_steps ? Json(*result.best_steps) : Json();
    record["hops"] = result.best_hops ? Json(*result.best_hops) : Json();
    record["iterations_run"] = result.iterations_run;
    record["successes"] = result.successes;
    record["seed"] = config.seed;
    record["config"] = config_json(config, config.hop_budget(grammar, omega));
    if (include_iterations) {
        auto iterations = Json::array();
        for (const auto& stats : result.stats) {
            auto entry = Json {};
            entry["successes"] = stats.successes;
            entry["best_steps"] = stats.best_steps ? Json(*stats.best_steps) : Json();
            entry["tau_min"] = stats.pheromone.min;
            entry["tau_mean"] = stats.pheromone.mean;
            entry["tau_max"] = stats.pheromone.max;
            iterations.push_back(std::move(entry));
        }
        record["iterations"] = std::move(iterations);
    }
    return record;
}

auto derivation_from_json(const Grammar& grammar, const Json& steps) -> Derivation {
    auto derivation = Derivation {};
    for (const auto& step : steps) {
        derivation.steps.push_back(DerivationStep {
            step.at("rule_index").get<std::size_t>(), step.at("position").get<std::size_t>(),
            parse_input(step.at("before").get<std::string>(), grammar),
            parse_input(step.at("after").get<std::string>(), grammar)});
    }
    return derivation;
}

auto run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) -> int {
    auto app = CLI::App {"Ant-colony recognizer for context-free grammars", "antparse"};
    app.require_subcommand(1);

    auto common = CommonOptions {};
    auto colony = ColonyOptions {};
    auto max_states = default_oracle_states;
    auto inputs_path = std::string {};
    auto n_seeds = std::size_t {100};
    auto jobs = std::size_t {1};

    const auto add_grammar = [&](CLI::App& command) {
        command.add_option("--grammar", common.grammar_path, "grammar file")->required();
        command.add_flag("--chars", common.chars, "one symbol per character");
        command.add_flag("--json", common.json, "machine-readable output");
    };

    auto* recognize = app.add_subcommand("recognize", "decide membership with the ant colony");
    add_grammar(*recognize);
    recognize->add_option("--input", common.input, "input string")->required();
    add_colony_flags(*recognize, colony);
    recognize->add_flag("--trace", colony.trace, "per-iteration pheromone summaries");

    auto* oracle = app.add_subcommand("oracle", "exhaustive breadth-first membership check");
    add_grammar(*oracle);
    oracle->add_option("--input", common.input, "input string")->required();
    oracle->add_option("--max-states", max_states, "state ceiling")->capture_default_str();

    auto* bench = app.add_subcommand("bench", "seed sweep over a file of inputs (JSON lines)");
    add_grammar(*bench);
    bench->add_option("--inputs", inputs_path, "file with one input per line")->required();
    bench->add_option("--seeds", n_seeds, "seeds per input, starting at --seed")
        ->capture_default_str();
    bench->add_option("--jobs", jobs, "parallel colony runs")->capture_default_str();
    bench->add_option("--max-states", max_states, "oracle state ceiling")->capture_default_str();
    add_colony_flags(*bench, colony);

    auto argv_storage = std::vector<std::string> {"antparse"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    auto argv = std::vector<const char*> {};
    for (const auto& arg : argv_storage) {
        argv.push_back(arg.c_str());
    }

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        (void)app.exit(e, out, err);
        return code(ExitCode::usage);
    }

    try {
        if (recognize->parsed()) {
            return cmd_recognize(common, colony, out, err);
        }
        if (oracle->parsed()) {
            return cmd_oracle(common, max_states, out, err);
        }
        return cmd_bench(common, inputs_path, colony, n_seeds, jobs, max_states, out, err);
    } catch (const GrammarError& error) {
        err << "error: " << error.what() << '\n';
    } catch (const InputError& error) {
        err << "error: input: " << error.what() << '\n';
    } catch (const std::invalid_argument& error) {
        err << "error: " << error.what() << '\n';
    } catch (const std::runtime_error& error) {
        err << "error: " << error.what() << '\n';
    }
    return code(ExitCode::usage);
}

}  // namespace antparse
