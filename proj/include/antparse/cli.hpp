#pragma once

#include "antparse/colony.hpp"
#include "antparse/grammar.hpp"
#include "antparse/oracle.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace antparse {

/// Process exit codes of the antparse tool.
enum class ExitCode : int {
    accepted = 0,
    rejected = 1,
    usage = 2,
    budget = 3,
};

using Json = nlohmann::ordered_json;

[[nodiscard]] auto derivation_json(const Grammar& grammar, const Derivation& derivation) -> Json;

[[nodiscard]] auto config_json(const ColonyConfig& config, std::uint64_t max_hops) -> Json;

/// Machine-readable report of one colony run.
[[nodiscard]] auto trace_record(const Grammar& grammar, const SententialForm& omega,
                                const ColonyConfig& config, const ParseResult& result,
                                bool include_iterations) -> Json;

/// Reads the derivation of a trace record back into rewrite-module values.
[[nodiscard]] auto derivation_from_json(const Grammar& grammar, const Json& steps) -> Derivation;

/// Entry point of the command-line tool. args excludes the program name.
[[nodiscard]] auto run_cli(const std::vector<std::string>& args, std::ostream& out,
                           std::ostream& err) -> int;

}  // namespace antparse
