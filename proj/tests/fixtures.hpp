#pragma once

#include "antparse/grammar.hpp"

#include <string>

namespace antparse::testing {

inline const auto paper_grammar_text = std::string {
    "start: S\n"
    "S -> a A c B e\n"
    "A -> A b\n"
    "A -> e\n"
    "A -> b\n"
    "B -> B d c\n"
    "B -> d\n"};

inline auto paper_grammar() -> Grammar { return parse_grammar(paper_grammar_text); }

inline auto fixture_path(const std::string& name) -> std::string {
    return std::string {ANTPARSE_SOURCE_DIR} + "/grammars/" + name;
}

}  // namespace antparse::testing
