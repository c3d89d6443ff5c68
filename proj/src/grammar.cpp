#include "antparse/grammar.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace antparse {

namespace {

constexpr auto whitespace = std::string_view {" \t\r\n\f\v"};
constexpr auto arrow = std::string_view {"->"};
constexpr auto start_keyword = std::string_view {"start:"};

auto trim(std::string_view text) -> std::string_view {
    const auto first = text.find_first_not_of(whitespace);
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = text.find_last_not_of(whitespace);
    return text.substr(first, last - first + 1);
}

auto split_tokens(std::string_view text) -> std::vector<std::string_view> {
    auto tokens = std::vector<std::string_view> {};
    auto pos = text.find_first_not_of(whitespace);
    while (pos != std::string_view::npos) {
        const auto end = text.find_first_of(whitespace, pos);
        tokens.push_back(text.substr(pos, end == std::string_view::npos ? end : end - pos));
        pos = end == std::string_view::npos ? end : text.find_first_not_of(whitespace, end);
    }
    return tokens;
}

// Length of the UTF-8 sequence introduced by a lead byte. Stray
// continuation bytes count as single units.
auto utf8_length(unsigned char lead) -> std::size_t {
    if (lead >= 0xf0 && lead < 0xf8) {
        return 4;
    }
    if (lead >= 0xe0) {
        return lead < 0xf0 ? 3 : 1;
    }
    if (lead >= 0xc0) {
        return 2;
    }
    return 1;
}

struct RawProduction {
    std::size_t line;
    std::string_view lhs;
    std::vector<std::string_view> rhs;
};

}  // namespace

GrammarError::GrammarError(std::size_t line, const std::string& message)
    : std::runtime_error {line == 0 ? message : "line " + std::to_string(line) + ": " + message},
      line_ {line},
      detail_ {message} {}

GrammarError::GrammarError(const std::string& source, std::size_t line,
                           const std::string& message)
    : std::runtime_error {line == 0 ? source + ": " + message
                                    : source + ":" + std::to_string(line) + ": " + message},
      line_ {line},
      detail_ {message} {}

auto Grammar::production(std::size_t index) const -> const Production& {
    if (index >= productions_.size()) {
        throw std::out_of_range {"production index " + std::to_string(index) + " out of range"};
    }
    return productions_[index];
}

auto Grammar::name(SymbolId id) const -> const std::string& { return names_.at(id.value); }

auto Grammar::kind(SymbolId id) const -> SymbolKind { return kinds_.at(id.value); }

auto Grammar::find(std::string_view name) const -> std::optional<SymbolId> {
    const auto it = ids_.find(std::string {name});
    if (it == ids_.end()) {
        return std::nullopt;
    }
    return it->second;
}

auto Grammar::symbol(std::string_view name) const -> SymbolId {
    if (const auto id = find(name)) {
        return *id;
    }
    throw InputError {"unknown symbol \"" + std::string {name} + "\""};
}

auto Grammar::terminals() const -> std::vector<SymbolId> {
    auto result = std::vector<SymbolId> {};
    for (auto i = std::uint32_t {0}; i < names_.size(); ++i) {
        if (kinds_[i] == SymbolKind::terminal) {
            result.push_back(SymbolId {i});
        }
    }
    return result;
}

auto Grammar::nonterminals() const -> std::vector<SymbolId> {
    auto result = std::vector<SymbolId> {};
    for (auto i = std::uint32_t {0}; i < names_.size(); ++i) {
        if (kinds_[i] == SymbolKind::nonterminal) {
            result.push_back(SymbolId {i});
        }
    }
    return result;
}

auto Grammar::render(std::span<const SymbolId> symbols) const -> std::string {
    auto out = std::string {};
    for (const auto symbol : symbols) {
        if (!out.empty()) {
            out += ' ';
        }
        out += name(symbol);
    }
    return out;
}

auto Grammar::render(const Production& production) const -> std::string {
    return name(production.lhs) + " -> " + render(production.rhs);
}

auto Grammar::form(std::initializer_list<std::string_view> names) const -> SententialForm {
    auto symbols = std::vector<SymbolId> {};
    symbols.reserve(names.size());
    for (const auto name : names) {
        symbols.push_back(symbol(name));
    }
    return SententialForm {std::move(symbols)};
}

auto Grammar::to_text() const -> std::string {
    auto out = "start: " + name(start_) + '\n';
    for (const auto& production : productions_) {
        out += render(production);
        out += '\n';
    }
    return out;
}

auto Grammar::intern(std::string_view name) -> SymbolId {
    const auto key = std::string {name};
    if (const auto it = ids_.find(key); it != ids_.end()) {
        return it->second;
    }
    const auto id = SymbolId {static_cast<std::uint32_t>(names_.size())};
    names_.push_back(key);
    kinds_.push_back(SymbolKind::terminal);
    ids_.emplace(key, id);
    return id;
}

auto parse_grammar(std::string_view text) -> Grammar {
    auto start_name = std::optional<std::string_view> {};
    auto start_line = std::size_t {0};
    auto raw = std::vector<RawProduction> {};

    auto line_number = std::size_t {0};
    auto rest = text;
    while (!rest.empty()) {
        const auto newline = rest.find('\n');
        const auto line = trim(rest.substr(0, newline));
        rest = newline == std::string_view::npos ? std::string_view {} : rest.substr(newline + 1);
        ++line_number;

        if (line.empty() || line.front() == '#') {
            continue;
        }

        if (const auto split = line.find(arrow); split != std::string_view::npos) {
            const auto lhs_tokens = split_tokens(line.substr(0, split));
            if (lhs_tokens.empty()) {
                throw GrammarError {line_number, "blank production left-hand side"};
            }
            if (lhs_tokens.size() > 1) {
                throw GrammarError {line_number, "left-hand side must be a single symbol, got \"" +
                                                     std::string {trim(line.substr(0, split))} +
                                                     "\""};
            }
            auto rhs = split_tokens(line.substr(split + arrow.size()));
            if (rhs.empty()) {
                throw GrammarError {line_number, "empty right-hand side for \"" +
                                                     std::string {lhs_tokens.front()} +
                                                     "\" (epsilon productions are not supported)"};
            }
            for (const auto token : rhs) {
                if (token.find(arrow) != std::string_view::npos) {
                    throw GrammarError {line_number, "unexpected \"->\" in right-hand side"};
                }
            }
            raw.push_back(RawProduction {line_number, lhs_tokens.front(), std::move(rhs)});
            continue;
        }

        if (line.starts_with(start_keyword)) {
            const auto tokens = split_tokens(line.substr(start_keyword.size()));
            if (tokens.size() != 1) {
                throw GrammarError {line_number, "start declaration needs exactly one symbol"};
            }
            if (start_name) {
                throw GrammarError {line_number, "duplicate start declaration (first on line " +
                                                     std::to_string(start_line) + ")"};
            }
            start_name = tokens.front();
            start_line = line_number;
            continue;
        }

        throw GrammarError {line_number, "expected \"start: <symbol>\" or \"<lhs> -> <rhs>\", got \"" +
                                             std::string {line} + "\""};
    }

    if (!start_name) {
        throw GrammarError {0, "missing start declaration (\"start: <symbol>\")"};
    }

    auto grammar = Grammar {};
    grammar.start_ = grammar.intern(*start_name);

    auto lhs_names = std::unordered_set<std::string_view> {};
    for (const auto& production : raw) {
        lhs_names.insert(production.lhs);
    }
    if (!lhs_names.contains(*start_name)) {
        throw GrammarError {start_line, "start symbol \"" + std::string {*start_name} +
                                            "\" has no production"};
    }

    grammar.productions_.reserve(raw.size());
    for (const auto& production : raw) {
        auto parsed = Production {};
        parsed.index = grammar.productions_.size();
        parsed.lhs = grammar.intern(production.lhs);
        parsed.rhs.reserve(production.rhs.size());
        for (const auto token : production.rhs) {
            parsed.rhs.push_back(grammar.intern(token));
        }
        grammar.productions_.push_back(std::move(parsed));
    }

    for (const auto& production : grammar.productions_) {
        grammar.kinds_[production.lhs.value] = SymbolKind::nonterminal;
    }
    grammar.kinds_[grammar.start_.value] = SymbolKind::nonterminal;

    return grammar;
}

auto load_grammar(const std::filesystem::path& path) -> Grammar {
    auto in = std::ifstream {path, std::ios::binary};
    if (!in) {
        throw GrammarError {path.string(), 0, "cannot open grammar file"};
    }
    auto buffer = std::ostringstream {};
    buffer << in.rdbuf();
    try {
        return parse_grammar(buffer.str());
    } catch (const GrammarError& error) {
        throw GrammarError {path.string(), error.line(), error.detail()};
    }
}

auto parse_input(std::string_view text, const Grammar& grammar, InputMode mode)
    -> SententialForm {
    auto pieces = std::vector<std::string_view> {};
    if (mode == InputMode::tokens) {
        pieces = split_tokens(text);
    } else {
        auto pos = std::size_t {0};
        while (pos < text.size()) {
            const auto length =
                std::min(utf8_length(static_cast<unsigned char>(text[pos])), text.size() - pos);
            const auto piece = text.substr(pos, length);
            if (whitespace.find(piece.front()) == std::string_view::npos) {
                pieces.push_back(piece);
            }
            pos += length;
        }
    }

    if (pieces.empty()) {
        throw InputError {"empty input"};
    }

    auto symbols = std::vector<SymbolId> {};
    symbols.reserve(pieces.size());
    for (const auto piece : pieces) {
        symbols.push_back(grammar.symbol(piece));
    }
    return SententialForm {std::move(symbols)};
}

}  // namespace antparse
