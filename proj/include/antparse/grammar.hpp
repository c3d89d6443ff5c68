#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace antparse {

/// Index of a symbol in the grammar's symbol table.
struct SymbolId {
    std::uint32_t value {};

    auto operator<=>(const SymbolId&) const = default;
};

enum class SymbolKind : std::uint8_t { terminal, nonterminal };

/// A sequence of grammar symbols: the input string and every form an ant
/// carries while reducing it.
class SententialForm {
   public:
    SententialForm() = default;
    explicit SententialForm(std::vector<SymbolId> symbols) : symbols_ {std::move(symbols)} {}
    SententialForm(std::initializer_list<SymbolId> symbols) : symbols_ {symbols} {}

    [[nodiscard]] auto size() const noexcept -> std::size_t { return symbols_.size(); }
    [[nodiscard]] auto empty() const noexcept -> bool { return symbols_.empty(); }
    [[nodiscard]] auto operator[](std::size_t i) const -> SymbolId { return symbols_[i]; }
    [[nodiscard]] auto symbols() const noexcept -> std::span<const SymbolId> { return symbols_; }
    [[nodiscard]] auto begin() const noexcept { return symbols_.begin(); }
    [[nodiscard]] auto end() const noexcept { return symbols_.end(); }

    auto operator<=>(const SententialForm&) const = default;

   private:
    std::vector<SymbolId> symbols_;
};

struct Production {
    std::size_t index {};
    SymbolId lhs {};
    std::vector<SymbolId> rhs;

    auto operator==(const Production&) const -> bool = default;
};

/// Error while reading a grammar file. line() is 1-based, 0 when the
/// problem is not tied to a single line.
class GrammarError : public std::runtime_error {
   public:
    GrammarError(std::size_t line, const std::string& message);
    GrammarError(const std::string& source, std::size_t line, const std::string& message);

    [[nodiscard]] auto line() const noexcept -> std::size_t { return line_; }
    [[nodiscard]] auto detail() const noexcept -> const std::string& { return detail_; }

   private:
    std::size_t line_;
    std::string detail_;
};

/// Error while reading an input string.
class InputError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// A context-free grammar (T, N, S, P).
///
/// Symbols are interned in order of first appearance, the start symbol
/// first. Nonterminals are the symbols that occur as some production's
/// left-hand side; every other symbol is a terminal. Duplicate and
/// ambiguous productions are kept as they are.
class Grammar {
   public:
    [[nodiscard]] auto start() const noexcept -> SymbolId { return start_; }
    [[nodiscard]] auto productions() const noexcept -> std::span<const Production> {
        return productions_;
    }
    [[nodiscard]] auto production(std::size_t index) const -> const Production&;

    [[nodiscard]] auto symbol_count() const noexcept -> std::size_t { return names_.size(); }
    [[nodiscard]] auto name(SymbolId id) const -> const std::string&;
    [[nodiscard]] auto kind(SymbolId id) const -> SymbolKind;
    [[nodiscard]] auto is_terminal(SymbolId id) const -> bool {
        return kind(id) == SymbolKind::terminal;
    }
    [[nodiscard]] auto find(std::string_view name) const -> std::optional<SymbolId>;

    /// Lookup that throws InputError for names outside N and T.
    [[nodiscard]] auto symbol(std::string_view name) const -> SymbolId;

    [[nodiscard]] auto terminals() const -> std::vector<SymbolId>;
    [[nodiscard]] auto nonterminals() const -> std::vector<SymbolId>;

    /// Space-joined symbol names.
    [[nodiscard]] auto render(std::span<const SymbolId> symbols) const -> std::string;
    [[nodiscard]] auto render(const SententialForm& form) const -> std::string {
        return render(form.symbols());
    }
    [[nodiscard]] auto render(const Production& production) const -> std::string;

    /// Builds a form from symbol names.
    [[nodiscard]] auto form(std::initializer_list<std::string_view> names) const
        -> SententialForm;

    /// Serializes back into the grammar file format.
    [[nodiscard]] auto to_text() const -> std::string;

    auto operator==(const Grammar&) const -> bool = default;

    friend auto parse_grammar(std::string_view text) -> Grammar;

   private:
    Grammar() = default;

    auto intern(std::string_view name) -> SymbolId;

    std::vector<std::string> names_;
    std::vector<SymbolKind> kinds_;
    std::unordered_map<std::string, SymbolId> ids_;
    SymbolId start_ {};
    std::vector<Production> productions_;
};

/// Parses the line-oriented grammar format:
///
///     # comment
///     start: S
///     S -> a A c B e
///
/// Throws GrammarError naming the offending line.
[[nodiscard]] auto parse_grammar(std::string_view text) -> Grammar;

/// Reads and parses a grammar file. Errors are prefixed with the path.
[[nodiscard]] auto load_grammar(const std::filesystem::path& path) -> Grammar;

enum class InputMode : std::uint8_t {
    tokens,      ///< whitespace-separated symbol names
    characters,  ///< every non-blank character is one symbol
};

/// Splits an input string into symbols of the grammar.
/// Throws InputError on empty input or on an unknown symbol.
[[nodiscard]] auto parse_input(std::string_view text, const Grammar& grammar,
                               InputMode mode = InputMode::tokens) -> SententialForm;

}  // namespace antparse

template <>
struct std::hash<antparse::SententialForm> {
    auto operator()(const antparse::SententialForm& form) const noexcept -> std::size_t {
        auto h = std::uint64_t {0xcbf29ce484222325ULL};
        for (const auto symbol : form) {
            h ^= symbol.value;
            h *= 0x100000001b3ULL;
        }
        return static_cast<std::size_t>(h ^ (h >> 29));
    }
};
