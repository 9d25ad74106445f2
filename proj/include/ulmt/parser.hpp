#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "ulmt/syntax.hpp"

namespace ulmt {

// Grammar, loosest first:
//   formula  := disj ( '->' formula )?                 right associative
//   disj     := meet ( '\/' meet )*                    left associative
//   meet     := fusion ( '/\' fusion )*
//   fusion   := unary ( '&' unary )*
//   unary    := ('forall' | 'exists') ident '.' formula | '(' formula ')'
//             | '0' | '1' | 'bot' | 'top' | ident ( '(' term (',' term)* ')' )?
//   term     := '@' ident | ident ( '(' term (',' term)* ')' )?
//
// A bare identifier in term position is a variable when it is bound by an
// enclosing quantifier, a constant when the signature declares it as one, and
// otherwise a variable if it starts with u..z.

namespace detail {

class FormulaParser {
 public:
  FormulaParser(std::string_view text, Signature& sig, bool extend) : text_(text), sig_(sig), extend_(extend) {}

  Formula parse() {
    Formula f = parse_implication();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw error(errc::syntax_error, "at offset " + std::to_string(pos_) + ": " + what, pos_);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(std::string_view token) {
    skip_space();
    if (text_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view token) {
    if (!accept(token)) fail("expected '" + std::string(token) + "'");
  }

  static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

  bool at_identifier() {
    skip_space();
    return pos_ < text_.size() && ident_start(text_[pos_]);
  }

  std::string identifier() {
    skip_space();
    if (pos_ >= text_.size() || !ident_start(text_[pos_])) fail("expected identifier");
    const std::size_t start = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  // Peeks a whole keyword so that e.g. `topic` is not read as `top`.
  bool accept_keyword(std::string_view word) {
    skip_space();
    if (text_.substr(pos_, word.size()) != word) return false;
    const std::size_t end = pos_ + word.size();
    if (end < text_.size() && ident_char(text_[end])) return false;
    pos_ = end;
    return true;
  }

  Formula parse_implication() {
    Formula lhs = parse_join();
    if (accept("->")) return Formula::implies(std::move(lhs), parse_implication());
    return lhs;
  }

  Formula parse_join() {
    Formula acc = parse_meet();
    while (accept("\\/")) acc = Formula::join(std::move(acc), parse_meet());
    return acc;
  }

  Formula parse_meet() {
    Formula acc = parse_fusion();
    while (accept("/\\")) acc = Formula::meet(std::move(acc), parse_fusion());
    return acc;
  }

  Formula parse_fusion() {
    Formula acc = parse_unary();
    while (accept("&")) acc = Formula::conj(std::move(acc), parse_unary());
    return acc;
  }

  Formula parse_unary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    for (auto [word, q] : {std::pair{"forall", Quantifier::forall}, std::pair{"exists", Quantifier::exists}}) {
      if (accept_keyword(word)) {
        std::string var = identifier();
        expect(".");
        bound_.push_back(var);
        Formula body = parse_implication();
        bound_.pop_back();
        return Formula::quantified(q, std::move(var), std::move(body));
      }
    }
    if (accept("(")) {
      Formula inner = parse_implication();
      expect(")");
      return inner;
    }
    const char c = text_[pos_];
    if (c == '0' || c == '1') {
      ++pos_;
      if (pos_ < text_.size() && ident_char(text_[pos_])) fail("unexpected character after truth constant");
      return c == '0' ? Formula::zero() : Formula::one();
    }
    if (accept_keyword("bot")) return Formula::bot();
    if (accept_keyword("top")) return Formula::top();
    if (!at_identifier()) fail("expected formula");
    const std::size_t at = pos_;
    std::string name = identifier();
    if (name == "forall" || name == "exists") fail("quantifier needs a variable and '.'");
    std::vector<Term> args;
    if (accept("(")) args = parse_arguments();
    declare_predicate(name, static_cast<int>(args.size()), at);
    return Formula::atom(std::move(name), std::move(args));
  }

  std::vector<Term> parse_arguments() {
    std::vector<Term> args;
    args.push_back(parse_term());
    while (accept(",")) args.push_back(parse_term());
    expect(")");
    return args;
  }

  Term parse_term() {
    skip_space();
    if (accept("@")) {
      if (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) fail("expected element name after '@'");
      return Term::apply(parameter_name(identifier()));
    }
    const std::size_t at = pos_;
    std::string name = identifier();
    if (accept("(")) {
      std::vector<Term> args = parse_arguments();
      declare_function(name, static_cast<int>(args.size()), at);
      return Term::apply(std::move(name), std::move(args));
    }
    if (std::find(bound_.begin(), bound_.end(), name) != bound_.end()) return Term::variable(std::move(name));
    auto it = sig_.functions.find(name);
    if (it != sig_.functions.end()) {
      if (it->second != 0) arity_error("function", name, it->second, 0, at);
      return Term::apply(std::move(name));
    }
    if (looks_like_variable(name)) return Term::variable(std::move(name));
    declare_function(name, 0, at);
    return Term::apply(std::move(name));
  }

  [[noreturn]] void arity_error(const char* what, const std::string& name, int expected, int got, std::size_t at) const {
    throw error(errc::arity_mismatch,
                "at offset " + std::to_string(at) + ": " + what + " '" + name + "' has arity " +
                    std::to_string(expected) + ", used with " + std::to_string(got),
                at);
  }

  void declare(std::map<std::string, int>& table, const char* what, const std::string& name, int arity, std::size_t at) {
    auto it = table.find(name);
    if (it == table.end()) {
      if (!extend_)
        throw error(errc::unknown_symbol, "at offset " + std::to_string(at) + ": unknown " + what + " '" + name + "'", at);
      table.emplace(name, arity);
      return;
    }
    if (it->second != arity) arity_error(what, name, it->second, arity, at);
  }

  void declare_predicate(const std::string& name, int arity, std::size_t at) {
    declare(sig_.predicates, "predicate", name, arity, at);
  }
  void declare_function(const std::string& name, int arity, std::size_t at) {
    declare(sig_.functions, "function", name, arity, at);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Signature& sig_;
  bool extend_;
  std::vector<std::string> bound_;
};

}  // namespace detail

/// Parses against a fixed signature; undeclared symbols are errors.
inline Formula parse_formula(std::string_view text, const Signature& sig) {
  Signature copy = sig;
  return detail::FormulaParser(text, copy, false).parse();
}

/// Parses and declares every new predicate and function symbol in `sig`.
inline Formula parse_formula_extending(std::string_view text, Signature& sig) {
  return detail::FormulaParser(text, sig, true).parse();
}

/// Splits a comma-separated formula list at top level (commas inside parentheses stay).
inline std::vector<std::string> split_formula_list(std::string_view text) {
  std::vector<std::string> parts;
  std::string current;
  int depth = 0;
  for (char c : text) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      parts.push_back(current);
      current.clear();
      continue;
    }
    current.push_back(c);
  }
  parts.push_back(current);
  std::vector<std::string> out;
  for (auto& p : parts) {
    const auto first = p.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    out.push_back(p.substr(first, p.find_last_not_of(" \t") - first + 1));
  }
  return out;
}

}  // namespace ulmt
