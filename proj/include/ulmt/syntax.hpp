#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ulmt/error.hpp"

namespace ulmt {

/**
 * Predicate and function symbols with their arities. Nullary functions are
 * constants, nullary predicates are propositional atoms. Both maps are ordered
 * by name, which fixes the canonical order used by every enumeration.
 */
struct Signature {
  std::map<std::string, int> predicates;
  std::map<std::string, int> functions;

  void add_predicate(const std::string& name, int arity) { add(predicates, "predicate", name, arity); }
  void add_function(const std::string& name, int arity) { add(functions, "function", name, arity); }

  bool has_constant(const std::string& name) const {
    auto it = functions.find(name);
    return it != functions.end() && it->second == 0;
  }

  /// Union of two signatures; a symbol used with two arities is an error.
  void merge(const Signature& other) {
    for (const auto& [name, arity] : other.predicates) add_predicate(name, arity);
    for (const auto& [name, arity] : other.functions) add_function(name, arity);
  }

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  static void add(std::map<std::string, int>& table, const char* what, const std::string& name, int arity) {
    auto [it, inserted] = table.emplace(name, arity);
    if (!inserted && it->second != arity)
      throw error(errc::arity_mismatch, std::string(what) + " '" + name + "' used with arities " +
                                            std::to_string(it->second) + " and " + std::to_string(arity));
  }
};

/// Names of parameter constants: `@e` denotes the domain element named e.
inline bool is_parameter_name(const std::string& name) { return !name.empty() && name.front() == '@'; }
inline std::string parameter_name(const std::string& element) { return "@" + element; }

/// Identifiers starting with u..z read as variables when not declared or bound otherwise.
inline bool looks_like_variable(const std::string& name) {
  return !name.empty() && name.front() >= 'u' && name.front() <= 'z';
}

class Term {
 public:
  enum class Kind { variable, application };

  static Term variable(std::string name) { return Term(Kind::variable, std::move(name), {}); }
  static Term apply(std::string function, std::vector<Term> args = {}) {
    return Term(Kind::application, std::move(function), std::move(args));
  }

  Kind kind() const noexcept { return kind_; }
  bool is_variable() const noexcept { return kind_ == Kind::variable; }
  const std::string& name() const noexcept { return name_; }
  const std::vector<Term>& args() const noexcept { return args_; }

  friend std::strong_ordering operator<=>(const Term& a, const Term& b) {
    if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
    if (auto c = a.name_ <=> b.name_; c != 0) return c;
    if (auto c = a.args_.size() <=> b.args_.size(); c != 0) return c;
    for (std::size_t i = 0; i < a.args_.size(); ++i)
      if (auto c = a.args_[i] <=> b.args_[i]; c != 0) return c;
    return std::strong_ordering::equal;
  }
  friend bool operator==(const Term& a, const Term& b) { return (a <=> b) == 0; }

 private:
  Term(Kind kind, std::string name, std::vector<Term> args)
      : kind_(kind), name_(std::move(name)), args_(std::move(args)) {}

  Kind kind_;
  std::string name_;
  std::vector<Term> args_;
};

enum class TruthConstant { zero, one, bot, top };
enum class Connective { meet, join, conj, implies };  // /\  \/  &  ->
enum class Quantifier { forall, exists };

/**
 * Immutable formula tree with shared subterms. Depth counts connective and
 * quantifier nodes along the longest branch; atoms and truth constants have
 * depth 0. Equality and ordering are structural.
 */
class Formula {
 public:
  enum class Kind { constant, atom, binary, quantified };

  static Formula constant(TruthConstant c) {
    auto node = std::make_shared<Node>();
    node->kind = Kind::constant;
    node->truth = c;
    return Formula(std::move(node));
  }
  static Formula zero() { return constant(TruthConstant::zero); }
  static Formula one() { return constant(TruthConstant::one); }
  static Formula bot() { return constant(TruthConstant::bot); }
  static Formula top() { return constant(TruthConstant::top); }

  static Formula atom(std::string predicate, std::vector<Term> args = {}) {
    auto node = std::make_shared<Node>();
    node->kind = Kind::atom;
    node->name = std::move(predicate);
    node->args = std::move(args);
    return Formula(std::move(node));
  }

  static Formula binary(Connective op, Formula lhs, Formula rhs) {
    auto node = std::make_shared<Node>();
    node->kind = Kind::binary;
    node->connective = op;
    node->depth = 1 + std::max(lhs.depth(), rhs.depth());
    node->lhs = std::move(lhs.node_);
    node->rhs = std::move(rhs.node_);
    return Formula(std::move(node));
  }
  static Formula meet(Formula a, Formula b) { return binary(Connective::meet, std::move(a), std::move(b)); }
  static Formula join(Formula a, Formula b) { return binary(Connective::join, std::move(a), std::move(b)); }
  static Formula conj(Formula a, Formula b) { return binary(Connective::conj, std::move(a), std::move(b)); }
  static Formula implies(Formula a, Formula b) { return binary(Connective::implies, std::move(a), std::move(b)); }

  static Formula quantified(Quantifier q, std::string variable, Formula body) {
    auto node = std::make_shared<Node>();
    node->kind = Kind::quantified;
    node->quantifier = q;
    node->name = std::move(variable);
    node->depth = 1 + body.depth();
    node->lhs = std::move(body.node_);
    return Formula(std::move(node));
  }
  static Formula forall(std::string v, Formula body) { return quantified(Quantifier::forall, std::move(v), std::move(body)); }
  static Formula exists(std::string v, Formula body) { return quantified(Quantifier::exists, std::move(v), std::move(body)); }

  Kind kind() const noexcept { return node_->kind; }
  int depth() const noexcept { return node_->depth; }
  TruthConstant truth_constant() const noexcept { return node_->truth; }
  /// Predicate name for atoms, bound variable for quantified formulas.
  const std::string& name() const noexcept { return node_->name; }
  const std::vector<Term>& args() const noexcept { return node_->args; }
  Connective connective() const noexcept { return node_->connective; }
  Quantifier quantifier() const noexcept { return node_->quantifier; }
  Formula lhs() const { return Formula(node_->lhs); }
  Formula rhs() const { return Formula(node_->rhs); }
  Formula body() const { return Formula(node_->lhs); }

  bool is_quantified() const noexcept { return kind() == Kind::quantified; }

  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b) { return compare(*a.node_, *b.node_); }
  friend bool operator==(const Formula& a, const Formula& b) { return (a <=> b) == 0; }

 private:
  struct Node {
    Kind kind = Kind::constant;
    int depth = 0;
    TruthConstant truth = TruthConstant::one;
    std::string name;
    std::vector<Term> args;
    Connective connective = Connective::meet;
    Quantifier quantifier = Quantifier::forall;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
  };

  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  static std::strong_ordering compare(const Node& a, const Node& b) {
    if (&a == &b) return std::strong_ordering::equal;
    if (auto c = a.kind <=> b.kind; c != 0) return c;
    switch (a.kind) {
      case Kind::constant:
        return a.truth <=> b.truth;
      case Kind::atom: {
        if (auto c = a.name <=> b.name; c != 0) return c;
        if (auto c = a.args.size() <=> b.args.size(); c != 0) return c;
        for (std::size_t i = 0; i < a.args.size(); ++i)
          if (auto c = a.args[i] <=> b.args[i]; c != 0) return c;
        return std::strong_ordering::equal;
      }
      case Kind::binary: {
        if (auto c = a.connective <=> b.connective; c != 0) return c;
        if (auto c = compare(*a.lhs, *b.lhs); c != 0) return c;
        return compare(*a.rhs, *b.rhs);
      }
      case Kind::quantified: {
        if (auto c = a.quantifier <=> b.quantifier; c != 0) return c;
        if (auto c = a.name <=> b.name; c != 0) return c;
        return compare(*a.lhs, *b.lhs);
      }
    }
    return std::strong_ordering::equal;
  }

  std::shared_ptr<const Node> node_;
};

// ---------------------------------------------------------------------------
// Printing

inline void print_term(std::ostream& out, const Term& t) {
  out << t.name();
  if (!t.is_variable() && !t.args().empty()) {
    out << '(';
    for (std::size_t i = 0; i < t.args().size(); ++i) {
      if (i) out << ", ";
      print_term(out, t.args()[i]);
    }
    out << ')';
  }
}

namespace detail {

// Binding strength; higher binds tighter. Quantifiers extend as far right as
// possible, so they are parenthesised whenever they occur as an operand.
inline int precedence(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::quantified: return 0;
    case Formula::Kind::binary:
      switch (f.connective()) {
        case Connective::implies: return 1;
        case Connective::join: return 2;
        case Connective::meet: return 3;
        case Connective::conj: return 4;
      }
      break;
    default: break;
  }
  return 5;
}

inline const char* connective_symbol(Connective c) {
  switch (c) {
    case Connective::meet: return "/\\";
    case Connective::join: return "\\/";
    case Connective::conj: return "&";
    case Connective::implies: return "->";
  }
  return "?";
}

}  // namespace detail

inline void print_formula(std::ostream& out, const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::constant:
      switch (f.truth_constant()) {
        case TruthConstant::zero: out << '0'; break;
        case TruthConstant::one: out << '1'; break;
        case TruthConstant::bot: out << "bot"; break;
        case TruthConstant::top: out << "top"; break;
      }
      return;
    case Formula::Kind::atom:
      out << f.name();
      if (!f.args().empty()) {
        out << '(';
        for (std::size_t i = 0; i < f.args().size(); ++i) {
          if (i) out << ", ";
          print_term(out, f.args()[i]);
        }
        out << ')';
      }
      return;
    case Formula::Kind::binary: {
      const int p = detail::precedence(f);
      const bool right_assoc = f.connective() == Connective::implies;
      const Formula lhs = f.lhs();
      const Formula rhs = f.rhs();
      const int lp = detail::precedence(lhs);
      const int rp = detail::precedence(rhs);
      const bool wrap_l = lp == 0 || (right_assoc ? lp <= p : lp < p);
      const bool wrap_r = rp == 0 || (right_assoc ? rp < p : rp <= p);
      if (wrap_l) out << '(';
      print_formula(out, lhs);
      if (wrap_l) out << ')';
      out << ' ' << detail::connective_symbol(f.connective()) << ' ';
      if (wrap_r) out << '(';
      print_formula(out, rhs);
      if (wrap_r) out << ')';
      return;
    }
    case Formula::Kind::quantified:
      out << (f.quantifier() == Quantifier::forall ? "forall " : "exists ") << f.name() << ". ";
      print_formula(out, f.body());
      return;
  }
}

inline std::string to_string(const Term& t) {
  std::ostringstream out;
  print_term(out, t);
  return out.str();
}

inline std::string to_string(const Formula& f) {
  std::ostringstream out;
  print_formula(out, f);
  return out.str();
}

inline std::ostream& operator<<(std::ostream& out, const Formula& f) {
  print_formula(out, f);
  return out;
}

inline std::ostream& operator<<(std::ostream& out, const Term& t) {
  print_term(out, t);
  return out;
}

// ---------------------------------------------------------------------------
// Variables, symbols, substitution

inline void collect_variables(const Term& t, std::set<std::string>& out) {
  if (t.is_variable()) {
    out.insert(t.name());
    return;
  }
  for (const auto& a : t.args()) collect_variables(a, out);
}

inline std::set<std::string> free_variables(const Term& t) {
  std::set<std::string> out;
  collect_variables(t, out);
  return out;
}

inline std::set<std::string> free_variables(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::constant: return {};
    case Formula::Kind::atom: {
      std::set<std::string> out;
      for (const auto& t : f.args()) collect_variables(t, out);
      return out;
    }
    case Formula::Kind::binary: {
      auto out = free_variables(f.lhs());
      out.merge(free_variables(f.rhs()));
      return out;
    }
    case Formula::Kind::quantified: {
      auto out = free_variables(f.body());
      out.erase(f.name());
      return out;
    }
  }
  return {};
}

inline bool is_sentence(const Formula& f) { return free_variables(f).empty(); }

inline void collect_symbols(const Term& t, Signature& sig) {
  if (t.is_variable()) return;
  sig.add_function(t.name(), static_cast<int>(t.args().size()));
  for (const auto& a : t.args()) collect_symbols(a, sig);
}

/// Adds every predicate and function symbol of `f` (parameter constants included) to `sig`.
inline void collect_symbols(const Formula& f, Signature& sig) {
  switch (f.kind()) {
    case Formula::Kind::constant: return;
    case Formula::Kind::atom:
      sig.add_predicate(f.name(), static_cast<int>(f.args().size()));
      for (const auto& t : f.args()) collect_symbols(t, sig);
      return;
    case Formula::Kind::binary:
      collect_symbols(f.lhs(), sig);
      collect_symbols(f.rhs(), sig);
      return;
    case Formula::Kind::quantified:
      collect_symbols(f.body(), sig);
      return;
  }
}

template <class Range>
Signature signature_of(const Range& formulas) {
  Signature sig;
  for (const Formula& f : formulas) collect_symbols(f, sig);
  return sig;
}

inline bool mentions_constant(const Term& t, const std::string& name) {
  if (t.is_variable()) return false;
  if (t.name() == name && t.args().empty()) return true;
  for (const auto& a : t.args())
    if (mentions_constant(a, name)) return true;
  return false;
}

inline bool mentions_constant(const Formula& f, const std::string& name) {
  switch (f.kind()) {
    case Formula::Kind::constant: return false;
    case Formula::Kind::atom:
      for (const auto& t : f.args())
        if (mentions_constant(t, name)) return true;
      return false;
    case Formula::Kind::binary: return mentions_constant(f.lhs(), name) || mentions_constant(f.rhs(), name);
    case Formula::Kind::quantified: return mentions_constant(f.body(), name);
  }
  return false;
}

inline Term substitute(const Term& t, const std::string& var, const Term& replacement) {
  if (t.is_variable()) return t.name() == var ? replacement : t;
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const auto& a : t.args()) args.push_back(substitute(a, var, replacement));
  return Term::apply(t.name(), std::move(args));
}

/// Capture-avoiding substitution of `replacement` for the free occurrences of `var`.
/// A binder that would capture a variable of `replacement` is renamed by priming.
inline Formula substitute(const Formula& f, const std::string& var, const Term& replacement) {
  switch (f.kind()) {
    case Formula::Kind::constant: return f;
    case Formula::Kind::atom: {
      std::vector<Term> args;
      args.reserve(f.args().size());
      for (const auto& t : f.args()) args.push_back(substitute(t, var, replacement));
      return Formula::atom(f.name(), std::move(args));
    }
    case Formula::Kind::binary:
      return Formula::binary(f.connective(), substitute(f.lhs(), var, replacement),
                             substitute(f.rhs(), var, replacement));
    case Formula::Kind::quantified: {
      const std::string& bound = f.name();
      if (bound == var) return f;
      const Formula body = f.body();
      const auto body_free = free_variables(body);
      if (!body_free.contains(var)) return f;
      const auto incoming = free_variables(replacement);
      if (!incoming.contains(bound))
        return Formula::quantified(f.quantifier(), bound, substitute(body, var, replacement));
      std::string fresh = bound + "'";
      while (incoming.contains(fresh) || body_free.contains(fresh) || fresh == var) fresh += "'";
      const Formula renamed = substitute(body, bound, Term::variable(fresh));
      return Formula::quantified(f.quantifier(), fresh, substitute(renamed, var, replacement));
    }
  }
  return f;
}

/// Left fold of `\/` over `formulas` in canonical (sorted, deduplicated) order; the empty join is bot.
inline Formula big_join(std::vector<Formula> formulas) {
  if (formulas.empty()) return Formula::bot();
  std::sort(formulas.begin(), formulas.end());
  formulas.erase(std::unique(formulas.begin(), formulas.end()), formulas.end());
  Formula acc = formulas.front();
  for (std::size_t i = 1; i < formulas.size(); ++i) acc = Formula::join(acc, formulas[i]);
  return acc;
}

}  // namespace ulmt
