#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ulmt/algebra.hpp"
#include "ulmt/syntax.hpp"

namespace ulmt {

/// An element of a structure's domain, as an index into Structure::domain().
using Element = std::size_t;

struct PredicateTable {
  int arity = 0;
  std::vector<Degree> values;  // indexed by tuple_index()
};

struct FunctionTable {
  int arity = 0;
  std::vector<Element> values;  // indexed by tuple_index()
};

/// Row-major (lexicographic) position of `tuple` among all tuples over a domain of size n.
inline std::size_t tuple_index(std::span<const Element> tuple, std::size_t n) {
  std::size_t idx = 0;
  for (Element e : tuple) idx = idx * n + e;
  return idx;
}

inline std::vector<Element> tuple_at(std::size_t index, int arity, std::size_t n) {
  std::vector<Element> tuple(static_cast<std::size_t>(arity));
  for (int i = arity - 1; i >= 0; --i) {
    tuple[static_cast<std::size_t>(i)] = index % n;
    index /= n;
  }
  return tuple;
}

inline std::size_t tuple_count(int arity, std::size_t n) {
  std::size_t count = 1;
  for (int i = 0; i < arity; ++i) count *= n;
  return count;
}

/**
 * A structure <A, M>: a chain, a non-empty ordered domain of named elements,
 * and total tables for every predicate (into the chain) and function (into the
 * domain). Element names are the identity used when comparing structures.
 */
class Structure {
 public:
  Structure(std::string name, std::shared_ptr<const UlChain> chain, std::vector<std::string> domain)
      : name_(std::move(name)), chain_(std::move(chain)), domain_(std::move(domain)) {
    if (!chain_) throw error(errc::invalid_element, "structure '" + name_ + "' has no chain");
    if (domain_.empty()) throw error(errc::invalid_size, "structure '" + name_ + "' has an empty domain");
    for (std::size_t i = 0; i < domain_.size(); ++i) {
      if (domain_[i].empty()) throw error(errc::invalid_element, "empty element name");
      if (!index_.emplace(domain_[i], i).second)
        throw error(errc::invalid_element, "duplicate element '" + domain_[i] + "'");
    }
  }

  const std::string& name() const noexcept { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }
  const UlChain& chain() const noexcept { return *chain_; }
  const std::shared_ptr<const UlChain>& chain_ptr() const noexcept { return chain_; }
  const std::vector<std::string>& domain() const noexcept { return domain_; }
  std::size_t size() const noexcept { return domain_.size(); }

  std::optional<Element> element(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  Element require_element(const std::string& name) const {
    auto e = element(name);
    if (!e) throw error(errc::invalid_element, "'" + name + "' is not an element of structure '" + name_ + "'");
    return *e;
  }

  const std::map<std::string, PredicateTable>& predicates() const noexcept { return predicates_; }
  const std::map<std::string, FunctionTable>& functions() const noexcept { return functions_; }

  void set_predicate(const std::string& name, int arity, std::vector<Degree> values) {
    if (values.size() != tuple_count(arity, size()))
      throw error(errc::invalid_size, "predicate '" + name + "' table is not total");
    for (Degree v : values)
      if (!chain_->contains(v))
        throw error(errc::invalid_element, "predicate '" + name + "' value " + std::to_string(v) + " outside chain");
    predicates_[name] = PredicateTable{arity, std::move(values)};
  }

  void set_function(const std::string& name, int arity, std::vector<Element> values) {
    if (values.size() != tuple_count(arity, size()))
      throw error(errc::invalid_size, "function '" + name + "' table is not total");
    for (Element v : values)
      if (v >= size()) throw error(errc::invalid_element, "function '" + name + "' value outside domain");
    functions_[name] = FunctionTable{arity, std::move(values)};
  }

  Degree predicate_value(const std::string& name, std::span<const Element> args) const {
    const auto& table = predicate_table(name);
    if (static_cast<int>(args.size()) != table.arity) throw error(errc::arity_mismatch, "predicate '" + name + "'");
    return table.values[tuple_index(args, size())];
  }

  Element function_value(const std::string& name, std::span<const Element> args) const {
    const auto& table = function_table(name);
    if (static_cast<int>(args.size()) != table.arity) throw error(errc::arity_mismatch, "function '" + name + "'");
    return table.values[tuple_index(args, size())];
  }

  const PredicateTable& predicate_table(const std::string& name) const {
    auto it = predicates_.find(name);
    if (it == predicates_.end())
      throw error(errc::unknown_symbol, "predicate '" + name + "' not interpreted in structure '" + name_ + "'");
    return it->second;
  }

  const FunctionTable& function_table(const std::string& name) const {
    auto it = functions_.find(name);
    if (it == functions_.end())
      throw error(errc::unknown_symbol, "function '" + name + "' not interpreted in structure '" + name_ + "'");
    return it->second;
  }

  Signature signature() const {
    Signature sig;
    for (const auto& [name, t] : predicates_) sig.add_predicate(name, t.arity);
    for (const auto& [name, t] : functions_) sig.add_function(name, t.arity);
    return sig;
  }

  /// Same domain (in order), chain tables and symbol tables; names of structure and chain are ignored.
  friend bool operator==(const Structure& a, const Structure& b) {
    if (a.domain_ != b.domain_ || !a.chain_->same_algebra(*b.chain_)) return false;
    if (a.predicates_.size() != b.predicates_.size() || a.functions_.size() != b.functions_.size()) return false;
    for (const auto& [name, t] : a.predicates_) {
      auto it = b.predicates_.find(name);
      if (it == b.predicates_.end() || it->second.arity != t.arity || it->second.values != t.values) return false;
    }
    for (const auto& [name, t] : a.functions_) {
      auto it = b.functions_.find(name);
      if (it == b.functions_.end() || it->second.arity != t.arity || it->second.values != t.values) return false;
    }
    return true;
  }

 private:
  std::string name_;
  std::shared_ptr<const UlChain> chain_;
  std::vector<std::string> domain_;
  std::map<std::string, Element> index_;
  std::map<std::string, PredicateTable> predicates_;
  std::map<std::string, FunctionTable> functions_;
};

/// A finite assignment of domain elements to variables; `updated` is v[x -> a].
class Evaluation {
 public:
  Evaluation() = default;
  Evaluation(std::initializer_list<std::pair<const std::string, Element>> init) : bindings_(init) {}

  void set(const std::string& var, Element e) { bindings_[var] = e; }
  Evaluation updated(const std::string& var, Element e) const {
    Evaluation copy = *this;
    copy.set(var, e);
    return copy;
  }
  std::optional<Element> get(const std::string& var) const {
    auto it = bindings_.find(var);
    if (it == bindings_.end()) return std::nullopt;
    return it->second;
  }
  const std::map<std::string, Element>& bindings() const noexcept { return bindings_; }
  bool empty() const noexcept { return bindings_.empty(); }

  friend bool operator==(const Evaluation&, const Evaluation&) = default;

 private:
  std::map<std::string, Element> bindings_;
};

/**
 * A formula resolved against one structure: symbols are looked up once and
 * variables become slots. Slots 0..k-1 hold the free variables passed at
 * construction, in that order; quantifiers use the slots after them.
 * Evaluation mutates an internal scratch buffer, so an instance must not be
 * shared between threads.
 *
 * Parameter constants `@e` not interpreted by the structure denote the element e.
 */
class CompiledFormula {
 public:
  CompiledFormula(const Structure& s, const Formula& f, std::span<const std::string> free_vars)
      : structure_(&s), chain_(&s.chain()), n_(s.size()) {
    std::vector<std::pair<std::string, int>> scope;
    for (std::size_t i = 0; i < free_vars.size(); ++i) scope.emplace_back(free_vars[i], static_cast<int>(i));
    slots_ = static_cast<int>(free_vars.size());
    root_ = compile(f, scope);
    scratch_.assign(static_cast<std::size_t>(slots_), 0);
  }

  Degree operator()(std::span<const Element> free_values) const {
    std::copy(free_values.begin(), free_values.end(), scratch_.begin());
    return eval(root_);
  }

 private:
  enum class Op { constant, atom, meet, join, conj, implies, forall, exists };
  enum class TermOp { slot, element, apply };

  struct TermNode {
    TermOp op = TermOp::slot;
    int slot = 0;
    Element element = 0;
    const FunctionTable* table = nullptr;
    std::vector<int> args;
  };

  struct Node {
    Op op = Op::constant;
    Degree constant = 0;
    const PredicateTable* table = nullptr;
    std::vector<int> args;  // term nodes
    int lhs = -1;
    int rhs = -1;
    int slot = 0;
  };

  int compile_term(const Term& t, const std::vector<std::pair<std::string, int>>& scope) {
    TermNode node;
    node.op = TermOp::slot;
    if (t.is_variable()) {
      auto it = std::find_if(scope.rbegin(), scope.rend(), [&](const auto& p) { return p.first == t.name(); });
      if (it == scope.rend()) throw error(errc::uncovered_variable, "variable '" + t.name() + "' has no value");
      node.slot = it->second;
    } else {
      auto fit = structure_->functions().find(t.name());
      if (fit != structure_->functions().end()) {
        if (fit->second.arity != static_cast<int>(t.args().size()))
          throw error(errc::arity_mismatch, "function '" + t.name() + "'");
        node.op = TermOp::apply;
        node.table = &fit->second;
        for (const auto& a : t.args()) node.args.push_back(compile_term(a, scope));
      } else if (is_parameter_name(t.name()) && t.args().empty() && structure_->element(t.name().substr(1))) {
        node.op = TermOp::element;
        node.element = *structure_->element(t.name().substr(1));
      } else {
        throw error(errc::unknown_symbol,
                    "function '" + t.name() + "' not interpreted in structure '" + structure_->name() + "'");
      }
    }
    terms_.push_back(std::move(node));
    return static_cast<int>(terms_.size()) - 1;
  }

  int compile(const Formula& f, std::vector<std::pair<std::string, int>>& scope) {
    Node node;
    node.op = Op::constant;
    switch (f.kind()) {
      case Formula::Kind::constant:
        switch (f.truth_constant()) {
          case TruthConstant::zero: node.constant = chain_->zero(); break;
          case TruthConstant::one: node.constant = chain_->one(); break;
          case TruthConstant::bot: node.constant = chain_->bot(); break;
          case TruthConstant::top: node.constant = chain_->top(); break;
        }
        break;
      case Formula::Kind::atom: {
        node.op = Op::atom;
        node.table = &structure_->predicate_table(f.name());
        if (node.table->arity != static_cast<int>(f.args().size()))
          throw error(errc::arity_mismatch, "predicate '" + f.name() + "'");
        for (const auto& t : f.args()) node.args.push_back(compile_term(t, scope));
        break;
      }
      case Formula::Kind::binary:
        switch (f.connective()) {
          case Connective::meet: node.op = Op::meet; break;
          case Connective::join: node.op = Op::join; break;
          case Connective::conj: node.op = Op::conj; break;
          case Connective::implies: node.op = Op::implies; break;
        }
        node.lhs = compile(f.lhs(), scope);
        node.rhs = compile(f.rhs(), scope);
        break;
      case Formula::Kind::quantified:
        node.op = f.quantifier() == Quantifier::forall ? Op::forall : Op::exists;
        node.slot = slots_++;
        scope.emplace_back(f.name(), node.slot);
        node.lhs = compile(f.body(), scope);
        scope.pop_back();
        break;
    }
    nodes_.push_back(std::move(node));
    return static_cast<int>(nodes_.size()) - 1;
  }

  Element eval_term(int idx) const {
    const TermNode& t = terms_[static_cast<std::size_t>(idx)];
    switch (t.op) {
      case TermOp::slot: return scratch_[static_cast<std::size_t>(t.slot)];
      case TermOp::element: return t.element;
      case TermOp::apply: {
        std::size_t pos = 0;
        for (int a : t.args) pos = pos * n_ + eval_term(a);
        return t.table->values[pos];
      }
    }
    return 0;
  }

  Degree eval(int idx) const {
    const Node& node = nodes_[static_cast<std::size_t>(idx)];
    switch (node.op) {
      case Op::constant: return node.constant;
      case Op::atom: {
        std::size_t pos = 0;
        for (int a : node.args) pos = pos * n_ + eval_term(a);
        return node.table->values[pos];
      }
      case Op::meet: return UlChain::meet(eval(node.lhs), eval(node.rhs));
      case Op::join: return UlChain::join(eval(node.lhs), eval(node.rhs));
      case Op::conj: return chain_->conj(eval(node.lhs), eval(node.rhs));
      case Op::implies: return chain_->residuum(eval(node.lhs), eval(node.rhs));
      case Op::forall: {
        Degree acc = chain_->top();
        auto& slot = scratch_[static_cast<std::size_t>(node.slot)];
        for (Element m = 0; m < n_ && acc > chain_->bot(); ++m) {
          slot = m;
          acc = std::min(acc, eval(node.lhs));
        }
        return acc;
      }
      case Op::exists: {
        Degree acc = chain_->bot();
        auto& slot = scratch_[static_cast<std::size_t>(node.slot)];
        for (Element m = 0; m < n_ && acc < chain_->top(); ++m) {
          slot = m;
          acc = std::max(acc, eval(node.lhs));
        }
        return acc;
      }
    }
    return 0;
  }

  const Structure* structure_;
  const UlChain* chain_;
  std::size_t n_;
  int slots_ = 0;
  int root_ = 0;
  std::vector<Node> nodes_;
  std::vector<TermNode> terms_;
  mutable std::vector<Element> scratch_;
};

namespace detail {

inline std::vector<std::string> sorted_free_variables(const Formula& f) {
  auto fv = free_variables(f);
  return {fv.begin(), fv.end()};
}

inline std::vector<Element> bind(const Evaluation& v, const std::vector<std::string>& vars) {
  std::vector<Element> out;
  out.reserve(vars.size());
  for (const auto& x : vars) {
    auto e = v.get(x);
    if (!e) throw error(errc::uncovered_variable, "variable '" + x + "' has no value");
    out.push_back(*e);
  }
  return out;
}

}  // namespace detail

inline Element eval_term(const Structure& s, const Evaluation& v, const Term& t) {
  if (t.is_variable()) {
    auto e = v.get(t.name());
    if (!e) throw error(errc::uncovered_variable, "variable '" + t.name() + "' has no value");
    if (*e >= s.size()) throw error(errc::invalid_element, "evaluation leaves the domain");
    return *e;
  }
  if (!s.functions().contains(t.name()) && is_parameter_name(t.name()) && t.args().empty())
    return s.require_element(t.name().substr(1));
  std::vector<Element> args;
  for (const auto& a : t.args()) args.push_back(eval_term(s, v, a));
  return s.function_value(t.name(), args);
}

inline Degree eval_formula(const Structure& s, const Evaluation& v, const Formula& f) {
  const auto vars = detail::sorted_free_variables(f);
  const auto values = detail::bind(v, vars);
  for (Element e : values)
    if (e >= s.size()) throw error(errc::invalid_element, "evaluation leaves the domain");
  return CompiledFormula(s, f, vars)(values);
}

/// Value of a sentence (no evaluation needed).
inline Degree eval_sentence(const Structure& s, const Formula& f) {
  if (!is_sentence(f)) throw error(errc::not_a_sentence, to_string(f));
  return CompiledFormula(s, f, {})({});
}

template <class Range>
bool is_model_of(const Structure& s, const Range& theory) {
  for (const Formula& f : theory)
    if (!is_sentence(f)) throw error(errc::not_a_sentence, to_string(f));
  for (const Formula& f : theory)
    if (!s.chain().designated(eval_sentence(s, f))) return false;
  return true;
}

inline bool is_model_of(const Structure& s, std::initializer_list<Formula> theory) {
  return is_model_of(s, std::vector<Formula>(theory));
}

/// Iterates all assignments of `arity` elements from a domain of size n in lexicographic order.
template <class Fn>
bool for_each_tuple(std::size_t n, std::size_t arity, Fn&& fn) {
  std::vector<Element> tuple(arity, 0);
  while (true) {
    if (fn(std::span<const Element>(tuple))) return true;
    std::size_t i = arity;
    while (i > 0) {
      --i;
      if (++tuple[i] < n) break;
      tuple[i] = 0;
      if (i == 0) return false;
    }
    if (arity == 0) return false;
  }
}

}  // namespace ulmt
