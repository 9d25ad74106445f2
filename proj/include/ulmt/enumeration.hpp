#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "ulmt/syntax.hpp"

namespace ulmt {

struct EnumerationOptions {
  bool quantifiers = true;
  std::uint64_t max_formulas = 2'000'000;
};

namespace detail {

inline std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

inline std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return b > std::numeric_limits<std::uint64_t>::max() - a ? std::numeric_limits<std::uint64_t>::max() : a + b;
}

inline std::uint64_t sat_pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t acc = 1;
  for (std::uint64_t i = 0; i < exp; ++i) acc = sat_mul(acc, base);
  return acc;
}

inline void product_tuples(const std::vector<Term>& pool, int arity, std::vector<Term>& current,
                           std::vector<std::vector<Term>>& out) {
  if (static_cast<int>(current.size()) == arity) {
    out.push_back(current);
    return;
  }
  for (const auto& t : pool) {
    current.push_back(t);
    product_tuples(pool, arity, current, out);
    current.pop_back();
  }
}

}  // namespace detail

/**
 * Terms available to enumerated atoms: the given variables, the given
 * constants, the signature's constants, then one application of every
 * function symbol of positive arity to those base terms. No deeper nesting.
 */
inline std::vector<Term> enumeration_terms(const Signature& sig, const std::vector<std::string>& vars,
                                           const std::vector<std::string>& consts) {
  std::vector<Term> base;
  for (const auto& v : vars) base.push_back(Term::variable(v));
  for (const auto& c : consts) base.push_back(Term::apply(c));
  for (const auto& [name, arity] : sig.functions)
    if (arity == 0 && std::find(consts.begin(), consts.end(), name) == consts.end()) base.push_back(Term::apply(name));
  std::vector<Term> terms = base;
  for (const auto& [name, arity] : sig.functions) {
    if (arity == 0) continue;
    std::vector<std::vector<Term>> tuples;
    std::vector<Term> current;
    detail::product_tuples(base, arity, current, tuples);
    for (auto& args : tuples) terms.push_back(Term::apply(name, std::move(args)));
  }
  return terms;
}

/// Atoms and truth constants in canonical order: 0, 1, bot, top, then each predicate over all term tuples.
inline std::vector<Formula> enumeration_atoms(const Signature& sig, const std::vector<Term>& terms) {
  std::vector<Formula> out{Formula::zero(), Formula::one(), Formula::bot(), Formula::top()};
  for (const auto& [name, arity] : sig.predicates) {
    std::vector<std::vector<Term>> tuples;
    std::vector<Term> current;
    detail::product_tuples(terms, arity, current, tuples);
    for (auto& args : tuples) out.push_back(Formula::atom(name, std::move(args)));
  }
  return out;
}

/// Number of formulas enumerate_formulas would return, saturating at 2^64-1.
inline std::uint64_t count_formulas(const Signature& sig, int depth, const std::vector<std::string>& vars,
                                    const std::vector<std::string>& consts, const EnumerationOptions& options = {}) {
  if (depth < 0) return 0;
  using namespace detail;
  const auto terms = enumeration_terms(sig, vars, consts);
  std::uint64_t level = 4;  // formulas of exactly the current depth
  for (const auto& [name, arity] : sig.predicates) level = sat_add(level, sat_pow(terms.size(), arity));
  std::uint64_t below = 0;   // formulas of depth < current - 1
  std::uint64_t total = level;
  for (int d = 1; d <= depth; ++d) {
    const std::uint64_t upto = sat_add(below, level);  // depth <= d-1
    std::uint64_t pairs = sat_mul(upto, upto);
    pairs = pairs == std::numeric_limits<std::uint64_t>::max() ? pairs : pairs - sat_mul(below, below);
    std::uint64_t next = sat_mul(4, pairs);
    if (options.quantifiers) next = sat_add(next, sat_mul(2 * vars.size(), level));
    below = upto;
    level = next;
    total = sat_add(total, level);
  }
  return total;
}

/**
 * All formulas of depth <= `depth` whose free variables lie in `vars` and
 * whose terms come from enumeration_terms(). The order is canonical: depth
 * by depth; within a depth, binary formulas by connective (/\, \/, &, ->)
 * then by operand pair in earlier order, then forall/exists over each
 * variable and each body of the previous depth.
 */
inline std::vector<Formula> enumerate_formulas(const Signature& sig, int depth, const std::vector<std::string>& vars,
                                               const std::vector<std::string>& consts,
                                               const EnumerationOptions& options = {}) {
  if (depth < 0) return {};
  const std::uint64_t count = count_formulas(sig, depth, vars, consts, options);
  if (count > options.max_formulas)
    throw error(errc::enumeration_too_large, std::to_string(count) + " formulas exceed the ceiling of " +
                                                  std::to_string(options.max_formulas));
  std::vector<Formula> all = enumeration_atoms(sig, enumeration_terms(sig, vars, consts));
  all.reserve(count);
  std::size_t below = 0;          // all[0, below) has depth < d-1
  std::size_t upto = all.size();  // all[0, upto) has depth <= d-1
  static constexpr Connective kConnectives[] = {Connective::meet, Connective::join, Connective::conj,
                                                Connective::implies};
  for (int d = 1; d <= depth; ++d) {
    for (Connective op : kConnectives) {
      for (std::size_t i = 0; i < upto; ++i) {
        // At least one operand must have depth exactly d-1.
        const std::size_t j0 = i < below ? below : 0;
        for (std::size_t j = j0; j < upto; ++j) all.push_back(Formula::binary(op, all[i], all[j]));
      }
    }
    if (options.quantifiers) {
      for (Quantifier q : {Quantifier::forall, Quantifier::exists})
        for (const auto& v : vars)
          for (std::size_t i = below; i < upto; ++i) all.push_back(Formula::quantified(q, v, all[i]));
    }
    below = upto;
    upto = all.size();
  }
  return all;
}

}  // namespace ulmt
