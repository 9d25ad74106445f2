#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ulmt/tableaux.hpp"

namespace ulmt {

/**
 * Seeded random formulas over a small vocabulary. Terms are constants,
 * variables in scope, and (when `functions` is non-empty) one application of
 * a function symbol. Free variables are drawn from `free_vars`.
 */
struct FormulaGenerator {
  std::vector<std::string> propositions;                 // 0-ary predicates
  std::vector<std::pair<std::string, int>> predicates;  // positive arity
  std::vector<std::pair<std::string, int>> functions;   // positive arity
  std::vector<std::string> constants;
  std::vector<std::string> free_vars;
  std::vector<std::string> bound_vars{"x", "y"};
  bool quantifiers = false;
  bool truth_constants = true;

  Formula operator()(std::mt19937_64& rng, int max_depth) const {
    std::vector<std::string> scope = free_vars;
    return formula(rng, max_depth, scope);
  }

 private:
  static std::size_t pick(std::mt19937_64& rng, std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  }

  Term base_term(std::mt19937_64& rng, const std::vector<std::string>& scope) const {
    const std::size_t n = constants.size() + scope.size();
    if (n == 0) throw error(errc::invalid_size, "generator has no terms for a predicate argument");
    const std::size_t i = pick(rng, n);
    return i < constants.size() ? Term::apply(constants[i]) : Term::variable(scope[i - constants.size()]);
  }

  Term term(std::mt19937_64& rng, const std::vector<std::string>& scope) const {
    if (!functions.empty() && pick(rng, 4) == 0) {
      const auto& [name, arity] = functions[pick(rng, functions.size())];
      std::vector<Term> args;
      for (int i = 0; i < arity; ++i) args.push_back(base_term(rng, scope));
      return Term::apply(name, std::move(args));
    }
    return base_term(rng, scope);
  }

  Formula leaf(std::mt19937_64& rng, const std::vector<std::string>& scope) const {
    const std::size_t consts = truth_constants ? 4 : 0;
    const bool has_terms = !constants.empty() || !scope.empty();
    const std::size_t preds = has_terms ? predicates.size() : 0;
    const std::size_t n = consts + propositions.size() + preds;
    if (n == 0) throw error(errc::invalid_size, "generator has no atoms");
    std::size_t i = pick(rng, n);
    if (i < consts) return Formula::constant(static_cast<TruthConstant>(i));
    i -= consts;
    if (i < propositions.size()) return Formula::atom(propositions[i]);
    const auto& [name, arity] = predicates[i - propositions.size()];
    std::vector<Term> args;
    for (int k = 0; k < arity; ++k) args.push_back(term(rng, scope));
    return Formula::atom(name, std::move(args));
  }

  Formula formula(std::mt19937_64& rng, int budget, std::vector<std::string>& scope) const {
    if (budget <= 0 || pick(rng, 4) == 0) return leaf(rng, scope);
    const std::size_t kinds = quantifiers && !bound_vars.empty() ? 6 : 4;
    const std::size_t k = pick(rng, kinds);
    if (k < 4) {
      Formula lhs = formula(rng, budget - 1, scope);
      Formula rhs = formula(rng, budget - 1, scope);
      return Formula::binary(static_cast<Connective>(k), std::move(lhs), std::move(rhs));
    }
    const std::string& v = bound_vars[pick(rng, bound_vars.size())];
    scope.push_back(v);
    Formula body = formula(rng, budget - 1, scope);
    scope.pop_back();
    return Formula::quantified(k == 4 ? Quantifier::forall : Quantifier::exists, v, std::move(body));
  }
};

inline Tableau random_tableau(std::mt19937_64& rng, const FormulaGenerator& gen, std::size_t max_left,
                              std::size_t max_right, int max_depth) {
  std::uniform_int_distribution<std::size_t> left(0, max_left), right(0, max_right);
  const std::size_t nl = left(rng);
  const std::size_t nr = right(rng);
  Tableau t;
  for (std::size_t i = 0; i < nl; ++i) t.add_left(gen(rng, max_depth));
  for (std::size_t i = 0; i < nr; ++i) t.add_right(gen(rng, max_depth));
  return t;
}

}  // namespace ulmt
