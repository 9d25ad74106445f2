#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ulmt/modeltheory.hpp"
#include "ulmt/tableaux.hpp"

namespace ulmt {

/// Default cap on |p| + |p'| for candidate types in saturation checks.
inline constexpr std::size_t kDefaultTypeSizeCap = 4;

/// The variable in which all types are written.
inline const std::string kTypeVariable = "x";

/**
 * A pair <p, p'> in the single free variable x: p is to be designated and p'
 * not. Parameters are written as `@e` for elements e of a reference structure.
 */
struct TypePair {
  std::vector<Formula> p;
  std::vector<Formula> p_prime;
  std::vector<std::string> parameters;

  friend bool operator==(const TypePair&, const TypePair&) = default;
};

inline void validate_type(const TypePair& t) {
  for (const auto* side : {&t.p, &t.p_prime})
    for (const auto& f : *side) {
      const auto fv = free_variables(f);
      if (!(fv.empty() || (fv.size() == 1 && *fv.begin() == kTypeVariable)))
        throw error(errc::uncovered_variable, "type formula " + to_string(f) + " has free variables other than x");
    }
}

/// Whether <T u p, U u p'> is satisfiable in the space, x read as a free variable.
inline bool is_type_of_tableau(const SearchSpace& space, const Tableau& tableau, const TypePair& t) {
  validate_type(t);
  Tableau joined = tableau;
  for (const auto& f : t.p) joined.add_left(f);
  for (const auto& f : t.p_prime) joined.add_right(f);
  return find_satisfying_model(space, joined).has_value();
}

inline Tableau as_tableau(const TheoryPair& th) { return Tableau(th.theory, th.co_theory); }

/// Formulas within the bounds whose only free variable is x, over the signature of S and parameters @d.
inline std::vector<Formula> type_formulas(const Structure& s, const std::vector<std::string>& parameters,
                                          const FormulaBounds& bounds) {
  for (const auto& d : parameters) s.require_element(d);
  std::vector<std::string> vars = bounds.vars;
  if (std::find(vars.begin(), vars.end(), kTypeVariable) == vars.end()) vars.insert(vars.begin(), kTypeVariable);
  auto all = enumerate_formulas(s.signature(), bounds.depth, vars, detail::parameter_constants(parameters),
                                EnumerationOptions{true, bounds.max_formulas});
  std::vector<Formula> out;
  for (auto& f : all) {
    const auto fv = free_variables(f);
    if (fv.empty() || (fv.size() == 1 && *fv.begin() == kTypeVariable)) out.push_back(std::move(f));
  }
  return out;
}

/// Type of m over D: the enumerated formulas designated at x = m go to p, the rest to p'.
inline TypePair realized_type(const Structure& s, const std::vector<std::string>& parameters, Element m,
                              const FormulaBounds& bounds) {
  if (m >= s.size()) throw error(errc::invalid_element, "element index outside the domain");
  TypePair t{{}, {}, parameters};
  const std::vector<std::string> vars{kTypeVariable};
  const Element arg[] = {m};
  for (auto& f : type_formulas(s, parameters, bounds))
    (s.chain().designated(CompiledFormula(s, f, vars)(arg)) ? t.p : t.p_prime).push_back(std::move(f));
  return t;
}

/// First element (domain order) at which p is designated and p' is not.
inline std::optional<Element> find_realizer(const Structure& s, const TypePair& t) {
  validate_type(t);
  const std::vector<std::string> vars{kTypeVariable};
  detail::DesignationCheck check(s, t.p, t.p_prime, vars);
  for (Element m = 0; m < s.size(); ++m) {
    const Element arg[] = {m};
    if (check(arg)) return m;
  }
  return std::nullopt;
}

namespace detail {

using Profile = std::vector<bool>;

inline Profile profile_of(const Structure& s, const std::vector<CompiledFormula>& compiled, Element m) {
  Profile out(compiled.size());
  const Element arg[] = {m};
  for (std::size_t i = 0; i < compiled.size(); ++i) out[i] = s.chain().designated(compiled[i](arg));
  return out;
}

/// Smallest hitting set of `sets` (iterative deepening, branching on the first unhit set in order), up to `cap`.
inline std::optional<std::vector<std::size_t>> smallest_hitting_set(const std::vector<std::vector<std::size_t>>& sets,
                                                                    std::size_t cap) {
  std::vector<std::size_t> chosen;
  auto hit = [&](const std::vector<std::size_t>& set) {
    return std::any_of(set.begin(), set.end(), [&](std::size_t e) {
      return std::find(chosen.begin(), chosen.end(), e) != chosen.end();
    });
  };
  auto search = [&](auto&& self, std::size_t limit) -> bool {
    auto open = std::find_if(sets.begin(), sets.end(), [&](const auto& set) { return !hit(set); });
    if (open == sets.end()) return true;
    if (chosen.size() == limit) return false;
    for (std::size_t e : *open) {
      chosen.push_back(e);
      if (self(self, limit)) return true;
      chosen.pop_back();
    }
    return false;
  };
  for (std::size_t limit = 0; limit <= cap; ++limit) {
    chosen.clear();
    if (search(search, limit)) {
      std::sort(chosen.begin(), chosen.end());
      return chosen;
    }
  }
  return std::nullopt;
}

/// Subsets of the domain of size < kappa, by size and then lexicographically by position.
inline std::vector<std::vector<std::string>> small_parameter_sets(const Structure& s, std::size_t kappa) {
  std::vector<std::vector<std::string>> out;
  const std::size_t n = s.size();
  for (std::size_t k = 0; k < kappa && k <= n; ++k) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      std::vector<std::string> d;
      for (std::size_t i : idx) d.push_back(s.domain()[i]);
      out.push_back(std::move(d));
      std::size_t i = k;
      while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return out;
}

}  // namespace detail

struct SaturationReport {
  std::size_t kappa = 0;
  int depth = 0;
  std::size_t type_size_cap = 0;
  bool saturated = true;
  std::optional<std::vector<std::string>> witness_parameters;
  std::optional<TypePair> witness;  // an unrealized type, smallest |p|+|p'| first
  bool witness_confirmed = false;   // re-checked with is_type_of_tableau and find_realizer
  bool cap_limited = false;         // some profile needed more than type_size_cap formulas to separate
  std::size_t parameter_sets = 0;
};

/**
 * Saturation up to the bounds: for every D with |D| < kappa, every pair
 * <p, p'> over the type formulas (|p| + |p'| <= cap) that is a type of
 * <Th_D(S), coTh_D(S)> in the space must be realized in S.
 *
 * Rather than listing every pair, this collects the designation profiles of
 * elements of S and of all elements of models of <Th_D, coTh_D> in the space.
 * A pair is an unrealized type exactly when it agrees with some model profile
 * Y and separates Y from every profile of S; such pairs are the hitting sets
 * of { X xor Y : X a profile of S }.
 */
inline SaturationReport check_saturated(const Structure& s, std::size_t kappa, const FormulaBounds& bounds,
                                        const SearchSpace& space, std::size_t type_size_cap = kDefaultTypeSizeCap) {
  SaturationReport report;
  report.kappa = kappa;
  report.depth = bounds.depth;
  report.type_size_cap = type_size_cap;
  const std::vector<std::string> vars{kTypeVariable};

  for (const auto& params : detail::small_parameter_sets(s, kappa)) {
    ++report.parameter_sets;
    const auto formulas = type_formulas(s, params, bounds);
    const auto theory = theory_of(s, params, bounds);

    std::vector<detail::Profile> own;
    {
      std::vector<CompiledFormula> compiled;
      for (const auto& f : formulas) compiled.emplace_back(s, f, vars);
      for (Element m = 0; m < s.size(); ++m) {
        auto p = detail::profile_of(s, compiled, m);
        if (std::find(own.begin(), own.end(), p) == own.end()) own.push_back(std::move(p));
      }
    }

    Signature sig = s.signature();
    for (const auto& d : params) sig.add_function(parameter_name(d), 0);
    StructureEnumerator en(space, sig);
    std::vector<detail::Profile> foreign;  // profiles from the space that S lacks, in discovery order
    for (std::uint64_t i = 0; i < en.size(); ++i) {
      const Structure n = en.at(i);
      detail::DesignationCheck diagram(n, theory.theory, theory.co_theory, {});
      if (!diagram({})) continue;
      std::vector<CompiledFormula> compiled;
      for (const auto& f : formulas) compiled.emplace_back(n, f, vars);
      for (Element m = 0; m < n.size(); ++m) {
        auto p = detail::profile_of(n, compiled, m);
        if (std::find(own.begin(), own.end(), p) == own.end() &&
            std::find(foreign.begin(), foreign.end(), p) == foreign.end())
          foreign.push_back(std::move(p));
      }
    }

    std::optional<TypePair> best;
    for (const auto& y : foreign) {
      std::vector<std::vector<std::size_t>> diffs;
      for (const auto& x : own) {
        std::vector<std::size_t> d;
        for (std::size_t k = 0; k < formulas.size(); ++k)
          if (x[k] != y[k]) d.push_back(k);
        diffs.push_back(std::move(d));
      }
      const std::size_t limit = best ? best->p.size() + best->p_prime.size() - 1 : type_size_cap;
      if (best && limit == 0) break;
      auto h = detail::smallest_hitting_set(diffs, limit);
      if (!h) {
        if (!best) report.cap_limited = true;
        continue;
      }
      TypePair t{{}, {}, params};
      for (std::size_t k : *h) (y[k] ? t.p : t.p_prime).push_back(formulas[k]);
      best = std::move(t);
    }
    if (best) {
      report.saturated = false;
      report.witness_parameters = params;
      report.witness_confirmed = is_type_of_tableau(space, as_tableau(theory), *best) && !find_realizer(s, *best);
      report.witness = std::move(best);
      return report;
    }
  }
  return report;
}

inline bool is_saturated(const Structure& s, std::size_t kappa, const FormulaBounds& bounds, const SearchSpace& space,
                         std::size_t type_size_cap = kDefaultTypeSizeCap) {
  return check_saturated(s, kappa, bounds, space, type_size_cap).saturated;
}

struct SaturationStep {
  Structure model;
  Element realizer = 0;
  bool in_place = false;
};

namespace detail {

inline std::vector<std::string> fresh_element_names(const Structure& s, std::size_t count) {
  std::vector<std::string> out;
  for (std::size_t i = 0; out.size() < count; ++i) {
    std::string name = i == 0 ? "c" : "c" + std::to_string(i);
    if (!s.element(name)) out.push_back(std::move(name));
  }
  return out;
}

}  // namespace detail

/**
 * One extension step: the first structure N of the space that extends S
 * (same elements and tables on S-tuples, up to an embedding of the chain),
 * keeps the designation of every diagram sentence of S within the bounds and
 * realizes t. If t is already realized in S, S is returned unchanged.
 *
 * Throws not_a_type when t is not a type of S's diagram tableau (checked with
 * one spare element beyond S) and bounds_exhausted when no extension fits.
 */
inline SaturationStep saturate_step(const Structure& s, const TypePair& t, const SearchSpace& space,
                                    const FormulaBounds& bounds) {
  if (auto m = find_realizer(s, t)) return SaturationStep{s, *m, true};

  const TheoryPair diagram = elementary_diagram(s, bounds);
  const SearchSpace type_space = space.with_max_domain(std::max(space.max_domain(), s.size() + 1));
  if (!is_type_of_tableau(type_space, as_tableau(diagram), t))
    throw error(errc::not_a_type, "pair is not a type of the diagram within the search space");

  const auto new_names = detail::fresh_element_names(s, space.max_domain() > s.size() ? space.max_domain() - s.size() : 0);
  std::uint64_t visited = 0;

  for (const auto& chain : space.chains()) {
    std::optional<SaturationStep> found;
    for_each_chain_embedding(s.chain(), *chain, [&](const std::vector<Degree>& f) {
      for (std::size_t n = s.size(); n <= std::max(space.max_domain(), s.size()) && !found; ++n) {
        std::vector<std::string> domain = s.domain();
        domain.insert(domain.end(), new_names.begin(), new_names.begin() + static_cast<std::ptrdiff_t>(n - s.size()));

        // Free cells: tuples touching a new element, predicates by name then functions by name.
        struct Cell {
          bool predicate;
          std::string symbol;
          std::size_t index;
          std::size_t radix;
        };
        std::vector<Cell> cells;
        Structure base(s.name() + "+", chain, domain);
        for (const auto& [name, table] : s.predicates()) {
          std::vector<Degree> values(tuple_count(table.arity, n), 0);
          for_each_tuple(n, static_cast<std::size_t>(table.arity), [&](std::span<const Element> tup) {
            const std::size_t idx = tuple_index(tup, n);
            if (std::all_of(tup.begin(), tup.end(), [&](Element e) { return e < s.size(); }))
              values[idx] = f[static_cast<std::size_t>(table.values[tuple_index(tup, s.size())])];
            else
              cells.push_back(Cell{true, name, idx, static_cast<std::size_t>(chain->size())});
            return false;
          });
          base.set_predicate(name, table.arity, std::move(values));
        }
        for (const auto& [name, table] : s.functions()) {
          std::vector<Element> values(tuple_count(table.arity, n), 0);
          for_each_tuple(n, static_cast<std::size_t>(table.arity), [&](std::span<const Element> tup) {
            const std::size_t idx = tuple_index(tup, n);
            if (std::all_of(tup.begin(), tup.end(), [&](Element e) { return e < s.size(); }))
              values[idx] = table.values[tuple_index(tup, s.size())];
            else
              cells.push_back(Cell{false, name, idx, n});
            return false;
          });
          base.set_function(name, table.arity, std::move(values));
        }

        std::uint64_t count = 1;
        for (const auto& c : cells) count = detail::sat_mul(count, c.radix);
        visited = detail::sat_add(visited, count);
        if (visited > space.max_candidates())
          throw error(errc::search_space_too_large,
                      "extension search exceeds the ceiling of " + std::to_string(space.max_candidates()));

        std::vector<std::size_t> digits(cells.size(), 0);
        for (std::uint64_t k = 0; k < count; ++k) {
          auto preds = base.predicates();
          auto funcs = base.functions();
          for (std::size_t i = 0; i < cells.size(); ++i) {
            const auto& c = cells[i];
            if (c.predicate)
              preds[c.symbol].values[c.index] = static_cast<Degree>(digits[i]);
            else
              funcs[c.symbol].values[c.index] = digits[i];
          }
          Structure cand(base.name(), chain, domain);
          for (auto& [name, table] : preds) cand.set_predicate(name, table.arity, std::move(table.values));
          for (auto& [name, table] : funcs) cand.set_function(name, table.arity, std::move(table.values));
          detail::DesignationCheck keeps(cand, diagram.theory, diagram.co_theory, {});
          if (keeps({})) {
            if (auto m = find_realizer(cand, t)) {
              found = SaturationStep{std::move(cand), *m, false};
              break;
            }
          }
          for (std::size_t i = cells.size(); i-- > 0;) {  // last cell varies fastest
            if (++digits[i] < cells[i].radix) break;
            digits[i] = 0;
          }
        }
      }
      return found.has_value();
    });
    if (found) return std::move(*found);
  }
  throw error(errc::bounds_exhausted, "no extension within the search space realizes the type");
}

}  // namespace ulmt
