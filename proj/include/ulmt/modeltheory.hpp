#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ulmt/search.hpp"

namespace ulmt {

/**
 * Bounds for every formula sweep: formulas of depth <= depth whose free
 * variables lie in `vars`. All elementarity and diagram verdicts are relative
 * to these bounds.
 */
struct FormulaBounds {
  int depth = 1;
  std::vector<std::string> vars{"x"};
  std::uint64_t max_formulas = 2'000'000;
  unsigned workers = 1;
};

/// Order-preserving maps of `a` into `b` that preserve bot, top, 1, 0, the monoid product and the residuum.
template <class Fn>
bool for_each_chain_embedding(const UlChain& a, const UlChain& b, Fn&& fn) {
  const int m = a.size();
  const int n = b.size();
  if (m > n) return false;
  std::vector<Degree> f(static_cast<std::size_t>(m), -1);

  // Distinguished elements must land on their counterparts; two demands that disagree rule out every value.
  auto allowed = [&](int i, Degree v) {
    if (i == a.bot() && v != b.bot()) return false;
    if (i == a.top() && v != b.top()) return false;
    if (i == a.one() && v != b.one()) return false;
    if (i == a.zero() && v != b.zero()) return false;
    return true;
  };
  // Checks every operation instance that involves i and stays within 0..i.
  auto consistent_up_to = [&](int i) {
    for (int x = 0; x <= i; ++x) {
      for (int y = 0; y <= i; ++y) {
        const bool fresh = x == i || y == i;
        const int c = a.conj(x, y);
        if (c <= i && (fresh || c == i) && f[c] != b.conj(f[x], f[y])) return false;
        const int r = a.residuum(x, y);
        if (r <= i && (fresh || r == i) && f[r] != b.residuum(f[x], f[y])) return false;
      }
    }
    return true;
  };

  auto rec = [&](auto&& self, int i) -> bool {
    if (i == m) return fn(static_cast<const std::vector<Degree>&>(f));
    const Degree lo = i == 0 ? 0 : f[static_cast<std::size_t>(i - 1)] + 1;
    const Degree hi = n - (m - i);
    for (Degree v = lo; v <= hi; ++v) {
      if (!allowed(i, v)) continue;
      f[static_cast<std::size_t>(i)] = v;
      if (consistent_up_to(i) && self(self, i + 1)) return true;
    }
    f[static_cast<std::size_t>(i)] = -1;
    return false;
  };
  return rec(rec, 0);
}

inline std::optional<std::vector<Degree>> find_chain_embedding(const UlChain& a, const UlChain& b) {
  std::optional<std::vector<Degree>> out;
  for_each_chain_embedding(a, b, [&](const std::vector<Degree>& f) {
    out = f;
    return true;
  });
  return out;
}

struct SubstructureReport {
  bool domain_included = false;
  bool functions_agree = false;
  bool chain_embeds = false;
  bool atoms_agree = false;
  bool qf_agree = false;          // redundancy check over quantifier-free formulas
  int qf_depth = 0;
  std::vector<Degree> embedding;  // chain of S1 into chain of S2, when found
  std::vector<Element> element_map;
  std::string failure;

  bool holds() const { return domain_included && functions_agree && chain_embeds && atoms_agree && qf_agree; }
};

namespace detail {

inline std::vector<Element> element_map(const Structure& s1, const Structure& s2) {
  std::vector<Element> out;
  for (const auto& name : s1.domain()) {
    auto e = s2.element(name);
    if (!e) return {};
    out.push_back(*e);
  }
  return out;
}

inline std::vector<Element> map_tuple(std::span<const Element> tuple, const std::vector<Element>& map) {
  std::vector<Element> out;
  out.reserve(tuple.size());
  for (Element e : tuple) out.push_back(map[e]);
  return out;
}

inline bool atoms_agree(const Structure& s1, const Structure& s2, const std::vector<Element>& map,
                        const std::vector<Degree>& f, std::string* failure) {
  for (const auto& [name, table] : s1.predicates()) {
    const auto& other = s2.predicate_table(name);
    bool ok = true;
    for_each_tuple(s1.size(), static_cast<std::size_t>(table.arity), [&](std::span<const Element> t) {
      const auto t2 = map_tuple(t, map);
      const Degree v1 = table.values[tuple_index(t, s1.size())];
      const Degree v2 = other.values[tuple_index(t2, s2.size())];
      if (f[static_cast<std::size_t>(v1)] != v2) {
        ok = false;
        if (failure) {
          std::string args;
          for (std::size_t i = 0; i < t.size(); ++i) args += (i ? " " : "") + s1.domain()[t[i]];
          *failure = "atom " + name + "(" + args + ") is " + std::to_string(v1) + " in " + s1.name() + " but " +
                     std::to_string(v2) + " in " + s2.name();
        }
        return true;
      }
      return false;
    });
    if (!ok) return false;
  }
  return true;
}

}  // namespace detail

/// A formula on which two structures disagree, with the assignment used.
struct ValueMismatch {
  Formula formula;
  std::vector<std::string> vars;
  std::vector<std::string> assignment;  // element names, aligned with vars
  Degree small_value = 0;               // in the smaller structure
  Degree large_value = 0;               // in the larger structure
};

namespace detail {

/**
 * First formula (in enumeration order) and first S1-tuple with
 * f(value in S1) != value in S2. Tuples of S1 are mapped into S2 by `map`.
 */
inline std::optional<ValueMismatch> first_mismatch(const Structure& s1, const Structure& s2,
                                                   const std::vector<Element>& map, const std::vector<Degree>& f,
                                                   const std::vector<Formula>& formulas,
                                                   const std::vector<std::string>& vars, unsigned workers) {
  auto mismatch_at = [&](const Formula& phi) -> std::optional<ValueMismatch> {
    CompiledFormula c1(s1, phi, vars);
    CompiledFormula c2(s2, phi, vars);
    std::optional<ValueMismatch> hit;
    for_each_tuple(s1.size(), vars.size(), [&](std::span<const Element> t) {
      const auto t2 = map_tuple(t, map);
      const Degree v1 = c1(t);
      const Degree v2 = c2(t2);
      if (f[static_cast<std::size_t>(v1)] == v2) return false;
      std::vector<std::string> names;
      for (Element e : t) names.push_back(s1.domain()[e]);
      hit = ValueMismatch{phi, vars, std::move(names), v1, v2};
      return true;
    });
    return hit;
  };
  auto index = first_index_where(formulas.size(), workers,
                                 [&](std::uint64_t i) { return mismatch_at(formulas[i]).has_value(); });
  if (!index) return std::nullopt;
  return mismatch_at(formulas[*index]);
}

inline std::vector<std::string> parameter_constants(const std::vector<std::string>& elements) {
  std::vector<std::string> out;
  for (const auto& e : elements) out.push_back(parameter_name(e));
  return out;
}

}  // namespace detail

/**
 * Substructure test: domain inclusion by element name, agreement of function
 * tables, an embedding of the chains, and agreement of atoms through that
 * embedding. Quantifier-free agreement up to `qf_depth` is re-checked
 * directly. Both structures must interpret the same signature.
 */
inline SubstructureReport check_substructure(const Structure& s1, const Structure& s2, int qf_depth = 1,
                                             std::vector<std::string> vars = {"x"}) {
  if (!(s1.signature() == s2.signature()))
    throw error(errc::signature_mismatch, "structures '" + s1.name() + "' and '" + s2.name() + "' differ in signature");
  SubstructureReport report;
  report.qf_depth = qf_depth;

  report.element_map = detail::element_map(s1, s2);
  report.domain_included = !report.element_map.empty();
  if (!report.domain_included) {
    report.failure = "domain of " + s1.name() + " is not contained in domain of " + s2.name();
    return report;
  }
  const auto& map = report.element_map;

  report.functions_agree = true;
  for (const auto& [name, table] : s1.functions()) {
    const auto& other = s2.function_table(name);
    for_each_tuple(s1.size(), static_cast<std::size_t>(table.arity), [&](std::span<const Element> t) {
      const Element v1 = table.values[tuple_index(t, s1.size())];
      const Element v2 = other.values[tuple_index(detail::map_tuple(t, map), s2.size())];
      if (map[v1] == v2) return false;
      report.functions_agree = false;
      report.failure = "function " + name + " disagrees";
      return true;
    });
    if (!report.functions_agree) return report;
  }

  const UlChain& a = s1.chain();
  const UlChain& b = s2.chain();
  std::string atom_failure;
  if (a.same_algebra(b)) {
    std::vector<Degree> identity(static_cast<std::size_t>(a.size()));
    for (int i = 0; i < a.size(); ++i) identity[static_cast<std::size_t>(i)] = i;
    report.chain_embeds = true;
    report.embedding = identity;
    report.atoms_agree = detail::atoms_agree(s1, s2, map, identity, &atom_failure);
  } else {
    for_each_chain_embedding(a, b, [&](const std::vector<Degree>& f) {
      if (!report.chain_embeds) report.embedding = f;  // keep the first one for reporting
      report.chain_embeds = true;
      if (detail::atoms_agree(s1, s2, map, f, report.atoms_agree ? nullptr : &atom_failure)) {
        report.atoms_agree = true;
        report.embedding = f;
        return true;
      }
      return false;
    });
  }
  if (!report.chain_embeds) {
    report.failure = "chain " + a.name() + " does not embed into chain " + b.name();
    return report;
  }
  if (!report.atoms_agree) {
    report.failure = atom_failure;
    return report;
  }

  const Signature sig = s1.signature();
  const auto formulas = enumerate_formulas(sig, qf_depth, vars, {}, EnumerationOptions{false, 2'000'000});
  auto mismatch = detail::first_mismatch(s1, s2, map, report.embedding, formulas, vars, 1);
  report.qf_agree = !mismatch.has_value();
  if (mismatch) report.failure = "quantifier-free formula " + to_string(mismatch->formula) + " disagrees";
  return report;
}

inline bool is_substructure(const Structure& s1, const Structure& s2) { return check_substructure(s1, s2).holds(); }

struct ElementarityReport {
  bool substructure = false;
  int depth = 0;
  std::uint64_t formulas_checked = 0;
  std::optional<ValueMismatch> counterexample;
  std::string failure;

  bool holds() const { return substructure && !counterexample; }
};

/**
 * Value-level elementarity up to the bounds: every formula of depth <= depth,
 * with its free variables sent to elements of S1, takes the same value in S1
 * as in S2 (through the chain embedding).
 */
inline ElementarityReport check_elementary_substructure(const Structure& s1, const Structure& s2,
                                                        const FormulaBounds& bounds) {
  ElementarityReport report;
  report.depth = bounds.depth;
  const auto sub = check_substructure(s1, s2);
  report.substructure = sub.holds();
  if (!report.substructure) {
    report.failure = sub.failure;
    return report;
  }
  const auto formulas =
      enumerate_formulas(s1.signature(), bounds.depth, bounds.vars, {}, EnumerationOptions{true, bounds.max_formulas});
  report.formulas_checked = formulas.size();
  report.counterexample =
      detail::first_mismatch(s1, s2, sub.element_map, sub.embedding, formulas, bounds.vars, bounds.workers);
  return report;
}

inline bool is_elementary_substructure(const Structure& s1, const Structure& s2, const FormulaBounds& bounds) {
  return check_elementary_substructure(s1, s2, bounds).holds();
}

using ModelChain = std::vector<Structure>;

/**
 * Union of a finite chain of structures: the ordered union of the domains
 * (first appearance wins), the last link's algebra, and each tuple valued as
 * in the first link containing it, carried along that link's chain embedding.
 */
inline Structure union_of_chain(const ModelChain& links) {
  if (links.empty()) throw error(errc::not_a_chain, "empty chain of structures");
  const Structure& last = links.back();
  for (std::size_t i = 0; i < links.size(); ++i)
    for (std::size_t j = i + 1; j < links.size(); ++j) {
      const auto r = check_substructure(links[i], links[j]);
      if (!r.holds())
        throw error(errc::not_a_chain, "link " + std::to_string(i) + " is not a substructure of link " +
                                           std::to_string(j) + ": " + r.failure);
    }
  if (!verify_ul_axioms(last.chain()).all_passed())
    throw error(errc::invalid_axioms, "union algebra '" + last.chain().name() + "' is not a UL-chain");

  std::vector<std::string> domain;
  for (const auto& link : links)
    for (const auto& e : link.domain())
      if (std::find(domain.begin(), domain.end(), e) == domain.end()) domain.push_back(e);
  Structure u("union", last.chain_ptr(), domain);

  std::vector<std::vector<Degree>> embeddings;
  std::vector<std::vector<std::optional<Element>>> local;  // union index -> link index
  for (const auto& link : links) {
    embeddings.push_back(check_substructure(link, last).embedding);
    std::vector<std::optional<Element>> idx;
    for (const auto& e : domain) idx.push_back(link.element(e));
    local.push_back(std::move(idx));
  }
  auto owner = [&](std::span<const Element> t) -> std::pair<std::size_t, std::vector<Element>> {
    for (std::size_t k = 0; k < links.size(); ++k) {
      std::vector<Element> lt;
      bool inside = true;
      for (Element e : t) {
        if (!local[k][e]) {
          inside = false;
          break;
        }
        lt.push_back(*local[k][e]);
      }
      if (inside) return {k, std::move(lt)};
    }
    throw error(errc::not_a_chain, "tuple outside every link");
  };

  const std::size_t n = domain.size();
  for (const auto& [name, table] : last.predicates()) {
    std::vector<Degree> values(tuple_count(table.arity, n));
    for_each_tuple(n, static_cast<std::size_t>(table.arity), [&](std::span<const Element> t) {
      auto [k, lt] = owner(t);
      values[tuple_index(t, n)] = embeddings[k][static_cast<std::size_t>(links[k].predicate_value(name, lt))];
      return false;
    });
    u.set_predicate(name, table.arity, std::move(values));
  }
  for (const auto& [name, table] : last.functions()) {
    std::vector<Element> values(tuple_count(table.arity, n));
    for_each_tuple(n, static_cast<std::size_t>(table.arity), [&](std::span<const Element> t) {
      auto [k, lt] = owner(t);
      const std::string& target = links[k].domain()[links[k].function_value(name, lt)];
      values[tuple_index(t, n)] = *u.element(target);
      return false;
    });
    u.set_function(name, table.arity, std::move(values));
  }
  return u;
}

struct UnionPreservationReport {
  int depth = 0;
  bool precondition_verified = false;     // adjacent links elementary at this depth
  std::optional<std::size_t> precondition_failure;  // first adjacent pair (i, i+1) that is not
  std::optional<std::size_t> counterexample_link;
  std::optional<ValueMismatch> counterexample;
  Structure union_structure;

  bool holds() const { return !counterexample; }
};

/**
 * For every link, every formula within the bounds and every tuple from that
 * link: equal values in the link and in the union. The adjacent-elementarity
 * precondition is checked and reported but does not stop the check.
 */
inline UnionPreservationReport check_union_preservation(const ModelChain& links, const FormulaBounds& bounds) {
  Structure u = union_of_chain(links);
  UnionPreservationReport report{bounds.depth, true, std::nullopt, std::nullopt, std::nullopt, u};
  for (std::size_t i = 0; i + 1 < links.size(); ++i) {
    if (!is_elementary_substructure(links[i], links[i + 1], bounds)) {
      report.precondition_verified = false;
      report.precondition_failure = i;
      break;
    }
  }
  const auto formulas =
      enumerate_formulas(u.signature(), bounds.depth, bounds.vars, {}, EnumerationOptions{true, bounds.max_formulas});
  for (std::size_t i = 0; i < links.size(); ++i) {
    const auto sub = check_substructure(links[i], u);
    auto m = detail::first_mismatch(links[i], u, sub.element_map, sub.embedding, formulas, bounds.vars, bounds.workers);
    if (m) {
      report.counterexample_link = i;
      report.counterexample = std::move(m);
      break;
    }
  }
  return report;
}

struct TheoryPair {
  std::vector<Formula> theory;     // designated sentences
  std::vector<Formula> co_theory;  // the rest of the enumeration
};

/// Sentences within the bounds over the signature of S and one parameter constant @d per d in D.
inline std::vector<Formula> diagram_sentences(const Structure& s, const std::vector<std::string>& parameters,
                                              const FormulaBounds& bounds) {
  for (const auto& d : parameters) s.require_element(d);
  auto all = enumerate_formulas(s.signature(), bounds.depth, bounds.vars, detail::parameter_constants(parameters),
                                EnumerationOptions{true, bounds.max_formulas});
  std::vector<Formula> out;
  for (auto& f : all)
    if (is_sentence(f)) out.push_back(std::move(f));
  return out;
}

/// Th_D(S) and its complement within the bounded enumeration.
inline TheoryPair theory_of(const Structure& s, const std::vector<std::string>& parameters, const FormulaBounds& bounds) {
  TheoryPair out;
  for (auto& f : diagram_sentences(s, parameters, bounds))
    (s.chain().designated(eval_sentence(s, f)) ? out.theory : out.co_theory).push_back(std::move(f));
  return out;
}

inline TheoryPair elementary_diagram(const Structure& s, const FormulaBounds& bounds) {
  return theory_of(s, s.domain(), bounds);
}

struct ExhaustivenessReport {
  int depth = 0;
  std::vector<std::optional<Formula>> witness;  // per chain element: a formula attaining it
  std::vector<std::optional<std::vector<std::string>>> assignment;

  bool exhaustive() const {
    return std::all_of(witness.begin(), witness.end(), [](const auto& w) { return w.has_value(); });
  }
  std::vector<Degree> missing() const {
    std::vector<Degree> out;
    for (std::size_t i = 0; i < witness.size(); ++i)
      if (!witness[i]) out.push_back(static_cast<Degree>(i));
    return out;
  }
};

/// Whether every element of the chain is the value of some formula within the bounds at some assignment.
inline ExhaustivenessReport check_exhaustive(const Structure& s, const FormulaBounds& bounds) {
  ExhaustivenessReport report;
  report.depth = bounds.depth;
  const auto n = static_cast<std::size_t>(s.chain().size());
  report.witness.resize(n);
  report.assignment.resize(n);
  std::size_t remaining = n;
  const auto formulas =
      enumerate_formulas(s.signature(), bounds.depth, bounds.vars, {}, EnumerationOptions{true, bounds.max_formulas});
  for (const auto& phi : formulas) {
    CompiledFormula c(s, phi, bounds.vars);
    for_each_tuple(s.size(), bounds.vars.size(), [&](std::span<const Element> t) {
      const auto v = static_cast<std::size_t>(c(t));
      if (!report.witness[v]) {
        report.witness[v] = phi;
        std::vector<std::string> names;
        for (Element e : t) names.push_back(s.domain()[e]);
        report.assignment[v] = std::move(names);
        --remaining;
      }
      return remaining == 0;
    });
    if (remaining == 0) break;
  }
  return report;
}

inline bool is_exhaustive(const Structure& s, const FormulaBounds& bounds) { return check_exhaustive(s, bounds).exhaustive(); }

}  // namespace ulmt
