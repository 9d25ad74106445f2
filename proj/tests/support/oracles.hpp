#pragma once

// Reference implementations used as test oracles. They deliberately avoid the
// library's compiled evaluator, structure enumerator and search routines and
// only read raw tables.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ulmt/ulmt.hpp"

namespace oracle {

using ulmt::Degree;
using ulmt::Element;
using ulmt::Formula;
using ulmt::Structure;
using ulmt::Term;
using ulmt::UlChain;

/// max{c : a*c <= b}, scanning upward through the product table.
inline Degree residuum(const UlChain& chain, Degree a, Degree b) {
  Degree best = -1;
  for (Degree c = 0; c < chain.size(); ++c)
    if (chain.conj(a, c) <= b) best = c;
  return best;
}

using Assignment = std::map<std::string, Element>;

inline Element term_value(const Structure& s, const Assignment& v, const Term& t) {
  if (t.is_variable()) return v.at(t.name());
  if (!s.functions().contains(t.name()) && ulmt::is_parameter_name(t.name()))
    return *s.element(t.name().substr(1));
  const auto& table = s.functions().at(t.name());
  std::size_t pos = 0;
  for (const auto& a : t.args()) pos = pos * s.size() + term_value(s, v, a);
  return table.values[pos];
}

/// Direct recursive evaluation following the value clauses.
inline Degree value(const Structure& s, const Assignment& v, const Formula& f) {
  const UlChain& a = s.chain();
  switch (f.kind()) {
    case Formula::Kind::constant:
      switch (f.truth_constant()) {
        case ulmt::TruthConstant::zero: return a.zero();
        case ulmt::TruthConstant::one: return a.one();
        case ulmt::TruthConstant::bot: return 0;
        case ulmt::TruthConstant::top: return a.size() - 1;
      }
      break;
    case Formula::Kind::atom: {
      const auto& table = s.predicates().at(f.name());
      std::size_t pos = 0;
      for (const auto& t : f.args()) pos = pos * s.size() + term_value(s, v, t);
      return table.values[pos];
    }
    case Formula::Kind::binary: {
      const Degree x = value(s, v, f.lhs());
      const Degree y = value(s, v, f.rhs());
      switch (f.connective()) {
        case ulmt::Connective::meet: return std::min(x, y);
        case ulmt::Connective::join: return std::max(x, y);
        case ulmt::Connective::conj: return a.conj(x, y);
        case ulmt::Connective::implies: return oracle::residuum(a, x, y);
      }
      break;
    }
    case Formula::Kind::quantified: {
      const bool all = f.quantifier() == ulmt::Quantifier::forall;
      Degree acc = all ? a.size() - 1 : 0;
      for (Element m = 0; m < s.size(); ++m) {
        Assignment w = v;
        w[f.name()] = m;
        const Degree d = value(s, w, f.body());
        acc = all ? std::min(acc, d) : std::max(acc, d);
      }
      return acc;
    }
  }
  return -1;
}

inline bool designated(const UlChain& c, Degree d) { return d >= c.one(); }

/// All propositional valuations of `atoms` into `chain`, in lexicographic order.
inline void for_each_valuation(const UlChain& chain, const std::vector<std::string>& atoms,
                               const std::function<void(const Structure&)>& fn) {
  const auto ptr = std::make_shared<const UlChain>(chain);
  std::vector<Degree> vals(atoms.size(), 0);
  while (true) {
    Structure s("valuation", ptr, {"e"});
    for (std::size_t i = 0; i < atoms.size(); ++i) s.set_predicate(atoms[i], 0, {vals[i]});
    fn(s);
    std::size_t i = atoms.size();
    while (i > 0) {
      --i;
      if (++vals[i] < chain.size()) break;
      vals[i] = 0;
      if (i == 0) return;
    }
    if (atoms.empty()) return;
  }
}

inline std::vector<std::string> propositions_of(const std::vector<Formula>& fs) {
  ulmt::Signature sig = ulmt::signature_of(fs);
  std::vector<std::string> out;
  for (const auto& [name, arity] : sig.predicates) out.push_back(name);
  return out;
}

/// Propositional consequence by direct valuation sweep over each chain.
inline bool entails(const std::vector<UlChain>& chains, const std::vector<Formula>& premises, const Formula& goal) {
  std::vector<Formula> all = premises;
  all.push_back(goal);
  const auto atoms = propositions_of(all);
  bool holds = true;
  for (const auto& c : chains)
    for_each_valuation(c, atoms, [&](const Structure& s) {
      for (const auto& p : premises)
        if (!designated(c, value(s, {}, p))) return;
      if (!designated(c, value(s, {}, goal))) holds = false;
    });
  return holds;
}

/// Every structure for unary predicates `preds` and constants `consts` over
/// `chain` with domain {e0..e(n-1)}, n <= max_domain. Predicate cells vary with
/// radix |chain|, constants with radix n.
inline std::vector<Structure> structures(const std::shared_ptr<const UlChain>& chain, const std::vector<std::string>& preds,
                                         const std::vector<std::string>& consts, std::size_t max_domain) {
  std::vector<Structure> out;
  for (std::size_t n = 1; n <= max_domain; ++n) {
    std::vector<std::string> dom;
    for (std::size_t i = 0; i < n; ++i) dom.push_back("e" + std::to_string(i));
    const std::size_t cells = n * preds.size();
    std::vector<std::size_t> digits(cells + consts.size(), 0);
    auto radix = [&](std::size_t i) { return i < cells ? static_cast<std::size_t>(chain->size()) : n; };
    while (true) {
      Structure s("s", chain, dom);
      for (std::size_t p = 0; p < preds.size(); ++p)
        s.set_predicate(preds[p], 1, std::vector<Degree>(digits.begin() + p * n, digits.begin() + (p + 1) * n));
      for (std::size_t c = 0; c < consts.size(); ++c) s.set_function(consts[c], 0, {digits[cells + c]});
      out.push_back(s);
      std::size_t i = digits.size();
      bool done = true;
      while (i > 0) {
        --i;
        if (++digits[i] < radix(i)) {
          done = false;
          break;
        }
        digits[i] = 0;
      }
      if (done) break;
    }
  }
  return out;
}

inline std::vector<Structure> unary_structures(const std::shared_ptr<const UlChain>& chain,
                                               const std::vector<std::string>& preds, std::size_t max_domain) {
  return structures(chain, preds, {}, max_domain);
}

}  // namespace oracle
