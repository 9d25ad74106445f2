#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "ulmt/enumeration.hpp"
#include "ulmt/semantics.hpp"

namespace ulmt {

/**
 * The finite stand-in for "every UL-chain and every model": a list of chains,
 * a bound on domain size and a ceiling on the number of candidate structures
 * any single search may visit. Chains are checked against the UL axioms on
 * construction. `workers` > 1 lets searches scan candidates in parallel; the
 * reported witness is always the least one in enumeration order.
 */
class SearchSpace {
 public:
  SearchSpace(std::vector<std::shared_ptr<const UlChain>> chains, std::size_t max_domain,
              std::uint64_t max_candidates = 1'000'000, unsigned workers = 1)
      : chains_(std::move(chains)), max_domain_(max_domain), max_candidates_(max_candidates), workers_(std::max(1u, workers)) {
    if (chains_.empty()) throw error(errc::invalid_size, "search space has no chains");
    if (max_domain_ < 1) throw error(errc::invalid_size, "max_domain must be at least 1");
    for (const auto& c : chains_) {
      if (!c) throw error(errc::invalid_element, "null chain in search space");
      const auto report = verify_ul_axioms(*c);
      if (!report.all_passed()) throw error(errc::invalid_axioms, "chain '" + c->name() + "' is not a UL-chain");
    }
  }

  const std::vector<std::shared_ptr<const UlChain>>& chains() const noexcept { return chains_; }
  std::size_t max_domain() const noexcept { return max_domain_; }
  std::uint64_t max_candidates() const noexcept { return max_candidates_; }
  unsigned workers() const noexcept { return workers_; }
  int max_chain_size() const {
    int m = 0;
    for (const auto& c : chains_) m = std::max(m, c->size());
    return m;
  }

  SearchSpace with_max_domain(std::size_t d) const {
    SearchSpace copy = *this;
    if (d < 1) throw error(errc::invalid_size, "max_domain must be at least 1");
    copy.max_domain_ = d;
    return copy;
  }

  SearchSpace with_workers(unsigned w) const {
    SearchSpace copy = *this;
    copy.workers_ = std::max(1u, w);
    return copy;
  }

 private:
  std::vector<std::shared_ptr<const UlChain>> chains_;
  std::size_t max_domain_;
  std::uint64_t max_candidates_;
  unsigned workers_;
};

/// Element names of enumerated domains.
inline std::string enumerated_element_name(std::size_t i) { return "e" + std::to_string(i); }

/**
 * Random access to every structure of a search space over a signature. The
 * order is: chains as listed, then domain sizes 1..max_domain, then all table
 * contents in lexicographic order (predicates by name, then functions by name,
 * each table in tuple order, the last entry varying fastest).
 */
class StructureEnumerator {
 public:
  StructureEnumerator(const SearchSpace& space, Signature sig) : sig_(std::move(sig)) {
    using detail::sat_add;
    using detail::sat_mul;
    using detail::sat_pow;
    for (std::size_t c = 0; c < space.chains().size(); ++c) {
      const auto& chain = space.chains()[c];
      for (std::size_t n = 1; n <= space.max_domain(); ++n) {
        std::uint64_t count = 1;
        for (const auto& [name, arity] : sig_.predicates)
          count = sat_mul(count, sat_pow(static_cast<std::uint64_t>(chain->size()), tuple_count(arity, n)));
        for (const auto& [name, arity] : sig_.functions) count = sat_mul(count, sat_pow(n, tuple_count(arity, n)));
        blocks_.push_back(Block{chain, n, count, total_});
        total_ = sat_add(total_, count);
      }
    }
    if (total_ > space.max_candidates())
      throw error(errc::search_space_too_large,
                  (total_ == std::numeric_limits<std::uint64_t>::max() ? std::string("more than 2^64")
                                                                       : std::to_string(total_)) +
                      " candidate structures exceed the ceiling of " + std::to_string(space.max_candidates()));
  }

  std::uint64_t size() const noexcept { return total_; }
  const Signature& signature() const noexcept { return sig_; }

  Structure at(std::uint64_t index) const {
    auto it = std::upper_bound(blocks_.begin(), blocks_.end(), index,
                               [](std::uint64_t i, const Block& b) { return i < b.offset; });
    const Block& block = *std::prev(it);
    std::uint64_t rest = index - block.offset;
    const std::size_t n = block.domain;
    std::vector<std::string> domain;
    for (std::size_t i = 0; i < n; ++i) domain.push_back(enumerated_element_name(i));
    Structure s("candidate" + std::to_string(index), block.chain, std::move(domain));

    // Decode from the least significant end: functions last, predicates first.
    std::vector<std::pair<std::string, std::vector<Element>>> funcs;
    for (auto it2 = sig_.functions.rbegin(); it2 != sig_.functions.rend(); ++it2) {
      std::vector<Element> values(tuple_count(it2->second, n));
      for (std::size_t k = values.size(); k-- > 0;) {
        values[k] = static_cast<Element>(rest % n);
        rest /= n;
      }
      funcs.emplace_back(it2->first, std::move(values));
    }
    std::vector<std::pair<std::string, std::vector<Degree>>> preds;
    const auto radix = static_cast<std::uint64_t>(block.chain->size());
    for (auto it2 = sig_.predicates.rbegin(); it2 != sig_.predicates.rend(); ++it2) {
      std::vector<Degree> values(tuple_count(it2->second, n));
      for (std::size_t k = values.size(); k-- > 0;) {
        values[k] = static_cast<Degree>(rest % radix);
        rest /= radix;
      }
      preds.emplace_back(it2->first, std::move(values));
    }
    for (auto& [name, values] : preds) s.set_predicate(name, sig_.predicates.at(name), std::move(values));
    for (auto& [name, values] : funcs) s.set_function(name, sig_.functions.at(name), std::move(values));
    return s;
  }

 private:
  struct Block {
    std::shared_ptr<const UlChain> chain;
    std::size_t domain;
    std::uint64_t count;
    std::uint64_t offset;
  };

  Signature sig_;
  std::vector<Block> blocks_;
  std::uint64_t total_ = 0;
};

inline std::vector<Structure> enumerate_structures(const SearchSpace& space, const Signature& sig) {
  StructureEnumerator en(space, sig);
  std::vector<Structure> out;
  out.reserve(static_cast<std::size_t>(en.size()));
  for (std::uint64_t i = 0; i < en.size(); ++i) out.push_back(en.at(i));
  return out;
}

/**
 * Least index i < count with pred(i), scanning in blocks on `workers` threads.
 * The result does not depend on the number of workers. `pred` must be safe to
 * call concurrently.
 */
template <class Pred>
std::optional<std::uint64_t> first_index_where(std::uint64_t count, unsigned workers, Pred pred) {
  if (workers <= 1 || count < 64) {
    for (std::uint64_t i = 0; i < count; ++i)
      if (pred(i)) return i;
    return std::nullopt;
  }
  constexpr std::uint64_t kBlock = 32;
  std::atomic<std::uint64_t> next_block{0};
  std::atomic<std::uint64_t> best{count};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    try {
      while (true) {
        const std::uint64_t start = next_block.fetch_add(1) * kBlock;
        if (start >= best.load()) return;
        const std::uint64_t end = std::min(count, start + kBlock);
        for (std::uint64_t i = start; i < end && i < best.load(); ++i) {
          if (pred(i)) {
            std::uint64_t cur = best.load();
            while (i < cur && !best.compare_exchange_weak(cur, i)) {
            }
            break;
          }
        }
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      best.store(0);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  if (best.load() == count) return std::nullopt;
  return best.load();
}

/// A structure together with values for the free variables of interest.
struct Interpretation {
  Structure structure;
  Evaluation evaluation;
};

/**
 * First (structure, assignment) in the space at which `accept` holds.
 * `make_check(structure)` builds a callable taking the values of `free_vars`
 * (in that order); assignments are tried in lexicographic order.
 */
template <class MakeCheck>
std::optional<Interpretation> find_first_interpretation(const SearchSpace& space, const Signature& sig,
                                                        const std::vector<std::string>& free_vars,
                                                        MakeCheck make_check) {
  StructureEnumerator en(space, sig);
  auto first_tuple = [&](const Structure& s) -> std::optional<std::vector<Element>> {
    auto check = make_check(s);
    std::optional<std::vector<Element>> hit;
    for_each_tuple(s.size(), free_vars.size(), [&](std::span<const Element> tuple) {
      if (check(tuple)) {
        hit.emplace(tuple.begin(), tuple.end());
        return true;
      }
      return false;
    });
    return hit;
  };
  auto index = first_index_where(en.size(), space.workers(),
                                 [&](std::uint64_t i) { return first_tuple(en.at(i)).has_value(); });
  if (!index) return std::nullopt;
  Structure s = en.at(*index);
  const auto tuple = *first_tuple(s);
  Evaluation v;
  for (std::size_t k = 0; k < free_vars.size(); ++k) v.set(free_vars[k], tuple[k]);
  return Interpretation{std::move(s), std::move(v)};
}

namespace detail {

template <class Range>
std::vector<std::string> free_variables_of(const Range& formulas) {
  std::set<std::string> all;
  for (const Formula& f : formulas) all.merge(free_variables(f));
  return {all.begin(), all.end()};
}

/// Designation constraints: every `designated` formula must be >= 1, every
/// `undesignated` one < 1. Formulas are compiled on first use, so a check that
/// fails early never pays for the rest. The formula vectors must outlive it.
class DesignationCheck {
 public:
  DesignationCheck(const Structure& s, const std::vector<Formula>& designated, const std::vector<Formula>& undesignated,
                   std::vector<std::string> vars)
      : structure_(&s),
        designated_(&designated),
        undesignated_(&undesignated),
        vars_(std::move(vars)),
        compiled_(designated.size() + undesignated.size()) {}

  bool operator()(std::span<const Element> values) const {
    const std::size_t np = designated_->size();
    for (std::size_t i = 0; i < compiled_.size(); ++i) {
      if (!compiled_[i]) compiled_[i].emplace(*structure_, i < np ? (*designated_)[i] : (*undesignated_)[i - np], vars_);
      if (structure_->chain().designated((*compiled_[i])(values)) != (i < np)) return false;
    }
    return true;
  }

 private:
  const Structure* structure_;
  const std::vector<Formula>* designated_;
  const std::vector<Formula>* undesignated_;
  std::vector<std::string> vars_;
  mutable std::vector<std::optional<CompiledFormula>> compiled_;
};

}  // namespace detail

/// First structure and evaluation making all of `premises` designated and `conclusion` not.
inline std::optional<Interpretation> find_countermodel(const SearchSpace& space, const std::vector<Formula>& premises,
                                                       const Formula& conclusion) {
  std::vector<Formula> all = premises;
  all.push_back(conclusion);
  const Signature sig = signature_of(all);
  const auto vars = detail::free_variables_of(all);
  const std::vector<Formula> goal{conclusion};
  return find_first_interpretation(space, sig, vars, [&](const Structure& s) {
    return detail::DesignationCheck(s, premises, goal, vars);
  });
}

/// Premises entail the conclusion in every structure and evaluation of the space.
inline bool entails(const SearchSpace& space, const std::vector<Formula>& premises, const Formula& conclusion) {
  return !find_countermodel(space, premises, conclusion).has_value();
}

}  // namespace ulmt
