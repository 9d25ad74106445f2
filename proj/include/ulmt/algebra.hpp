#pragma once

#include <algorithm>
#include <cstdlib>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ulmt/error.hpp"

namespace ulmt {

/// A truth degree: an index into the carrier of a finite chain, ordered as integers.
using Degree = int;

/**
 * A finite UL-chain. The carrier is the index range 0..size-1 with the integer
 * order, so meet and join are min and max, bot is 0 and top is size-1. The
 * monoid operation is an explicit table; its residuum is derived from the table
 * by exhaustive maximisation and cached.
 *
 * Construction only checks the table shape. Whether the table really is a
 * UL-chain is decided by verify_ul_axioms().
 */
class UlChain {
 public:
  UlChain(std::string name, std::vector<std::vector<Degree>> conj_table, Degree one, Degree zero)
      : name_(std::move(name)), size_(static_cast<int>(conj_table.size())), one_(one), zero_(zero) {
    if (size_ < 2) throw error(errc::invalid_size, "chain '" + name_ + "' needs at least two elements");
    if (!contains(one_)) throw error(errc::invalid_element, "constant 1 out of range in chain '" + name_ + "'");
    if (!contains(zero_)) throw error(errc::invalid_element, "constant 0 out of range in chain '" + name_ + "'");
    conj_.reserve(static_cast<std::size_t>(size_ * size_));
    for (const auto& row : conj_table) {
      if (static_cast<int>(row.size()) != size_)
        throw error(errc::invalid_size, "conj table of chain '" + name_ + "' is not square");
      for (Degree v : row) {
        if (!contains(v)) throw error(errc::invalid_element, "conj table entry out of range in chain '" + name_ + "'");
        conj_.push_back(v);
      }
    }
    res_.assign(conj_.size(), 0);
    for (Degree a = 0; a < size_; ++a) {
      for (Degree b = 0; b < size_; ++b) {
        // max{c : a*c <= b}; scanned from the top so the first hit is the maximum.
        Degree best = -1;
        for (Degree c = size_ - 1; c >= 0; --c) {
          if (conj(a, c) <= b) {
            best = c;
            break;
          }
        }
        if (best < 0) {
          residua_total_ = false;
          best = 0;
        }
        res_[index(a, b)] = best;
      }
    }
  }

  const std::string& name() const noexcept { return name_; }
  int size() const noexcept { return size_; }
  Degree bot() const noexcept { return 0; }
  Degree top() const noexcept { return size_ - 1; }
  Degree one() const noexcept { return one_; }
  Degree zero() const noexcept { return zero_; }

  bool contains(Degree a) const noexcept { return a >= 0 && a < size_; }
  bool designated(Degree a) const noexcept { return a >= one_; }

  // Unchecked operations; arguments must be carrier indices.
  Degree conj(Degree a, Degree b) const noexcept { return conj_[index(a, b)]; }
  Degree residuum(Degree a, Degree b) const noexcept { return res_[index(a, b)]; }
  static Degree meet(Degree a, Degree b) noexcept { return std::min(a, b); }
  static Degree join(Degree a, Degree b) noexcept { return std::max(a, b); }

  /// False when some a*c <= b has no solution c; such a table fails residuation.
  bool residua_total() const noexcept { return residua_total_; }

  std::vector<std::vector<Degree>> conj_table() const {
    std::vector<std::vector<Degree>> rows(static_cast<std::size_t>(size_));
    for (Degree a = 0; a < size_; ++a)
      for (Degree b = 0; b < size_; ++b) rows[static_cast<std::size_t>(a)].push_back(conj(a, b));
    return rows;
  }

  /// Same carrier size, constants and tables; names are ignored.
  bool same_algebra(const UlChain& other) const noexcept {
    return size_ == other.size_ && one_ == other.one_ && zero_ == other.zero_ && conj_ == other.conj_;
  }

 private:
  std::size_t index(Degree a, Degree b) const noexcept {
    return static_cast<std::size_t>(a) * static_cast<std::size_t>(size_) + static_cast<std::size_t>(b);
  }

  std::string name_;
  int size_;
  Degree one_;
  Degree zero_;
  std::vector<Degree> conj_;
  std::vector<Degree> res_;
  bool residua_total_ = true;
};

namespace detail {

inline void check_element(const UlChain& chain, Degree a) {
  if (!chain.contains(a))
    throw error(errc::invalid_element,
                std::to_string(a) + " is not an element of chain '" + chain.name() + "'");
}

}  // namespace detail

/// Łukasiewicz chain with n elements: a*b = max(0, a+b-(n-1)), 1 = top, 0 = bot.
inline UlChain make_lukasiewicz_chain(int n) {
  if (n < 2) throw error(errc::invalid_size, "Lukasiewicz chain needs n >= 2");
  std::vector<std::vector<Degree>> table(static_cast<std::size_t>(n), std::vector<Degree>(static_cast<std::size_t>(n)));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) table[a][b] = std::max(0, a + b - (n - 1));
  return UlChain("L" + std::to_string(n), std::move(table), n - 1, 0);
}

/// Gödel chain with n elements: a*b = min(a,b), 1 = top, 0 = bot.
inline UlChain make_godel_chain(int n) {
  if (n < 2) throw error(errc::invalid_size, "Godel chain needs n >= 2");
  std::vector<std::vector<Degree>> table(static_cast<std::size_t>(n), std::vector<Degree>(static_cast<std::size_t>(n)));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) table[a][b] = std::min(a, b);
  return UlChain("G" + std::to_string(n), std::move(table), n - 1, 0);
}

/**
 * Integers -k..k with the odd Sugihara product: of two values the one with the
 * larger absolute value wins, ties go to the smaller. Index i stands for i-k,
 * so the neutral element 0 sits at index k, strictly inside the chain. The
 * falsity constant defaults to 0 as in the usual odd Sugihara monoid; pass
 * `zero` to place it elsewhere. With zero at -1 the single-chain consequence
 * relation loses the local deduction theorem.
 *
 * Plain clamped addition on -k..k is neither associative nor residuated (see
 * clamped_sum_table), so it cannot serve as a chain here.
 */
inline UlChain make_truncated_group_chain(int k, std::optional<Degree> zero = std::nullopt) {
  if (k < 1) throw error(errc::invalid_size, "truncated group chain needs k >= 1");
  const int n = 2 * k + 1;
  std::vector<std::vector<Degree>> table(static_cast<std::size_t>(n), std::vector<Degree>(static_cast<std::size_t>(n)));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const int x = a - k, y = b - k;
      const int wins = std::abs(x) == std::abs(y) ? std::min(x, y) : (std::abs(x) > std::abs(y) ? x : y);
      table[a][b] = wins + k;
    }
  return UlChain("Z" + std::to_string(k), std::move(table), k, zero.value_or(k));
}

/// clamp(a+b, -k, k) on indices 0..2k. Not a chain table; kept for comparison.
inline std::vector<std::vector<Degree>> clamped_sum_table(int k) {
  if (k < 1) throw error(errc::invalid_size, "clamped sum table needs k >= 1");
  const int n = 2 * k + 1;
  std::vector<std::vector<Degree>> table(static_cast<std::size_t>(n), std::vector<Degree>(static_cast<std::size_t>(n)));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) table[a][b] = std::clamp((a - k) + (b - k), -k, k) + k;
  return table;
}

/// Checked residuum: max{c : a*c <= b}.
inline Degree residuum(const UlChain& chain, Degree a, Degree b) {
  detail::check_element(chain, a);
  detail::check_element(chain, b);
  return chain.residuum(a, b);
}

/// Checked monoid product.
inline Degree conj(const UlChain& chain, Degree a, Degree b) {
  detail::check_element(chain, a);
  detail::check_element(chain, b);
  return chain.conj(a, b);
}

/// (a /\ 1)^n under the monoid product; n = 0 gives 1.
inline Degree power(const UlChain& chain, Degree a, unsigned n) {
  detail::check_element(chain, a);
  const Degree base = std::min(a, chain.one());
  Degree acc = chain.one();
  for (unsigned i = 0; i < n; ++i) {
    const Degree next = chain.conj(acc, base);
    if (next == acc) break;  // stationary from here on
    acc = next;
  }
  return acc;
}

struct AxiomCheck {
  std::string axiom;
  bool passed = true;
  std::vector<Degree> witness;  // offending elements when !passed
  std::string detail;
};

struct VerificationReport {
  std::string chain;
  std::vector<AxiomCheck> checks;

  bool all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const AxiomCheck& c) { return c.passed; });
  }
};

/**
 * Exhaustive check of the UL-chain axioms: bounded lattice, commutative monoid
 * with neutral 1, monotonicity, residuation and prelinearity. At most n^3
 * triples are visited; the first failure of each group is reported.
 */
inline VerificationReport verify_ul_axioms(const UlChain& chain) {
  const int n = chain.size();
  VerificationReport report{chain.name(), {}};

  AxiomCheck lattice{"bounded-lattice", true, {}, ""};
  if (!chain.contains(chain.one()) || !chain.contains(chain.zero())) {
    lattice.passed = false;
    lattice.detail = "constant outside carrier";
  }
  report.checks.push_back(lattice);

  AxiomCheck monoid{"commutative-monoid", true, {}, ""};
  for (Degree a = 0; a < n && monoid.passed; ++a) {
    if (chain.conj(a, chain.one()) != a) {
      monoid = {"commutative-monoid", false, {a}, "1 is not neutral"};
      break;
    }
    for (Degree b = 0; b < n && monoid.passed; ++b) {
      if (chain.conj(a, b) != chain.conj(b, a)) {
        monoid = {"commutative-monoid", false, {a, b}, "not commutative"};
        break;
      }
      for (Degree c = 0; c < n; ++c) {
        if (chain.conj(chain.conj(a, b), c) != chain.conj(a, chain.conj(b, c))) {
          monoid = {"commutative-monoid", false, {a, b, c}, "not associative"};
          break;
        }
      }
    }
  }
  report.checks.push_back(monoid);

  AxiomCheck mono{"monotonicity", true, {}, ""};
  for (Degree a = 0; a < n && mono.passed; ++a) {
    for (Degree b = 0; b + 1 < n; ++b) {
      if (chain.conj(a, b) > chain.conj(a, b + 1)) {
        mono = {"monotonicity", false, {a, b, b + 1}, "a*b > a*(b+1)"};
        break;
      }
      if (chain.conj(b, a) > chain.conj(b + 1, a)) {
        mono = {"monotonicity", false, {b, b + 1, a}, "b*a > (b+1)*a"};
        break;
      }
    }
  }
  report.checks.push_back(mono);

  AxiomCheck res{"residuation", true, {}, ""};
  for (Degree a = 0; a < n && res.passed; ++a)
    for (Degree b = 0; b < n && res.passed; ++b)
      for (Degree c = 0; c < n; ++c) {
        const bool lhs = chain.conj(a, b) <= c;
        const bool rhs = b <= chain.residuum(a, c);
        if (lhs != rhs) {
          res = {"residuation", false, {a, b, c}, "a*b <= c does not match b <= a->c"};
          break;
        }
      }
  if (res.passed && !chain.residua_total()) res = {"residuation", false, {}, "some residuum does not exist"};
  report.checks.push_back(res);

  AxiomCheck lin{"prelinearity", true, {}, ""};
  for (Degree a = 0; a < n && lin.passed; ++a)
    for (Degree b = 0; b < n; ++b) {
      const Degree left = std::min(chain.residuum(a, b), chain.one());
      const Degree right = std::min(chain.residuum(b, a), chain.one());
      if (std::max(left, right) != chain.one()) {
        lin = {"prelinearity", false, {a, b}, "((a->b)/\\1) \\/ ((b->a)/\\1) != 1"};
        break;
      }
    }
  report.checks.push_back(lin);
  return report;
}

}  // namespace ulmt
