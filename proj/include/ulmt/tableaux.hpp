#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ulmt/search.hpp"

namespace ulmt {

/// Largest |U| (or |T|+|U| for subtableau sweeps) handled by exhaustive subset enumeration.
inline constexpr std::size_t kDefaultSubsetCap = 12;

/**
 * A tableau <T, U>: everything on the left is to be designated, everything on
 * the right non-designated. Both sides are ordered sets (insertion order, no
 * duplicates).
 */
class Tableau {
 public:
  Tableau() = default;
  Tableau(std::vector<Formula> left, std::vector<Formula> right) {
    for (auto& f : left) add_left(std::move(f));
    for (auto& f : right) add_right(std::move(f));
  }

  const std::vector<Formula>& left() const noexcept { return left_; }
  const std::vector<Formula>& right() const noexcept { return right_; }

  bool add_left(Formula f) { return insert(left_, std::move(f)); }
  bool add_right(Formula f) { return insert(right_, std::move(f)); }
  bool contains_left(const Formula& f) const { return std::find(left_.begin(), left_.end(), f) != left_.end(); }
  bool contains_right(const Formula& f) const { return std::find(right_.begin(), right_.end(), f) != right_.end(); }

  std::vector<Formula> all() const {
    std::vector<Formula> out = left_;
    out.insert(out.end(), right_.begin(), right_.end());
    return out;
  }

  std::vector<std::string> free_variables() const { return detail::free_variables_of(all()); }
  Signature signature() const { return signature_of(all()); }

  bool is_subtableau_of(const Tableau& other) const {
    return std::all_of(left_.begin(), left_.end(), [&](const Formula& f) { return other.contains_left(f); }) &&
           std::all_of(right_.begin(), right_.end(), [&](const Formula& f) { return other.contains_right(f); });
  }

  friend bool operator==(const Tableau&, const Tableau&) = default;

 private:
  static bool insert(std::vector<Formula>& side, Formula f) {
    if (std::find(side.begin(), side.end(), f) != side.end()) return false;
    side.push_back(std::move(f));
    return true;
  }

  std::vector<Formula> left_;
  std::vector<Formula> right_;
};

inline bool satisfies_tableau(const Structure& s, const Evaluation& v, const Tableau& t) {
  for (const auto& f : t.left())
    if (!s.chain().designated(eval_formula(s, v, f))) return false;
  for (const auto& f : t.right())
    if (s.chain().designated(eval_formula(s, v, f))) return false;
  return true;
}

/// First structure and evaluation (in enumeration order) satisfying the tableau.
inline std::optional<Interpretation> find_satisfying_model(const SearchSpace& space, const Tableau& t) {
  const auto vars = t.free_variables();
  return find_first_interpretation(space, t.signature(), vars, [&](const Structure& s) {
    return detail::DesignationCheck(s, t.left(), t.right(), vars);
  });
}

inline bool is_satisfiable(const SearchSpace& space, const Tableau& t) { return find_satisfying_model(space, t).has_value(); }

namespace detail {

template <class Fn>
bool for_each_subset_mask(std::size_t n, Fn&& fn) {
  // Subsets by size, then by mask value.
  const std::uint64_t limit = std::uint64_t{1} << n;
  for (std::size_t k = 0; k <= n; ++k)
    for (std::uint64_t mask = 0; mask < limit; ++mask)
      if (static_cast<std::size_t>(std::popcount(mask)) == k && fn(mask)) return true;
  return false;
}

inline std::vector<Formula> select(const std::vector<Formula>& xs, std::uint64_t mask) {
  std::vector<Formula> out;
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (mask & (std::uint64_t{1} << i)) out.push_back(xs[i]);
  return out;
}

inline void check_cap(std::size_t n, std::size_t cap, const char* what) {
  if (n > cap)
    throw error(errc::subset_cap_exceeded,
                std::string(what) + " has " + std::to_string(n) + " formulas, cap is " + std::to_string(cap));
}

}  // namespace detail

/**
 * Least finite U0 of U (by size, then position) with T |= \/U0, where the
 * empty join is bot. None means the tableau is consistent in the space.
 */
inline std::optional<std::vector<Formula>> find_inconsistency_witness(const SearchSpace& space, const Tableau& t,
                                                                      std::size_t subset_cap = kDefaultSubsetCap) {
  detail::check_cap(t.right().size(), subset_cap, "right side");
  std::optional<std::vector<Formula>> witness;
  detail::for_each_subset_mask(t.right().size(), [&](std::uint64_t mask) {
    auto subset = detail::select(t.right(), mask);
    if (entails(space, t.left(), big_join(subset))) {
      witness = std::move(subset);
      return true;
    }
    return false;
  });
  return witness;
}

inline bool is_consistent(const SearchSpace& space, const Tableau& t, std::size_t subset_cap = kDefaultSubsetCap) {
  return !find_inconsistency_witness(space, t, subset_cap).has_value();
}

struct FiniteCharacterReport {
  bool all_subtableaux_satisfiable = true;
  bool satisfiable = false;
  bool consistent = false;
  std::optional<Tableau> unsatisfiable_subtableau;  // least one, by size
  std::optional<std::vector<Formula>> inconsistency_witness;

  /// (every subtableau satisfiable) implies (tableau satisfiable), as observed.
  bool finite_character_holds() const { return !all_subtableaux_satisfiable || satisfiable; }
  /// satisfiable iff consistent, as observed.
  bool model_existence_holds() const { return satisfiable == consistent; }
};

/// Satisfiability of every subtableau, of the tableau itself, and its consistency, all within the space.
inline FiniteCharacterReport check_finite_character(const SearchSpace& space, const Tableau& t,
                                                    std::size_t subset_cap = kDefaultSubsetCap) {
  const std::size_t nl = t.left().size();
  const std::size_t nr = t.right().size();
  detail::check_cap(nl + nr, subset_cap, "tableau");
  FiniteCharacterReport report;
  detail::for_each_subset_mask(nl + nr, [&](std::uint64_t mask) {
    Tableau sub(detail::select(t.left(), mask & ((std::uint64_t{1} << nl) - 1)),
                detail::select(t.right(), mask >> nl));
    if (!is_satisfiable(space, sub)) {
      report.all_subtableaux_satisfiable = false;
      report.unsatisfiable_subtableau = std::move(sub);
      return true;
    }
    return false;
  });
  report.satisfiable = is_satisfiable(space, t);
  report.inconsistency_witness = find_inconsistency_witness(space, t, subset_cap);
  report.consistent = !report.inconsistency_witness.has_value();
  return report;
}

// ---------------------------------------------------------------------------
// Staged Henkin completion

struct HenkinStage {
  enum class Kind { forall_witness, exists_witness, linearity };
  std::size_t number = 0;  // s+1 in the interleaved numbering 3i+1, 3i+2, 3i+3
  Kind kind = Kind::linearity;
  std::string action;      // human-readable summary; "skip" when the stage did nothing
  Tableau after;
};

struct HenkinResult {
  Tableau tableau;
  std::vector<HenkinStage> stages;
  std::vector<std::string> constants_used;
};

/**
 * Runs the interleaved completion stages over finite enumerations. For each
 * index i: stage 3i+1 handles formulas[i] if universal, stage 3i+2 handles it
 * if existential, stage 3i+3 decides pairs[i]. Case splits are decided with
 * the entailment oracle of the space. Every intermediate tableau is recorded.
 */
inline HenkinResult henkin_complete(const SearchSpace& space, const Tableau& start,
                                    const std::vector<std::string>& fresh_constants,
                                    const std::vector<Formula>& formulas,
                                    const std::vector<std::pair<Formula, Formula>>& pairs,
                                    std::size_t subset_cap = kDefaultSubsetCap) {
  for (const auto& c : fresh_constants)
    if (looks_like_variable(c) || is_parameter_name(c))
      throw error(errc::invalid_element, "'" + c + "' cannot serve as a fresh constant name");
  if (!is_consistent(space, start, subset_cap)) throw error(errc::inconsistent_input, "starting tableau is inconsistent");

  HenkinResult result{start, {}, {}};
  Tableau& cur = result.tableau;
  std::size_t next_constant = 0;

  auto take_constant = [&](const Formula& about) -> std::string {
    while (next_constant < fresh_constants.size()) {
      const std::string& c = fresh_constants[next_constant++];
      const bool used = mentions_constant(about, c) ||
                        std::any_of(cur.left().begin(), cur.left().end(), [&](const Formula& f) { return mentions_constant(f, c); }) ||
                        std::any_of(cur.right().begin(), cur.right().end(), [&](const Formula& f) { return mentions_constant(f, c); });
      if (!used) {
        result.constants_used.push_back(c);
        return c;
      }
    }
    throw error(errc::constants_exhausted, "no unused fresh constant left for " + to_string(about));
  };

  // Some finite U' of the current right side with premises |= (\/U') \/ extra (extra may be absent).
  auto some_subset_entails = [&](const std::vector<Formula>& premises, const std::optional<Formula>& extra) {
    detail::check_cap(cur.right().size(), subset_cap, "right side");
    return detail::for_each_subset_mask(cur.right().size(), [&](std::uint64_t mask) {
      Formula goal = big_join(detail::select(cur.right(), mask));
      if (extra) goal = Formula::join(goal, *extra);
      return entails(space, premises, goal);
    });
  };

  const std::size_t rounds = std::max(formulas.size(), pairs.size());
  for (std::size_t i = 0; i < rounds; ++i) {
    {
      HenkinStage stage{3 * i + 1, HenkinStage::Kind::forall_witness, "skip", {}};
      if (i < formulas.size() && formulas[i].is_quantified() && formulas[i].quantifier() == Quantifier::forall) {
        const Formula& phi = formulas[i];
        if (some_subset_entails(cur.left(), phi)) {
          cur.add_left(phi);
          stage.action = "case (i): add " + to_string(phi) + " to T";
        } else {
          const std::string c = take_constant(phi);
          const Formula instance = substitute(phi.body(), phi.name(), Term::apply(c));
          cur.add_right(instance);
          stage.action = "case (ii): add " + to_string(instance) + " to U";
        }
      }
      stage.after = cur;
      result.stages.push_back(std::move(stage));
    }
    {
      HenkinStage stage{3 * i + 2, HenkinStage::Kind::exists_witness, "skip", {}};
      if (i < formulas.size() && formulas[i].is_quantified() && formulas[i].quantifier() == Quantifier::exists) {
        const Formula& phi = formulas[i];
        std::vector<Formula> premises = cur.left();
        premises.push_back(phi);
        if (some_subset_entails(premises, std::nullopt)) {
          stage.action = "case (i): unchanged";
        } else {
          const std::string c = take_constant(phi);
          const Formula instance = substitute(phi.body(), phi.name(), Term::apply(c));
          cur.add_left(instance);
          stage.action = "case (ii): add " + to_string(instance) + " to T";
        }
      }
      stage.after = cur;
      result.stages.push_back(std::move(stage));
    }
    {
      HenkinStage stage{3 * i + 3, HenkinStage::Kind::linearity, "skip", {}};
      if (i < pairs.size()) {
        const auto& [theta, psi] = pairs[i];
        const Formula forward = Formula::implies(theta, psi);
        const Formula backward = Formula::implies(psi, theta);
        Tableau attempt = cur;
        attempt.add_left(forward);
        if (is_consistent(space, attempt, subset_cap)) {
          cur = std::move(attempt);
          stage.action = "add " + to_string(forward) + " to T";
        } else {
          attempt = cur;
          attempt.add_left(backward);
          if (!is_consistent(space, attempt, subset_cap))
            throw error(errc::inconsistent_input, "neither direction of pair " + std::to_string(i) + " is consistent");
          cur = std::move(attempt);
          stage.action = "add " + to_string(backward) + " to T";
        }
      }
      stage.after = cur;
      result.stages.push_back(std::move(stage));
    }
  }
  return result;
}

}  // namespace ulmt
