#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mblab/bitset.hpp"
#include "mblab/family.hpp"
#include "mblab/model.hpp"

namespace mblab {

/// Functions consistent with the feedback so far. In agnostic mode every
/// function carries a lie count and is a member while that count is <= eta.
class VersionSpace {
 public:
  static VersionSpace full(const ExplicitFamily& family);
  static VersionSpace full_agnostic(const ExplicitFamily& family, std::uint32_t eta);
  static VersionSpace from_members(Bitset members);

  const Bitset& members() const { return members_; }
  std::size_t size() const { return members_.count(); }
  bool empty() const { return members_.none(); }
  bool contains(FunctionId f) const { return members_.test(f); }

  bool agnostic() const { return agnostic_; }
  std::uint32_t lie_budget() const { return eta_; }
  /// Lie counts capped at eta + 1; empty outside agnostic mode.
  const std::vector<std::uint32_t>& lie_counts() const { return lies_; }

  bool operator==(const VersionSpace&) const = default;

 private:
  Bitset members_;
  bool agnostic_ = false;
  std::uint32_t eta_ = 0;
  std::vector<std::uint32_t> lies_;

  friend VersionSpace vs_restrict(const VersionSpace&, const ExplicitFamily&,
                                  std::span<const InputId>, std::span<const Value>, Feedback);
  friend VersionSpace vs_restrict_unchecked(const VersionSpace&, const ExplicitFamily&,
                                            std::span<const InputId>, std::span<const Value>,
                                            Feedback);
};

/// Rows agreeing with every (input, guess) pair.
Bitset agreeing_rows(const ExplicitFamily& family, std::span<const InputId> inputs,
                     std::span<const Value> guesses);

/// Rows consistent with one round's feedback (ignoring lie budgets).
Bitset consistent_rows(const ExplicitFamily& family, std::span<const InputId> inputs,
                       std::span<const Value> guesses, Feedback feedback);

/// Restricts V by one round of feedback. A revealed value applies to a single
/// input; YES/NO apply to the whole guess tuple. Agnostic spaces count lies
/// instead of dropping rows. Throws InconsistencyError if nothing survives.
VersionSpace vs_restrict(const VersionSpace& v, const ExplicitFamily& family,
                         std::span<const InputId> inputs, std::span<const Value> guesses,
                         Feedback feedback);

/// As vs_restrict, but returns an empty space instead of throwing.
VersionSpace vs_restrict_unchecked(const VersionSpace& v, const ExplicitFamily& family,
                                   std::span<const InputId> inputs,
                                   std::span<const Value> guesses, Feedback feedback);

/// Realized values at x among the members, ascending.
std::vector<Value> realized_values(const Bitset& members, const ExplicitFamily& family, InputId x);

/// Version space of a factorized composition g(f_1..f_k): the history of
/// (input, composed value) facts plus a backtracking witness search over
/// tuples (f_1..f_k).
class ComposedVersionSpace {
 public:
  explicit ComposedVersionSpace(const Family::Composition& composition);

  void add_fact(InputId x, Value v) { facts_.emplace_back(x, v); }
  const std::vector<std::pair<InputId, Value>>& facts() const { return facts_; }

  /// A tuple of part-function indices consistent with every fact plus `extra`.
  std::optional<std::vector<FunctionId>> witness(
      std::span<const std::pair<InputId, Value>> extra = {}) const;
  bool feasible_with(InputId x, Value v) const;
  std::vector<Value> realized(InputId x) const;

  Value evaluate(const std::vector<FunctionId>& tuple, InputId x) const;

 private:
  const Family::Composition* comp_;
  std::vector<std::pair<InputId, Value>> facts_;
};

}  // namespace mblab
