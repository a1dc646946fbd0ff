#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "mblab/bitset.hpp"
#include "mblab/family.hpp"
#include "mblab/model.hpp"
#include "mblab/version_space.hpp"

namespace mblab {

/// States explored before the solver gives up. MBLAB_BUDGET overrides the default.
std::size_t default_solver_budget();

/// Exact minimax value of the mistake-bound game on an explicit family.
///
/// Values are memoized per version space. In the ambiguous model the r inputs
/// of a round alternate with the learner's guesses; against a deterministic
/// learner an adversary that commits the whole batch up front can simulate the
/// learner, so the alternating tree has the same value as the committed one.
/// The agnostic state is the vector of lie counts capped at eta + 1.
class ExactSolver {
 public:
  ExactSolver(const ExplicitFamily& family, const FeedbackModel& model,
              std::size_t budget = default_solver_budget());

  /// Value from the full family (no feedback yet).
  std::uint32_t value();
  /// Value from an arbitrary version space of the same family and model.
  std::uint32_t value(const VersionSpace& v);

  /// Adversary's next input given the partial round. At position 0 returns
  /// nullopt when no input can force another mistake.
  std::optional<InputId> best_input(const VersionSpace& v, std::span<const InputId> inputs,
                                    std::span<const Value> guesses);
  /// Learner's guess for inputs.back(); `guesses` holds the earlier positions.
  Value best_guess(const VersionSpace& v, std::span<const InputId> inputs,
                   std::span<const Value> guesses);
  /// Adversary's feedback on a complete round.
  Feedback best_feedback(const VersionSpace& v, std::span<const InputId> inputs,
                         std::span<const Value> guesses);

  std::size_t states_explored() const { return explored_; }
  const FeedbackModel& model() const { return model_; }

 private:
  using Lies = std::vector<std::uint8_t>;
  struct LiesHash {
    std::size_t operator()(const Lies& l) const;
  };

  static constexpr int kStall = std::numeric_limits<int>::min() / 4;

  int solve(const Bitset& v);
  int solve_lies(const Lies& lies);
  int inner(const Bitset& v, std::size_t position, const Bitset& agree);
  int input_value(const Bitset& v, InputId x);
  int input_value_lies(const Lies& lies, InputId x);
  int guess_value(const Bitset& v, InputId x, Value y);
  int guess_value_lies(const Lies& lies, InputId x, Value y);

  Lies lies_of(const VersionSpace& v) const;
  Bitset members_of(const Lies& lies) const;
  /// Lie vector after feedback (yes = true) on (x, y); nullopt if no member survives.
  std::optional<Lies> after(const Lies& lies, InputId x, Value y, bool yes) const;
  Bitset agreeing(const Bitset& v, std::span<const InputId> inputs,
                  std::span<const Value> guesses) const;
  void count_state();

  const ExplicitFamily& family_;
  FeedbackModel model_;
  std::size_t budget_;
  std::size_t explored_ = 0;
  std::unordered_map<Bitset, int, BitsetHash> memo_;
  std::vector<std::unordered_map<Bitset, int, BitsetHash>> inner_memo_;
  std::unordered_map<Lies, int, LiesHash> lie_memo_;
};

/// opt_std / opt_bs / opt_amb,r / opt_ag(., eta) of the family. Throws
/// CapacityError when the search exceeds `budget` states.
std::uint32_t opt_exact(const ExplicitFamily& family, const FeedbackModel& model,
                        std::optional<std::size_t> budget = std::nullopt);

}  // namespace mblab
