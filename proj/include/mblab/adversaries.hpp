#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mblab/bounds.hpp"
#include "mblab/engine.hpp"
#include "mblab/finite_field.hpp"
#include "mblab/solver.hpp"

namespace mblab {

/// Largest number of members of S that any k/2-subset Z of F_k can capture
/// through s.u, i.e. the sum of the k/2 largest tallies |{s : s.u = z}|.
std::size_t top_half_mass(std::span<const FieldVector> s, const FieldVector& u);

/// Lexicographically least u in F_k^2 with top_half_mass(S, u) <= (|S| + k^1.5)/2.
/// Requires k a power of 2 and S nonempty; such u always exists.
FieldVector select_u(std::span<const FieldVector> s, const FieldSpec& spec);

/// Denies every guess on F_L(k,2) (k a power of 2, k >= 4) unless that would
/// empty the version space. Runs floor(log2(k)/2) phases, each asking one
/// select_u input k/2 times.
class LinearBanditAdversary final : public Adversary {
 public:
  LinearBanditAdversary(const Family& family, const FeedbackModel& model);

  std::optional<InputId> next_input(const GameState& state, std::size_t position,
                                    std::span<const Value> guesses) override;
  Feedback respond(const GameState& state, std::span<const InputId> inputs,
                   std::span<const Value> guesses) override;
  void observe(const Round& round) override;

  std::uint32_t phases() const { return phases_; }
  /// |S| at the start of each phase.
  const std::vector<std::size_t>& phase_sizes() const { return phase_sizes_; }

 private:
  FieldSpec spec_;
  std::uint32_t k_;
  std::uint32_t phases_;
  std::uint32_t phase_ = 0;
  std::uint32_t remaining_ = 0;
  InputId current_ = 0;
  std::vector<std::size_t> phase_sizes_;
};

/// The recursive adversary for COMPOSE(F_1..F_k, OR) over the subset-indicator
/// parts. Every answer is the negation of the guess; the guesses decide how
/// each block T_b splits into T_b1 and T_b2.
class CompositionAdversary final : public Adversary {
 public:
  CompositionAdversary(const Family& family, const FeedbackModel& model);

  std::optional<InputId> next_input(const GameState& state, std::size_t position,
                                    std::span<const Value> guesses) override;
  Feedback respond(const GameState& state, std::span<const InputId> inputs,
                   std::span<const Value> guesses) override;
  void observe(const Round& round) override;

  /// Current blocks {T_b}, in the order b is enumerated.
  const std::vector<std::vector<std::uint32_t>>& blocks() const { return blocks_; }
  /// Blocks recorded at the start of every level (including the final split).
  const std::vector<std::vector<std::vector<std::uint32_t>>>& history() const { return history_; }

 private:
  void start_level();

  std::shared_ptr<const CompositionLayout> layout_;
  bool standard_;
  std::uint32_t levels_;
  std::uint32_t level_ = 0;  // 1-based once started
  std::vector<std::vector<std::uint32_t>> blocks_;
  std::vector<std::vector<std::uint32_t>> next_blocks_;
  std::vector<std::vector<std::vector<std::uint32_t>>> history_;
  // Pending inputs of the current level: (window, a, b).
  struct Query {
    std::uint32_t window;
    std::uint32_t a;
    std::uint32_t b;
  };
  std::vector<Query> queue_;
  std::size_t cursor_ = 0;
};

/// Builds an adversary from its descriptor:
///   lin-bandit | agn-repeat[:eta=N][,mode=repeat|combo] | cart-repeat | compose-rec
///   greedy | solver-opt | always-no | random[:rounds=N]
std::unique_ptr<Adversary> make_adversary(std::string_view descriptor, const Family& family,
                                          const FeedbackModel& model, std::uint64_t seed);

/// The number of mistakes the adversary is guaranteed to force against any
/// learner, when its configuration carries such a guarantee.
std::optional<BoundSpec> forced_lower_bound(std::string_view descriptor, const Family& family,
                                            const FeedbackModel& model);

}  // namespace mblab
