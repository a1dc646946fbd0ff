#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mblab/bounds.hpp"
#include "mblab/engine.hpp"
#include "mblab/learners.hpp"

namespace mblab {

enum class WmvVariant {
  BanditOpt2,       // bandit, alpha = 1/k^2, split into k-1
  AgnosticBinary,   // agnostic, alpha = 0.1469, split into 2
  AgnosticGeneral,  // agnostic, alpha = 1/(k ln k), split into k
  Ambiguous,        // ambiguous, alpha = 1/(k ln k), split into r(k-1)
  AmbiguousBinary,  // ambiguous, k = 2, alpha = 1/(r ln r)
  AmbiguousSmallM,  // ambiguous, alpha = 1/(r k)^M
  Compose,          // composition, alpha = 1/((k+1) ln k), split into k+1
};

/// Largest p / 2^48 not above x (one ulp of slack absorbs rounding in x).
Rational rational_below(double x);

/// One asserted fact: coordinate `part` of the hidden function maps x to v.
struct WmvFact {
  std::uint32_t part = 0;
  InputId x = 0;
  Value v = 0;
};

/// An active copy of the standard learner (a tuple of copies for compositions).
/// Its weight is alpha^depth; `spaces[i]` is the version space implied by its
/// memory for coordinate i.
struct WmvNode {
  std::uint32_t depth = 0;
  std::uint32_t lies = 0;
  std::vector<Bitset> spaces;
  std::vector<WmvFact> memory;
};

/// Per-round accounting handed to the instrumentation hook.
struct WmvRoundStats {
  bool mistake = false;
  Rational weight_before;
  Rational weight_after;
  Rational electorate_weight;
  std::size_t electorate_size = 0;
  std::size_t children = 0;
  /// Active nodes per depth before and after the round, and electorate per depth.
  std::vector<std::size_t> active_before;
  std::vector<std::size_t> active_after;
  std::vector<std::size_t> electorate;
};

class WmvLearner final : public Learner {
 public:
  /// Throws ConfigError when the variant's parameter condition fails or the
  /// feedback model does not match the variant.
  WmvLearner(WmvVariant variant, const Family& family, const FeedbackModel& model);

  Value guess(InputId x, std::size_t position, Rng& rng) override;
  void update(const Round& round) override;
  std::optional<double> mistake_bound() const override;

  WmvVariant variant() const { return variant_; }
  const Rational& alpha() const { return alpha_; }
  /// The stated (possibly irrational) alpha that `alpha()` approximates from below.
  double alpha_stated() const { return alpha_stated_; }
  /// C: the inner learners' total mistake bound (plus eta in agnostic games
  /// gives the survivor's maximum depth).
  std::uint32_t inner_bound() const { return inner_bound_; }
  std::uint32_t survivor_depth() const { return inner_bound_ + eta_; }
  /// Upper bound on W_{t+1}/W_t after a mistake, when the variant has one.
  std::optional<Rational> decay_factor() const;
  std::optional<BoundSpec> bound() const { return bound_; }

  const std::vector<WmvNode>& nodes() const { return nodes_; }
  Rational weight(std::uint32_t depth) const;
  Rational total_weight() const;
  /// True when every fact in the node's memory holds for `target` (one
  /// function index per coordinate).
  bool truthful(const WmvNode& node, std::span<const FunctionId> target) const;

  void set_stats_hook(std::function<void(const WmvRoundStats&)> hook) { hook_ = std::move(hook); }

 private:
  struct Vote {
    Value winner = 0;
    std::vector<std::size_t> electorate;
  };

  Value predict(const WmvNode& node, std::size_t part, InputId x);
  Vote vote(std::span<const std::size_t> voters, std::span<const Value> predictions, Rng& rng);
  Rational weight_of(std::span<const std::size_t> voters) const;
  std::vector<std::size_t> depth_histogram(std::span<const std::size_t> voters) const;
  void split(const Round& round, std::vector<WmvNode>& next, std::size_t& children);
  WmvNode child(const WmvNode& parent, std::uint32_t part, InputId x, Value v, bool lie) const;

  WmvVariant variant_;
  FeedbackModel model_;
  std::vector<const ExplicitFamily*> parts_;
  std::vector<std::shared_ptr<InnerLearner>> inner_;
  const BooleanCombiner* combiner_ = nullptr;
  std::uint32_t k_;
  std::uint32_t eta_ = 0;
  std::uint32_t inner_bound_ = 0;
  Rational alpha_;
  double alpha_stated_ = 0;
  std::optional<BoundSpec> bound_;
  mutable std::vector<Rational> powers_;

  std::vector<WmvNode> nodes_;
  // Current round: electorate after each position and each electorate member's predictions.
  std::vector<std::size_t> electorate_;
  std::vector<std::vector<Value>> node_guesses_;  // per node, per position (compose: q_1..q_k)
  std::function<void(const WmvRoundStats&)> hook_;
};

/// "wmv:bandit2" | "wmv:agnostic" | "wmv:amb:r=R" | "wmv:amb2:r=R" | "wmv:ambM" | "wmv:compose".
std::unique_ptr<WmvLearner> make_wmv_learner(std::string_view descriptor, const Family& family,
                                             const FeedbackModel& model);

}  // namespace mblab
