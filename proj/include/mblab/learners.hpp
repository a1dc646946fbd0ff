#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>

#include "mblab/engine.hpp"
#include "mblab/solver.hpp"

namespace mblab {

/// A standard-model learner whose state is a version space: it predicts from
/// the set of functions consistent with what it has been told.
class InnerLearner {
 public:
  virtual ~InnerLearner() = default;
  virtual Value predict(const Bitset& space, InputId x) = 0;
  /// Mistakes made at most when every told value is correct.
  virtual std::uint32_t bound() const = 0;
};

/// Predicts the agreed value when the space is unanimous at x, otherwise 0
/// (or the smallest realized value if 0 is not realized). On linear families
/// this is the span learner (bound n); on sparse families it is the
/// guess-zero learner (bound M).
class DefaultValueLearner final : public InnerLearner {
 public:
  DefaultValueLearner(const ExplicitFamily& family, std::uint32_t bound)
      : family_(family), bound_(bound) {}
  Value predict(const Bitset& space, InputId x) override;
  std::uint32_t bound() const override { return bound_; }

 private:
  const ExplicitFamily& family_;
  std::uint32_t bound_;
};

/// Plays the optimal standard-model strategy from the exact solver; bound opt_std(F).
class OptimalStandardLearner final : public InnerLearner {
 public:
  explicit OptimalStandardLearner(const ExplicitFamily& family);
  Value predict(const Bitset& space, InputId x) override;
  std::uint32_t bound() const override { return bound_; }

 private:
  ExactSolver solver_;
  std::uint32_t bound_;
};

/// Span learner for linear families, zero-default for sparse families,
/// optimal standard learner otherwise.
std::unique_ptr<InnerLearner> make_inner_learner(const ExplicitFamily& family);

/// Builds a learner from its descriptor:
///   halving | zero | span | random | solver-opt
///   wmv:bandit2 | wmv:agnostic | wmv:amb:r=R | wmv:amb2:r=R | wmv:ambM | wmv:compose
/// Throws ParseError for unknown descriptors and ConfigError for parameter
/// constraints.
std::unique_ptr<Learner> make_learner(std::string_view descriptor, const Family& family,
                                      const FeedbackModel& model);

}  // namespace mblab
