#include "mblab/learners.hpp"

#include <map>

#include "mblab/descriptor.hpp"
#include "mblab/errors.hpp"
#include "mblab/wmv.hpp"

namespace mblab {

Value DefaultValueLearner::predict(const Bitset& space, InputId x) {
  std::optional<Value> smallest;
  std::size_t realized = 0;
  bool zero = false;
  for (const auto& c : family_.classes(x)) {
    if (!c.members.intersects(space)) continue;
    ++realized;
    if (!smallest) smallest = c.value;
    zero = zero || c.value == 0;
  }
  if (realized == 1 || !zero) return smallest.value_or(0);
  return 0;
}

OptimalStandardLearner::OptimalStandardLearner(const ExplicitFamily& family)
    : solver_(family, FeedbackModel::standard()), bound_(solver_.value()) {}

Value OptimalStandardLearner::predict(const Bitset& space, InputId x) {
  const InputId inputs[] = {x};
  return solver_.best_guess(VersionSpace::from_members(space), inputs, {});
}

std::unique_ptr<InnerLearner> make_inner_learner(const ExplicitFamily& family) {
  const auto d = Descriptor::parse(family.descriptor());
  if (d.name == "linear") {
    return std::make_unique<DefaultValueLearner>(family, static_cast<std::uint32_t>(d.get_uint("n")));
  }
  if (d.name == "sparse") {
    return std::make_unique<DefaultValueLearner>(family, static_cast<std::uint32_t>(d.get_uint("M")));
  }
  return std::make_unique<OptimalStandardLearner>(family);
}

namespace {

/// Baseline learners that track the same version space as the referee and
/// choose among the values it still allows.
class SpaceLearner : public Learner {
 public:
  SpaceLearner(const ExplicitFamily& family, const FeedbackModel& model)
      : family_(family),
        model_(model),
        space_(model.kind() == FeedbackModel::Kind::AgnosticBandit
                   ? VersionSpace::full_agnostic(family, model.eta())
                   : VersionSpace::full(family)) {}

  Value guess(InputId x, std::size_t position, Rng& rng) override {
    if (position == 0) {
      inputs_.clear();
      guesses_.clear();
    }
    // Later positions choose among functions agreeing with this round's guesses.
    Bitset pool = agreeing_rows(family_, inputs_, guesses_) & space_.members();
    if (pool.none()) pool = space_.members();
    inputs_.push_back(x);
    const Value y = choose(pool, x, rng);
    guesses_.push_back(y);
    return y;
  }

  void update(const Round& round) override {
    auto next = vs_restrict_unchecked(space_, family_, round.inputs, round.guesses, round.feedback);
    if (!next.empty()) space_ = std::move(next);
  }

  bool converged() const override { return !space_.agnostic() && space_.size() == 1; }

 protected:
  virtual Value choose(const Bitset& pool, InputId x, Rng& rng) = 0;

  const ExplicitFamily& family_;
  FeedbackModel model_;
  VersionSpace space_;
  std::vector<InputId> inputs_;
  std::vector<Value> guesses_;
};

class HalvingLearner final : public SpaceLearner {
 public:
  using SpaceLearner::SpaceLearner;

 protected:
  Value choose(const Bitset& pool, InputId x, Rng&) override {
    Value best = 0;
    std::size_t best_count = 0;
    for (const auto& c : family_.classes(x)) {
      const std::size_t n = (c.members & pool).count();
      if (n > best_count) best = c.value, best_count = n;
    }
    return best;
  }
};

class ZeroLearner final : public SpaceLearner {
 public:
  ZeroLearner(const ExplicitFamily& family, const FeedbackModel& model)
      : SpaceLearner(family, model), inner_(family, 0) {}

 protected:
  Value choose(const Bitset& pool, InputId x, Rng&) override { return inner_.predict(pool, x); }

 private:
  DefaultValueLearner inner_;
};

class RandomLearner final : public SpaceLearner {
 public:
  using SpaceLearner::SpaceLearner;

 protected:
  Value choose(const Bitset& pool, InputId x, Rng& rng) override {
    const auto values = realized_values(pool, family_, x);
    return values[rng.below(values.size())];
  }
};

class SolverLearner final : public SpaceLearner {
 public:
  SolverLearner(const ExplicitFamily& family, const FeedbackModel& model)
      : SpaceLearner(family, model), solver_(family, model) {
    solver_.value();
  }

  Value guess(InputId x, std::size_t position, Rng&) override {
    if (position == 0) {
      inputs_.clear();
      guesses_.clear();
    }
    inputs_.push_back(x);
    const Value y = solver_.best_guess(space_, inputs_, guesses_);
    guesses_.push_back(y);
    return y;
  }

 protected:
  Value choose(const Bitset&, InputId, Rng&) override { return 0; }

 private:
  ExactSolver solver_;
};

/// Guesses 0 everywhere; used on compositions that exist only in factorized form.
class ConstantZeroLearner final : public Learner {
 public:
  Value guess(InputId, std::size_t, Rng&) override { return 0; }
  void update(const Round&) override {}
};

}  // namespace

std::unique_ptr<Learner> make_learner(std::string_view descriptor, const Family& family,
                                      const FeedbackModel& model) {
  const auto d = Descriptor::parse(descriptor);
  if (d.name == "wmv") return make_wmv_learner(descriptor, family, model);
  if (!d.options.empty() || !d.positional.empty()) {
    throw ParseError("learner '" + d.name + "' takes no arguments");
  }
  if (d.name == "zero" && family.table() == nullptr) return std::make_unique<ConstantZeroLearner>();
  if (d.name == "halving") {
    return std::make_unique<HalvingLearner>(family.require_table("halving learner"), model);
  }
  if (d.name == "zero") return std::make_unique<ZeroLearner>(*family.table(), model);
  if (d.name == "span") {
    const auto& table = family.require_table("span learner");
    if (Descriptor::parse(table.descriptor()).name != "linear") {
      throw ConfigError("span learner needs a linear family");
    }
    return std::make_unique<ZeroLearner>(table, model);
  }
  if (d.name == "random") {
    return std::make_unique<RandomLearner>(family.require_table("random learner"), model);
  }
  if (d.name == "solver-opt") {
    return std::make_unique<SolverLearner>(family.require_table("solver-opt learner"), model);
  }
  throw ParseError("unknown learner '" + std::string(descriptor) + "'");
}

}  // namespace mblab
