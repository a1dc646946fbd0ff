#include "mblab/adversaries.hpp"

#include <algorithm>
#include <bit>
#include <set>

#include "mblab/descriptor.hpp"
#include "mblab/errors.hpp"

namespace mblab {

std::size_t top_half_mass(std::span<const FieldVector> s, const FieldVector& u) {
  const std::uint32_t k = u.spec().order();
  std::vector<std::size_t> tally(k, 0);
  for (const auto& v : s) ++tally[ff_dot(v, u).value];
  std::sort(tally.begin(), tally.end(), std::greater<>());
  std::size_t sum = 0;
  for (std::uint32_t i = 0; i < k / 2; ++i) sum += tally[i];
  return sum;
}

FieldVector select_u(std::span<const FieldVector> s, const FieldSpec& spec) {
  const std::uint32_t k = spec.order();
  if (k < 2 || !std::has_single_bit(k)) throw PreconditionError("select_u needs k a power of 2");
  if (s.empty()) throw PreconditionError("select_u needs a nonempty set");
  const auto size = static_cast<long long>(s.size());
  const long long k3 = static_cast<long long>(k) * k * k;
  for (std::size_t idx = 0; idx < std::size_t{k} * k; ++idx) {
    const auto u = FieldVector::from_index(spec, 2, idx);
    // mass <= (|S| + k^1.5)/2  <=>  2 mass - |S| <= k^1.5, squared when positive.
    const long long excess = 2 * static_cast<long long>(top_half_mass(s, u)) - size;
    if (excess <= 0 || excess * excess <= k3) return u;
  }
  throw std::logic_error("select_u found no valid u; field arithmetic is inconsistent");
}

namespace {

const VersionSpace& space_of(const GameState& state, std::string_view who) {
  const auto* v = state.referee.version_space();
  if (v == nullptr) {
    throw CapacityError(std::string(who) + " needs a materialized family");
  }
  return *v;
}

bool no_is_legal(const GameState& state, std::span<const InputId> inputs,
                 std::span<const Value> guesses) {
  Round r{{inputs.begin(), inputs.end()}, {guesses.begin(), guesses.end()}, Feedback::no(), true};
  return state.referee.legal(r);
}

std::size_t realized_count(const Bitset& members, const ExplicitFamily& family, InputId x) {
  std::size_t n = 0;
  for (const auto& c : family.classes(x)) n += c.members.intersects(members) ? 1 : 0;
  return n;
}

std::optional<InputId> first_split_input(const Bitset& members, const ExplicitFamily& family) {
  for (InputId x = 0; x < family.num_inputs(); ++x) {
    if (realized_count(members, family, x) >= 2) return x;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

/// Denies every guess while some function stays consistent. In agnostic games
/// this spends lies; it stops once every member is unanimous everywhere and
/// out of lies.
class AlwaysNoAdversary final : public Adversary {
 public:
  explicit AlwaysNoAdversary(const ExplicitFamily& family) : family_(family) {}

  std::optional<InputId> next_input(const GameState& state, std::size_t, std::span<const Value>) override {
    const auto& v = space_of(state, "always-no");
    if (auto x = first_split_input(v.members(), family_)) return x;
    if (v.agnostic()) {
      bool budget = false;
      for_each_member(v.members(), [&](std::size_t f) { budget = budget || v.lie_counts()[f] < v.lie_budget(); });
      if (budget) return InputId{0};
    }
    return std::nullopt;
  }

  Feedback respond(const GameState& state, std::span<const InputId> inputs,
                   std::span<const Value> guesses) override {
    if (state.model.kind() == FeedbackModel::Kind::Standard) {
      for (Value u : state.referee.realized(inputs[0])) {
        if (u != guesses[0]) return Feedback::reveal(u);
      }
      return Feedback::reveal(guesses[0]);
    }
    return no_is_legal(state, inputs, guesses) ? Feedback::no() : Feedback::yes();
  }

 private:
  const ExplicitFamily& family_;
};

// ---------------------------------------------------------------------------

/// Asks one input k*eta times and denies every answer while legal. In combo
/// mode it first denies truthfully on every input until the members that
/// have not been charged a lie agree everywhere.
class AgnosticRepeatAdversary final : public Adversary {
 public:
  AgnosticRepeatAdversary(const ExplicitFamily& family, const FeedbackModel& model,
                          std::uint32_t eta, bool combo)
      : family_(family), combo_(combo) {
    if (model.kind() != FeedbackModel::Kind::AgnosticBandit) {
      throw ConfigError("agn-repeat needs agnostic feedback");
    }
    if (eta > model.eta()) throw ConfigError("agn-repeat eta exceeds the model's lie budget");
    const auto x = first_split_input(family.all_members(), family);
    target_ = x.value_or(0);
    remaining_ = x ? std::size_t{family.codomain()} * eta : 0;
  }

  std::optional<InputId> next_input(const GameState& state, std::size_t, std::span<const Value>) override {
    if (combo_ && denying_) {
      const auto& v = space_of(state, "agn-repeat");
      if (auto x = first_split_input(truthful(v), family_)) return x;
      denying_ = false;
    }
    if (remaining_ == 0) return std::nullopt;
    return target_;
  }

  Feedback respond(const GameState& state, std::span<const InputId> inputs,
                   std::span<const Value> guesses) override {
    if (combo_ && denying_) {
      const Bitset honest = truthful(space_of(state, "agn-repeat"));
      const Bitset deny = honest - family_.members_with(inputs[0], guesses[0]);
      return deny.any() ? Feedback::no() : Feedback::yes();
    }
    return no_is_legal(state, inputs, guesses) ? Feedback::no() : Feedback::yes();
  }

  void observe(const Round&) override {
    if (!(combo_ && denying_) && remaining_ > 0) --remaining_;
  }

 private:
  static Bitset truthful(const VersionSpace& v) {
    Bitset out = v.members();
    for_each_member(v.members(), [&](std::size_t f) { out[f] = v.lie_counts()[f] == 0; });
    return out;
  }

  const ExplicitFamily& family_;
  bool combo_;
  bool denying_ = true;
  InputId target_ = 0;
  std::size_t remaining_ = 0;
};

// ---------------------------------------------------------------------------

/// Repeats one batch and denies every guess while at least two output tuples
/// remain consistent. Under bandit feedback on a CART family the batch is the
/// single input with the most realized values; under ambiguous feedback it is
/// the r-tuple of distinct inputs realizing the most output tuples.
class CartRepeatAdversary final : public Adversary {
 public:
  CartRepeatAdversary(const ExplicitFamily& family, const FeedbackModel& model) : family_(family) {
    using Kind = FeedbackModel::Kind;
    const Bitset all = family.all_members();
    if (model.kind() == Kind::Bandit) {
      std::size_t best = 0;
      for (InputId x = 0; x < family.num_inputs(); ++x) {
        const auto n = realized_count(all, family, x);
        if (n > best) best = n, batch_ = {x};
      }
      if (batch_.empty()) batch_ = {0};
    } else if (model.kind() == Kind::Ambiguous) {
      choose_batch(model.r());
    } else {
      throw ConfigError("cart-repeat needs bandit or ambiguous feedback");
    }
  }

  std::optional<InputId> next_input(const GameState& state, std::size_t position,
                                    std::span<const Value>) override {
    if (position == 0 && tuples(space_of(state, "cart-repeat").members()) < 2) return std::nullopt;
    return batch_[position];
  }

  Feedback respond(const GameState&, std::span<const InputId>, std::span<const Value>) override {
    // At least two tuples remain, so one of them differs from the guess.
    return Feedback::no();
  }

  const std::vector<InputId>& batch() const { return batch_; }

 private:
  std::size_t tuples(const Bitset& members) const {
    std::set<std::vector<Value>> seen;
    for_each_member(members, [&](std::size_t f) {
      std::vector<Value> t;
      for (auto x : batch_) t.push_back(family_.output(static_cast<FunctionId>(f), x));
      seen.insert(std::move(t));
    });
    return seen.size();
  }

  void choose_batch(std::uint32_t r) {
    const std::size_t d = family_.num_inputs();
    if (d < r) {
      // Not enough distinct inputs: repeat the first ones cyclically.
      for (std::uint32_t i = 0; i < r; ++i) batch_.push_back(static_cast<InputId>(i % d));
      return;
    }
    std::vector<InputId> current;
    std::size_t best = 0;
    std::size_t budget = 20'000;
    const Bitset all = family_.all_members();
    auto recurse = [&](auto&& self) -> void {
      if (budget == 0) return;
      if (current.size() == r) {
        --budget;
        std::swap(batch_, current);
        const auto n = tuples(all);
        std::swap(batch_, current);
        if (n > best) best = n, batch_ = current;
        return;
      }
      for (InputId x = 0; x < d; ++x) {
        if (std::find(current.begin(), current.end(), x) != current.end()) continue;
        current.push_back(x);
        self(self);
        current.pop_back();
      }
    };
    recurse(recurse);
  }

  const ExplicitFamily& family_;
  std::vector<InputId> batch_;
};

// ---------------------------------------------------------------------------

/// Keeps the version space as large as possible: picks the input whose
/// worst-case (over the learner's answer) denial branch is largest and keeps
/// the larger branch. In agnostic games the size of a branch is the total
/// remaining lie budget of its members.
class GreedyAdversary final : public Adversary {
 public:
  GreedyAdversary(const ExplicitFamily& family, const FeedbackModel& model)
      : family_(family), model_(model) {}

  std::optional<InputId> next_input(const GameState& state, std::size_t position,
                                    std::span<const Value> guesses) override {
    const auto& v = space_of(state, "greedy");
    if (v.agnostic()) return position == 0 ? agnostic_input(v) : std::nullopt;
    const Bitset& members = v.members();
    if (position == 0 && !first_split_input(members, family_)) return std::nullopt;
    const Bitset agree = agreeing(members, guesses);
    std::optional<InputId> choice;
    std::size_t best = 0;
    for (InputId x = 0; x < family_.num_inputs(); ++x) {
      std::optional<std::size_t> worst;
      for (const auto& c : family_.classes(x)) {
        const Bitset yes = agree & c.members;
        if (yes.none()) continue;
        std::size_t size;
        if (model_.kind() == FeedbackModel::Kind::Standard) {
          size = 0;
          for (const auto& o : family_.classes(x)) {
            if (o.value != c.value) size = std::max(size, (members & o.members).count());
          }
        } else {
          size = (members - yes).count();
        }
        worst = worst ? std::min(*worst, size) : size;
      }
      if (worst && (!choice || *worst > best)) best = *worst, choice = x;
    }
    return choice;
  }

  Feedback respond(const GameState& state, std::span<const InputId> inputs,
                   std::span<const Value> guesses) override {
    const auto& v = space_of(state, "greedy");
    if (v.agnostic()) return agnostic_feedback(v, inputs[0], guesses[0]);
    const Bitset& members = v.members();
    if (model_.kind() == FeedbackModel::Kind::Standard) {
      const InputId x = inputs[0];
      std::optional<Value> deny;
      std::size_t deny_size = 0;
      for (const auto& c : family_.classes(x)) {
        const auto n = (members & c.members).count();
        if (c.value != guesses[0] && n > deny_size) deny = c.value, deny_size = n;
      }
      const auto keep = (members & family_.members_with(x, guesses[0])).count();
      return deny && deny_size >= keep ? Feedback::reveal(*deny) : Feedback::reveal(guesses[0]);
    }
    const Bitset yes = agreeing(members, guesses, inputs);
    const Bitset no = members - yes;
    if (no.none()) return Feedback::yes();
    return no.count() >= yes.count() ? Feedback::no() : Feedback::yes();
  }

  void observe(const Round&) override { round_inputs_.clear(); }

  std::optional<InputId> agnostic_input(const VersionSpace& v) {
    std::optional<InputId> choice;
    long long best = -1;
    for (InputId x = 0; x < family_.num_inputs(); ++x) {
      std::optional<long long> worst;
      for (const auto& c : family_.classes(x)) {
        if (!c.members.intersects(v.members())) continue;
        const auto no = potential(v, x, c.value, false);
        worst = worst ? std::min(*worst, no) : no;
      }
      if (worst && *worst > best) best = *worst, choice = x;
    }
    return choice;
  }

 private:
  Bitset agreeing(const Bitset& members, std::span<const Value> guesses,
                  std::span<const InputId> inputs = {}) {
    Bitset out = members;
    const auto& xs = inputs.empty() ? round_inputs_ : std::vector<InputId>(inputs.begin(), inputs.end());
    for (std::size_t j = 0; j < guesses.size() && j < xs.size(); ++j) {
      out &= family_.members_with(xs[j], guesses[j]);
    }
    return out;
  }

  /// Remaining lie budget summed over survivors after feedback on (x, y);
  /// -1 when no member would survive.
  long long potential(const VersionSpace& v, InputId x, Value y, bool yes) const {
    long long total = 0;
    bool alive = false;
    for_each_member(v.members(), [&](std::size_t f) {
      auto lies = v.lie_counts()[f];
      if ((family_.output(static_cast<FunctionId>(f), x) == y) != yes) ++lies;
      if (lies <= v.lie_budget()) {
        alive = true;
        total += v.lie_budget() + 1 - lies;
      }
    });
    return alive ? total : -1;
  }

  Feedback agnostic_feedback(const VersionSpace& v, InputId x, Value y) const {
    long long now = 0;
    for_each_member(v.members(), [&](std::size_t f) { now += v.lie_budget() + 1 - v.lie_counts()[f]; });
    const auto no = potential(v, x, y, false);
    const auto yes = potential(v, x, y, true);
    if (no < 0) return Feedback::yes();
    // A YES that charges nobody would stall the game, so it never wins.
    if (yes < now && yes > no) return Feedback::yes();
    return Feedback::no();
  }

 public:
  std::optional<InputId> remember(std::optional<InputId> x) {
    if (x) round_inputs_.push_back(*x);
    return x;
  }

 private:
  const ExplicitFamily& family_;
  FeedbackModel model_;
  std::vector<InputId> round_inputs_;
};

/// Records the inputs of the current round so later positions can see them.
class GreedyFacade final : public Adversary {
 public:
  GreedyFacade(const ExplicitFamily& family, const FeedbackModel& model) : inner_(family, model) {}
  std::optional<InputId> next_input(const GameState& state, std::size_t position,
                                    std::span<const Value> guesses) override {
    return inner_.remember(inner_.next_input(state, position, guesses));
  }
  Feedback respond(const GameState& state, std::span<const InputId> inputs,
                   std::span<const Value> guesses) override {
    return inner_.respond(state, inputs, guesses);
  }
  void observe(const Round& round) override { inner_.observe(round); }

 private:
  GreedyAdversary inner_;
};

// ---------------------------------------------------------------------------

/// Plays the exact minimax policy.
class SolverAdversary final : public Adversary {
 public:
  SolverAdversary(const ExplicitFamily& family, const FeedbackModel& model) : solver_(family, model) {
    solver_.value();
  }

  std::optional<InputId> next_input(const GameState& state, std::size_t,
                                    std::span<const Value> guesses) override {
    auto x = solver_.best_input(space_of(state, "solver-opt"), inputs_, guesses);
    if (x) inputs_.push_back(*x);
    return x;
  }

  Feedback respond(const GameState& state, std::span<const InputId> inputs,
                   std::span<const Value> guesses) override {
    return solver_.best_feedback(space_of(state, "solver-opt"), inputs, guesses);
  }

  void observe(const Round&) override { inputs_.clear(); }

 private:
  ExactSolver solver_;
  std::vector<InputId> inputs_;
};

// ---------------------------------------------------------------------------

/// Truthful play for a hidden target drawn from the seed; inputs are uniform.
class RandomAdversary final : public Adversary {
 public:
  RandomAdversary(const ExplicitFamily& family, std::size_t rounds, std::uint64_t seed)
      : family_(family), rounds_(rounds), seed_(seed) {
    Rng rng(seed, kAdversaryStream, 0);
    target_ = static_cast<FunctionId>(rng.below(family.size()));
  }

  std::optional<InputId> next_input(const GameState& state, std::size_t position,
                                    std::span<const Value>) override {
    if (position == 0 && state.round_index >= rounds_) return std::nullopt;
    Rng rng(seed_, kAdversaryStream, 1 + state.round_index * 64 + position);
    return static_cast<InputId>(rng.below(family_.num_inputs()));
  }

  Feedback respond(const GameState& state, std::span<const InputId> inputs,
                   std::span<const Value> guesses) override {
    if (state.model.kind() == FeedbackModel::Kind::Standard) {
      return Feedback::reveal(family_.output(target_, inputs[0]));
    }
    for (std::size_t j = 0; j < inputs.size(); ++j) {
      if (family_.output(target_, inputs[j]) != guesses[j]) return Feedback::no();
    }
    return Feedback::yes();
  }

  FunctionId target() const { return target_; }

 private:
  const ExplicitFamily& family_;
  std::size_t rounds_;
  std::uint64_t seed_;
  FunctionId target_ = 0;
};

}  // namespace

// ---------------------------------------------------------------------------

LinearBanditAdversary::LinearBanditAdversary(const Family& family, const FeedbackModel& model)
    : spec_(FieldSpec::of_order(2)), k_(0), phases_(0) {
  const auto& table = family.require_table("lin-bandit");
  const auto d = Descriptor::parse(table.descriptor());
  if (d.name != "linear" || d.get_uint("n") != 2) throw ConfigError("lin-bandit needs a linear:q=K,n=2 family");
  if (model.kind() != FeedbackModel::Kind::Bandit) throw ConfigError("lin-bandit needs bandit feedback");
  spec_ = FieldSpec::of_order(static_cast<std::uint32_t>(d.get_uint("q")));
  k_ = spec_.order();
  if (k_ < 4 || !std::has_single_bit(k_)) throw ConfigError("lin-bandit needs k a power of 2, k >= 4");
  phases_ = static_cast<std::uint32_t>(std::bit_width(k_) - 1) / 2;
}

std::optional<InputId> LinearBanditAdversary::next_input(const GameState& state, std::size_t,
                                                         std::span<const Value>) {
  if (remaining_ == 0) {
    if (phase_ == phases_) return std::nullopt;
    std::vector<FieldVector> s;
    for_each_member(space_of(state, "lin-bandit").members(),
                    [&](std::size_t a) { s.push_back(FieldVector::from_index(spec_, 2, a)); });
    phase_sizes_.push_back(s.size());
    current_ = static_cast<InputId>(select_u(s, spec_).index());
    remaining_ = k_ / 2;
    ++phase_;
  }
  return current_;
}

Feedback LinearBanditAdversary::respond(const GameState& state, std::span<const InputId> inputs,
                                        std::span<const Value> guesses) {
  return no_is_legal(state, inputs, guesses) ? Feedback::no() : Feedback::yes();
}

void LinearBanditAdversary::observe(const Round&) { --remaining_; }

// ---------------------------------------------------------------------------

CompositionAdversary::CompositionAdversary(const Family& family, const FeedbackModel& model) {
  const auto* comp = family.composition();
  if (comp == nullptr || !comp->layout) throw ConfigError("compose-rec needs a compose-lb family");
  if (model.kind() != FeedbackModel::Kind::Standard && model.kind() != FeedbackModel::Kind::Bandit) {
    throw ConfigError("compose-rec needs standard or bandit feedback");
  }
  layout_ = comp->layout;
  standard_ = model.kind() == FeedbackModel::Kind::Standard;
  levels_ = static_cast<std::uint32_t>(std::countr_zero(layout_->k));
  std::vector<std::uint32_t> t(layout_->k * layout_->M);
  for (std::uint32_t i = 0; i < t.size(); ++i) t[i] = i + 1;
  blocks_ = {t};
}

void CompositionAdversary::start_level() {
  ++level_;
  history_.push_back(blocks_);
  queue_.clear();
  cursor_ = 0;
  next_blocks_.assign(2 * blocks_.size(), {});
  // Window j uses consecutive pairs of T_b(j) in increasing order.
  for (std::uint32_t j = 0; j < blocks_.size(); ++j) {
    auto sorted = blocks_[j];
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t p = 0; p + 1 < sorted.size(); p += 2) queue_.push_back({j, sorted[p], sorted[p + 1]});
  }
}

std::optional<InputId> CompositionAdversary::next_input(const GameState&, std::size_t,
                                                        std::span<const Value>) {
  if (level_ == 0 || cursor_ == queue_.size()) {
    if (level_ > 0) {
      blocks_ = next_blocks_;
      if (level_ == levels_) history_.push_back(blocks_);
    }
    if (level_ == levels_) return std::nullopt;
    start_level();
  }
  const auto& q = queue_[cursor_];
  const std::uint32_t width = layout_->k >> (level_ - 1);
  std::vector<std::uint32_t> tuple(layout_->k, 0);
  for (std::uint32_t c = 0; c < width; ++c) tuple[q.window * width + c] = c < width / 2 ? q.a : q.b;
  const auto x = layout_->find(tuple);
  if (!x) throw std::logic_error("composition input missing from the domain");
  return *x;
}

Feedback CompositionAdversary::respond(const GameState&, std::span<const InputId>,
                                       std::span<const Value> guesses) {
  return standard_ ? Feedback::reveal(1 - guesses[0]) : Feedback::no();
}

void CompositionAdversary::observe(const Round& round) {
  const auto& q = queue_[cursor_++];
  // Guess 0 means the answer is 1: a joins the left half's block, b the right's.
  const bool zero = round.guesses[0] == 0;
  next_blocks_[2 * q.window].push_back(zero ? q.a : q.b);
  next_blocks_[2 * q.window + 1].push_back(zero ? q.b : q.a);
}

// ---------------------------------------------------------------------------

std::unique_ptr<Adversary> make_adversary(std::string_view descriptor, const Family& family,
                                          const FeedbackModel& model, std::uint64_t seed) {
  const auto d = Descriptor::parse(descriptor);
  auto no_args = [&] {
    if (!d.options.empty() || !d.positional.empty()) {
      throw ParseError("adversary '" + d.name + "' takes no arguments");
    }
  };
  if (d.name == "lin-bandit") {
    no_args();
    return std::make_unique<LinearBanditAdversary>(family, model);
  }
  if (d.name == "compose-rec") {
    no_args();
    return std::make_unique<CompositionAdversary>(family, model);
  }
  if (d.name == "agn-repeat") {
    d.only({"eta", "mode"});
    const std::string mode = d.has("mode") ? d.get("mode") : "repeat";
    if (mode != "repeat" && mode != "combo") throw ParseError("bad agn-repeat mode '" + mode + "'");
    return std::make_unique<AgnosticRepeatAdversary>(
        family.require_table("agn-repeat"), model,
        static_cast<std::uint32_t>(d.get_uint("eta", model.eta())), mode == "combo");
  }
  if (d.name == "cart-repeat") {
    no_args();
    return std::make_unique<CartRepeatAdversary>(family.require_table("cart-repeat"), model);
  }
  if (d.name == "greedy") {
    no_args();
    return std::make_unique<GreedyFacade>(family.require_table("greedy"), model);
  }
  if (d.name == "solver-opt") {
    no_args();
    return std::make_unique<SolverAdversary>(family.require_table("solver-opt"), model);
  }
  if (d.name == "always-no") {
    no_args();
    return std::make_unique<AlwaysNoAdversary>(family.require_table("always-no"));
  }
  if (d.name == "random") {
    d.only({"rounds"});
    return std::make_unique<RandomAdversary>(family.require_table("random adversary"),
                                             d.get_uint("rounds", 100), seed);
  }
  throw ParseError("unknown adversary '" + std::string(descriptor) + "'");
}

std::optional<BoundSpec> forced_lower_bound(std::string_view descriptor, const Family& family,
                                            const FeedbackModel& model) {
  using Kind = FeedbackModel::Kind;
  const auto a = Descriptor::parse(descriptor);
  auto f = Descriptor::parse(family.descriptor());
  const auto k = family.codomain();
  if (a.name == "lin-bandit") return lin_bandit_lower(k);
  if (a.name == "compose-rec" && f.name == "compose-lb") {
    return compose_lower(static_cast<std::uint32_t>(f.get_uint("k")),
                         static_cast<std::uint32_t>(f.get_uint("M")));
  }
  if (a.name == "agn-repeat" && (!a.has("mode") || a.get("mode") == "repeat") &&
      model.kind() == Kind::AgnosticBandit) {
    return agnostic_repeat_lower(k, static_cast<std::uint32_t>(a.get_uint("eta", model.eta())));
  }
  if (a.name == "cart-repeat") {
    std::uint64_t r = 0;
    if (model.kind() == Kind::Ambiguous) {
      r = model.r();
    } else if (f.name == "cart") {
      r = f.get_uint("r");
      f = Descriptor::parse(strip_parens(f.get("inner")));
    }
    // The guarantee needs r distinct inputs of a sparse family.
    if (r == 0 || f.name != "sparse" || f.get_uint("D") < r) return std::nullopt;
    return cart_lower(static_cast<std::uint32_t>(f.get_uint("k")),
                      static_cast<std::uint32_t>(f.get_uint("M")), static_cast<std::uint32_t>(r));
  }
  return std::nullopt;
}

}  // namespace mblab
